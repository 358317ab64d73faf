#include "itlex/itnet.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"

using namespace itlex;

namespace {

// eat/drink toy corpus used throughout; hand-tallied expectations below.
std::vector<SamplePair> c0_samples() {
  return {
      {"vp", {"eat", "apple"}, "essen"},
      {"vp", {"eat", "bread"}, "essen"},
      {"vp", {"drink", "water"}, "trinken"},
  };
}

CountStore c0_store(double lambda) { return train_counts("vp", lambda, c0_samples()); }

}  // namespace

TEST_SUITE("itnet") {

TEST_CASE("add_sample keeps the expected tallies") {
  CountStore store("vp", 0.5);
  store.add_sample({"vp", {"eat", "apple"}, "essen"});
  CHECK(store.n_samples() == 1);
  CHECK(store.in_count("eat") == 1);
  CHECK(store.in_count("apple") == 1);
  CHECK(store.out_count("essen") == 1);
  CHECK(store.joint_count("eat", "essen") == 1);
  CHECK(store.joint_count("apple", "essen") == 1);
  CHECK(store.joint_count("apple", "trinken") == 0);
}

TEST_CASE("c0 counts match an independent recount") {
  CountStore store = c0_store(0.5);
  CHECK(store.n_samples() == 3);
  CHECK(store.in_count("eat") == 2);
  CHECK(store.out_count("essen") == 2);
  CHECK(store.joint_count("eat", "essen") == 2);
  CHECK(testutil::matches(testutil::recount(c0_samples()), store));
}

TEST_CASE("category mismatch is refused") {
  CountStore store("vp", 0.5);
  CHECK_THROWS_AS(store.add_sample({"np", {"dog"}, "hund"}), CategoryMismatch);
}

TEST_CASE("negative lambda is refused") {
  CHECK_THROWS_AS(CountStore("vp", -0.1), std::invalid_argument);
}

TEST_CASE("unsmoothed weights and bias reproduce the closed forms") {
  Network net(c0_store(0.0));
  CHECK(net.weight("eat", "essen") == doctest::Approx(std::log(1.5)).epsilon(1e-12));
  CHECK(net.bias("essen") == doctest::Approx(std::log(2.0 / 3.0)).epsilon(1e-12));
  CHECK(net.bias("trinken") == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("independent events have zero mutual information") {
  std::vector<SamplePair> samples = {
      {"vp", {"a"}, "x"}, {"vp", {"a"}, "y"}, {"vp", {"b"}, "x"}, {"vp", {"b"}, "y"}};
  Network net(train_counts("vp", 0.0, samples));
  CHECK(net.weight("a", "x") == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(net.weight("b", "y") == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero joint count: -inf unsmoothed, finite negative smoothed") {
  Network raw(c0_store(0.0));
  CHECK(raw.weight("drink", "essen") == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(raw.weight("zucchini", "essen"), NotInVocabulary);
  CHECK_THROWS_AS(raw.weight("eat", "zilch"), NotInVocabulary);
  CHECK_THROWS_AS(raw.bias("zilch"), NotInVocabulary);

  Network smoothed(c0_store(0.5));
  const double w = smoothed.weight("drink", "essen");
  CHECK(std::isfinite(w));
  CHECK(w < 0.0);
  // (0.5/8) / ((1.5/5.5) * (2.5/4)), frozen from the fraction oracle
  CHECK(w == doctest::Approx(-1.0033021088637848).epsilon(1e-12));
}

TEST_CASE("uniform outputs give a uniform log prior") {
  std::vector<SamplePair> samples;
  for (int k = 0; k < 4; ++k)
    samples.push_back({"np", {"w" + std::to_string(k)}, "t" + std::to_string(k)});
  Network net(train_counts("np", 0.0, samples));
  for (int k = 0; k < 4; ++k)
    CHECK(net.bias("t" + std::to_string(k)) ==
          doctest::Approx(std::log(0.25)).epsilon(1e-12));
}

TEST_CASE("an empty store with an explicit vocabulary has a pure-smoothing prior") {
  Network net(CountStore("vp", 0.5), {}, {"ja", "nein"});
  CHECK(net.bias("ja") == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK(net.bias("nein") == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("activation sums bias plus weights over known inputs") {
  Network net(c0_store(0.0));
  Activation act = net.activate({"eat", "apple"});
  CHECK(act.scores.at("essen") == doctest::Approx(std::log(1.5)).epsilon(1e-12));
  CHECK(act.scores.at("trinken") == -std::numeric_limits<double>::infinity());
  CHECK(act.active_inputs == std::set<std::string>{"apple", "eat"});
  CHECK(act.unknown_inputs.empty());
}

TEST_CASE("no known inputs falls back to the prior") {
  Network net(c0_store(0.5));
  Activation empty = net.activate({});
  for (const auto& [tok, score] : empty.scores)
    CHECK(score == doctest::Approx(net.bias(tok)).epsilon(1e-12));

  Activation unknown = net.activate({"xylophone", "quux"});
  CHECK(unknown.scores == empty.scores);
  CHECK(unknown.unknown_inputs == std::set<std::string>{"quux", "xylophone"});
  CHECK(unknown.active_inputs.empty());
}

TEST_CASE("select picks the most active output") {
  Network net(c0_store(0.5));
  CHECK(net.select({"drink", "water"}) == "trinken");
  CHECK(net.select({"eat", "apple"}) == "essen");

  Network single(train_counts("vp", 0.5, {{"vp", {"a"}, "x"}}));
  CHECK(single.select({"a"}) == "x");

  CHECK_THROWS_AS(Network(CountStore("vp", 0.5)).select({"a"}), EmptyVocabulary);
}

TEST_CASE("exact ties break toward the lexicographically smaller token") {
  Network net(train_counts("vp", 0.5, {{"vp", {"a"}, "y"}, {"vp", {"a"}, "x"}}));
  // x and y have identical counts everywhere, so identical scores
  CHECK(net.activate({"a"}).scores.at("x") == net.activate({"a"}).scores.at("y"));
  CHECK(net.select({"a"}) == "x");
}

TEST_CASE("ranked orders by score then token") {
  Network net(c0_store(0.5));
  auto top = ranked(net.activate({"drink", "water"}), 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].first == "trinken");
  CHECK(top[0].second == doctest::Approx(0.2314423541289048).epsilon(1e-12));
  CHECK(top[1].first == "essen");
}

TEST_CASE("score decomposition: adding an input shifts scores by its weight") {
  std::mt19937_64 eng(23);
  for (int iter = 0; iter < 30; ++iter) {
    auto corpus = testutil::random_corpus(eng, "vp");
    Network net(train_counts("vp", 0.5, corpus.samples));
    std::set<std::string> base = testutil::random_query(eng, corpus.in_vocab);
    const auto& vocab = net.in_vocab();  // the token must be a known unit
    const std::string extra = vocab[testutil::bounded(eng, vocab.size())];
    if (base.count(extra)) continue;
    std::set<std::string> extended = base;
    extended.insert(extra);
    Activation before = net.activate(base);
    Activation after = net.activate(extended);
    for (const auto& [tok, score] : after.scores)
      CHECK(score - before.scores.at(tok) ==
            doctest::Approx(net.weight(extra, tok)).epsilon(1e-9));
  }
}

TEST_CASE("smoothed weights are finite and priors negative") {
  std::mt19937_64 eng(29);
  for (int iter = 0; iter < 20; ++iter) {
    auto corpus = testutil::random_corpus(eng, "vp");
    Network net(train_counts("vp", 0.5, corpus.samples));
    if (net.out_vocab().size() >= 2)
      for (const auto& out : net.out_vocab()) CHECK(net.bias(out) < 0.0);
    for (const auto& in : net.in_vocab())
      for (const auto& out : net.out_vocab()) CHECK(std::isfinite(net.weight(in, out)));
  }
}

TEST_CASE("training is order-independent") {
  std::mt19937_64 eng(31);
  auto corpus = testutil::random_corpus(eng, "vp");
  CountStore forward = train_counts("vp", 0.5, corpus.samples);
  auto shuffled = corpus.samples;
  for (std::size_t k = shuffled.size(); k > 1; --k)
    std::swap(shuffled[k - 1], shuffled[testutil::bounded(eng, k)]);
  CHECK(train_counts("vp", 0.5, shuffled) == forward);
}

TEST_CASE("merge is the identity on an empty store and commutes") {
  CountStore store = c0_store(0.5);
  CHECK(merge_counts(CountStore("vp", 0.5), store) == store);
  CHECK(merge_counts(store, CountStore("vp", 0.5)) == store);

  std::mt19937_64 eng(37);
  auto a = testutil::random_corpus(eng, "vp");
  auto b = testutil::random_corpus(eng, "vp");
  CountStore sa = train_counts("vp", 0.5, a.samples);
  CountStore sb = train_counts("vp", 0.5, b.samples);
  CHECK(merge_counts(sa, sb) == merge_counts(sb, sa));
}

TEST_CASE("merge equals training on the concatenated corpus") {
  std::mt19937_64 eng(41);
  for (int iter = 0; iter < 20; ++iter) {
    auto corpus = testutil::random_corpus(eng, "vp");
    std::size_t cut = testutil::bounded(eng, corpus.samples.size() + 1);
    std::vector<SamplePair> head(corpus.samples.begin(), corpus.samples.begin() + cut);
    std::vector<SamplePair> tail(corpus.samples.begin() + cut, corpus.samples.end());
    CountStore merged =
        merge_counts(train_counts("vp", 0.5, head), train_counts("vp", 0.5, tail));
    CHECK(merged == train_counts("vp", 0.5, corpus.samples));
    CHECK(testutil::matches(testutil::recount(corpus.samples), merged));
  }
}

TEST_CASE("merge refuses mismatched category or lambda") {
  CountStore a("vp", 0.5), b("np", 0.5), c("vp", 1.0);
  CHECK_THROWS_AS(a.merge(b), CategoryMismatch);
  CHECK_THROWS_AS(a.merge(c), LambdaMismatch);
}

TEST_CASE("count consistency holds after updates and merges") {
  std::mt19937_64 eng(43);
  auto corpus = testutil::random_corpus(eng, "vp");
  CountStore store("vp", 0.5);
  for (const auto& sample : corpus.samples) {
    store.add_sample(sample);
    std::uint64_t total = 0;
    for (const auto& [tok, c] : store.out_counts()) total += c;
    CHECK(total == store.n_samples());
    for (const auto& [key, c] : store.joint_counts()) {
      CHECK(c <= store.in_count(key.first));
      CHECK(c <= store.out_count(key.second));
    }
  }
}

TEST_CASE("posterior oracle normalizes and needs smoothing") {
  CountStore store = c0_store(0.5);
  auto post = posterior_oracle(store, {"eat"});
  double sum = 0.0;
  for (const auto& [tok, p] : post) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  // exact fractions: 5/6 vs 1/6
  CHECK(post.at("essen") == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(post.at("trinken") == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  CHECK_THROWS_AS(posterior_oracle(c0_store(0.0), {"eat"}), std::invalid_argument);
}

TEST_CASE("oracle ranking agrees with activation ranking") {
  std::mt19937_64 eng(47);
  for (int iter = 0; iter < 40; ++iter) {
    auto corpus = testutil::random_corpus(eng, "vp");
    CountStore store = train_counts("vp", 0.5, corpus.samples);
    Network net(store);
    for (int q = 0; q < 5; ++q) {
      auto query = testutil::random_query(eng, corpus.in_vocab);
      Activation act = net.activate(query);
      auto post = posterior_oracle(store, query);

      std::vector<std::pair<std::string, double>> act_items(act.scores.begin(),
                                                            act.scores.end());
      auto lhs = testutil::grouped_ranking(act_items, 1e-9);
      auto rhs = testutil::grouped_ranking(testutil::log_items(post), 1e-9);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("model files roundtrip byte-for-byte and reject corruption") {
  CountStore store = c0_store(0.5);
  std::ostringstream out;
  save_model(store, out);
  const std::string text = out.str();
  CHECK(text.rfind("itlex-model v1\ncategory vp\nlambda 0.5\nn 3\n", 0) == 0);

  std::istringstream in(text);
  CountStore loaded = load_model(in);
  CHECK(loaded == store);

  std::ostringstream again;
  save_model(loaded, again);
  CHECK(again.str() == text);

  std::istringstream bad_header("itlex-model v9\n");
  CHECK_THROWS_AS(load_model(bad_header), ModelFormatError);
  std::istringstream bad_sum(
      "itlex-model v1\ncategory vp\nlambda 0.5\nn 2\nout essen 1\n");
  CHECK_THROWS_AS(load_model(bad_sum), ModelFormatError);
  std::istringstream bad_joint(
      "itlex-model v1\ncategory vp\nlambda 0.5\nn 1\nin eat 1\nout essen 1\n"
      "joint eat essen 2\n");
  CHECK_THROWS_AS(load_model(bad_joint), ModelFormatError);
  std::istringstream zero_count(
      "itlex-model v1\ncategory vp\nlambda 0.5\nn 1\nin eat 0\nout essen 1\n");
  CHECK_THROWS_AS(load_model(zero_count), ModelFormatError);
}

TEST_CASE("the model file layout is sorted and omits zero counts") {
  std::ostringstream out;
  save_model(c0_store(0.5), out);
  CHECK(out.str() ==
        "itlex-model v1\n"
        "category vp\n"
        "lambda 0.5\n"
        "n 3\n"
        "in apple 1\n"
        "in bread 1\n"
        "in drink 1\n"
        "in eat 2\n"
        "in water 1\n"
        "out essen 2\n"
        "out trinken 1\n"
        "joint apple essen 1\n"
        "joint bread essen 1\n"
        "joint drink trinken 1\n"
        "joint eat essen 2\n"
        "joint water trinken 1\n");
}

TEST_CASE("a reloaded model selects identically") {
  std::mt19937_64 eng(53);
  for (int iter = 0; iter < 10; ++iter) {
    auto corpus = testutil::random_corpus(eng, "vp");
    CountStore store = train_counts("vp", 0.5, corpus.samples);
    std::ostringstream out;
    save_model(store, out);
    std::istringstream in(out.str());
    Network original(store), reloaded(load_model(in));
    for (int q = 0; q < 20; ++q) {
      auto query = testutil::random_query(eng, corpus.in_vocab);
      CHECK(original.select(query) == reloaded.select(query));
    }
  }
}

}  // TEST_SUITE

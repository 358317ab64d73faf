#include "itlex/evalkit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace itlex {

EvalReport evaluate(const std::map<std::string, Network>& networks,
                    const std::vector<CorpusRecord>& test_pairs, const CategoryMap& cmap) {
  EvalReport report;
  for (const CorpusRecord& rec : test_pairs) {
    std::vector<AlignedPair> aligned = align(rec.source, rec.target);
    for (const SamplePair& sample : extract_samples(aligned, cmap)) {
      CategoryStats& stats = report.per_category[sample.category];
      ++stats.total;
      ++report.overall.total;
      auto it = networks.find(sample.category);
      if (it == networks.end()) {
        ++report.missing_network_samples;
        continue;
      }
      const Activation act = it->second.activate(sample.inputs);
      ++report.selection_calls;
      if (!act.unknown_inputs.empty()) ++report.selections_with_unknown;
      if (act.scores.empty()) continue;  // no output units: cannot be correct
      if (select_from(act) == sample.output) {
        ++stats.correct;
        ++report.overall.correct;
      }
    }
  }
  return report;
}

void BaselineTable::add(const std::string& source, const std::string& target,
                        std::uint64_t count) {
  cond[source][target] += count;
}

void BaselineTable::merge(const BaselineTable& other) {
  for (const auto& [source, row] : other.cond)
    for (const auto& [target, count] : row) cond[source][target] += count;
}

std::vector<std::pair<std::string, std::string>> head_pairs(
    const std::vector<CorpusRecord>& records) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const CorpusRecord& rec : records) {
    for (const AlignedPair& p : align(rec.source, rec.target)) {
      auto s = head_of(p.source);
      auto t = head_of(p.target);
      if (s && t) pairs.emplace_back(*s, *t);
    }
  }
  return pairs;
}

BaselineTable baseline_train(const std::vector<std::pair<std::string, std::string>>& pairs) {
  BaselineTable table;
  for (const auto& [source, target] : pairs) table.add(source, target);
  return table;
}

std::string baseline_select(const BaselineTable& table, const std::string& source,
                            double lambda) {
  if (table.empty()) throw EmptyTable("baseline table is empty");

  std::map<std::string, std::uint64_t> target_freq;
  for (const auto& [s, row] : table.cond)
    for (const auto& [t, c] : row) target_freq[t] += c;

  auto row_it = table.cond.find(source);
  if (row_it == table.cond.end()) {
    // Unseen source word: fall back to the most frequent target overall.
    const std::string* best = nullptr;
    std::uint64_t best_count = 0;
    for (const auto& [t, c] : target_freq) {
      if (!best || c > best_count) {
        best = &t;
        best_count = c;
      }
    }
    return *best;
  }

  const auto& row = row_it->second;
  std::uint64_t row_total = 0;
  for (const auto& [t, c] : row) row_total += c;
  const double denom =
      static_cast<double>(row_total) + lambda * static_cast<double>(target_freq.size());

  const std::string* best = nullptr;
  double best_prob = -1.0;
  for (const auto& [t, freq] : target_freq) {
    auto it = row.find(t);
    const std::uint64_t c = it != row.end() ? it->second : 0;
    const double prob = (static_cast<double>(c) + lambda) / denom;
    if (!best || prob > best_prob) {
      best = &t;
      best_prob = prob;
    }
  }
  return *best;
}

BaselineEval evaluate_baseline(const BaselineTable& table,
                               const std::vector<CorpusRecord>& test_pairs, double lambda) {
  BaselineEval eval;
  for (const CorpusRecord& rec : test_pairs) {
    for (const AlignedPair& p : align(rec.source, rec.target)) {
      auto s = head_of(p.source);
      auto t = head_of(p.target);
      if (!s || !t) continue;
      ++eval.total;
      if (!table.empty() && baseline_select(table, *s, lambda) == *t) ++eval.correct;
    }
  }
  return eval;
}

void save_baseline(const BaselineTable& table, double lambda, std::ostream& out) {
  out << "itlex-baseline v1\n";
  out << "lambda " << format_decimal(lambda) << '\n';
  for (const auto& [source, row] : table.cond)
    for (const auto& [target, count] : row)
      if (count) out << "pair " << source << ' ' << target << ' ' << count << '\n';
}

std::pair<BaselineTable, double> load_baseline(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "itlex-baseline v1")
    throw ModelFormatError("not an itlex baseline file");
  if (!std::getline(in, line) || line.rfind("lambda ", 0) != 0)
    throw ModelFormatError("baseline file missing lambda line");
  double lambda = 0.0;
  {
    const std::string value = line.substr(7);
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), lambda);
    if (ec != std::errc() || ptr != value.data() + value.size())
      throw ModelFormatError("bad lambda: " + value);
  }
  BaselineTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string tag, source, target;
    std::uint64_t count = 0;
    if (!(is >> tag >> source >> target >> count) || tag != "pair" || count == 0 ||
        !(is >> std::ws).eof())
      throw ModelFormatError("bad baseline line: " + line);
    table.add(source, target, count);
  }
  return {std::move(table), lambda};
}

namespace {

// Deterministic helpers over mt19937_64; std distributions are avoided so
// the generated bytes do not depend on the standard library.
std::uint64_t bounded(std::mt19937_64& eng, std::uint64_t n) { return eng() % n; }

double unit_real(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

struct Combo {
  std::size_t category;
  std::size_t head;
  std::size_t child;
};

std::string cat_label(std::size_t c) { return "cat" + std::to_string(c); }
std::string head_token(std::size_t c, std::size_t i) {
  return "src" + std::to_string(c) + "h" + std::to_string(i);
}
std::string child_token(std::size_t c, std::size_t j) {
  return "src" + std::to_string(c) + "m" + std::to_string(j);
}
std::string target_token(std::size_t c, std::size_t i, bool low_sense) {
  return "tgt" + std::to_string(c) + (low_sense ? "a" : "b") + std::to_string(i);
}

}  // namespace

SyntheticData gen_synthetic(const SyntheticSpec& spec) {
  if (spec.categories == 0 || spec.heads_per_category == 0)
    throw std::invalid_argument("synthetic spec needs at least one category and head");
  if (spec.children_per_category < 2)
    throw std::invalid_argument("synthetic spec needs at least two child tokens");
  if (!(spec.noise >= 0.0 && spec.noise <= 1.0))
    throw std::invalid_argument("noise must lie in [0, 1]");

  const std::size_t low_children = spec.children_per_category / 2;
  const std::size_t targets_per_category = 2 * spec.heads_per_category;

  SyntheticData data;
  data.bayes_rate =
      1.0 - spec.noise * (1.0 - 1.0 / static_cast<double>(targets_per_category));
  for (std::size_t c = 0; c < spec.categories; ++c)
    data.cmap.entries[cat_label(c)] = cat_label(c);
  data.cmap.default_category = "other";

  std::vector<Combo> combos;
  combos.reserve(spec.categories * spec.heads_per_category * spec.children_per_category);
  for (std::size_t c = 0; c < spec.categories; ++c)
    for (std::size_t i = 0; i < spec.heads_per_category; ++i)
      for (std::size_t j = 0; j < spec.children_per_category; ++j) combos.push_back({c, i, j});

  auto truth_of = [&](const Combo& combo) {
    return target_token(combo.category, combo.head, combo.child < low_children);
  };
  for (const Combo& combo : combos)
    data.truth.push_back({cat_label(combo.category), head_token(combo.category, combo.head),
                          child_token(combo.category, combo.child), truth_of(combo)});

  std::mt19937_64 eng(spec.seed);
  auto shuffle = [&](std::vector<Combo>& v) {
    for (std::size_t k = v.size(); k > 1; --k) std::swap(v[k - 1], v[bounded(eng, k)]);
  };
  auto record_of = [&](const Combo& combo) {
    std::string output = truth_of(combo);
    if (spec.noise > 0.0 && unit_real(eng) < spec.noise)
      output = target_token(combo.category, bounded(eng, spec.heads_per_category),
                            bounded(eng, 2) == 0);
    CorpusRecord rec;
    rec.source.label = cat_label(combo.category);
    rec.source.tokens = {head_token(combo.category, combo.head)};
    rec.source.subs = {{"mod", {child_token(combo.category, combo.child)}, {}}};
    rec.target.label = cat_label(combo.category);
    rec.target.tokens = {std::move(output)};
    return rec;
  };

  // Training cycles through every combination, reshuffled per pass, so the
  // whole mapping is covered whenever train_samples >= combos.size().
  std::vector<Combo> order = combos;
  std::size_t pos = order.size();
  for (std::size_t k = 0; k < spec.train_samples; ++k) {
    if (pos == order.size()) {
      shuffle(order);
      pos = 0;
    }
    data.train.push_back(record_of(order[pos++]));
  }

  for (std::size_t k = 0; k < spec.test_samples; ++k) {
    Combo combo{bounded(eng, spec.categories), bounded(eng, spec.heads_per_category),
                bounded(eng, spec.children_per_category)};
    data.test.push_back(record_of(combo));
  }
  return data;
}

}  // namespace itlex

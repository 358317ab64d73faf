#ifndef ITLEX_TEST_UTIL_HPP
#define ITLEX_TEST_UTIL_HPP

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "itlex/extraction.hpp"
#include "itlex/fstructure.hpp"
#include "itlex/itnet.hpp"

namespace testutil {

inline std::uint64_t bounded(std::mt19937_64& eng, std::uint64_t n) { return eng() % n; }

// --- random structures -----------------------------------------------------

inline std::string random_label(std::mt19937_64& eng) {
  static const std::vector<std::string> labels = {"sentence", "subj", "obj",   "xcomp",
                                                  "vcomp",    "adj",  "pp-adj", "np",
                                                  "vp",       "mod",  "det"};
  return labels[bounded(eng, labels.size())];
}

inline std::string random_token(std::mt19937_64& eng) {
  static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789-_'.";
  std::size_t len = 1 + bounded(eng, 7);
  std::string tok;
  for (std::size_t i = 0; i < len; ++i)
    tok += alphabet[bounded(eng, sizeof alphabet - 1)];
  return tok;
}

inline itlex::FStructure random_structure(std::mt19937_64& eng, std::size_t max_depth = 5,
                                          std::size_t max_width = 4) {
  itlex::FStructure fs;
  fs.label = random_label(eng);
  std::size_t n_tokens = bounded(eng, max_width + 1);
  for (std::size_t i = 0; i < n_tokens; ++i) fs.tokens.push_back(random_token(eng));
  if (max_depth > 1) {
    std::size_t n_subs = bounded(eng, max_width + 1);
    for (std::size_t i = 0; i < n_subs; ++i)
      fs.subs.push_back(random_structure(eng, 1 + bounded(eng, max_depth - 1), max_width));
  }
  return fs;
}

// --- random corpora over small vocabularies ---------------------------------

struct RandomCorpus {
  std::vector<itlex::SamplePair> samples;
  std::vector<std::string> in_vocab;
  std::vector<std::string> out_vocab;
};

inline RandomCorpus random_corpus(std::mt19937_64& eng, const std::string& category,
                                  std::size_t max_in = 20, std::size_t max_out = 10,
                                  std::size_t max_samples = 50) {
  RandomCorpus corpus;
  std::size_t n_in = 1 + bounded(eng, max_in);
  std::size_t n_out = 1 + bounded(eng, max_out);
  for (std::size_t i = 0; i < n_in; ++i) corpus.in_vocab.push_back("i" + std::to_string(i));
  for (std::size_t j = 0; j < n_out; ++j) corpus.out_vocab.push_back("o" + std::to_string(j));
  std::size_t n_samples = 1 + bounded(eng, max_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    itlex::SamplePair sample;
    sample.category = category;
    std::size_t arity = 1 + bounded(eng, 4);
    for (std::size_t a = 0; a < arity; ++a)
      sample.inputs.insert(corpus.in_vocab[bounded(eng, corpus.in_vocab.size())]);
    sample.output = corpus.out_vocab[bounded(eng, corpus.out_vocab.size())];
    corpus.samples.push_back(std::move(sample));
  }
  return corpus;
}

inline std::set<std::string> random_query(std::mt19937_64& eng,
                                          const std::vector<std::string>& in_vocab) {
  std::set<std::string> query;
  std::size_t arity = bounded(eng, 5);
  for (std::size_t a = 0; a < arity; ++a) {
    if (bounded(eng, 10) == 0)
      query.insert("unk" + std::to_string(bounded(eng, 3)));  // out-of-vocabulary token
    else
      query.insert(in_vocab[bounded(eng, in_vocab.size())]);
  }
  return query;
}

// Independent recount: tallies a sample list from scratch, no CountStore code.
struct Recount {
  std::uint64_t n = 0;
  std::map<std::string, std::uint64_t> in, out;
  std::map<std::pair<std::string, std::string>, std::uint64_t> joint;
};

inline Recount recount(const std::vector<itlex::SamplePair>& samples) {
  Recount r;
  for (const auto& s : samples) {
    ++r.n;
    ++r.out[s.output];
    for (const auto& tok : s.inputs) {
      ++r.in[tok];
      ++r.joint[{tok, s.output}];
    }
  }
  return r;
}

inline bool matches(const Recount& r, const itlex::CountStore& store) {
  return r.n == store.n_samples() && r.in == store.in_counts() &&
         r.out == store.out_counts() && r.joint == store.joint_counts();
}

// Posterior probabilities mapped to log scale so both scoring routes rank on
// comparable magnitudes.
inline std::vector<std::pair<std::string, double>> log_items(
    const std::map<std::string, double>& probs) {
  std::vector<std::pair<std::string, double>> items;
  items.reserve(probs.size());
  for (const auto& [tok, p] : probs) items.emplace_back(tok, std::log(p));
  return items;
}

// Ranking with near-ties grouped: items whose score sits within `tol` of the
// group leader count as tied and are ordered lexicographically. Applying the
// same rule to both scoring routes makes rankings comparable even when two
// outputs are mathematically tied but reached through different float paths.
inline std::vector<std::string> grouped_ranking(
    const std::vector<std::pair<std::string, double>>& items, double tol) {
  std::vector<std::pair<std::string, double>> sorted = items;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[i].second - sorted[j].second <= tol) ++j;
    std::vector<std::string> group;
    for (std::size_t k = i; k < j; ++k) group.push_back(sorted[k].first);
    std::sort(group.begin(), group.end());
    out.insert(out.end(), group.begin(), group.end());
    i = j;
  }
  return out;
}

// RAII temp directory under the system temp path.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("itlex_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace testutil

#endif  // ITLEX_TEST_UTIL_HPP

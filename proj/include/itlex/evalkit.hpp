#ifndef ITLEX_EVALKIT_HPP
#define ITLEX_EVALKIT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "itlex/extraction.hpp"
#include "itlex/fstructure.hpp"
#include "itlex/itnet.hpp"

namespace itlex {

class EmptyTable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CategoryStats {
  std::uint64_t correct = 0;
  std::uint64_t total = 0;

  double accuracy() const { return total ? double(correct) / double(total) : 0.0; }
};

struct EvalReport {
  std::map<std::string, CategoryStats> per_category;
  CategoryStats overall;
  std::uint64_t selection_calls = 0;
  std::uint64_t selections_with_unknown = 0;
  std::uint64_t missing_network_samples = 0;

  double unknown_input_rate() const {
    return selection_calls ? double(selections_with_unknown) / double(selection_calls) : 0.0;
  }
};

/// Score held-out pairs: samples are extracted exactly as in training, each
/// is answered by its category's network, and a selection is correct iff it
/// string-matches the reference head. Samples whose category has no network
/// count as incorrect and are tallied.
EvalReport evaluate(const std::map<std::string, Network>& networks,
                    const std::vector<CorpusRecord>& test_pairs, const CategoryMap& cmap);

/// Word-level co-occurrence table for the posterior-probability baseline:
/// cond[source head][target head] = count.
struct BaselineTable {
  std::map<std::string, std::map<std::string, std::uint64_t>> cond;

  void add(const std::string& source, const std::string& target, std::uint64_t count = 1);
  bool empty() const { return cond.empty(); }
  void merge(const BaselineTable& other);

  bool operator==(const BaselineTable&) const = default;
};

/// Own-head pairs of aligned structures, in document order. The same
/// alignment as sample extraction, but only each structure's own head.
std::vector<std::pair<std::string, std::string>> head_pairs(
    const std::vector<CorpusRecord>& records);

BaselineTable baseline_train(const std::vector<std::pair<std::string, std::string>>& pairs);

/// Argmax over add-lambda smoothed Pr(target | source); a source word never
/// seen falls back to the globally most frequent target. Ties go to the
/// lexicographically smallest target.
std::string baseline_select(const BaselineTable& table, const std::string& source,
                            double lambda);

struct BaselineEval {
  std::uint64_t correct = 0;
  std::uint64_t total = 0;

  double accuracy() const { return total ? double(correct) / double(total) : 0.0; }
};

BaselineEval evaluate_baseline(const BaselineTable& table,
                               const std::vector<CorpusRecord>& test_pairs, double lambda);

/// Baseline table file:
///   itlex-baseline v1
///   lambda <decimal>
///   pair <source> <target> <count>   (sorted)
void save_baseline(const BaselineTable& table, double lambda, std::ostream& out);
std::pair<BaselineTable, double> load_baseline(std::istream& in);

/// Parameters of the synthetic benchmark family. Each sample's correct
/// target head is a function of the source OWN head and the source CHILD
/// head jointly: the child token picks one of two senses of the own head, so
/// no single source word determines the target. Child tokens split into a
/// low group (first children/2) and a high group; targets per category are
/// two per own head.
struct SyntheticSpec {
  std::size_t categories = 5;
  std::size_t heads_per_category = 5;     // own-head tokens per category
  std::size_t children_per_category = 5;  // child tokens per category, >= 2
  std::size_t train_samples = 500;
  std::size_t test_samples = 500;
  double noise = 0.0;  // probability a sample's output is replaced at random
  std::uint64_t seed = 0;
};

struct SyntheticTruth {
  std::string category;
  std::string head;
  std::string child;
  std::string target;
};

struct SyntheticData {
  std::vector<CorpusRecord> train;
  std::vector<CorpusRecord> test;
  CategoryMap cmap;                   // slot labels map to themselves
  std::vector<SyntheticTruth> truth;  // the full noiseless mapping
  double bayes_rate;                  // best attainable accuracy under the noise
};

/// Deterministic by seed: same spec, same bytes. The training set cycles
/// through every (head, child) combination, shuffled per epoch, so any spec
/// with train_samples >= categories*heads*children covers the whole mapping.
/// The test set draws combinations uniformly. Noise corrupts outputs on both
/// sides with probability `noise`, drawing uniformly from the category's
/// target vocabulary.
SyntheticData gen_synthetic(const SyntheticSpec& spec);

}  // namespace itlex

#endif  // ITLEX_EVALKIT_HPP

#ifndef ITLEX_ITNET_HPP
#define ITLEX_ITNET_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "itlex/extraction.hpp"

namespace itlex {

class CategoryMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LambdaMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInVocabulary : public std::runtime_error {
 public:
  explicit NotInVocabulary(const std::string& token);
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

class EmptyVocabulary : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sufficient statistics for one category's network: unigram and joint
/// occurrence counts over samples. Counts, not weights, are the canonical
/// state; weights are derived on demand so that incremental updates stay
/// exact.
class CountStore {
 public:
  explicit CountStore(std::string category, double lambda = 0.5);

  const std::string& category() const { return category_; }
  double lambda() const { return lambda_; }
  std::uint64_t n_samples() const { return n_samples_; }

  std::uint64_t in_count(const std::string& token) const;
  std::uint64_t out_count(const std::string& token) const;
  std::uint64_t joint_count(const std::string& in, const std::string& out) const;

  const std::map<std::string, std::uint64_t>& in_counts() const { return in_; }
  const std::map<std::string, std::uint64_t>& out_counts() const { return out_; }
  const std::map<std::pair<std::string, std::string>, std::uint64_t>& joint_counts() const {
    return joint_;
  }

  /// Record one sample: bumps the sample total, the output count, and the
  /// per-input unigram and joint counts. Throws CategoryMismatch when the
  /// sample belongs to a different category.
  void add_sample(const SamplePair& sample);

  /// Pointwise sum of the other store's counts into this one. Requires the
  /// same category and the same lambda.
  void merge(const CountStore& other);

  bool operator==(const CountStore&) const = default;

 private:
  std::string category_;
  double lambda_;
  std::uint64_t n_samples_ = 0;
  std::map<std::string, std::uint64_t> in_;
  std::map<std::string, std::uint64_t> out_;
  std::map<std::pair<std::string, std::string>, std::uint64_t> joint_;

  friend CountStore load_model(std::istream& in);
};

CountStore merge_counts(const CountStore& a, const CountStore& b);

/// Fold a sample list into a fresh store.
CountStore train_counts(const std::string& category, double lambda,
                        const std::vector<SamplePair>& samples);

struct Activation {
  std::map<std::string, double> scores;  // log-domain, one per output unit
  std::set<std::string> active_inputs;
  std::set<std::string> unknown_inputs;
};

/// An immutable weight view over a CountStore snapshot. Connection weights
/// are pointwise mutual information between input and output units; the bias
/// weight of an output unit is its log prior. Probabilities are add-lambda
/// estimates, natural log throughout.
class Network {
 public:
  /// Vocabularies are the tokens observed in the store, sorted.
  explicit Network(CountStore store);
  /// Explicit vocabularies (sorted and deduplicated on construction).
  Network(CountStore store, std::vector<std::string> in_vocab,
          std::vector<std::string> out_vocab);

  const CountStore& store() const { return store_; }
  const std::vector<std::string>& in_vocab() const { return in_vocab_; }
  const std::vector<std::string>& out_vocab() const { return out_vocab_; }

  /// w_ij = ln( P(i,j) / (P(i) P(j)) ). With lambda 0 an unseen token throws
  /// NotInVocabulary and a zero joint count yields -infinity.
  double weight(const std::string& in, const std::string& out) const;

  /// w_0j = ln P(j).
  double bias(const std::string& out) const;

  /// scores(j) = bias(j) + sum of weight(i,j) over known inputs. Inputs
  /// outside the vocabulary are skipped and reported, never fatal; with no
  /// known input the scores fall back to the priors.
  Activation activate(const std::set<std::string>& inputs) const;

  /// The most active output unit; exact-score ties go to the
  /// lexicographically smallest token. Throws EmptyVocabulary when there are
  /// no output units.
  std::string select(const std::set<std::string>& inputs) const;

 private:
  CountStore store_;
  std::vector<std::string> in_vocab_;
  std::vector<std::string> out_vocab_;
};

/// Argmax over an activation with the same tie rule as Network::select.
std::string select_from(const Activation& act);

/// Outputs ranked by score (descending, token ascending on exact ties),
/// truncated to k when k > 0.
std::vector<std::pair<std::string, double>> ranked(const Activation& act, std::size_t k = 0);

/// Verification oracle: the naive-Bayes posterior over output tokens,
/// computed directly from the smoothed count estimates and normalized.
/// Shares no scoring code with Network. Requires lambda > 0.
std::map<std::string, double> posterior_oracle(const CountStore& store,
                                               const std::set<std::string>& inputs);

/// Shortest round-trip decimal form; the number format of the model files.
std::string format_decimal(double value);

/// Model file, line-based UTF-8:
///   itlex-model v1
///   category <name>
///   lambda <decimal>
///   n <integer>
///   in <token> <count>      (sorted, zero counts omitted)
///   out <token> <count>
///   joint <in> <out> <count>
void save_model(const CountStore& store, std::ostream& out);
CountStore load_model(std::istream& in);
void save_model_file(const CountStore& store, const std::string& path);
CountStore load_model_file(const std::string& path);

}  // namespace itlex

#endif  // ITLEX_ITNET_HPP

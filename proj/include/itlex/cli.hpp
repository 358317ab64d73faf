#ifndef ITLEX_CLI_HPP
#define ITLEX_CLI_HPP

#include <iosfwd>
#include <string>

#include "itlex/evalkit.hpp"

namespace itlex::cli {

struct Config {
  double lambda = 0.5;
  std::string category_map_path;  // empty -> built-in defaults
  std::string model_dir = "models";
  int top_k = 5;
};

/// All commands return a process exit code: 0 iff no error. Regular output
/// goes to `out`, warnings and diagnostics to `err`; the two streams never
/// mix machine-readable and diagnostic content.

/// Train one model per observed category plus the word-level baseline table,
/// written to the model directory. Prints per-category sample counts.
int cmd_train(const std::string& corpus_path, const Config& cfg, std::ostream& out,
              std::ostream& err);

/// Incremental update: merges freshly counted samples into the stored
/// models. Refuses when the configured lambda differs from any stored model.
/// Equivalent, byte for byte, to retraining on the concatenated corpora.
int cmd_add(const std::string& corpus_path, const Config& cfg, std::ostream& out,
            std::ostream& err);

/// Select the target head for a source structure: prints the winner and the
/// top-k ranked log scores. Unknown input tokens go to the diagnostics
/// stream.
int cmd_select(const std::string& fstructure_text, const std::string& category,
               const Config& cfg, std::ostream& out, std::ostream& err);

/// Evaluate the stored models on a test corpus; plain-text table followed by
/// a machine-readable key=value block. With `with_baseline`, also scores the
/// stored word-level baseline on the same pairs.
int cmd_eval(const std::string& test_corpus_path, const Config& cfg, bool with_baseline,
             std::ostream& out, std::ostream& err);

/// Dump a model's bias and nonzero-count connection weights, 6 decimal
/// places, sorted.
int cmd_inspect(const std::string& category, const Config& cfg, std::ostream& out,
                std::ostream& err);

/// Generate a synthetic corpus pair (train.fs, test.fs) plus catmap.tsv,
/// truth.tsv and meta.txt under `out_dir`.
int cmd_gen(const std::string& out_dir, const SyntheticSpec& spec, std::ostream& out,
            std::ostream& err);

/// Path of a category's model file inside a model directory.
std::string model_path(const std::string& model_dir, const std::string& category);

}  // namespace itlex::cli

#endif  // ITLEX_CLI_HPP

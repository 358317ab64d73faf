#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "itlex/cli.hpp"

namespace {

void add_model_flags(CLI::App* cmd, itlex::cli::Config& cfg) {
  cmd->add_option("--model-dir", cfg.model_dir, "Model directory")
      ->capture_default_str();
}

void add_train_flags(CLI::App* cmd, itlex::cli::Config& cfg) {
  add_model_flags(cmd, cfg);
  cmd->add_option("--lambda", cfg.lambda, "Add-lambda smoothing constant")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--category-map", cfg.category_map_path,
                  "Slot-label to category map (TSV; `*` line sets the default)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"itlex - bilingual lexical selection with information-theoretic networks"};
  app.require_subcommand(1);
  app.set_config("--config");

  itlex::cli::Config cfg;
  itlex::SyntheticSpec spec;
  std::string corpus_path, structure_text, category, out_dir;
  bool with_baseline = false;

  CLI::App* train = app.add_subcommand("train", "Build per-category models from a corpus");
  train->add_option("corpus", corpus_path, "F-structure pair corpus file")->required();
  add_train_flags(train, cfg);

  CLI::App* add = app.add_subcommand("add", "Fold more training pairs into stored models");
  add->add_option("corpus", corpus_path, "F-structure pair corpus file")->required();
  add_train_flags(add, cfg);

  CLI::App* select =
      app.add_subcommand("select", "Pick the target head for a source f-structure");
  select->add_option("fstructure", structure_text,
                     "Bracketed source f-structure (`-` reads stdin)")
      ->required();
  select->add_option("category", category, "Phrasal category of the network")->required();
  select->add_option("--top-k", cfg.top_k, "Ranked outputs to print")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_model_flags(select, cfg);

  CLI::App* eval = app.add_subcommand("eval", "Score stored models on a test corpus");
  eval->add_option("corpus", corpus_path, "Test corpus file")->required();
  eval->add_flag("--baseline", with_baseline,
                 "Also score the word-level posterior baseline");
  eval->add_option("--category-map", cfg.category_map_path,
                   "Slot-label to category map (TSV)");
  add_model_flags(eval, cfg);

  CLI::App* inspect = app.add_subcommand("inspect", "Dump a model's bias and weights");
  inspect->add_option("category", category, "Category of the model to dump")->required();
  add_model_flags(inspect, cfg);

  CLI::App* gen = app.add_subcommand("gen", "Write a synthetic benchmark corpus");
  gen->add_option("outdir", out_dir, "Output directory")->required();
  gen->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  gen->add_option("--noise", spec.noise, "Output corruption probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--categories", spec.categories, "Phrasal categories")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen->add_option("--heads", spec.heads_per_category, "Own-head tokens per category")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen->add_option("--children", spec.children_per_category, "Child tokens per category")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}))
      ->capture_default_str();
  gen->add_option("--train-n", spec.train_samples, "Training samples")
      ->capture_default_str();
  gen->add_option("--test-n", spec.test_samples, "Test samples")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) return itlex::cli::cmd_train(corpus_path, cfg, std::cout, std::cerr);
  if (add->parsed()) return itlex::cli::cmd_add(corpus_path, cfg, std::cout, std::cerr);
  if (select->parsed()) {
    if (structure_text == "-") {
      std::ostringstream buffer;
      buffer << std::cin.rdbuf();
      structure_text = buffer.str();
    }
    return itlex::cli::cmd_select(structure_text, category, cfg, std::cout, std::cerr);
  }
  if (eval->parsed())
    return itlex::cli::cmd_eval(corpus_path, cfg, with_baseline, std::cout, std::cerr);
  if (inspect->parsed()) return itlex::cli::cmd_inspect(category, cfg, std::cout, std::cerr);
  if (gen->parsed()) return itlex::cli::cmd_gen(out_dir, spec, std::cout, std::cerr);
  return 1;
}

#include "itlex/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace fs = std::filesystem;

namespace itlex::cli {

namespace {

constexpr const char* kModelExt = ".itlex";
constexpr const char* kBaselineName = "_baseline.tsv";

std::string fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

bool valid_category_name(const std::string& s) {
  if (s.empty() || std::isalpha(static_cast<unsigned char>(s[0])) == 0) return false;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '-' && c != '_') return false;
  return true;
}

// All files go out write-temp-then-rename so readers never see a partial one.
void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string render_model(const CountStore& store) {
  std::ostringstream os;
  save_model(store, os);
  return os.str();
}

std::string render_baseline(const BaselineTable& table, double lambda) {
  std::ostringstream os;
  save_baseline(table, lambda, os);
  return os.str();
}

CategoryMap load_cmap(const Config& cfg) {
  return cfg.category_map_path.empty() ? CategoryMap::defaults()
                                       : read_category_map_file(cfg.category_map_path);
}

std::vector<std::string> model_categories(const std::string& model_dir) {
  std::vector<std::string> categories;
  if (!fs::is_directory(model_dir)) return categories;
  for (const auto& entry : fs::directory_iterator(model_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == kModelExt)
      categories.push_back(entry.path().stem().string());
  }
  std::sort(categories.begin(), categories.end());
  return categories;
}

struct CountedCorpus {
  std::map<std::string, CountStore> stores;
  BaselineTable baseline;
  AlignDiagnostics align_diag;
  ExtractDiagnostics extract_diag;
};

CountedCorpus count_corpus(const std::vector<CorpusRecord>& records, const CategoryMap& cmap,
                           double lambda) {
  CountedCorpus counted;
  for (const CorpusRecord& rec : records) {
    std::vector<AlignedPair> aligned = align(rec.source, rec.target, &counted.align_diag);
    for (const SamplePair& sample :
         extract_samples(aligned, cmap, &counted.extract_diag)) {
      auto it = counted.stores.try_emplace(sample.category, sample.category, lambda).first;
      it->second.add_sample(sample);
    }
    for (const AlignedPair& p : aligned) {
      auto s = head_of(p.source);
      auto t = head_of(p.target);
      if (s && t) counted.baseline.add(*s, *t);
    }
  }
  return counted;
}

void report_drops(const CountedCorpus& counted, std::ostream& err) {
  const auto& ad = counted.align_diag;
  const auto& ed = counted.extract_diag;
  if (ad.skipped_subs || ed.headless_source || ed.headless_target)
    err << "note: " << ad.skipped_subs << " unmatched sub-structure(s), "
        << ed.headless_source << " pair(s) dropped for a headless source, "
        << ed.headless_target << " for a headless target\n";
}

}  // namespace

std::string model_path(const std::string& model_dir, const std::string& category) {
  return (fs::path(model_dir) / (category + kModelExt)).string();
}

int cmd_train(const std::string& corpus_path, const Config& cfg, std::ostream& out,
              std::ostream& err) {
  try {
    const std::vector<CorpusRecord> records = read_corpus_file(corpus_path);
    if (records.empty()) {
      err << "warning: no records in " << corpus_path << "; no models written\n";
      return 0;
    }
    CountedCorpus counted = count_corpus(records, load_cmap(cfg), cfg.lambda);
    fs::create_directories(cfg.model_dir);
    for (const auto& [category, store] : counted.stores) {
      atomic_write(model_path(cfg.model_dir, category), render_model(store));
      out << category << ' ' << store.n_samples() << " samples\n";
    }
    atomic_write(fs::path(cfg.model_dir) / kBaselineName,
                 render_baseline(counted.baseline, cfg.lambda));
    report_drops(counted, err);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_add(const std::string& corpus_path, const Config& cfg, std::ostream& out,
            std::ostream& err) {
  try {
    const std::vector<CorpusRecord> records = read_corpus_file(corpus_path);
    if (records.empty()) {
      err << "warning: no records in " << corpus_path << "; nothing to add\n";
      return 0;
    }

    // Verify every stored lambda before touching any file.
    std::map<std::string, CountStore> existing;
    for (const std::string& category : model_categories(cfg.model_dir)) {
      CountStore store = load_model_file(model_path(cfg.model_dir, category));
      if (store.lambda() != cfg.lambda) {
        err << "error: model '" << category << "' was trained with lambda "
            << format_decimal(store.lambda()) << ", requested "
            << format_decimal(cfg.lambda) << "; refusing to mix\n";
        return 1;
      }
      existing.emplace(category, std::move(store));
    }
    BaselineTable baseline;
    const fs::path baseline_path = fs::path(cfg.model_dir) / kBaselineName;
    if (fs::exists(baseline_path)) {
      std::ifstream in(baseline_path, std::ios::binary);
      auto [table, lambda] = load_baseline(in);
      if (lambda != cfg.lambda) {
        err << "error: stored baseline uses lambda " << format_decimal(lambda)
            << ", requested " << format_decimal(cfg.lambda) << "; refusing to mix\n";
        return 1;
      }
      baseline = std::move(table);
    }

    CountedCorpus counted = count_corpus(records, load_cmap(cfg), cfg.lambda);
    fs::create_directories(cfg.model_dir);
    for (auto& [category, fresh] : counted.stores) {
      auto it = existing.find(category);
      const CountStore& merged =
          it == existing.end() ? fresh : (it->second.merge(fresh), it->second);
      atomic_write(model_path(cfg.model_dir, category), render_model(merged));
      out << category << ' ' << merged.n_samples() << " samples\n";
    }
    baseline.merge(counted.baseline);
    atomic_write(baseline_path, render_baseline(baseline, cfg.lambda));
    report_drops(counted, err);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_select(const std::string& fstructure_text, const std::string& category,
               const Config& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (!valid_category_name(category)) {
      err << "error: bad category name '" << category << "'\n";
      return 1;
    }
    const std::string path = model_path(cfg.model_dir, category);
    if (!fs::exists(path)) {
      err << "error: no model for category '" << category << "' in " << cfg.model_dir
          << '\n';
      return 1;
    }
    CountStore store = load_model_file(path);
    if (!(store.lambda() > 0.0)) {
      err << "error: model '" << category
          << "' has lambda 0; selection needs a smoothed model (lambda > 0)\n";
      return 1;
    }
    const FStructure structure = parse(fstructure_text);
    const Network net(std::move(store));
    const Activation act = net.activate(input_heads(structure));
    out << "selected " << select_from(act) << '\n';
    std::size_t rank = 0;
    for (const auto& [token, score] : ranked(act, static_cast<std::size_t>(cfg.top_k)))
      out << ++rank << ' ' << token << ' ' << fixed6(score) << '\n';
    for (const std::string& token : act.unknown_inputs)
      err << "unknown input: " << token << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_eval(const std::string& test_corpus_path, const Config& cfg, bool with_baseline,
             std::ostream& out, std::ostream& err) {
  try {
    std::map<std::string, Network> networks;
    for (const std::string& category : model_categories(cfg.model_dir)) {
      CountStore store = load_model_file(model_path(cfg.model_dir, category));
      if (!(store.lambda() > 0.0)) {
        err << "error: model '" << category
            << "' has lambda 0; evaluation needs smoothed models (lambda > 0)\n";
        return 1;
      }
      networks.emplace(category, Network(std::move(store)));
    }
    const std::vector<CorpusRecord> records = read_corpus_file(test_corpus_path);
    const EvalReport report = evaluate(networks, records, load_cmap(cfg));

    out << "category correct total accuracy\n";
    for (const auto& [category, stats] : report.per_category)
      out << category << ' ' << stats.correct << ' ' << stats.total << ' '
          << fixed6(stats.accuracy()) << '\n';
    out << "overall " << report.overall.correct << ' ' << report.overall.total << ' '
        << fixed6(report.overall.accuracy()) << '\n';

    out << '\n';
    out << "overall_correct=" << report.overall.correct << '\n';
    out << "overall_total=" << report.overall.total << '\n';
    out << "overall_accuracy=" << fixed6(report.overall.accuracy()) << '\n';
    out << "unknown_input_rate=" << fixed6(report.unknown_input_rate()) << '\n';
    out << "missing_network_samples=" << report.missing_network_samples << '\n';

    if (with_baseline) {
      const fs::path baseline_path = fs::path(cfg.model_dir) / kBaselineName;
      std::ifstream in(baseline_path, std::ios::binary);
      if (!in) {
        err << "error: no baseline table in " << cfg.model_dir << "; train first\n";
        return 1;
      }
      auto [table, lambda] = load_baseline(in);
      const BaselineEval be = evaluate_baseline(table, records, lambda);
      out << "baseline_correct=" << be.correct << '\n';
      out << "baseline_total=" << be.total << '\n';
      out << "baseline_accuracy=" << fixed6(be.accuracy()) << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_inspect(const std::string& category, const Config& cfg, std::ostream& out,
                std::ostream& err) {
  try {
    if (!valid_category_name(category)) {
      err << "error: bad category name '" << category << "'\n";
      return 1;
    }
    const std::string path = model_path(cfg.model_dir, category);
    if (!fs::exists(path)) {
      err << "error: no model for category '" << category << "' in " << cfg.model_dir
          << '\n';
      return 1;
    }
    const Network net(load_model_file(path));
    const CountStore& store = net.store();
    out << "category " << store.category() << '\n';
    out << "lambda " << format_decimal(store.lambda()) << '\n';
    out << "n " << store.n_samples() << '\n';
    for (const std::string& token : net.out_vocab())
      out << "b " << token << ' ' << fixed6(net.bias(token)) << '\n';
    for (const auto& [key, count] : store.joint_counts())
      if (count)
        out << "w " << key.first << ' ' << key.second << ' '
            << fixed6(net.weight(key.first, key.second)) << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_gen(const std::string& out_dir, const SyntheticSpec& spec, std::ostream& out,
            std::ostream& err) {
  try {
    const SyntheticData data = gen_synthetic(spec);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    std::ostringstream train_os, test_os, cmap_os, truth_os, meta_os;
    write_corpus(data.train, train_os);
    write_corpus(data.test, test_os);
    write_category_map(data.cmap, cmap_os);
    for (const SyntheticTruth& row : data.truth)
      truth_os << row.category << '\t' << row.head << '\t' << row.child << '\t'
               << row.target << '\n';
    meta_os << "categories=" << spec.categories << '\n'
            << "heads_per_category=" << spec.heads_per_category << '\n'
            << "children_per_category=" << spec.children_per_category << '\n'
            << "train_samples=" << spec.train_samples << '\n'
            << "test_samples=" << spec.test_samples << '\n'
            << "noise=" << format_decimal(spec.noise) << '\n'
            << "seed=" << spec.seed << '\n'
            << "source_vocab=" << spec.categories * (spec.heads_per_category +
                                                     spec.children_per_category)
            << '\n'
            << "target_vocab=" << spec.categories * 2 * spec.heads_per_category << '\n'
            << "bayes_rate=" << format_decimal(data.bayes_rate) << '\n';

    atomic_write(dir / "train.fs", train_os.str());
    atomic_write(dir / "test.fs", test_os.str());
    atomic_write(dir / "catmap.tsv", cmap_os.str());
    atomic_write(dir / "truth.tsv", truth_os.str());
    atomic_write(dir / "meta.txt", meta_os.str());
    out << "wrote " << (dir / "train.fs").string() << " (" << data.train.size()
        << " records)\n";
    out << "wrote " << (dir / "test.fs").string() << " (" << data.test.size()
        << " records)\n";
    out << "wrote " << (dir / "catmap.tsv").string() << '\n';
    out << "wrote " << (dir / "truth.tsv").string() << '\n';
    out << "wrote " << (dir / "meta.txt").string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace itlex::cli

#include "itlex/itnet.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace itlex {

NotInVocabulary::NotInVocabulary(const std::string& token)
    : std::runtime_error("token not in vocabulary: " + token), token_(token) {}

CountStore::CountStore(std::string category, double lambda)
    : category_(std::move(category)), lambda_(lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
}

std::uint64_t CountStore::in_count(const std::string& token) const {
  auto it = in_.find(token);
  return it != in_.end() ? it->second : 0;
}

std::uint64_t CountStore::out_count(const std::string& token) const {
  auto it = out_.find(token);
  return it != out_.end() ? it->second : 0;
}

std::uint64_t CountStore::joint_count(const std::string& in, const std::string& out) const {
  auto it = joint_.find({in, out});
  return it != joint_.end() ? it->second : 0;
}

void CountStore::add_sample(const SamplePair& sample) {
  if (sample.category != category_)
    throw CategoryMismatch("sample category '" + sample.category +
                           "' does not match store category '" + category_ + "'");
  ++n_samples_;
  ++out_[sample.output];
  for (const std::string& tok : sample.inputs) {
    ++in_[tok];
    ++joint_[{tok, sample.output}];
  }
}

void CountStore::merge(const CountStore& other) {
  if (other.category_ != category_)
    throw CategoryMismatch("cannot merge category '" + other.category_ + "' into '" +
                           category_ + "'");
  if (other.lambda_ != lambda_)
    throw LambdaMismatch("cannot merge stores with different lambda");
  n_samples_ += other.n_samples_;
  for (const auto& [tok, c] : other.in_) in_[tok] += c;
  for (const auto& [tok, c] : other.out_) out_[tok] += c;
  for (const auto& [key, c] : other.joint_) joint_[key] += c;
}

CountStore merge_counts(const CountStore& a, const CountStore& b) {
  CountStore merged = a;
  merged.merge(b);
  return merged;
}

CountStore train_counts(const std::string& category, double lambda,
                        const std::vector<SamplePair>& samples) {
  CountStore store(category, lambda);
  for (const SamplePair& s : samples) store.add_sample(s);
  return store;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

template <typename Map>
std::vector<std::string> keys_of(const Map& m) {
  std::vector<std::string> keys;
  keys.reserve(m.size());
  for (const auto& [k, v] : m) keys.push_back(k);
  return keys;  // map iteration is already sorted
}

bool contains(const std::vector<std::string>& sorted, const std::string& tok) {
  return std::binary_search(sorted.begin(), sorted.end(), tok);
}

}  // namespace

Network::Network(CountStore store)
    : store_(std::move(store)),
      in_vocab_(keys_of(store_.in_counts())),
      out_vocab_(keys_of(store_.out_counts())) {}

Network::Network(CountStore store, std::vector<std::string> in_vocab,
                 std::vector<std::string> out_vocab)
    : store_(std::move(store)),
      in_vocab_(sorted_unique(std::move(in_vocab))),
      out_vocab_(sorted_unique(std::move(out_vocab))) {}

double Network::weight(const std::string& in, const std::string& out) const {
  if (in_vocab_.empty() || out_vocab_.empty())
    throw EmptyVocabulary("network has an empty vocabulary");
  const double lambda = store_.lambda();
  const double n = static_cast<double>(store_.n_samples());
  const double vi = static_cast<double>(in_vocab_.size());
  const double vo = static_cast<double>(out_vocab_.size());
  const std::uint64_t ci = store_.in_count(in);
  const std::uint64_t cj = store_.out_count(out);
  const std::uint64_t cij = store_.joint_count(in, out);
  if (lambda == 0.0) {
    if (ci == 0) throw NotInVocabulary(in);
    if (cj == 0) throw NotInVocabulary(out);
    if (cij == 0) return kNegInf;  // never co-occurred: log 0
  }
  const double pj = (static_cast<double>(cj) + lambda) / (n + lambda * vo);
  const double pi = (static_cast<double>(ci) + lambda) / (n + lambda * vi);
  const double pij = (static_cast<double>(cij) + lambda) / (n + lambda * vi * vo);
  return std::log(pij / (pi * pj));
}

double Network::bias(const std::string& out) const {
  if (out_vocab_.empty()) throw EmptyVocabulary("network has no output units");
  const double lambda = store_.lambda();
  const std::uint64_t cj = store_.out_count(out);
  if (lambda == 0.0 && cj == 0) throw NotInVocabulary(out);
  const double n = static_cast<double>(store_.n_samples());
  const double vo = static_cast<double>(out_vocab_.size());
  return std::log((static_cast<double>(cj) + lambda) / (n + lambda * vo));
}

Activation Network::activate(const std::set<std::string>& inputs) const {
  Activation act;
  for (const std::string& tok : inputs) {
    if (contains(in_vocab_, tok))
      act.active_inputs.insert(tok);
    else
      act.unknown_inputs.insert(tok);
  }
  for (const std::string& out : out_vocab_) {
    double score = bias(out);
    for (const std::string& in : act.active_inputs) score += weight(in, out);
    act.scores.emplace(out, score);
  }
  return act;
}

std::string Network::select(const std::set<std::string>& inputs) const {
  if (out_vocab_.empty()) throw EmptyVocabulary("cannot select from an empty vocabulary");
  return select_from(activate(inputs));
}

std::string select_from(const Activation& act) {
  if (act.scores.empty()) throw EmptyVocabulary("no output scores");
  const std::string* best = nullptr;
  double best_score = kNegInf;
  for (const auto& [tok, score] : act.scores) {
    if (!best || score > best_score) {  // first wins ties: map order is ascending
      best = &tok;
      best_score = score;
    }
  }
  return *best;
}

std::vector<std::pair<std::string, double>> ranked(const Activation& act, std::size_t k) {
  std::vector<std::pair<std::string, double>> items(act.scores.begin(), act.scores.end());
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (k > 0 && items.size() > k) items.resize(k);
  return items;
}

std::map<std::string, double> posterior_oracle(const CountStore& store,
                                               const std::set<std::string>& inputs) {
  if (!(store.lambda() > 0.0))
    throw std::invalid_argument("posterior_oracle requires lambda > 0");

  // Straight-line recomputation from the counts; deliberately not routed
  // through Network::weight / Network::activate.
  const double lam = store.lambda();
  const double n = static_cast<double>(store.n_samples());
  const double vi = static_cast<double>(store.in_counts().size());
  const double vo = static_cast<double>(store.out_counts().size());

  std::vector<std::string> active;
  for (const std::string& tok : inputs)
    if (store.in_counts().count(tok)) active.push_back(tok);

  std::map<std::string, double> log_post;
  for (const auto& [out, cj] : store.out_counts()) {
    double u = std::log(static_cast<double>(cj) + lam) - std::log(n + lam * vo);
    for (const std::string& in : active) {
      const double ci = static_cast<double>(store.in_counts().at(in));
      const double cij = static_cast<double>(store.joint_count(in, out));
      u += std::log(cij + lam) - std::log(n + lam * vi * vo);
      u -= std::log(ci + lam) - std::log(n + lam * vi);
      u -= std::log(static_cast<double>(cj) + lam) - std::log(n + lam * vo);
    }
    log_post.emplace(out, u);
  }
  if (log_post.empty()) return {};

  double max_u = kNegInf;
  for (const auto& [out, u] : log_post) max_u = std::max(max_u, u);
  double z = 0.0;
  for (auto& [out, u] : log_post) {
    u = std::exp(u - max_u);
    z += u;
  }
  for (auto& [out, u] : log_post) u /= z;
  return log_post;
}

std::string format_decimal(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf, ptr);
}

namespace {

double parse_double(const std::string& s) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ModelFormatError("bad decimal: " + s);
  return value;
}

std::uint64_t parse_count(const std::string& s) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ModelFormatError("bad count: " + s);
  return value;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream is(line);
  std::string field;
  while (is >> field) fields.push_back(field);
  return fields;
}

}  // namespace

void save_model(const CountStore& store, std::ostream& out) {
  out << "itlex-model v1\n";
  out << "category " << store.category() << '\n';
  out << "lambda " << format_decimal(store.lambda()) << '\n';
  out << "n " << store.n_samples() << '\n';
  for (const auto& [tok, c] : store.in_counts())
    if (c) out << "in " << tok << ' ' << c << '\n';
  for (const auto& [tok, c] : store.out_counts())
    if (c) out << "out " << tok << ' ' << c << '\n';
  for (const auto& [key, c] : store.joint_counts())
    if (c) out << "joint " << key.first << ' ' << key.second << ' ' << c << '\n';
}

CountStore load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "itlex-model v1")
    throw ModelFormatError("not an itlex model file");

  auto field_line = [&](const std::string& key) {
    if (!std::getline(in, line)) throw ModelFormatError("truncated model file");
    if (line.rfind(key + ' ', 0) != 0)
      throw ModelFormatError("expected `" + key + "` line, got: " + line);
    return line.substr(key.size() + 1);
  };

  const std::string category = field_line("category");
  const double lambda = parse_double(field_line("lambda"));
  CountStore store(category, lambda);
  store.n_samples_ = parse_count(field_line("n"));

  std::uint64_t out_total = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split_fields(line);
    if (f.size() == 3 && f[0] == "in") {
      std::uint64_t c = parse_count(f[2]);
      if (c == 0 || !store.in_.emplace(f[1], c).second)
        throw ModelFormatError("bad in entry: " + line);
    } else if (f.size() == 3 && f[0] == "out") {
      std::uint64_t c = parse_count(f[2]);
      if (c == 0 || !store.out_.emplace(f[1], c).second)
        throw ModelFormatError("bad out entry: " + line);
      out_total += c;
    } else if (f.size() == 4 && f[0] == "joint") {
      std::uint64_t c = parse_count(f[3]);
      if (c == 0 || !store.joint_.emplace(std::make_pair(f[1], f[2]), c).second)
        throw ModelFormatError("bad joint entry: " + line);
    } else {
      throw ModelFormatError("unrecognized model line: " + line);
    }
  }

  if (out_total != store.n_samples_)
    throw ModelFormatError("output counts do not sum to the sample total");
  for (const auto& [key, c] : store.joint_) {
    if (c > store.in_count(key.first) || c > store.out_count(key.second))
      throw ModelFormatError("joint count exceeds a marginal for (" + key.first + ", " +
                             key.second + ")");
  }
  return store;
}

void save_model_file(const CountStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  save_model(store, out);
  if (!out.flush()) throw std::runtime_error("failed writing model file: " + path);
}

CountStore load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  try {
    return load_model(in);
  } catch (const ModelFormatError& e) {
    throw ModelFormatError(path + ": " + e.what());
  }
}

}  // namespace itlex

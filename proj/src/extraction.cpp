#include "itlex/extraction.hpp"

#include <cctype>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace itlex {

const std::string& CategoryMap::category_for(const std::string& label) const {
  auto it = entries.find(label);
  return it != entries.end() ? it->second : default_category;
}

CategoryMap CategoryMap::defaults() {
  CategoryMap cmap;
  cmap.entries = {
      {"sentence", "s"}, {"xcomp", "vp"}, {"vcomp", "vp"}, {"subj", "np"},
      {"obj", "np"},     {"pp-adj", "pp"}, {"adj", "ap"},
  };
  cmap.default_category = "other";
  return cmap;
}

namespace {

std::string fold(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Category names double as model file names; hold them to the label charset.
bool valid_name(const std::string& s) {
  if (s.empty() || std::isalpha(static_cast<unsigned char>(s[0])) == 0) return false;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '-' && c != '_') return false;
  return true;
}

}  // namespace

CategoryMap read_category_map(std::istream& in) {
  CategoryMap cmap;
  std::string line;
  std::size_t lineno = 0;
  bool have_default = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      std::ostringstream os;
      os << "category map line " << lineno << ": expected `label<TAB>category`";
      throw std::runtime_error(os.str());
    }
    std::string label = fold(line.substr(0, tab));
    std::string category = fold(line.substr(tab + 1));
    if (!valid_name(category)) {
      std::ostringstream os;
      os << "category map line " << lineno << ": bad category name '" << category << "'";
      throw std::runtime_error(os.str());
    }
    if (label == "*") {
      cmap.default_category = category;
      have_default = true;
    } else {
      cmap.entries[label] = category;
    }
  }
  if (!have_default) cmap.default_category = "other";
  return cmap;
}

CategoryMap read_category_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open category map: " + path);
  return read_category_map(in);
}

void write_category_map(const CategoryMap& cmap, std::ostream& out) {
  for (const auto& [label, category] : cmap.entries) out << label << '\t' << category << '\n';
  out << "*\t" << cmap.default_category << '\n';
}

namespace {

void align_rec(const FStructure& s, const FStructure& t, std::vector<AlignedPair>& out,
               AlignDiagnostics& diag) {
  out.push_back({s, t});

  // k-th source child of a label pairs with the k-th target child of it.
  std::map<std::string, std::deque<std::size_t>> queue;
  for (std::size_t i = 0; i < t.subs.size(); ++i) queue[t.subs[i].label].push_back(i);

  std::size_t matched_targets = 0;
  for (const FStructure& sc : s.subs) {
    auto it = queue.find(sc.label);
    if (it == queue.end() || it->second.empty()) {
      ++diag.skipped_subs;
      continue;
    }
    std::size_t ti = it->second.front();
    it->second.pop_front();
    ++matched_targets;
    align_rec(sc, t.subs[ti], out, diag);
  }
  diag.skipped_subs += t.subs.size() - matched_targets;
}

}  // namespace

std::vector<AlignedPair> align(const FStructure& source, const FStructure& target,
                               AlignDiagnostics* diag) {
  AlignDiagnostics local;
  AlignDiagnostics& d = diag ? *diag : local;
  std::vector<AlignedPair> out;
  align_rec(source, target, out, d);
  return out;
}

std::set<std::string> input_heads(const FStructure& fs) {
  std::set<std::string> heads;
  if (auto h = head_of(fs)) heads.insert(*h);
  for (const FStructure& sub : fs.subs)
    if (auto h = head_of(sub)) heads.insert(*h);
  return heads;
}

std::vector<SamplePair> extract_samples(const std::vector<AlignedPair>& pairs,
                                        const CategoryMap& cmap, ExtractDiagnostics* diag) {
  ExtractDiagnostics local;
  ExtractDiagnostics& d = diag ? *diag : local;
  std::vector<SamplePair> samples;
  for (const AlignedPair& p : pairs) {
    auto output = head_of(p.target);
    if (!output) {
      ++d.headless_target;
      continue;
    }
    std::set<std::string> inputs = input_heads(p.source);
    if (inputs.empty()) {
      ++d.headless_source;
      continue;
    }
    samples.push_back({cmap.category_for(p.target.label), std::move(inputs), *output});
  }
  return samples;
}

}  // namespace itlex

#ifndef ITLEX_EXTRACTION_HPP
#define ITLEX_EXTRACTION_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "itlex/fstructure.hpp"

namespace itlex {

/// One training association: the source-side head set and the target head it
/// co-occurred with, tagged with the phrasal category of the target slot.
struct SamplePair {
  std::string category;
  std::set<std::string> inputs;
  std::string output;

  bool operator==(const SamplePair&) const = default;
};

/// Maps f-structure slot labels (subj, xcomp, ...) to phrasal-category names
/// (np, vp, ...). Unlisted labels fall back to `default_category`.
struct CategoryMap {
  std::map<std::string, std::string> entries;
  std::string default_category = "other";

  const std::string& category_for(const std::string& label) const;

  /// The stock mapping: sentence->s, xcomp->vp, vcomp->vp, subj->np,
  /// obj->np, pp-adj->pp, adj->ap, everything else -> other.
  static CategoryMap defaults();
};

/// File format: lines of `slot-label<TAB>category`; a `*` label sets the
/// default. Blank lines and lines starting with `#` are ignored.
CategoryMap read_category_map(std::istream& in);
CategoryMap read_category_map_file(const std::string& path);
void write_category_map(const CategoryMap& cmap, std::ostream& out);

struct AlignedPair {
  FStructure source;
  FStructure target;
};

struct AlignDiagnostics {
  std::size_t skipped_subs = 0;  // sub-structures with no label match
};

/// Pair up a source/target structure and, recursively, their sub-structures
/// with identical labels (k-th occurrence with k-th occurrence). Unmatched
/// sub-structures on either side are dropped and tallied. Output is in
/// source document order, parents before children.
std::vector<AlignedPair> align(const FStructure& source, const FStructure& target,
                               AlignDiagnostics* diag = nullptr);

/// The input unit set for a source structure: its own head plus the heads of
/// its immediate sub-structures.
std::set<std::string> input_heads(const FStructure& fs);

struct ExtractDiagnostics {
  std::size_t headless_source = 0;  // no head anywhere on the input side
  std::size_t headless_target = 0;  // target slot carries no head to learn
};

/// Turn aligned pairs into training samples: one sample per pair whose
/// target has a head and whose source contributes at least one input head.
std::vector<SamplePair> extract_samples(const std::vector<AlignedPair>& pairs,
                                        const CategoryMap& cmap,
                                        ExtractDiagnostics* diag = nullptr);

}  // namespace itlex

#endif  // ITLEX_EXTRACTION_HPP

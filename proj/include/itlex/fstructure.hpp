#ifndef ITLEX_FSTRUCTURE_HPP
#define ITLEX_FSTRUCTURE_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace itlex {

/// A simplified functional structure: a labeled tree node carrying the bare
/// word tokens found at its level plus labeled sub-structures.
///
/// Text form:  [label token... [sublabel ...]...]
/// Labels and tokens are case-folded to ASCII lowercase at parse time.
struct FStructure {
  std::string label;
  std::vector<std::string> tokens;
  std::vector<FStructure> subs;

  bool operator==(const FStructure&) const = default;
};

enum class ParseErrorKind {
  UnbalancedBrackets,
  EmptyStructure,
  IllegalCharacter,
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t position, const std::string& what);

  ParseErrorKind kind() const { return kind_; }
  /// Byte offset into the parsed text. For premature end of input this is the
  /// text length.
  std::size_t position() const { return position_; }

 private:
  ParseErrorKind kind_;
  std::size_t position_;
};

/// Parse a single bracketed f-structure. The whole input must be consumed
/// apart from surrounding whitespace.
FStructure parse(std::string_view text);

/// Canonical text form: lowercase, single spaces, tokens before
/// sub-structures, original order kept within each group. Assumes `fs`
/// satisfies the FStructure invariants.
std::string serialize(const FStructure& fs);

/// The head word of a structure: its last bare token. Empty when the
/// structure carries no tokens of its own.
std::optional<std::string> head_of(const FStructure& fs);

/// One source/target pair from a corpus file.
struct CorpusRecord {
  FStructure source;
  FStructure target;

  bool operator==(const CorpusRecord&) const = default;
};

/// Raised for corpus files that do not parse; carries the 1-based index of
/// the offending record.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::size_t record_index, const std::string& what);
  std::size_t record_index() const { return record_index_; }

 private:
  std::size_t record_index_;
};

/// Corpus format: one record per pair, source structure then target
/// structure, records separated by a line containing exactly `---`.
/// Structures may span lines. Blank records are skipped.
std::vector<CorpusRecord> read_corpus(std::istream& in);
std::vector<CorpusRecord> read_corpus_file(const std::string& path);

void write_corpus(const std::vector<CorpusRecord>& records, std::ostream& out);

}  // namespace itlex

#endif  // ITLEX_FSTRUCTURE_HPP

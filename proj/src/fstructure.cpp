#include "itlex/fstructure.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace itlex {

namespace {

const char* kind_name(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::UnbalancedBrackets: return "unbalanced brackets";
    case ParseErrorKind::EmptyStructure: return "empty structure";
    case ParseErrorKind::IllegalCharacter: return "illegal character";
  }
  return "parse error";
}

std::string describe(ParseErrorKind kind, std::size_t position) {
  std::ostringstream os;
  os << kind_name(kind) << " at offset " << position;
  return os.str();
}

bool is_ws(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

char fold(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::string fold_copy(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = fold(c);
  return out;
}

bool label_head_char(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool label_tail_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' || c == '_';
}

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void skip_ws() {
    while (!eof() && is_ws(peek())) ++pos;
  }

  [[noreturn]] void fail(ParseErrorKind kind, std::size_t at) const {
    throw ParseError(kind, at, describe(kind, at));
  }

  // Maximal run of non-whitespace, non-bracket characters.
  std::string_view chunk() {
    std::size_t start = pos;
    while (!eof() && !is_ws(peek()) && peek() != '[' && peek() != ']') ++pos;
    return text.substr(start, pos - start);
  }

  FStructure structure() {
    skip_ws();
    if (eof()) fail(ParseErrorKind::UnbalancedBrackets, pos);
    if (peek() == ']') fail(ParseErrorKind::UnbalancedBrackets, pos);
    if (peek() != '[') fail(ParseErrorKind::IllegalCharacter, pos);
    ++pos;

    skip_ws();
    if (eof()) fail(ParseErrorKind::UnbalancedBrackets, pos);
    if (peek() == ']') fail(ParseErrorKind::EmptyStructure, pos);
    if (peek() == '[') fail(ParseErrorKind::IllegalCharacter, pos);

    std::size_t label_at = pos;
    std::string_view raw = chunk();
    if (!label_head_char(raw[0])) fail(ParseErrorKind::IllegalCharacter, label_at);
    for (std::size_t k = 1; k < raw.size(); ++k)
      if (!label_tail_char(raw[k])) fail(ParseErrorKind::IllegalCharacter, label_at + k);

    FStructure fs;
    fs.label = fold_copy(raw);
    for (;;) {
      skip_ws();
      if (eof()) fail(ParseErrorKind::UnbalancedBrackets, pos);
      if (peek() == ']') {
        ++pos;
        return fs;
      }
      if (peek() == '[') {
        fs.subs.push_back(structure());
      } else {
        fs.tokens.push_back(fold_copy(chunk()));
      }
    }
  }

  // Nothing but whitespace may remain after a full parse.
  void expect_end() {
    skip_ws();
    if (eof()) return;
    if (peek() == ']') fail(ParseErrorKind::UnbalancedBrackets, pos);
    fail(ParseErrorKind::IllegalCharacter, pos);
  }
};

}  // namespace

ParseError::ParseError(ParseErrorKind kind, std::size_t position, const std::string& what)
    : std::runtime_error(what), kind_(kind), position_(position) {}

FStructure parse(std::string_view text) {
  Cursor cur{text};
  FStructure fs = cur.structure();
  cur.expect_end();
  return fs;
}

std::string serialize(const FStructure& fs) {
  std::string out = "[";
  out += fs.label;
  for (const std::string& tok : fs.tokens) {
    out += ' ';
    out += tok;
  }
  for (const FStructure& sub : fs.subs) {
    out += ' ';
    out += serialize(sub);
  }
  out += ']';
  return out;
}

std::optional<std::string> head_of(const FStructure& fs) {
  if (fs.tokens.empty()) return std::nullopt;
  return fs.tokens.back();
}

CorpusError::CorpusError(std::size_t record_index, const std::string& what)
    : std::runtime_error(what), record_index_(record_index) {}

namespace {

bool blank(const std::string& s) {
  for (char c : s)
    if (!is_ws(c)) return false;
  return true;
}

[[noreturn]] void record_fail(std::size_t index, const std::string& detail) {
  std::ostringstream os;
  os << "record " << index << ": " << detail;
  throw CorpusError(index, os.str());
}

CorpusRecord parse_record(const std::string& text, std::size_t index) {
  Cursor cur{text};
  CorpusRecord rec;
  try {
    rec.source = cur.structure();
    cur.skip_ws();
    if (cur.eof()) record_fail(index, "expected a target f-structure after the source");
    rec.target = cur.structure();
    cur.expect_end();
  } catch (const ParseError& e) {
    record_fail(index, e.what());
  }
  return rec;
}

}  // namespace

std::vector<CorpusRecord> read_corpus(std::istream& in) {
  std::vector<CorpusRecord> records;
  std::string chunk;
  std::size_t index = 0;
  auto flush = [&] {
    if (blank(chunk)) {
      chunk.clear();
      return;
    }
    records.push_back(parse_record(chunk, ++index));
    chunk.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "---") {
      flush();
    } else {
      chunk += line;
      chunk += '\n';
    }
  }
  flush();
  return records;
}

std::vector<CorpusRecord> read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return read_corpus(in);
}

void write_corpus(const std::vector<CorpusRecord>& records, std::ostream& out) {
  for (const CorpusRecord& rec : records) {
    out << serialize(rec.source) << '\n' << serialize(rec.target) << "\n---\n";
  }
}

}  // namespace itlex

#pragma once

// Bibliographic records and the two input formats: ISI tagged-field exports
// and the canonical tab-separated corpus file.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rfa/error.hpp"

namespace rfa {

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

struct DocumentRecord {
  std::string id;
  int year = 0;
  std::string title;
  std::vector<std::string> cited_refs;
  std::string source;

  friend bool operator==(const DocumentRecord&, const DocumentRecord&) = default;
};

struct YearRange {
  int min = 0;
  int max = 0;
  friend bool operator==(const YearRange&, const YearRange&) = default;
};

// Records in insertion order with unique non-empty ids and valid years.
class Corpus {
 public:
  Corpus() = default;

  // Throws DataError when the record violates a corpus invariant.
  void add(DocumentRecord rec) {
    if (auto why = rejection_reason(rec)) throw DataError(*why + " '" + rec.id + "'");
    insert(std::move(rec));
  }

  // Returns the rejection reason instead of throwing.
  std::optional<std::string> try_add(DocumentRecord rec) {
    if (auto why = rejection_reason(rec)) return why;
    insert(std::move(rec));
    return std::nullopt;
  }

  const std::vector<DocumentRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  std::optional<YearRange> year_range() const { return range_; }

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.records_ == b.records_; }

 private:
  std::vector<DocumentRecord> records_;
  std::unordered_set<std::string> ids_;
  std::optional<YearRange> range_;

  std::optional<std::string> rejection_reason(const DocumentRecord& rec) const {
    if (rec.id.empty()) return "empty id";
    if (rec.year < kMinYear || rec.year > kMaxYear) return "year out of range";
    if (ids_.contains(rec.id)) return "duplicate id";
    return std::nullopt;
  }

  void insert(DocumentRecord rec) {
    ids_.insert(rec.id);
    if (!range_)
      range_ = YearRange{rec.year, rec.year};
    else
      range_ = YearRange{std::min(range_->min, rec.year), std::max(range_->max, rec.year)};
    records_.push_back(std::move(rec));
  }
};

// Records dropped during parsing, tallied by reason.
struct SkipReport {
  std::map<std::string, std::size_t> reasons;

  void add(const std::string& reason, std::size_t n = 1) { reasons[reason] += n; }

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [_, c] : reasons) n += c;
    return n;
  }

  void merge(const SkipReport& other) {
    for (const auto& [r, c] : other.reasons) add(r, c);
  }

  // "skipped: N records (reason: n, ...)"
  std::string summary() const {
    std::ostringstream os;
    os << "skipped: " << total() << " records";
    if (!reasons.empty()) {
      os << " (";
      bool first = true;
      for (const auto& [r, c] : reasons) {
        if (!first) os << ", ";
        os << r << ": " << c;
        first = false;
      }
      os << ")";
    }
    return os.str();
  }
};

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline void strip_bom(std::string& line) {
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
}

inline std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

inline bool is_tag_char(char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

}  // namespace detail

/// Uppercase, collapse whitespace runs, and strip surrounding whitespace and
/// trailing '.' / ','. Only ASCII letters change case.
inline std::string normalize_reference(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (detail::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back((c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c);
  }
  while (!out.empty() && (out.back() == '.' || out.back() == ',' || out.back() == ' '))
    out.pop_back();
  return out;
}

/// Parse an ISI tagged-field export. Only TI, PY, CR and UT are read.
///
/// A record runs from its first tag line to a line tagged ER. Records lacking
/// PY or TI, or with an unusable PY, are dropped and tallied in `skipped`.
/// Records without UT get the id "rec<ordinal>", counting blocks from
/// `first_ordinal`. A record left open at end of input is a ParseError.
inline Corpus parse_wos(std::istream& in, SkipReport& skipped, std::size_t first_ordinal = 1) {
  struct Block {
    std::uint64_t offset = 0;
    std::vector<std::string> title_parts;
    bool has_title = false;
    std::optional<std::string> year;
    std::vector<std::string> refs;
    std::string ut;
    std::string tag;
  };

  Corpus corpus;
  std::optional<Block> block;
  std::size_t ordinal = first_ordinal;
  std::uint64_t offset = 0;
  std::string line;
  bool first_line = true;

  auto finish = [&](Block& b) {
    const std::size_t this_ordinal = ordinal++;
    if (!b.year) {
      skipped.add("missing PY");
      return;
    }
    if (!b.has_title) {
      skipped.add("missing TI");
      return;
    }
    auto year = detail::parse_int(detail::trim(*b.year));
    if (!year || *year < kMinYear || *year > kMaxYear) {
      skipped.add("bad PY");
      return;
    }
    DocumentRecord rec;
    rec.id = b.ut.empty() ? "rec" + std::to_string(this_ordinal) : b.ut;
    rec.year = *year;
    for (const auto& part : b.title_parts) {
      if (part.empty()) continue;
      if (!rec.title.empty()) rec.title.push_back(' ');
      rec.title += part;
    }
    rec.cited_refs = std::move(b.refs);
    if (auto why = corpus.try_add(std::move(rec))) skipped.add(*why);
  };

  auto unterminated = [](const Block& b) {
    return ParseError("unterminated record starting at byte offset " + std::to_string(b.offset) +
                      " (no closing ER)");
  };

  while (std::getline(in, line)) {
    const std::uint64_t line_offset = offset;
    offset += line.size() + (in.eof() ? 0 : 1);
    if (first_line) {
      detail::strip_bom(line);
      first_line = false;
    }
    detail::strip_cr(line);

    if (line.size() >= 3 && line.compare(0, 3, "   ") == 0) {
      if (!block) continue;
      auto value = std::string(detail::trim(line));
      if (block->tag == "TI") {
        block->title_parts.push_back(std::move(value));
      } else if (block->tag == "CR" && !value.empty()) {
        block->refs.push_back(std::move(value));
      }
      continue;
    }

    const bool tagged = line.size() >= 2 && detail::is_tag_char(line[0]) &&
                        detail::is_tag_char(line[1]) && (line.size() == 2 || line[2] == ' ');
    if (!tagged) continue;

    const std::string tag = line.substr(0, 2);
    const auto value = detail::trim(std::string_view(line).substr(2));

    if (!block) {
      if (tag == "FN" || tag == "VR" || tag == "EF" || tag == "ER") continue;
      block.emplace();
      block->offset = line_offset;
    } else if (tag == "EF") {
      throw unterminated(*block);
    }

    if (tag == "ER") {
      finish(*block);
      block.reset();
      continue;
    }

    block->tag = tag;
    if (tag == "TI") {
      block->has_title = true;
      block->title_parts.emplace_back(value);
    } else if (tag == "PY") {
      block->year = std::string(value);
    } else if (tag == "CR") {
      if (!value.empty()) block->refs.emplace_back(value);
    } else if (tag == "UT") {
      block->ut = std::string(value);
    }
  }
  if (block) throw unterminated(*block);
  return corpus;
}

inline Corpus parse_wos(std::istream& in) {
  SkipReport ignored;
  return parse_wos(in, ignored);
}

inline constexpr std::string_view kCanonicalHeader = "id\tyear\ttitle\trefs";
inline constexpr std::string_view kRefSeparator = "; ";

/// Parse the canonical corpus file: a header line, then one record per line
/// with fields id, year, title and refs joined by "; ".
inline Corpus parse_canonical(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    return ParseError("line " + std::to_string(lineno) + ": " + msg);
  };

  if (!std::getline(in, line)) {
    lineno = 1;
    throw fail("missing header");
  }
  ++lineno;
  detail::strip_bom(line);
  detail::strip_cr(line);
  if (line != kCanonicalHeader) throw fail("expected header 'id\\tyear\\ttitle\\trefs'");

  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 4) throw fail("expected 4 fields");

    DocumentRecord rec;
    rec.id = std::string(fields[0]);
    auto year = detail::parse_int(fields[1]);
    if (!year) throw fail("invalid year '" + std::string(fields[1]) + "'");
    rec.year = *year;
    rec.title = std::string(fields[2]);
    std::string_view refs = fields[3];
    if (!refs.empty()) {
      for (;;) {
        const auto sep = refs.find(kRefSeparator);
        rec.cited_refs.emplace_back(refs.substr(0, sep));
        if (sep == std::string_view::npos) break;
        refs.remove_prefix(sep + kRefSeparator.size());
      }
    }
    if (auto why = corpus.try_add(std::move(rec))) throw fail(*why + " '" + std::string(fields[0]) + "'");
  }
  return corpus;
}

namespace detail {

inline std::string canonical_field(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return out;
}

}  // namespace detail

/// Write the canonical corpus file. Tabs and line breaks inside fields become
/// spaces, a "; " inside a reference becomes ", ", and empty references are
/// omitted, so every written file parses back to the corpus it describes.
inline void write_canonical(std::ostream& out, const Corpus& corpus) {
  out << kCanonicalHeader << '\n';
  for (const auto& rec : corpus.records()) {
    out << detail::canonical_field(rec.id) << '\t' << rec.year << '\t'
        << detail::canonical_field(rec.title) << '\t';
    bool first = true;
    for (const auto& ref : rec.cited_refs) {
      if (ref.empty()) continue;
      std::string r = detail::canonical_field(ref);
      for (auto pos = r.find(kRefSeparator); pos != std::string::npos; pos = r.find(kRefSeparator, pos))
        r[pos] = ',';
      if (!first) out << kRefSeparator;
      out << r;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace rfa

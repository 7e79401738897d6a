#pragma once

// Title text -> set of stemmed word tokens.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rfa/error.hpp"
#include "rfa/porter.hpp"

namespace rfa {

namespace detail {

inline bool is_ascii_alpha(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Bytes >= 0x80 belong to UTF-8 sequences and are treated as letters.
inline bool is_word_byte(unsigned char c) { return is_ascii_alpha(c) || is_ascii_digit(c) || c >= 0x80; }

inline std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

}  // namespace detail

/// Lowercase and split on anything that is not a letter or digit. Tokens of
/// fewer than two characters and all-digit tokens are dropped.
inline std::vector<std::string> tokenize(std::string_view title) {
  std::vector<std::string> tokens;
  std::string cur;
  bool has_non_digit = false;
  auto flush = [&] {
    if (has_non_digit && detail::utf8_length(cur) >= 2) tokens.push_back(cur);
    cur.clear();
    has_non_digit = false;
  };
  for (char ch : title) {
    const auto c = static_cast<unsigned char>(ch);
    if (!detail::is_word_byte(c)) {
      flush();
      continue;
    }
    if (!detail::is_ascii_digit(c)) has_non_digit = true;
    cur.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch);
  }
  flush();
  return tokens;
}

// Function words only.
inline constexpr std::string_view kDefaultStopwords =
    "# default English stopwords: function words only\n"
    "a\nabout\nabove\nafter\nagain\nagainst\nall\nalso\nam\namong\nan\nand\nany\nare\nas\nat\n"
    "be\nbecause\nbeen\nbefore\nbeing\nbelow\nbetween\nboth\nbut\nby\ncan\ncould\ndid\ndo\ndoes\n"
    "doing\ndown\nduring\neach\nfew\nfor\nfrom\nfurther\nhad\nhas\nhave\nhaving\nhe\nher\nhere\n"
    "hers\nhim\nhis\nhow\ni\nif\nin\ninto\nis\nit\nits\nitself\nmay\nme\nmore\nmost\nmy\nno\nnor\n"
    "not\nof\noff\non\nonce\nonly\nor\nother\nour\nout\nover\nown\nsame\nshe\nshould\nso\nsome\n"
    "such\nthan\nthat\nthe\ntheir\nthem\nthen\nthere\nthese\nthey\nthis\nthose\nthrough\nto\ntoo\n"
    "under\nuntil\nup\nupon\nvery\nvia\nwas\nwe\nwere\nwhat\nwhen\nwhere\nwhich\nwhile\nwho\n"
    "whom\nwhy\nwill\nwith\nwithin\nwithout\nwould\nyou\nyour\n";

class StopwordList {
 public:
  StopwordList() = default;

  /// One word per line; everything after '#' is a comment; blank lines ignored.
  static StopwordList parse(std::istream& in) {
    StopwordList list;
    std::string line;
    while (std::getline(in, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::string_view w(line);
      while (!w.empty() && std::isspace(static_cast<unsigned char>(w.front()))) w.remove_prefix(1);
      while (!w.empty() && std::isspace(static_cast<unsigned char>(w.back()))) w.remove_suffix(1);
      if (w.empty()) continue;
      std::string word(w);
      std::transform(word.begin(), word.end(), word.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      list.words_.insert(std::move(word));
    }
    return list;
  }

  static StopwordList from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read stopword file '" + path + "'");
    return parse(in);
  }

  static const StopwordList& defaults() {
    static const StopwordList list = [] {
      std::istringstream in{std::string(kDefaultStopwords)};
      return parse(in);
    }();
    return list;
  }

  bool contains(std::string_view w) const { return words_.contains(std::string(w)); }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

inline std::vector<std::string> remove_stopwords(std::vector<std::string> tokens, const StopwordList& stop) {
  std::erase_if(tokens, [&](const std::string& t) { return stop.contains(t); });
  return tokens;
}

/// Distinct stems of one title, sorted.
struct TokenSet {
  std::vector<std::string> stems;

  bool contains(std::string_view s) const { return std::binary_search(stems.begin(), stems.end(), s); }
  std::size_t size() const { return stems.size(); }
  friend bool operator==(const TokenSet&, const TokenSet&) = default;
};

inline TokenSet make_token_set(std::vector<std::string> stems) {
  std::sort(stems.begin(), stems.end());
  stems.erase(std::unique(stems.begin(), stems.end()), stems.end());
  return TokenSet{std::move(stems)};
}

inline TokenSet title_to_tokenset(std::string_view title, const StopwordList& stop = StopwordList::defaults()) {
  auto tokens = remove_stopwords(tokenize(title), stop);
  for (auto& t : tokens) t = porter_stem(t);
  return make_token_set(std::move(tokens));
}

}  // namespace rfa

#pragma once

// Porter suffix-stripping stemmer.
//
// Follows the frozen reference implementation distributed by Martin Porter,
// which is the algorithm of the 1980 article plus two small departures that
// the reference vocabulary/output lists were generated with:
//   step 2 maps "bli" -> "ble" (instead of "abli" -> "able")
//   step 2 maps "logi" -> "log"
// Words of one or two characters are returned unchanged.

#include <cstddef>
#include <string>
#include <string_view>

namespace rfa {

namespace detail {

class PorterStemmer {
 public:
  explicit PorterStemmer(std::string_view word) : b_(word) {}

  std::string run() {
    if (b_.size() <= 2) return b_;
    k_ = static_cast<int>(b_.size()) - 1;
    step1ab();
    if (k_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    b_.resize(static_cast<std::size_t>(k_) + 1);
    return b_;
  }

 private:
  std::string b_;
  int k_ = 0;  // end of the current stem (inclusive)
  int j_ = 0;  // end of the stem preceding a matched suffix

  char at(int i) const { return b_[static_cast<std::size_t>(i)]; }

  bool cons(int i) const {
    switch (at(i)) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b[0..j].
  int measure() const {
    int n = 0;
    int i = 0;
    for (;;) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    for (;;) {
      for (;;) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      for (;;) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool double_consonant(int j) const {
    if (j < 1) return false;
    if (at(j) != at(j - 1)) return false;
    return cons(j);
  }

  // consonant-vowel-consonant ending at i, last consonant not w, x or y.
  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    const char ch = at(i);
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(static_cast<std::size_t>(k_ + 1 - len), s.size()) != s)
      return false;
    j_ = k_ - len;
    return true;
  }

  void set_to(std::string_view s) {
    const auto pos = static_cast<std::size_t>(j_ + 1);
    b_.replace(pos, static_cast<std::size_t>(k_) + 1 - pos, s);
    k_ = j_ + static_cast<int>(s.size());
  }

  void replace_if_measured(std::string_view s) {
    if (measure() > 0) set_to(s);
  }

  void step1ab() {
    if (at(k_) == 's') {
      if (ends("sses"))
        k_ -= 2;
      else if (ends("ies"))
        set_to("i");
      else if (at(k_ - 1) != 's')
        --k_;
    }
    if (ends("eed")) {
      if (measure() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_consonant(k_)) {
        --k_;
        const char ch = at(k_);
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
      } else if (measure() == 1 && cvc(k_)) {
        set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
  }

  // A suffix match ends the rule list even when the measure condition fails.
  template <std::size_t N>
  void apply_first(const std::pair<std::string_view, std::string_view> (&rules)[N]) {
    for (const auto& [suffix, repl] : rules) {
      if (ends(suffix)) {
        replace_if_measured(repl);
        return;
      }
    }
  }

  void step2() {
    using R = std::pair<std::string_view, std::string_view>;
    switch (at(k_ - 1)) {
      case 'a': {
        static constexpr R rules[] = {{"ational", "ate"}, {"tional", "tion"}};
        apply_first(rules);
        break;
      }
      case 'c': {
        static constexpr R rules[] = {{"enci", "ence"}, {"anci", "ance"}};
        apply_first(rules);
        break;
      }
      case 'e': {
        static constexpr R rules[] = {{"izer", "ize"}};
        apply_first(rules);
        break;
      }
      case 'l': {
        static constexpr R rules[] = {
            {"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}};
        apply_first(rules);
        break;
      }
      case 'o': {
        static constexpr R rules[] = {{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}};
        apply_first(rules);
        break;
      }
      case 's': {
        static constexpr R rules[] = {
            {"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}};
        apply_first(rules);
        break;
      }
      case 't': {
        static constexpr R rules[] = {{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}};
        apply_first(rules);
        break;
      }
      case 'g': {
        static constexpr R rules[] = {{"logi", "log"}};
        apply_first(rules);
        break;
      }
      default:
        break;
    }
  }

  void step3() {
    using R = std::pair<std::string_view, std::string_view>;
    switch (at(k_)) {
      case 'e': {
        static constexpr R rules[] = {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}};
        apply_first(rules);
        break;
      }
      case 'i': {
        static constexpr R rules[] = {{"iciti", "ic"}};
        apply_first(rules);
        break;
      }
      case 'l': {
        static constexpr R rules[] = {{"ical", "ic"}, {"ful", ""}};
        apply_first(rules);
        break;
      }
      case 's': {
        static constexpr R rules[] = {{"ness", ""}};
        apply_first(rules);
        break;
      }
      default:
        break;
    }
  }

  bool ends_any(std::initializer_list<std::string_view> suffixes) {
    for (auto s : suffixes)
      if (ends(s)) return true;
    return false;
  }

  void step4() {
    bool matched = false;
    switch (at(k_ - 1)) {
      case 'a': matched = ends("al"); break;
      case 'c': matched = ends_any({"ance", "ence"}); break;
      case 'e': matched = ends("er"); break;
      case 'i': matched = ends("ic"); break;
      case 'l': matched = ends_any({"able", "ible"}); break;
      case 'n': matched = ends_any({"ant", "ement", "ment", "ent"}); break;
      case 'o':
        if (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't'))
          matched = true;
        else
          matched = ends("ou");
        break;
      case 's': matched = ends("ism"); break;
      case 't': matched = ends_any({"ate", "iti"}); break;
      case 'u': matched = ends("ous"); break;
      case 'v': matched = ends("ive"); break;
      case 'z': matched = ends("ize"); break;
      default: break;
    }
    if (matched && measure() > 1) k_ = j_;
  }

  void step5() {
    j_ = k_;
    if (at(k_) == 'e') {
      const int m = measure();
      if (m > 1 || (m == 1 && !cvc(k_ - 1))) --k_;
    }
    if (at(k_) == 'l' && double_consonant(k_) && measure() > 1) --k_;
  }
};

}  // namespace detail

/// Stem one lowercase token.
inline std::string porter_stem(std::string_view token) {
  return detail::PorterStemmer(token).run();
}

}  // namespace rfa

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rfa/textpipe.hpp"

using rfa::StopwordList;
using Tokens = std::vector<std::string>;

TEST(Tokenize, SplitsOnPunctuation) {
  EXPECT_EQ(rfa::tokenize("C60: Buckminsterfullerene"), (Tokens{"c60", "buckminsterfullerene"}));
}

TEST(Tokenize, EmptyTitle) { EXPECT_TRUE(rfa::tokenize("").empty()); }

TEST(Tokenize, DropsDigitsAndSingleCharacters) {
  EXPECT_EQ(rfa::tokenize("single-walled carbon nanotubes (1993)"),
            (Tokens{"single", "walled", "carbon", "nanotubes"}));
  EXPECT_EQ(rfa::tokenize("a b 12 x9 Q"), (Tokens{"x9"}));
}

TEST(Tokenize, KeepsUtf8Letters) {
  EXPECT_EQ(rfa::tokenize("Krätschmer-Huffman generator"), (Tokens{"krätschmer", "huffman", "generator"}));
  // A lone two-byte character is one code point and is dropped.
  EXPECT_TRUE(rfa::tokenize("é").empty());
}

TEST(Stopwords, DefaultListRemovesFunctionWords) {
  EXPECT_EQ(rfa::remove_stopwords({"the", "structure", "of", "scientific", "revolutions"}, StopwordList::defaults()),
            (Tokens{"structure", "scientific", "revolutions"}));
  EXPECT_TRUE(rfa::remove_stopwords({}, StopwordList::defaults()).empty());
}

TEST(Stopwords, EmptyOverrideKeepsEverything) {
  std::istringstream in("");
  const auto empty = StopwordList::parse(in);
  const Tokens t{"the", "structure", "of"};
  EXPECT_EQ(rfa::remove_stopwords(t, empty), t);
}

TEST(Stopwords, FileFormatAllowsComments) {
  std::istringstream in("# comment line\nfoo\n  Bar  # trailing comment\n\n");
  const auto list = StopwordList::parse(in);
  EXPECT_EQ(list.size(), 2u);
  EXPECT_TRUE(list.contains("foo"));
  EXPECT_TRUE(list.contains("bar"));
}

TEST(Stopwords, MissingOverrideIsConfigError) {
  EXPECT_THROW(StopwordList::from_file("/nonexistent/stopwords.txt"), rfa::ConfigError);
}

TEST(Stopwords, BundledFileMatchesBuiltInList) {
  const auto file = StopwordList::from_file(RFA_SOURCE_DIR "/data/stopwords_en.txt");
  const auto& builtin = StopwordList::defaults();
  EXPECT_EQ(file.size(), builtin.size());
  for (const auto* w : {"the", "of", "and", "with", "via"}) EXPECT_TRUE(file.contains(w)) << w;
}

TEST(TitleToTokenSet, StemsAndFilters) {
  EXPECT_EQ(rfa::title_to_tokenset("Networks of scientific papers").stems,
            (Tokens{"network", "paper", "scientif"}));
  EXPECT_TRUE(rfa::title_to_tokenset("").stems.empty());
}

TEST(TitleToTokenSet, SetSemantics) {
  EXPECT_EQ(rfa::title_to_tokenset("citation citation analysis").size(), 2u);
  // Distinct surface forms that share a stem collapse too.
  EXPECT_EQ(rfa::title_to_tokenset("citation citations").size(), 1u);
}

TEST(TitleToTokenSet, InvariantUnderWordReordering) {
  std::mt19937 rng(7);
  std::vector<std::string> words = {"carbon",  "nanotubes", "fullerenes", "synthesis", "of",
                                    "the",     "electronic", "structure", "helical",   "microtubules",
                                    "graphitic", "citation", "analysis",  "c60",       "1991"};
  for (int trial = 0; trial < 200; ++trial) {
    std::shuffle(words.begin(), words.end(), rng);
    const std::size_t n = 1 + rng() % words.size();
    std::string a, b;
    std::vector<std::string> picked(words.begin(), words.begin() + static_cast<long>(n));
    for (const auto& w : picked) a += w + " ";
    std::shuffle(picked.begin(), picked.end(), rng);
    for (const auto& w : picked) b += w + ", ";
    ASSERT_EQ(rfa::title_to_tokenset(a), rfa::title_to_tokenset(b)) << a << " | " << b;
  }
}

TEST(TitleToTokenSet, StemsAreLowercaseWithALetter) {
  const auto set = rfa::title_to_tokenset("HELICAL Microtubules OF Graphitic Carbon 1991 C60 x2");
  for (const auto& s : set.stems) {
    EXPECT_FALSE(s.empty());
    EXPECT_TRUE(std::any_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; })) << s;
    EXPECT_TRUE(std::none_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; })) << s;
  }
}

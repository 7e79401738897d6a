#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "rfa/infodyn.hpp"
#include "rfa/synth.hpp"

namespace {

std::string canonical_text(const rfa::Corpus& c) {
  std::ostringstream os;
  rfa::write_canonical(os, c);
  return os.str();
}

std::vector<rfa::SeriesPoint> analyze(const rfa::Corpus& c) {
  const auto v = rfa::build_vocab(c, 10, 10);
  return rfa::mu_star_series(c, v.words, v.refs, rfa::StopwordList::defaults(), {.threads = 0});
}

}  // namespace

TEST(Synth, DeterministicForASeed) {
  rfa::SynthConfig cfg;
  cfg.years = 4;
  cfg.docs_per_year = 200;
  const auto a = canonical_text(rfa::generate(cfg));
  EXPECT_EQ(a, canonical_text(rfa::generate(cfg)));
  cfg.seed = 43;
  EXPECT_NE(a, canonical_text(rfa::generate(cfg)));
}

TEST(Synth, FollowsTheGrowthSchedule) {
  rfa::SynthConfig cfg;
  cfg.years = 6;
  cfg.first_year = 2001;
  cfg.docs_per_year = 100;
  cfg.growth = 1.5;
  const auto c = rfa::generate(cfg);
  std::map<int, std::size_t> per_year;
  for (const auto& r : c.records()) ++per_year[r.year];
  ASSERT_EQ(per_year.size(), 6u);
  for (int y = 0; y < 6; ++y)
    EXPECT_EQ(per_year[2001 + y], static_cast<std::size_t>(std::llround(100 * std::pow(1.5, y)))) << y;
}

TEST(Synth, DocumentsHaveTheConfiguredShape) {
  rfa::SynthConfig cfg;
  cfg.years = 2;
  cfg.docs_per_year = 50;
  const auto corpus = rfa::generate(cfg);
  for (const auto& r : corpus.records()) {
    EXPECT_EQ(rfa::title_to_tokenset(r.title).size(), 4u) << r.title;
    EXPECT_EQ(rfa::reference_set(r).size(), 6u);
  }
}

TEST(Synth, RejectsInvalidConfigs) {
  rfa::SynthConfig cfg;
  cfg.kappa = 1.5;
  EXPECT_THROW(rfa::generate(cfg), rfa::ConfigError);
  cfg = {};
  cfg.kappa_end = -0.1;
  EXPECT_THROW(rfa::validate(cfg), rfa::ConfigError);
  cfg = {};
  cfg.growth = 0.0;
  EXPECT_THROW(rfa::validate(cfg), rfa::ConfigError);
  cfg = {};
  cfg.n_words = 12;  // 3 per topic, fewer than 4 words per document
  EXPECT_THROW(rfa::validate(cfg), rfa::ConfigError);
  cfg = {};
  cfg.first_year = 2095;
  EXPECT_THROW(rfa::validate(cfg), rfa::ConfigError);
  EXPECT_NO_THROW(rfa::validate(rfa::SynthConfig{}));
}

TEST(Synth, KappaRampsLinearly) {
  rfa::SynthConfig cfg;
  cfg.years = 5;
  cfg.kappa = 0.0;
  cfg.kappa_end = 0.8;
  EXPECT_DOUBLE_EQ(rfa::kappa_in_year(cfg, 0), 0.0);
  EXPECT_DOUBLE_EQ(rfa::kappa_in_year(cfg, 2), 0.4);
  EXPECT_DOUBLE_EQ(rfa::kappa_in_year(cfg, 4), 0.8);
}

TEST(Synth, UncoupledCorpusHasNearZeroSynergy) {
  rfa::SynthConfig cfg;
  cfg.years = 2;
  cfg.docs_per_year = 5000;
  cfg.kappa = 0.0;
  cfg.drift = 1.0;
  const auto s = analyze(rfa::generate(cfg));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_LT(std::abs(s[0].mu_star), 0.05);
}

TEST(Synth, RisingCouplingDrivesSynergyDown) {
  rfa::SynthConfig cfg;
  cfg.years = 8;
  cfg.docs_per_year = 3000;
  cfg.kappa = 0.0;
  cfg.kappa_end = 1.0;
  cfg.drift = 1.0;
  const auto s = analyze(rfa::generate(cfg));
  ASSERT_EQ(s.size(), 7u);
  EXPECT_LT(s.back().mu_star, -0.3);
  EXPECT_LT(s.back().mu_star, s.front().mu_star - 0.2);
  int rises = 0;
  for (std::size_t i = 1; i < s.size(); ++i) rises += s[i].mu_star > s[i - 1].mu_star;
  EXPECT_LE(rises, 1);
}

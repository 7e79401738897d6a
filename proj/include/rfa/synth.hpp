#pragma once

// Seeded synthetic corpora with tunable word-reference-year coupling.
//
// Latent model: the word vocabulary and the reference pool are each split
// into n_topics pools through a per-year permutation. Every simulated year a
// fraction `drift` of positions is reshuffled, so words and references move
// between topics while staying in use. A document is "coupled" with
// probability kappa: it picks a topic from a year-dependent popularity profile
// and draws its words and references from that topic's current pools.
// Otherwise words and references are drawn uniformly and independently.
// Coupling changes from year to year, which makes the year slice carry
// information about word-reference combinations (mu* < 0).
//
// Randomness is counter based: every value is a SplitMix64-style hash of
// (seed, stream, counter), so any document can be generated from
// (seed, year, doc index) alone. The hash and the sampling routines below are
// frozen; changing them changes every generated corpus.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rfa/error.hpp"
#include "rfa/ingest.hpp"

namespace rfa {

struct SynthConfig {
  int years = 20;
  int first_year = 1990;
  std::int64_t docs_per_year = 500;  // documents in the first year
  double growth = 1.0;               // multiplicative rate per year
  std::int64_t n_words = 40;
  std::int64_t n_refs = 60;
  std::int64_t n_topics = 4;
  double kappa = 0.5;
  std::optional<double> kappa_end;  // when set, kappa ramps linearly to this by the last year
  double drift = 0.5;  // fraction of pool positions reshuffled per year
  std::int64_t words_per_doc = 4;
  std::int64_t refs_per_doc = 6;
  std::uint64_t seed = 42;
};

inline void validate(const SynthConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError("synth: " + m); };
  if (!(c.kappa >= 0.0 && c.kappa <= 1.0)) fail("kappa must lie in [0, 1]");
  if (c.kappa_end && !(*c.kappa_end >= 0.0 && *c.kappa_end <= 1.0)) fail("kappa_end must lie in [0, 1]");
  if (!(c.drift >= 0.0 && c.drift <= 1.0)) fail("drift must lie in [0, 1]");
  if (!(c.growth > 0.0) || !std::isfinite(c.growth)) fail("growth rate must be > 0");
  if (c.years < 1 || c.docs_per_year < 1 || c.n_words < 1 || c.n_refs < 1 || c.n_topics < 1 ||
      c.words_per_doc < 1 || c.refs_per_doc < 1)
    fail("all counts must be >= 1");
  if (c.first_year < kMinYear || c.first_year + c.years - 1 > kMaxYear) fail("years fall outside [1900, 2100]");
  if (c.n_words / c.n_topics < c.words_per_doc) fail("word pool per topic smaller than words_per_doc");
  if (c.n_refs / c.n_topics < c.refs_per_doc) fail("reference pool per topic smaller than refs_per_doc");
}

/// Coupling probability in year index `y` (0-based).
inline double kappa_in_year(const SynthConfig& c, int y) {
  if (!c.kappa_end || c.years == 1) return c.kappa;
  return c.kappa + (*c.kappa_end - c.kappa) * static_cast<double>(y) / static_cast<double>(c.years - 1);
}

/// Documents generated for year index `y` (0-based).
inline std::int64_t docs_in_year(const SynthConfig& c, int y) {
  const double n = static_cast<double>(c.docs_per_year) * std::pow(c.growth, y);
  return std::max<std::int64_t>(1, std::llround(n));
}

namespace synth_detail {

inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Independent stream of 64-bit values addressed by counter.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0)
      : key_(mix(mix(mix(mix(seed) ^ a) ^ b) ^ c)) {}

  std::uint64_t next() { return mix(key_ ^ mix(counter_++)); }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

enum Stream : std::uint64_t { kWordPerm = 1, kRefPerm = 2, kDoc = 3 };

inline void shuffle(std::vector<std::int64_t>& v, CounterRng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

// Permutation for each year; position p belongs to topic p * n_topics / n.
inline std::vector<std::vector<std::int64_t>> yearly_permutations(std::int64_t n, int years, double drift,
                                                                  std::uint64_t seed, std::uint64_t stream) {
  std::vector<std::vector<std::int64_t>> perms;
  std::vector<std::int64_t> perm(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  CounterRng init(seed, stream, 0);
  shuffle(perm, init);
  perms.push_back(perm);

  const auto moved = static_cast<std::size_t>(std::llround(drift * static_cast<double>(n)));
  for (int y = 1; y < years; ++y) {
    CounterRng rng(seed, stream, static_cast<std::uint64_t>(y));
    std::vector<std::int64_t> positions(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) positions[static_cast<std::size_t>(i)] = i;
    shuffle(positions, rng);
    positions.resize(moved);
    std::vector<std::int64_t> values;
    values.reserve(moved);
    for (auto p : positions) values.push_back(perm[static_cast<std::size_t>(p)]);
    shuffle(values, rng);
    for (std::size_t i = 0; i < moved; ++i) perm[static_cast<std::size_t>(positions[i])] = values[i];
    perms.push_back(perm);
  }
  return perms;
}

// k distinct values from [0, n) (Floyd), sorted.
inline std::vector<std::int64_t> sample_distinct(std::int64_t n, std::int64_t k, CounterRng& rng) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(k));
  for (std::int64_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j + 1)));
    if (std::find(out.begin(), out.end(), t) == out.end())
      out.push_back(t);
    else
      out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::int64_t pool_begin(std::int64_t n, std::int64_t topics, std::int64_t k) { return k * n / topics; }

// Smoothly rotating topic popularity; weights lie in [0.5, 1.5].
inline std::vector<double> topic_weights(std::int64_t topics, int y) {
  std::vector<double> w(static_cast<std::size_t>(topics));
  for (std::int64_t k = 0; k < topics; ++k)
    w[static_cast<std::size_t>(k)] =
        1.0 + 0.5 * std::sin(2.0 * std::numbers::pi *
                             (static_cast<double>(k) / static_cast<double>(topics) + y / 12.0));
  return w;
}

inline std::int64_t pick_weighted(const std::vector<double>& w, double u) {
  double total = 0;
  for (double x : w) total += x;
  double acc = 0;
  const double target = u * total;
  for (std::size_t k = 0; k < w.size(); ++k) {
    acc += w[k];
    if (target < acc) return static_cast<std::int64_t>(k);
  }
  return static_cast<std::int64_t>(w.size()) - 1;
}

}  // namespace synth_detail

inline std::string synth_word(std::int64_t id) { return "topicword" + std::to_string(id); }
inline std::string synth_ref(std::int64_t id) { return "SYNTH R" + std::to_string(id) + ", LATENT J"; }

/// Deterministic in `config`: equal configs yield identical corpora.
inline Corpus generate(const SynthConfig& config) {
  using namespace synth_detail;
  validate(config);
  const auto word_perm = yearly_permutations(config.n_words, config.years, config.drift, config.seed, kWordPerm);
  const auto ref_perm = yearly_permutations(config.n_refs, config.years, config.drift, config.seed, kRefPerm);

  Corpus corpus;
  for (int y = 0; y < config.years; ++y) {
    const int year = config.first_year + y;
    const auto weights = topic_weights(config.n_topics, y);
    const auto& wp = word_perm[static_cast<std::size_t>(y)];
    const auto& rp = ref_perm[static_cast<std::size_t>(y)];
    const std::int64_t n_docs = docs_in_year(config, y);
    const double kappa = kappa_in_year(config, y);

    for (std::int64_t d = 0; d < n_docs; ++d) {
      CounterRng rng(config.seed, kDoc, static_cast<std::uint64_t>(y), static_cast<std::uint64_t>(d));
      std::vector<std::int64_t> words;
      std::vector<std::int64_t> refs;
      if (rng.unit() < kappa) {
        const auto k = pick_weighted(weights, rng.unit());
        const auto w0 = pool_begin(config.n_words, config.n_topics, k);
        const auto w1 = pool_begin(config.n_words, config.n_topics, k + 1);
        const auto r0 = pool_begin(config.n_refs, config.n_topics, k);
        const auto r1 = pool_begin(config.n_refs, config.n_topics, k + 1);
        for (auto i : sample_distinct(w1 - w0, config.words_per_doc, rng))
          words.push_back(wp[static_cast<std::size_t>(w0 + i)]);
        for (auto i : sample_distinct(r1 - r0, config.refs_per_doc, rng))
          refs.push_back(rp[static_cast<std::size_t>(r0 + i)]);
      } else {
        words = sample_distinct(config.n_words, config.words_per_doc, rng);
        refs = sample_distinct(config.n_refs, config.refs_per_doc, rng);
      }
      std::sort(words.begin(), words.end());
      std::sort(refs.begin(), refs.end());

      DocumentRecord rec;
      rec.id = "syn" + std::to_string(year) + "-" + std::to_string(d);
      rec.year = year;
      for (auto w : words) {
        if (!rec.title.empty()) rec.title.push_back(' ');
        rec.title += synth_word(w);
      }
      for (auto r : refs) rec.cited_refs.push_back(synth_ref(r));
      corpus.add(std::move(rec));
    }
  }
  return corpus;
}

}  // namespace rfa

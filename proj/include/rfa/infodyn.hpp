#pragma once

// Shannon entropies (bits), transmission, configurational information and the
// yearly mu* series.
//
//   T_xy      = H_x + H_y - H_xy
//   mu*_xyz   = H_x + H_y + H_z - H_xy - H_xz - H_yz + H_xyz
//   T_xy|z    = H_xz + H_yz - H_xyz - H_z,   so that mu* = T_xy - T_xy|z
//
// Entropies use the plug-in estimator on observed relative frequencies.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rfa/error.hpp"
#include "rfa/tensor.hpp"
#include "rfa/vocab.hpp"

namespace rfa {

// Transmissions in [-kTransmissionTolerance, 0) are rounding noise and clamp to 0.
inline constexpr double kTransmissionTolerance = 1e-12;

inline double entropy(const JointDistribution& d) {
  if (d.empty()) throw std::invalid_argument("entropy of an empty distribution");
  detail::CompensatedSum s;
  for (const auto& c : d.cells()) s.add(-c.p * std::log2(c.p));
  return std::max(0.0, s.value());
}

inline double clamp_transmission(double t) {
  if (t >= 0.0) return t;
  if (t >= -kTransmissionTolerance) return 0.0;
  throw ConsistencyError("negative transmission " + std::to_string(t) + " bits");
}

namespace detail {

inline std::pair<Axis, Axis> two_axes(AxisSet s) {
  std::vector<Axis> out;
  for (Axis a : {Axis::word, Axis::ref, Axis::slice})
    if (s.has(a)) out.push_back(a);
  if (out.size() != 2) throw std::invalid_argument("expected a two-axis joint distribution");
  return {out[0], out[1]};
}

}  // namespace detail

/// Mutual information of a two-axis joint.
inline double transmission(const JointDistribution& joint) {
  const auto [x, y] = detail::two_axes(joint.axes());
  const double hx = entropy(marginalize(joint, {x}));
  const double hy = entropy(marginalize(joint, {y}));
  return clamp_transmission(hx + hy - entropy(joint));
}

// The seven entropies of a three-way joint over (word, ref, slice).
struct EntropyTerms {
  double h_w = 0, h_r = 0, h_z = 0;
  double h_wr = 0, h_wz = 0, h_rz = 0;
  double h_wrz = 0;

  double mu_star() const { return h_w + h_r + h_z - h_wr - h_wz - h_rz + h_wrz; }
  double t_wr() const { return clamp_transmission(h_w + h_r - h_wr); }
};

struct ConfigurationalInformation {
  EntropyTerms terms;
  double mu_star = 0;
};

namespace detail {

template <typename Source>
EntropyTerms entropy_terms_of(const Source& src) {
  EntropyTerms t;
  t.h_w = entropy(marginalize(src, {Axis::word}));
  t.h_r = entropy(marginalize(src, {Axis::ref}));
  t.h_z = entropy(marginalize(src, {Axis::slice}));
  t.h_wr = entropy(marginalize(src, {Axis::word, Axis::ref}));
  t.h_wz = entropy(marginalize(src, {Axis::word, Axis::slice}));
  t.h_rz = entropy(marginalize(src, {Axis::ref, Axis::slice}));
  t.h_wrz = entropy(marginalize(src, AxisSet::all()));
  return t;
}

}  // namespace detail

inline EntropyTerms entropy_terms(const JointDistribution& joint3) {
  if (!(joint3.axes() == AxisSet::all())) throw std::invalid_argument("expected a three-axis joint distribution");
  return detail::entropy_terms_of(joint3);
}

inline EntropyTerms entropy_terms(const SparseTensor3& t) { return detail::entropy_terms_of(t); }

/// mu* of a three-axis joint; the sign is unrestricted.
inline ConfigurationalInformation configurational_information(const JointDistribution& joint3) {
  const auto terms = entropy_terms(joint3);
  return {terms, terms.mu_star()};
}

/// Mutual information of the other two axes given `given`.
inline double conditional_transmission(const JointDistribution& joint3, Axis given) {
  if (!(joint3.axes() == AxisSet::all())) throw std::invalid_argument("expected a three-axis joint distribution");
  const auto [x, y] = detail::two_axes(AxisSet::all().without(given));
  const double hxz = entropy(marginalize(joint3, {x, given}));
  const double hyz = entropy(marginalize(joint3, {y, given}));
  const double hz = entropy(marginalize(joint3, {given}));
  return clamp_transmission(hxz + hyz - entropy(joint3) - hz);
}

// One window (year - 1, year) of the series. A gap has no entropy values.
struct SeriesPoint {
  int year = 0;
  bool gap = false;
  bool one_slice_empty = false;
  std::size_t n_docs_prev = 0;
  std::size_t n_docs_curr = 0;
  std::uint64_t total_pairs = 0;
  std::size_t nonzero_cells = 0;
  EntropyTerms terms;
  double t_wr = 0;
  double mu_star = 0;
};

struct SeriesOptions {
  unsigned threads = 1;  // 0 = hardware concurrency
  CountMode count_mode = CountMode::pairs;
};

inline SeriesPoint series_point(const WindowTensor& window) {
  SeriesPoint p;
  p.year = window.stats.year_curr;
  p.n_docs_prev = window.stats.docs_prev;
  p.n_docs_curr = window.stats.docs_curr;
  p.one_slice_empty = window.stats.one_slice_empty();
  p.total_pairs = window.tensor.total();
  p.nonzero_cells = window.tensor.nonzero();
  p.terms = entropy_terms(window.tensor);
  p.t_wr = p.terms.t_wr();
  p.mu_star = p.terms.mu_star();
  return p;
}

/// One point per year from the first year + 1 to the last year. Windows with
/// no qualifying documents become gap points. Output is ordered by year and
/// does not depend on the thread count.
inline std::vector<SeriesPoint> mu_star_series(std::span<const IndexedDocument> docs, std::size_t n_words,
                                               std::size_t n_refs, const SeriesOptions& opts = {}) {
  if (docs.empty()) throw DataError("corpus spans fewer than 2 years");
  const auto [lo, hi] = std::minmax_element(docs.begin(), docs.end(),
                                            [](const auto& a, const auto& b) { return a.year < b.year; });
  const int first = lo->year;
  const int last = hi->year;
  if (last - first < 1) throw DataError("corpus spans fewer than 2 years");

  std::vector<SeriesPoint> points(static_cast<std::size_t>(last - first));
  auto compute = [&](std::size_t i) {
    const int year = first + 1 + static_cast<int>(i);
    WindowStats stats{year - 1, year};
    bool qualifying = false;
    for (const auto& d : docs) {
      if (d.year == year - 1) ++stats.docs_prev;
      if (d.year == year) ++stats.docs_curr;
      if ((d.year == year - 1 || d.year == year) && !d.words.empty() && !d.refs.empty()) qualifying = true;
    }
    if (!qualifying) {
      SeriesPoint gap;
      gap.year = year;
      gap.gap = true;
      gap.n_docs_prev = stats.docs_prev;
      gap.n_docs_curr = stats.docs_curr;
      points[i] = gap;
      return;
    }
    points[i] = series_point(build_window_tensor(docs, n_words, n_refs, year - 1, year, opts.count_mode));
  };

  unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) compute(i);
    return points;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
          try {
            compute(i);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return points;
}

inline std::vector<SeriesPoint> mu_star_series(const Corpus& corpus, const VocabIndex& words, const VocabIndex& refs,
                                               const StopwordList& stop = StopwordList::defaults(),
                                               const SeriesOptions& opts = {}) {
  const auto docs = index_corpus(corpus, words, refs, stop);
  return mu_star_series(docs, words.size(), refs.size(), opts);
}

inline constexpr std::string_view kSeriesHeader =
    "year,n_docs_prev,n_docs_curr,total_pairs,nonzero_cells,h_w,h_r,h_z,h_wr,h_wz,h_rz,h_wrz,t_wr,mu_star";

namespace detail {

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

}  // namespace detail

inline void write_series_csv(std::ostream& out, std::span<const SeriesPoint> points) {
  out << kSeriesHeader << '\n';
  for (const auto& p : points) {
    out << p.year;
    if (p.gap) {
      for (int i = 0; i < 13; ++i) out << ",NA";
      out << '\n';
      continue;
    }
    out << ',' << p.n_docs_prev << ',' << p.n_docs_curr << ',' << p.total_pairs << ',' << p.nonzero_cells;
    for (double v : {p.terms.h_w, p.terms.h_r, p.terms.h_z, p.terms.h_wr, p.terms.h_wz, p.terms.h_rz,
                     p.terms.h_wrz, p.t_wr, p.mu_star})
      out << ',' << detail::fixed6(v);
    out << '\n';
  }
}

}  // namespace rfa

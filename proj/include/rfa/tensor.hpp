#pragma once

// Sparse word x reference x year-slice count arrays and their normalized
// marginals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rfa/error.hpp"
#include "rfa/ingest.hpp"
#include "rfa/vocab.hpp"

namespace rfa {

enum class Axis : std::uint8_t { word = 0, ref = 1, slice = 2 };

class AxisSet {
 public:
  constexpr AxisSet() = default;
  constexpr AxisSet(std::initializer_list<Axis> axes) {
    for (Axis a : axes) bits_ |= bit(a);
  }
  static constexpr AxisSet all() { return {Axis::word, Axis::ref, Axis::slice}; }

  constexpr bool has(Axis a) const { return (bits_ & bit(a)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int count() const { return (bits_ & 1) + ((bits_ >> 1) & 1) + ((bits_ >> 2) & 1); }
  constexpr bool contains(AxisSet other) const { return (bits_ & other.bits_) == other.bits_; }
  constexpr AxisSet without(Axis a) const {
    AxisSet s;
    s.bits_ = static_cast<std::uint8_t>(bits_ & ~bit(a));
    return s;
  }
  constexpr friend bool operator==(AxisSet, AxisSet) = default;

 private:
  std::uint8_t bits_ = 0;
  static constexpr std::uint8_t bit(Axis a) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(a)); }
};

using CellIndex = std::array<std::uint32_t, 3>;  // (word, ref, slice)

// Coordinates on axes outside `axes` are zeroed.
inline CellIndex project(const CellIndex& idx, AxisSet axes) {
  return {axes.has(Axis::word) ? idx[0] : 0u, axes.has(Axis::ref) ? idx[1] : 0u,
          axes.has(Axis::slice) ? idx[2] : 0u};
}

struct TensorDims {
  std::uint32_t words = 0;
  std::uint32_t refs = 0;
  std::uint32_t slices = 2;
  friend bool operator==(const TensorDims&, const TensorDims&) = default;
};

struct CountCell {
  CellIndex index{};
  std::uint64_t count = 0;
  friend bool operator==(const CountCell&, const CountCell&) = default;
};

// Immutable sparse count array. Cells are sorted by index and every stored
// count is positive.
class SparseTensor3 {
 public:
  SparseTensor3() = default;

  const TensorDims& dims() const { return dims_; }
  const std::vector<CountCell>& cells() const { return cells_; }
  std::uint64_t total() const { return total_; }
  std::size_t nonzero() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  std::uint64_t at(const CellIndex& idx) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), idx,
                               [](const CountCell& c, const CellIndex& i) { return c.index < i; });
    return (it != cells_.end() && it->index == idx) ? it->count : 0;
  }

  // Sum of stored counts; equals total() unless an invariant is broken.
  std::uint64_t recount() const {
    std::uint64_t n = 0;
    for (const auto& c : cells_) n += c.count;
    return n;
  }

  friend bool operator==(const SparseTensor3&, const SparseTensor3&) = default;

 private:
  friend class TensorBuilder;
  TensorDims dims_;
  std::vector<CountCell> cells_;
  std::uint64_t total_ = 0;
};

// Accumulates counts in any order; build() yields the same tensor regardless
// of insertion order.
class TensorBuilder {
 public:
  explicit TensorBuilder(TensorDims dims) : dims_(dims) {}

  void add(std::uint32_t word, std::uint32_t ref, std::uint32_t slice, std::uint64_t count = 1) {
    if (word >= dims_.words || ref >= dims_.refs || slice >= dims_.slices)
      throw std::out_of_range("tensor index out of range");
    if (count == 0) return;
    counts_[key(word, ref, slice)] += count;
  }

  void merge(const TensorBuilder& other) {
    if (!(other.dims_ == dims_)) throw std::invalid_argument("tensor dims mismatch");
    for (const auto& [k, c] : other.counts_) counts_[k] += c;
  }

  SparseTensor3 build() const {
    SparseTensor3 t;
    t.dims_ = dims_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> kv(counts_.begin(), counts_.end());
    std::sort(kv.begin(), kv.end());
    t.cells_.reserve(kv.size());
    for (const auto& [k, c] : kv) {
      t.cells_.push_back({decode(k), c});
      t.total_ += c;
    }
    return t;
  }

 private:
  TensorDims dims_;
  std::unordered_map<std::uint64_t, std::uint64_t> counts_;

  std::uint64_t key(std::uint64_t w, std::uint64_t r, std::uint64_t z) const {
    return (w * dims_.refs + r) * dims_.slices + z;
  }
  CellIndex decode(std::uint64_t k) const {
    const auto z = static_cast<std::uint32_t>(k % dims_.slices);
    k /= dims_.slices;
    const auto r = static_cast<std::uint32_t>(k % dims_.refs);
    return {static_cast<std::uint32_t>(k / dims_.refs), r, z};
  }
};

// Contribution of one document: every (retained stem, retained reference)
// pair once. Both modes coincide while terms are counted by presence.
enum class CountMode { pairs, binary };

struct WindowStats {
  int year_prev = 0;
  int year_curr = 0;
  std::size_t docs_prev = 0;        // all documents in the year
  std::size_t docs_curr = 0;
  std::size_t qualifying_prev = 0;  // documents with retained words and references
  std::size_t qualifying_curr = 0;
  bool one_slice_empty() const { return (qualifying_prev == 0) != (qualifying_curr == 0); }
};

struct WindowTensor {
  SparseTensor3 tensor;
  WindowStats stats;
};

/// Count (word, ref, slice) incidences for documents whose year is listed in
/// `slice_years`; slice z holds year slice_years[z].
inline SparseTensor3 build_slice_tensor(std::span<const IndexedDocument> docs, TensorDims dims,
                                        std::span<const int> slice_years,
                                        [[maybe_unused]] CountMode mode = CountMode::pairs) {
  if (slice_years.size() != dims.slices) throw std::invalid_argument("slice_years must have one entry per slice");
  TensorBuilder builder(dims);
  for (const auto& doc : docs) {
    auto it = std::find(slice_years.begin(), slice_years.end(), doc.year);
    if (it == slice_years.end()) continue;
    const auto z = static_cast<std::uint32_t>(it - slice_years.begin());
    for (TermId w : doc.words)
      for (TermId r : doc.refs) builder.add(w, r, z);
  }
  return builder.build();
}

/// Tensor of the two-year window (year_curr - 1, year_curr).
inline WindowTensor build_window_tensor(std::span<const IndexedDocument> docs, std::size_t n_words,
                                        std::size_t n_refs, int year_prev, int year_curr,
                                        CountMode mode = CountMode::pairs) {
  if (year_prev != year_curr - 1) throw std::invalid_argument("window years must be consecutive");
  WindowStats stats{year_prev, year_curr};
  for (const auto& doc : docs) {
    if (doc.year != year_prev && doc.year != year_curr) continue;
    const bool qualifies = !doc.words.empty() && !doc.refs.empty();
    if (doc.year == year_prev) {
      ++stats.docs_prev;
      stats.qualifying_prev += qualifies;
    } else {
      ++stats.docs_curr;
      stats.qualifying_curr += qualifies;
    }
  }
  if (stats.qualifying_prev == 0 && stats.qualifying_curr == 0)
    throw DataError("empty window " + std::to_string(year_prev) + "-" + std::to_string(year_curr));

  const std::array<int, 2> years{year_prev, year_curr};
  TensorDims dims{static_cast<std::uint32_t>(n_words), static_cast<std::uint32_t>(n_refs), 2};
  return {build_slice_tensor(docs, dims, years, mode), stats};
}

inline WindowTensor build_window_tensor(const Corpus& corpus, const VocabIndex& words, const VocabIndex& refs,
                                        int year_prev, int year_curr,
                                        const StopwordList& stop = StopwordList::defaults(),
                                        CountMode mode = CountMode::pairs) {
  const auto docs = index_corpus(corpus, words, refs, stop);
  return build_window_tensor(docs, words.size(), refs.size(), year_prev, year_curr, mode);
}

namespace detail {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

struct ProbCell {
  CellIndex index{};
  double p = 0.0;
};

// Normalized probabilities over a subset of the three axes. Cells are sorted,
// strictly positive and sum to one.
class JointDistribution {
 public:
  JointDistribution() = default;

  /// Validates and sorts; zero-probability cells are dropped, duplicates merged.
  static JointDistribution from_cells(AxisSet axes, std::vector<ProbCell> cells) {
    if (axes.empty()) throw std::invalid_argument("joint distribution needs at least one axis");
    std::vector<ProbCell> kept;
    for (auto& c : cells) {
      if (c.p < 0.0 || !std::isfinite(c.p)) throw std::invalid_argument("probabilities must be finite and >= 0");
      if (c.p > 0.0) kept.push_back({project(c.index, axes), c.p});
    }
    JointDistribution d;
    d.axes_ = axes;
    d.cells_ = merge_sorted(std::move(kept));
    detail::CompensatedSum s;
    for (const auto& c : d.cells_) s.add(c.p);
    if (d.cells_.empty() || std::fabs(s.value() - 1.0) > 1e-9)
      throw std::invalid_argument("probabilities must sum to 1");
    return d;
  }

  AxisSet axes() const { return axes_; }
  const std::vector<ProbCell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

 private:
  friend JointDistribution marginalize(const SparseTensor3&, AxisSet);
  friend JointDistribution marginalize(const JointDistribution&, AxisSet);

  AxisSet axes_;
  std::vector<ProbCell> cells_;

  static std::vector<ProbCell> merge_sorted(std::vector<ProbCell> cells) {
    std::stable_sort(cells.begin(), cells.end(),
                     [](const ProbCell& a, const ProbCell& b) { return a.index < b.index; });
    std::vector<ProbCell> out;
    for (std::size_t i = 0; i < cells.size();) {
      detail::CompensatedSum s;
      std::size_t j = i;
      for (; j < cells.size() && cells[j].index == cells[i].index; ++j) s.add(cells[j].p);
      out.push_back({cells[i].index, s.value()});
      i = j;
    }
    return out;
  }
};

/// Sum counts over the dropped axes and divide by the tensor total. Counts are
/// accumulated as integers; each cell is divided once.
inline JointDistribution marginalize(const SparseTensor3& t, AxisSet axes) {
  if (axes.empty()) throw std::invalid_argument("marginalize: empty axis set");
  if (t.empty()) throw std::invalid_argument("marginalize: empty tensor");

  std::vector<CountCell> projected;
  if (axes == AxisSet::all()) {
    projected = t.cells();
  } else {
    projected.reserve(t.nonzero());
    for (const auto& c : t.cells()) projected.push_back({project(c.index, axes), c.count});
    std::sort(projected.begin(), projected.end(),
              [](const CountCell& a, const CountCell& b) { return a.index < b.index; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < projected.size(); ++i) {
      if (out > 0 && projected[out - 1].index == projected[i].index)
        projected[out - 1].count += projected[i].count;
      else
        projected[out++] = projected[i];
    }
    projected.resize(out);
  }

  JointDistribution d;
  d.axes_ = axes;
  d.cells_.reserve(projected.size());
  const auto total = static_cast<double>(t.total());
  for (const auto& c : projected) d.cells_.push_back({c.index, static_cast<double>(c.count) / total});
  return d;
}

/// Marginal of a joint onto a subset of its own axes.
inline JointDistribution marginalize(const JointDistribution& joint, AxisSet axes) {
  if (axes.empty()) throw std::invalid_argument("marginalize: empty axis set");
  if (!joint.axes().contains(axes)) throw std::invalid_argument("marginalize: axes not present in joint");
  if (joint.empty()) throw std::invalid_argument("marginalize: empty distribution");
  std::vector<ProbCell> projected;
  projected.reserve(joint.size());
  for (const auto& c : joint.cells()) projected.push_back({project(c.index, axes), c.p});
  JointDistribution d;
  d.axes_ = axes;
  d.cells_ = JointDistribution::merge_sorted(std::move(projected));
  return d;
}

/// Header comment with dims and total, then `w_id\tr_id\tz\tcount` rows.
inline void write_tensor_tsv(std::ostream& out, const SparseTensor3& t) {
  out << "# words=" << t.dims().words << "\trefs=" << t.dims().refs << "\tslices=" << t.dims().slices
      << "\ttotal=" << t.total() << '\n';
  out << "w_id\tr_id\tz\tcount\n";
  for (const auto& c : t.cells())
    out << c.index[0] << '\t' << c.index[1] << '\t' << c.index[2] << '\t' << c.count << '\n';
}

}  // namespace rfa

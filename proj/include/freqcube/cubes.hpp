#pragma once

// Frequency cubes F_k^n(q; lambda_0..lambda_{m-1}): arrays over symbols [m] in
// which every k-face holds exactly lambda_i cells with symbol i.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "freqcube/bitrades.hpp"
#include "freqcube/core.hpp"

namespace freqcube {

struct FreqParams {
  int q = 2;
  int n = 1;
  int k = 1;
  std::vector<int> lambdas;

  FreqParams() = default;
  FreqParams(int q_, int n_, int k_, std::vector<int> l) : q(q_), n(n_), k(k_), lambdas(std::move(l)) { validate(); }

  int m() const { return static_cast<int>(lambdas.size()); }
  GridSig sig() const { return GridSig(q, n); }

  void validate() const {
    const GridSig s(q, n);
    detail::require(k >= 1 && k <= n, "face dimension k must lie in [1, n]");
    detail::require(lambdas.size() >= 2, "need at least two symbols (m >= 2)");
    detail::require(lambdas.size() <= 127, "at most 127 symbols supported");
    std::uint64_t total = 0;
    for (int l : lambdas) {
      detail::require(l >= 0, "lambdas must be nonnegative");
      total += static_cast<std::uint64_t>(l);
    }
    detail::require(total == ipow(static_cast<std::uint64_t>(q), static_cast<unsigned>(k)),
                    "lambdas must sum to q^k");
  }

  std::string to_string() const {
    std::string s = "F_" + std::to_string(k) + "^" + std::to_string(n) + "(" + std::to_string(q) + ";";
    for (std::size_t i = 0; i < lambdas.size(); ++i) s += (i ? "," : "") + std::to_string(lambdas[i]);
    return s + ")";
  }
};

inline bool is_frequency_cube(const CubeArray& f, const FreqParams& p) {
  p.validate();
  detail::require(f.sig() == p.sig(), "array grid does not match the parameters");
  for (Value v : f.values()) detail::require(v >= 0 && v < p.m(), "array value outside [0, m)");
  const FaceIndex faces(f.sig(), p.k);
  std::vector<int> hist(static_cast<std::size_t>(p.m()));
  for (std::size_t fi = 0; fi < faces.face_count(); ++fi) {
    std::fill(hist.begin(), hist.end(), 0);
    for (Index c : faces.cells_of(fi)) ++hist[static_cast<std::size_t>(f[c])];
    if (hist != p.lambdas) return false;
  }
  return true;
}

/// g_i = indicator of symbol i, for i = 0..m-1; f = sum_i i * g_i.
inline std::vector<CubeArray> indicator_decomposition(const CubeArray& f, const FreqParams& p) {
  if (!is_frequency_cube(f, p)) throw InvalidArgument("array is not a frequency cube with these parameters");
  std::vector<CubeArray> out;
  for (int i = 0; i < p.m(); ++i) {
    CubeArray g(f.sig());
    for (Index c = 0; c < f.size(); ++c) g[c] = f[c] == i ? 1 : 0;
    out.push_back(std::move(g));
  }
  return out;
}

/// Values known on a subset of cells.
struct PartialCube {
  GridSig sig;
  int m = 2;
  std::map<Index, Value> assignments;

  PointSet domain() const {
    std::vector<Index> idx;
    for (const auto& [i, v] : assignments) idx.push_back(i);
    return PointSet(sig, std::move(idx));
  }
};

inline PartialCube restrict_to(const CubeArray& f, const PointSet& t, int m) {
  detail::require(f.sig() == t.sig(), "array and point set live on different grids");
  PartialCube pc{f.sig(), m, {}};
  for (Index i : t.indices()) pc.assignments[i] = f[i];
  return pc;
}

// ---------------------------------------------------------------------------
// Backtracking over cube completions

struct CubeSearchOptions {
  std::uint64_t node_cap = default_node_cap();
  std::uint64_t max_results = std::numeric_limits<std::uint64_t>::max();
};

namespace detail {

// Row-major backtracking with per-face symbol histograms. A face whose remaining
// deficit sits on a single symbol forces all its open cells to that symbol.
class HistogramSearch {
 public:
  static constexpr std::int16_t kOpen = -1;

  HistogramSearch(const FaceIndex& faces, std::vector<int> lambdas, std::uint64_t node_cap)
      : faces_(faces),
        lambdas_(std::move(lambdas)),
        m_(static_cast<int>(lambdas_.size())),
        node_cap_(node_cap),
        val_(faces.sig().size(), kOpen),
        count_(faces.face_count() * lambdas_.size(), 0),
        open_(faces.face_count(), static_cast<int>(faces.face_size())) {}

  bool preassign(Index c, Value v) {
    if (v < 0 || v >= m_) return false;
    if (val_[c] != kOpen) return val_[c] == v;
    return assign(c, static_cast<std::int16_t>(v));
  }

  SearchStatus run(const std::function<bool(const std::vector<std::int16_t>&)>& on_solution,
                   std::mt19937_64* rng = nullptr) {
    on_solution_ = &on_solution;
    rng_ = rng;
    stopped_ = limited_ = false;
    descend(0);
    if (limited_) return SearchStatus::resource_limited;
    return stopped_ ? SearchStatus::witness : SearchStatus::exhausted;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  int& cnt(std::uint32_t f, int s) { return count_[static_cast<std::size_t>(f) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(s)]; }

  bool set(Index c, std::int16_t s) {
    val_[c] = s;
    trail_.push_back(c);
    for (std::uint32_t f : faces_.faces_of(c)) {
      ++cnt(f, s);
      --open_[f];
    }
    for (std::uint32_t f : faces_.faces_of(c)) {
      if (cnt(f, s) > lambdas_[static_cast<std::size_t>(s)]) return false;
      if (open_[f] == 0) continue;
      int needy = -1;
      int needy_count = 0;
      for (int i = 0; i < m_; ++i)
        if (cnt(f, i) < lambdas_[static_cast<std::size_t>(i)]) {
          needy = i;
          ++needy_count;
        }
      if (needy_count == 1)
        for (Index x : faces_.cells_of(f))
          if (val_[x] == kOpen) pending_.emplace_back(x, static_cast<std::int16_t>(needy));
    }
    return true;
  }

  bool assign(Index c, std::int16_t s) {
    pending_.clear();
    if (!set(c, s)) return false;
    while (!pending_.empty()) {
      const auto [x, w] = pending_.back();
      pending_.pop_back();
      if (val_[x] == kOpen) {
        if (!set(x, w)) return false;
      } else if (val_[x] != w) {
        return false;
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const Index c = trail_.back();
      trail_.pop_back();
      for (std::uint32_t f : faces_.faces_of(c)) {
        --cnt(f, val_[c]);
        ++open_[f];
      }
      val_[c] = kOpen;
    }
  }

  bool admissible(Index c, int s) {
    for (std::uint32_t f : faces_.faces_of(c))
      if (cnt(f, s) >= lambdas_[static_cast<std::size_t>(s)]) return false;
    return true;
  }

  void descend(Index cursor) {
    while (cursor < val_.size() && val_[cursor] != kOpen) ++cursor;
    if (cursor == val_.size()) {
      if (!(*on_solution_)(val_)) stopped_ = true;
      return;
    }
    std::vector<std::int16_t> order(static_cast<std::size_t>(m_));
    std::iota(order.begin(), order.end(), std::int16_t{0});
    if (rng_) std::shuffle(order.begin(), order.end(), *rng_);
    for (std::int16_t s : order) {
      if (stopped_ || limited_) return;
      if (!admissible(cursor, s)) continue;
      if (++nodes_ > node_cap_) {
        limited_ = true;
        return;
      }
      const std::size_t mark = trail_.size();
      if (assign(cursor, s)) descend(cursor + 1);
      undo(mark);
    }
  }

  const FaceIndex& faces_;
  std::vector<int> lambdas_;
  int m_;
  std::uint64_t node_cap_;
  std::vector<std::int16_t> val_;
  std::vector<int> count_;
  std::vector<int> open_;
  std::vector<Index> trail_;
  std::vector<std::pair<Index, std::int16_t>> pending_;
  std::uint64_t nodes_ = 0;
  bool stopped_ = false;
  bool limited_ = false;
  std::mt19937_64* rng_ = nullptr;
  const std::function<bool(const std::vector<std::int16_t>&)>* on_solution_ = nullptr;
};

inline CubeArray to_cube(const GridSig& sig, const std::vector<std::int16_t>& v) {
  CubeArray a(sig);
  for (Index i = 0; i < v.size(); ++i) a[i] = v[i];
  return a;
}

}  // namespace detail

/// Visits every member of F_k^n(q; lambda) in row-major lexicographic order.
/// fn returns false to stop early. Returns the node count.
inline std::uint64_t for_each_cube(const FreqParams& p, const std::function<bool(const CubeArray&)>& fn,
                                   const CubeSearchOptions& opts = {}) {
  p.validate();
  const GridSig sig = p.sig();
  const FaceIndex faces(sig, p.k);
  detail::HistogramSearch search(faces, p.lambdas, opts.node_cap);
  std::uint64_t emitted = 0;
  const auto status = search.run([&](const std::vector<std::int16_t>& v) {
    ++emitted;
    return fn(detail::to_cube(sig, v)) && emitted < opts.max_results;
  });
  if (status == SearchStatus::resource_limited) throw ResourceLimit("cube enumeration exceeded the node cap");
  return search.nodes();
}

inline std::vector<CubeArray> enumerate_cubes(const FreqParams& p, const CubeSearchOptions& opts = {}) {
  std::vector<CubeArray> out;
  for_each_cube(p, [&](const CubeArray& c) {
    out.push_back(c);
    return true;
  }, opts);
  return out;
}

inline std::uint64_t count_cubes(const FreqParams& p, const CubeSearchOptions& opts = {}) {
  std::uint64_t n = 0;
  for_each_cube(p, [&](const CubeArray&) {
    ++n;
    return true;
  }, opts);
  return n;
}

/// One member drawn by backtracking with a shuffled symbol order at every node.
/// Not uniform over the family; deterministic for a given generator state.
inline std::optional<CubeArray> sample_cube(const FreqParams& p, std::mt19937_64& rng,
                                            const CubeSearchOptions& opts = {}) {
  p.validate();
  const GridSig sig = p.sig();
  const FaceIndex faces(sig, p.k);
  detail::HistogramSearch search(faces, p.lambdas, opts.node_cap);
  std::optional<CubeArray> out;
  const auto status = search.run(
      [&](const std::vector<std::int16_t>& v) {
        out = detail::to_cube(sig, v);
        return false;
      },
      &rng);
  if (status == SearchStatus::resource_limited) throw ResourceLimit("cube sampling exceeded the node cap");
  return out;
}

// ---------------------------------------------------------------------------
// Reconstruction

/// Completes a cube from its values on the points of weight > n-k, processing the
/// remaining points by decreasing weight through the face on their first k zero
/// positions. Integer face sums; any inconsistency throws Inconsistent.
inline CubeArray reconstruct_baseline(const PartialCube& partial, const FreqParams& p) {
  p.validate();
  const GridSig& sig = partial.sig;
  detail::require(sig == p.sig(), "partial cube grid does not match the parameters");
  const int n = p.n;
  const int k = p.k;
  for (const auto& [i, v] : partial.assignments) {
    detail::require(sig.weight(i) > n - k, "baseline reconstruction expects data only on points of weight > n-k");
    detail::require(v >= 0 && v < p.m(), "assigned value outside [0, m)");
  }
  detail::require(partial.assignments.size() == sigma(p.q, n, n - k),
                  "baseline reconstruction expects every point of weight > n-k");

  CubeArray f(sig, -1);
  for (const auto& [i, v] : partial.assignments) f[i] = v;

  std::vector<Index> order;
  for (Index i = 0; i < sig.size(); ++i)
    if (sig.weight(i) <= n - k) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return sig.weight(a) > sig.weight(b); });

  std::vector<int> g(static_cast<std::size_t>(p.m()));
  for (Index x : order) {
    Face face;
    face.anchor = sig.point_at(x);
    for (int pos = 0; pos < n && face.dimension() < k; ++pos)
      if (face.anchor[pos] == 0) face.free.push_back(pos);
    g.assign(p.lambdas.begin(), p.lambdas.end());
    for (Index y : face.cells(sig)) {
      if (y == x) continue;
      if (f[y] < 0) throw std::logic_error("reconstruction order visited a face with an unknown cell");
      --g[static_cast<std::size_t>(f[y])];
    }
    int symbol = -1;
    for (int i = 0; i < p.m(); ++i) {
      const int gi = g[static_cast<std::size_t>(i)];
      if (gi != 0 && gi != 1)
        throw Inconsistent("face sums leave indicator value " + std::to_string(gi) + " for symbol " + std::to_string(i));
      if (gi == 1) {
        if (symbol >= 0) throw Inconsistent("face sums admit more than one symbol at a cell");
        symbol = i;
      }
    }
    if (symbol < 0) throw Inconsistent("face sums admit no symbol at a cell");
    f[x] = symbol;
  }
  if (!is_frequency_cube(f, p)) throw Inconsistent("completed array violates a face histogram");
  return f;
}

struct CspReconstruction {
  CubeArray cube;
  bool unique = true;
  std::uint64_t nodes = 0;
};

/// Generic completion of data given on an arbitrary point set; searches on past the
/// first completion to decide uniqueness.
inline CspReconstruction reconstruct_csp(const PartialCube& partial, const PointSet& t, const FreqParams& p,
                                         const CubeSearchOptions& opts = {}) {
  p.validate();
  detail::require(partial.sig == p.sig() && t.sig() == p.sig(), "grids do not match the parameters");
  detail::require(partial.domain() == t, "partial data must be assigned exactly on the testing set");
  const FaceIndex faces(p.sig(), p.k);
  detail::HistogramSearch search(faces, p.lambdas, opts.node_cap);
  for (const auto& [i, v] : partial.assignments)
    if (!search.preassign(i, v)) throw Inconsistent("partial data already violates a face histogram");
  std::optional<CubeArray> first;
  int found = 0;
  const auto status = search.run([&](const std::vector<std::int16_t>& v) {
    if (!first) first = detail::to_cube(p.sig(), v);
    return ++found < 2;
  });
  if (status == SearchStatus::resource_limited) throw ResourceLimit("reconstruction search exceeded the node cap");
  if (!first) throw Inconsistent("no cube with these parameters matches the partial data");
  return CspReconstruction{*first, found == 1, search.nodes()};
}

// ---------------------------------------------------------------------------
// The space L_k(q^n): arrays with zero sum over every k-face

inline constexpr Index kMaxRankCells = 4096;

using Rational = boost::multiprecision::cpp_rational;

/// Exact rank over the rationals (Gaussian elimination on a dense copy).
inline int rational_rank(const std::vector<std::vector<int>>& rows, std::size_t cols) {
  std::vector<std::vector<Rational>> a;
  a.reserve(rows.size());
  for (const auto& r : rows) {
    detail::require(r.size() == cols, "ragged matrix");
    a.emplace_back(r.begin(), r.end());
  }
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t piv = row;
    while (piv < a.size() && a[piv][col] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[row]);
    for (std::size_t r = row + 1; r < a.size(); ++r) {
      if (a[r][col] == 0) continue;
      const Rational factor = a[r][col] / a[row][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= factor * a[row][c];
    }
    ++row;
    ++rank;
  }
  return rank;
}

/// f_a for every a with wt(a) > n-k: (-1)^wt(x) on G_a = {x : x_i in {0, a_i}}, zero elsewhere.
/// Each element is checked to sum to zero on every k-face.
inline std::vector<CubeArray> lk_basis(int q, int n, int k) {
  const GridSig sig(q, n);
  detail::require(k >= 1 && k <= n, "face dimension k must lie in [1, n]");
  detail::require(sig.size() <= kMaxRankCells, "L_k computations limited to q^n <= 4096");
  const FaceIndex faces(sig, k);
  std::vector<CubeArray> basis;
  for (Index a = 0; a < sig.size(); ++a) {
    if (sig.weight(a) <= n - k) continue;
    CubeArray f(sig);
    for (Index x = 0; x < sig.size(); ++x) {
      bool in = true;
      for (int i = 0; i < n && in; ++i) {
        const Symbol xi = sig.digit(x, i);
        in = xi == 0 || xi == sig.digit(a, i);
      }
      if (in) f[x] = (sig.weight(x) % 2 == 0) ? 1 : -1;
    }
    for (std::size_t fi = 0; fi < faces.face_count(); ++fi) {
      int sum = 0;
      for (Index c : faces.cells_of(fi)) sum += f[c];
      if (sum != 0) throw std::logic_error("basis function has nonzero sum on a face");
    }
    basis.push_back(std::move(f));
  }
  return basis;
}

/// Dimension of L_k(q^n) as the rational rank of lk_basis.
inline int lk_dimension(int q, int n, int k) {
  const auto basis = lk_basis(q, n, k);
  std::vector<std::vector<int>> rows;
  for (const auto& f : basis) rows.push_back(f.values());
  return rational_rank(rows, GridSig(q, n).size());
}

/// Null-space dimension of the face-sum constraint system (one row per k-face), over Q.
inline int face_system_nullity(int q, int n, int k) {
  const GridSig sig(q, n);
  detail::require(k >= 1 && k <= n, "face dimension k must lie in [1, n]");
  detail::require(sig.size() <= kMaxRankCells, "L_k computations limited to q^n <= 4096");
  const FaceIndex faces(sig, k);
  std::vector<std::vector<int>> rows;
  for (std::size_t fi = 0; fi < faces.face_count(); ++fi) {
    std::vector<int> r(sig.size(), 0);
    for (Index c : faces.cells_of(fi)) r[c] = 1;
    rows.push_back(std::move(r));
  }
  return static_cast<int>(sig.size()) - rational_rank(rows, sig.size());
}

}  // namespace freqcube

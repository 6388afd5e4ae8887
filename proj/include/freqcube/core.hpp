#pragma once

// Points of [q]^n, faces, dense arrays, point sets, weight/ball counts and the
// symmetry group Aut([q]^n).
//
// Every array is stored in row-major order: the index of x = (x_1, ..., x_n)
// is sum_i x_i * q^(n-i), so x_1 is the most significant digit. Positions are
// 0-based in the API.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "freqcube/errors.hpp"

namespace freqcube {

using Symbol = std::uint8_t;
using Index = std::size_t;
using Value = int;

inline constexpr int kMaxAlphabet = 255;
// Largest grid we are willing to materialize densely.
inline constexpr Index kMaxCells = Index{1} << 28;

// ---------------------------------------------------------------------------
// Exact integer helpers

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw InvalidArgument("integer overflow");
  return a * b;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a) throw InvalidArgument("integer overflow");
  return a + b;
}

}  // namespace detail

inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r = detail::checked_mul(r, base);
  return r;
}

/// Binomial coefficient C(n, k); zero when k < 0 or k > n.
inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  // Multiply-then-divide keeps every intermediate an exact binomial.
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) throw InvalidArgument("binomial overflow");
  }
  return static_cast<std::uint64_t>(r);
}

// ---------------------------------------------------------------------------
// Points and grids

struct Point {
  std::vector<Symbol> coords;

  Point() = default;
  explicit Point(std::vector<Symbol> c) : coords(std::move(c)) {}
  Point(std::initializer_list<int> c) {
    coords.reserve(c.size());
    for (int v : c) {
      detail::require(v >= 0 && v <= kMaxAlphabet, "point coordinate out of range");
      coords.push_back(static_cast<Symbol>(v));
    }
  }

  int size() const { return static_cast<int>(coords.size()); }
  Symbol operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }

  auto operator<=>(const Point&) const = default;
  bool operator==(const Point&) const = default;
};

/// Number of nonzero coordinates.
inline int weight(const Point& x) {
  return static_cast<int>(std::count_if(x.coords.begin(), x.coords.end(), [](Symbol s) { return s != 0; }));
}

class GridSig {
 public:
  GridSig(int q, int n) : q_(q), n_(n) {
    detail::require(q >= 2, "alphabet size q must be >= 2");
    detail::require(q <= kMaxAlphabet, "alphabet size q must be <= 255");
    detail::require(n >= 1, "dimension n must be >= 1");
    strides_.assign(static_cast<std::size_t>(n), 1);
    Index s = 1;
    for (int i = n - 1; i >= 0; --i) {
      strides_[static_cast<std::size_t>(i)] = s;
      detail::require(s <= kMaxCells / static_cast<Index>(q), "q^n exceeds the supported grid size");
      s *= static_cast<Index>(q);
    }
    size_ = s;
  }

  int q() const { return q_; }
  int n() const { return n_; }
  Index size() const { return size_; }
  Index stride(int pos) const { return strides_[static_cast<std::size_t>(pos)]; }

  Symbol digit(Index idx, int pos) const { return static_cast<Symbol>((idx / stride(pos)) % static_cast<Index>(q_)); }

  int weight(Index idx) const {
    int w = 0;
    for (int i = n_ - 1; i >= 0; --i, idx /= static_cast<Index>(q_))
      if (idx % static_cast<Index>(q_) != 0) ++w;
    return w;
  }

  bool valid(const Point& x) const {
    return x.size() == n_ && std::all_of(x.coords.begin(), x.coords.end(), [&](Symbol s) { return s < q_; });
  }

  Index index_of(const Point& x) const {
    detail::require(valid(x), "point is not in [q]^n");
    Index idx = 0;
    for (Symbol s : x.coords) idx = idx * static_cast<Index>(q_) + s;
    return idx;
  }

  Point point_at(Index idx) const {
    detail::require(idx < size_, "index out of range");
    std::vector<Symbol> c(static_cast<std::size_t>(n_));
    for (int i = n_ - 1; i >= 0; --i) {
      c[static_cast<std::size_t>(i)] = static_cast<Symbol>(idx % static_cast<Index>(q_));
      idx /= static_cast<Index>(q_);
    }
    return Point(std::move(c));
  }

  bool operator==(const GridSig& o) const { return q_ == o.q_ && n_ == o.n_; }

 private:
  int q_;
  int n_;
  Index size_ = 1;
  std::vector<Index> strides_;
};

// ---------------------------------------------------------------------------
// Weight-ball counts

/// |S(q,n,r)|: points of [q]^n with at most r nonzero coordinates; r = -1 gives 0.
inline std::uint64_t ball_count(int q, int n, int r) {
  detail::require(q >= 2 && n >= 1, "ball_count needs q >= 2 and n >= 1");
  detail::require(r >= -1 && r <= n, "ball_count radius must lie in [-1, n]");
  std::uint64_t total = 0;
  for (int i = 0; i <= r; ++i)
    total = detail::checked_add(total, detail::checked_mul(binomial(n, i), ipow(static_cast<std::uint64_t>(q - 1), static_cast<unsigned>(i))));
  return total;
}

/// sigma(q,n,r) = q^n - |S(q,n,r)|.
inline std::uint64_t sigma(int q, int n, int r) {
  const std::uint64_t ball = ball_count(q, n, r);
  return ipow(static_cast<std::uint64_t>(q), static_cast<unsigned>(n)) - ball;
}

// ---------------------------------------------------------------------------
// Faces

/// A k-face: the q^k points agreeing with `anchor` outside the free positions.
/// The anchor carries zeros in the free positions.
struct Face {
  std::vector<int> free;
  Point anchor;

  int dimension() const { return static_cast<int>(free.size()); }

  bool is_free(int pos) const { return std::find(free.begin(), free.end(), pos) != free.end(); }

  std::vector<Index> cells(const GridSig& sig) const {
    Index base = sig.index_of(anchor);
    std::vector<Index> out{base};
    for (int pos : free) {
      const std::size_t cur = out.size();
      for (int s = 1; s < sig.q(); ++s)
        for (std::size_t j = 0; j < cur; ++j) out.push_back(out[j] + static_cast<Index>(s) * sig.stride(pos));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool operator==(const Face&) const = default;
};

namespace detail {

// k-subsets of {0..n-1} in lex order. A callback returning false stops the walk.
template <typename Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> c(static_cast<std::size_t>(k));
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    if constexpr (std::is_same_v<std::invoke_result_t<Fn&, const std::vector<int>&>, bool>) {
      if (!fn(std::as_const(c))) return;
    } else {
      fn(std::as_const(c));
    }
    int i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace detail

/// All C(n,k) q^(n-k) faces of dimension k: free-position subsets in lexicographic
/// order, and within each subset the fixed coordinates in row-major order.
inline std::vector<Face> enumerate_faces(const GridSig& sig, int k) {
  detail::require(k >= 1 && k <= sig.n(), "face dimension must lie in [1, n]");
  std::vector<Face> faces;
  const int n = sig.n();
  const int q = sig.q();
  detail::for_each_combination(n, k, [&](const std::vector<int>& free) {
    std::vector<int> fixed;
    for (int p = 0; p < n; ++p)
      if (std::find(free.begin(), free.end(), p) == free.end()) fixed.push_back(p);
    const auto count = ipow(static_cast<std::uint64_t>(q), static_cast<unsigned>(fixed.size()));
    for (std::uint64_t c = 0; c < count; ++c) {
      std::vector<Symbol> coords(static_cast<std::size_t>(n), 0);
      std::uint64_t rest = c;
      for (auto it = fixed.rbegin(); it != fixed.rend(); ++it) {
        coords[static_cast<std::size_t>(*it)] = static_cast<Symbol>(rest % static_cast<std::uint64_t>(q));
        rest /= static_cast<std::uint64_t>(q);
      }
      faces.push_back(Face{free, Point(std::move(coords))});
    }
  });
  return faces;
}

/// Flattened incidence between cells and k-faces, shared by the search engines.
class FaceIndex {
 public:
  FaceIndex(const GridSig& sig, int k) : sig_(sig), k_(k) {
    const auto faces = enumerate_faces(sig, k);
    face_size_ = static_cast<std::size_t>(ipow(static_cast<std::uint64_t>(sig.q()), static_cast<unsigned>(k)));
    face_cells_.reserve(faces.size() * face_size_);
    std::vector<std::size_t> degree(sig.size(), 0);
    for (const auto& f : faces) {
      for (Index c : f.cells(sig)) {
        face_cells_.push_back(c);
        ++degree[c];
      }
    }
    cell_offsets_.assign(sig.size() + 1, 0);
    for (Index c = 0; c < sig.size(); ++c) cell_offsets_[c + 1] = cell_offsets_[c] + degree[c];
    cell_faces_.resize(cell_offsets_.back());
    std::vector<std::size_t> fill(cell_offsets_.begin(), cell_offsets_.end() - 1);
    for (std::size_t f = 0; f < faces.size(); ++f)
      for (std::size_t j = 0; j < face_size_; ++j) {
        const Index c = face_cells_[f * face_size_ + j];
        cell_faces_[fill[c]++] = static_cast<std::uint32_t>(f);
      }
  }

  const GridSig& sig() const { return sig_; }
  int k() const { return k_; }
  std::size_t face_count() const { return face_cells_.size() / face_size_; }
  std::size_t face_size() const { return face_size_; }

  std::span<const Index> cells_of(std::size_t face) const {
    return {face_cells_.data() + face * face_size_, face_size_};
  }
  std::span<const std::uint32_t> faces_of(Index cell) const {
    return {cell_faces_.data() + cell_offsets_[cell], cell_offsets_[cell + 1] - cell_offsets_[cell]};
  }

 private:
  GridSig sig_;
  int k_;
  std::size_t face_size_ = 1;
  std::vector<Index> face_cells_;
  std::vector<std::size_t> cell_offsets_;
  std::vector<std::uint32_t> cell_faces_;
};

// ---------------------------------------------------------------------------
// Dense arrays

class CubeArray {
 public:
  explicit CubeArray(const GridSig& sig, Value fill = 0) : sig_(sig), values_(sig.size(), fill) {}
  CubeArray(const GridSig& sig, std::vector<Value> values) : sig_(sig), values_(std::move(values)) {
    detail::require(values_.size() == sig_.size(), "array length must equal q^n");
  }

  /// Tabulates fn over all points.
  static CubeArray from_function(const GridSig& sig, const std::function<Value(const Point&)>& fn) {
    CubeArray a(sig);
    for (Index i = 0; i < sig.size(); ++i) a.values_[i] = fn(sig.point_at(i));
    return a;
  }

  const GridSig& sig() const { return sig_; }
  Index size() const { return values_.size(); }
  const std::vector<Value>& values() const { return values_; }
  std::vector<Value>& values() { return values_; }

  Value operator[](Index i) const { return values_[i]; }
  Value& operator[](Index i) { return values_[i]; }
  Value at(const Point& x) const { return values_[sig_.index_of(x)]; }

  Value min_value() const { return *std::min_element(values_.begin(), values_.end()); }
  Value max_value() const { return *std::max_element(values_.begin(), values_.end()); }
  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](Value v) { return v == 0; });
  }

  bool operator==(const CubeArray& o) const { return sig_ == o.sig_ && values_ == o.values_; }

 private:
  GridSig sig_;
  std::vector<Value> values_;
};

/// The retract f_{pos,c}: fix coordinate `pos` to c, giving an (n-1)-dimensional array.
inline CubeArray retract(const CubeArray& f, int pos, int c) {
  const GridSig& sig = f.sig();
  detail::require(sig.n() >= 2, "cannot retract a one-dimensional array");
  detail::require(pos >= 0 && pos < sig.n(), "retract position out of range");
  detail::require(c >= 0 && c < sig.q(), "retract symbol out of range");
  GridSig out_sig(sig.q(), sig.n() - 1);
  CubeArray out(out_sig);
  const Index hi_stride = sig.stride(pos) * static_cast<Index>(sig.q());
  const Index lo_stride = sig.stride(pos);
  for (Index j = 0; j < out_sig.size(); ++j) {
    const Index hi = j / lo_stride;
    const Index lo = j % lo_stride;
    out[j] = f[hi * hi_stride + static_cast<Index>(c) * lo_stride + lo];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Point sets

class PointSet {
 public:
  explicit PointSet(const GridSig& sig) : sig_(sig) {}

  PointSet(const GridSig& sig, std::vector<Index> indices) : sig_(sig), idx_(std::move(indices)) {
    for (Index i : idx_) detail::require(i < sig_.size(), "point index out of range");
    std::sort(idx_.begin(), idx_.end());
    idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
  }

  static PointSet from_points(const GridSig& sig, const std::vector<Point>& pts) {
    std::vector<Index> idx;
    idx.reserve(pts.size());
    for (const auto& p : pts) idx.push_back(sig.index_of(p));
    return PointSet(sig, std::move(idx));
  }

  static PointSet full(const GridSig& sig) {
    std::vector<Index> idx(sig.size());
    std::iota(idx.begin(), idx.end(), Index{0});
    return PointSet(sig, std::move(idx));
  }

  const GridSig& sig() const { return sig_; }
  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  const std::vector<Index>& indices() const { return idx_; }

  bool contains(Index i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }
  bool contains(const Point& x) const { return contains(sig_.index_of(x)); }

  std::vector<Point> points() const {
    std::vector<Point> out;
    out.reserve(idx_.size());
    for (Index i : idx_) out.push_back(sig_.point_at(i));
    return out;
  }

  std::vector<bool> mask() const {
    std::vector<bool> m(sig_.size(), false);
    for (Index i : idx_) m[i] = true;
    return m;
  }

  bool operator==(const PointSet& o) const { return sig_ == o.sig_ && idx_ == o.idx_; }

 private:
  GridSig sig_;
  std::vector<Index> idx_;
};

// ---------------------------------------------------------------------------
// Aut([q]^n)

/// Coordinate permutation combined with per-coordinate alphabet permutations.
/// Acts by (s x)_{perm[i]} = alpha[i][x_i].
struct Symmetry {
  std::vector<int> perm;
  std::vector<std::vector<Symbol>> alpha;

  static Symmetry identity(int q, int n) {
    Symmetry s;
    s.perm.resize(static_cast<std::size_t>(n));
    std::iota(s.perm.begin(), s.perm.end(), 0);
    std::vector<Symbol> id(static_cast<std::size_t>(q));
    std::iota(id.begin(), id.end(), Symbol{0});
    s.alpha.assign(static_cast<std::size_t>(n), id);
    return s;
  }

  int n() const { return static_cast<int>(perm.size()); }

  bool valid_for(const GridSig& sig) const {
    if (n() != sig.n() || alpha.size() != perm.size()) return false;
    std::vector<int> p = perm;
    std::sort(p.begin(), p.end());
    for (int i = 0; i < n(); ++i)
      if (p[static_cast<std::size_t>(i)] != i) return false;
    for (const auto& a : alpha) {
      if (static_cast<int>(a.size()) != sig.q()) return false;
      std::vector<Symbol> s = a;
      std::sort(s.begin(), s.end());
      for (int i = 0; i < sig.q(); ++i)
        if (s[static_cast<std::size_t>(i)] != i) return false;
    }
    return true;
  }

  Point apply(const Point& x) const {
    detail::require(x.size() == n(), "symmetry and point dimensions differ");
    std::vector<Symbol> y(x.coords.size());
    for (int i = 0; i < n(); ++i) {
      const auto& a = alpha[static_cast<std::size_t>(i)];
      detail::require(x[i] < a.size(), "point symbol outside the symmetry alphabet");
      y[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = a[x[i]];
    }
    return Point(std::move(y));
  }

  /// this after other: (a * b) x = a (b x).
  Symmetry compose(const Symmetry& other) const {
    detail::require(n() == other.n(), "symmetry dimensions differ");
    Symmetry r;
    r.perm.resize(perm.size());
    r.alpha.resize(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      const int mid = other.perm[i];
      r.perm[i] = perm[static_cast<std::size_t>(mid)];
      const auto& outer = alpha[static_cast<std::size_t>(mid)];
      const auto& inner = other.alpha[i];
      r.alpha[i].resize(inner.size());
      for (std::size_t s = 0; s < inner.size(); ++s) r.alpha[i][s] = outer[inner[s]];
    }
    return r;
  }

  Symmetry inverse() const {
    Symmetry r;
    r.perm.resize(perm.size());
    r.alpha.resize(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      const auto j = static_cast<std::size_t>(perm[i]);
      r.perm[j] = static_cast<int>(i);
      r.alpha[j].resize(alpha[i].size());
      for (std::size_t s = 0; s < alpha[i].size(); ++s) r.alpha[j][alpha[i][s]] = static_cast<Symbol>(s);
    }
    return r;
  }

  bool operator==(const Symmetry&) const = default;
};

inline Point apply_symmetry(const Symmetry& s, const Point& x) { return s.apply(x); }

inline PointSet apply_symmetry_set(const Symmetry& s, const PointSet& t) {
  detail::require(s.valid_for(t.sig()), "symmetry does not act on this grid");
  std::vector<Index> out;
  out.reserve(t.size());
  for (const auto& p : t.points()) out.push_back(t.sig().index_of(s.apply(p)));
  return PointSet(t.sig(), std::move(out));
}

/// |Aut([q]^n)| = n! (q!)^n, saturated at uint64 max.
inline std::uint64_t group_order(const GridSig& sig) {
  unsigned __int128 r = 1;
  const auto cap = static_cast<unsigned __int128>(std::numeric_limits<std::uint64_t>::max());
  for (int i = 2; i <= sig.n(); ++i) r = std::min(r * static_cast<unsigned>(i), cap);
  unsigned __int128 qf = 1;
  for (int i = 2; i <= sig.q(); ++i) qf = std::min(qf * static_cast<unsigned>(i), cap);
  for (int i = 0; i < sig.n(); ++i) r = std::min(r * qf, cap);
  return static_cast<std::uint64_t>(r);
}

inline constexpr std::uint64_t kMaxGroupOrder = 10'000'000;

/// Visits every element of Aut([q]^n). Rejects groups larger than `limit`.
inline void for_each_symmetry(const GridSig& sig, const std::function<void(const Symmetry&)>& fn,
                              std::uint64_t limit = kMaxGroupOrder) {
  if (group_order(sig) > limit) throw ResourceLimit("symmetry group too large to enumerate");
  std::vector<std::vector<Symbol>> alpha_perms;
  std::vector<Symbol> a(static_cast<std::size_t>(sig.q()));
  std::iota(a.begin(), a.end(), Symbol{0});
  do alpha_perms.push_back(a);
  while (std::next_permutation(a.begin(), a.end()));

  Symmetry s = Symmetry::identity(sig.q(), sig.n());
  std::vector<std::size_t> choice(static_cast<std::size_t>(sig.n()), 0);
  do {
    std::fill(choice.begin(), choice.end(), 0);
    while (true) {
      for (std::size_t i = 0; i < choice.size(); ++i) s.alpha[i] = alpha_perms[choice[i]];
      fn(s);
      std::size_t i = 0;
      while (i < choice.size() && ++choice[i] == alpha_perms.size()) choice[i++] = 0;
      if (i == choice.size()) break;
    }
  } while (std::next_permutation(s.perm.begin(), s.perm.end()));
}

/// Orbit representative: the image whose sorted index list is lexicographically smallest.
inline PointSet canonical_form(const PointSet& t, std::uint64_t limit = kMaxGroupOrder) {
  const GridSig& sig = t.sig();
  if (group_order(sig) > limit) throw ResourceLimit("symmetry group too large for canonical_form");
  const auto pts = t.points();
  std::vector<Index> best = t.indices();
  std::vector<Index> cur(pts.size());
  for_each_symmetry(
      sig,
      [&](const Symmetry& s) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
          Index idx = 0;
          for (int i = 0; i < sig.n(); ++i)
            idx += static_cast<Index>(s.alpha[static_cast<std::size_t>(i)][pts[j][i]]) *
                   sig.stride(s.perm[static_cast<std::size_t>(i)]);
          cur[j] = idx;
        }
        std::sort(cur.begin(), cur.end());
        if (cur < best) best = cur;
      },
      limit);
  return PointSet(sig, std::move(best));
}

// ---------------------------------------------------------------------------
// Text rendering

namespace detail {

template <typename CellFn>
std::string render_layers(const GridSig& sig, CellFn cell) {
  detail::require(sig.n() <= 3, "text rendering supports n <= 3");
  std::ostringstream os;
  const Index q = static_cast<Index>(sig.q());
  const Index layers = sig.n() == 3 ? q : 1;
  const Index rows = sig.n() >= 2 ? q : 1;
  for (Index l = 0; l < layers; ++l) {
    if (sig.n() == 3) os << "layer " << l << ":\n";
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < q; ++c) os << (c ? " " : "") << cell((l * rows + r) * q + c);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace detail

/// Layers of q x q tables (first coordinate = layer, second = row, third = column).
inline std::string render_grid(const CubeArray& f) {
  return detail::render_layers(f.sig(), [&](Index i) {
    const Value v = f[i];
    std::string s = v == -1 ? "-" : std::to_string(v);
    return s.size() < 2 ? std::string(2 - s.size(), ' ') + s : s;
  });
}

inline std::string render_grid(const PointSet& t) {
  return detail::render_layers(t.sig(), [&](Index i) { return std::string(t.contains(i) ? "#" : "."); });
}

}  // namespace freqcube

#pragma once

// Testing sets for linear and affine Boolean functions with few essential
// variables, via parity-check matrices of linear codes.
//
// A point x of [2]^n is handled as the bitmask equal to its row-major index,
// so x_1 is the most significant bit. The inner product a.x is the parity of
// (a & x).

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "freqcube/core.hpp"

namespace freqcube {

using BitRow = std::uint64_t;

// Points of [2]^n are materialized as grid indices, so n is bounded by the grid cap.
inline constexpr int kMaxCodeLength = 28;

/// ceil(log2(v)) for v >= 1.
inline int ceil_log2(std::uint64_t v) {
  detail::require(v >= 1, "ceil_log2 needs a positive argument");
  return v == 1 ? 0 : static_cast<int>(std::bit_width(v - 1));
}

/// Rows of H_X over GF(2).
struct BinMatrix {
  int n = 0;
  std::vector<BitRow> rows;

  static BinMatrix from_points(const PointSet& x) {
    detail::require(x.sig().q() == 2, "binary matrices need q = 2");
    detail::require(x.sig().n() <= kMaxCodeLength, "code length above 28");
    BinMatrix m;
    m.n = x.sig().n();
    for (Index i : x.indices()) m.rows.push_back(static_cast<BitRow>(i));
    return m;
  }

  /// Rank over GF(2), by bit-packed elimination.
  int rank() const {
    std::vector<BitRow> basis;  // kept with distinct leading bits
    for (BitRow r : rows) {
      for (BitRow b : basis)
        if (r & (BitRow{1} << (std::bit_width(b) - 1))) r ^= b;
      if (r) {
        for (BitRow& b : basis)
          if (b & (BitRow{1} << (std::bit_width(r) - 1))) b ^= r;
        basis.push_back(r);
      }
    }
    return static_cast<int>(basis.size());
  }

  /// Keeps a maximal independent subset of rows, in order; returns the number dropped.
  int drop_dependent_rows() {
    std::vector<BitRow> kept;
    std::vector<BitRow> basis;
    for (BitRow r : rows) {
      BitRow red = r;
      for (BitRow b : basis)
        if (red & (BitRow{1} << (std::bit_width(b) - 1))) red ^= b;
      if (red) {
        for (BitRow& b : basis)
          if (b & (BitRow{1} << (std::bit_width(red) - 1))) b ^= red;
        basis.push_back(red);
        kept.push_back(r);
      }
    }
    const int dropped = static_cast<int>(rows.size() - kept.size());
    rows = std::move(kept);
    return dropped;
  }

  BitRow syndrome(BitRow a) const {
    BitRow s = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (std::popcount(rows[i] & a) & 1) s |= BitRow{1} << i;
    return s;
  }

  /// Minimum weight of a nonzero kernel vector, by exhaustive scan (n <= 24); 0 if the kernel is trivial.
  int kernel_min_distance() const {
    detail::require(n <= 24, "exhaustive kernel scan limited to n <= 24");
    int best = 0;
    for (BitRow a = 1; a < (BitRow{1} << n); ++a)
      if (syndrome(a) == 0) {
        const int w = std::popcount(a);
        if (best == 0 || w < best) best = w;
      }
    return best;
  }

  std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    for (BitRow r : rows) {
      std::string s(static_cast<std::size_t>(n), '0');
      for (int i = 0; i < n; ++i)
        if (r & (BitRow{1} << (n - 1 - i))) s[static_cast<std::size_t>(i)] = '1';
      out.push_back(std::move(s));
    }
    return out;
  }

  static BinMatrix from_strings(const std::vector<std::string>& rows) {
    BinMatrix m;
    detail::require(!rows.empty(), "matrix needs at least one row");
    m.n = static_cast<int>(rows.front().size());
    detail::require(m.n >= 1 && m.n <= kMaxCodeLength, "row length must lie in [1, 28]");
    for (const auto& s : rows) {
      detail::require(static_cast<int>(s.size()) == m.n, "rows must have equal length");
      BitRow r = 0;
      for (char ch : s) {
        detail::require(ch == '0' || ch == '1', "rows are strings over {0,1}");
        r = (r << 1) | static_cast<BitRow>(ch == '1');
      }
      m.rows.push_back(r);
    }
    return m;
  }

  PointSet to_points() const {
    const GridSig sig(2, n);
    std::vector<Index> idx(rows.begin(), rows.end());
    return PointSet(sig, std::move(idx));
  }
};

/// l(x) = a.x + a0.
struct AffineFn {
  int n = 0;
  BitRow a = 0;
  bool a0 = false;

  int essential_count() const { return std::popcount(a); }
  bool eval(BitRow x) const { return ((std::popcount(a & x) & 1) != 0) != a0; }
  bool is_zero() const { return a == 0 && !a0; }
};

enum class FunctionClass { linear, affine };

namespace detail {

// Calls fn(a) for every a in GF(2)^n with 1 <= wt(a) <= max_weight; stops when fn returns false.
template <typename Fn>
bool for_each_low_weight(int n, int max_weight, Fn&& fn) {
  for (int w = 1; w <= std::min(max_weight, n); ++w) {
    bool go = true;
    detail::for_each_combination(n, w, [&](const std::vector<int>& pos) {
      if (!go) return;
      BitRow a = 0;
      for (int p : pos) a |= BitRow{1} << (n - 1 - p);
      go = fn(a);
    });
    if (!go) return false;
  }
  return true;
}

}  // namespace detail

/// True iff no nonzero function of the class with at most 2k essential variables
/// vanishes on all of X.
inline bool is_testing_for_affine(const PointSet& x, int k, FunctionClass cls = FunctionClass::affine) {
  detail::require(x.sig().q() == 2, "affine testing needs q = 2");
  detail::require(k >= 1, "k must be >= 1");
  const int n = x.sig().n();
  detail::require(n <= kMaxCodeLength, "code length above 28");
  // a = 0: only the constant 1 is nonzero, and it vanishes on X iff X is empty.
  if (cls == FunctionClass::affine && x.empty()) return false;
  const auto& pts = x.indices();
  return detail::for_each_low_weight(n, 2 * k, [&](BitRow a) {
    // a.x + a0 vanishes on X iff a.x is constant (= a0) on X.
    bool seen0 = false, seen1 = false;
    for (Index p : pts) {
      if (std::popcount(a & static_cast<BitRow>(p)) & 1)
        seen1 = true;
      else
        seen0 = true;
      if (seen0 && seen1) return true;
    }
    if (cls == FunctionClass::linear) return seen1;  // vanishes iff all parities are 0
    return false;
  });
}

/// Parity-check rows whose columns are the binary expansions of 1..n (row 0 holds
/// the most significant bit); the all-zero point is appended in the affine case.
inline PointSet hamming_testing_set(int n, bool affine) {
  detail::require(n >= 1 && n <= kMaxCodeLength, "hamming_testing_set needs 1 <= n <= 28");
  const int r = ceil_log2(static_cast<std::uint64_t>(n) + 1);
  std::vector<Index> rows;
  for (int i = 0; i < r; ++i) {
    BitRow row = 0;
    for (int j = 1; j <= n; ++j)
      if ((static_cast<unsigned>(j) >> (r - 1 - i)) & 1U) row |= BitRow{1} << (n - j);
    rows.push_back(static_cast<Index>(row));
  }
  if (affine) rows.push_back(0);
  return PointSet(GridSig(2, n), std::move(rows));
}

struct TestingBounds {
  int lower = 0;
  int upper = 0;
};

/// Bounds on the minimum testing-set size for the linear class with at most k
/// essential variables (Hamming-side lower, GV-side upper); affine adds one to both.
inline TestingBounds bounds_min_testing(int n, int k, FunctionClass cls = FunctionClass::linear) {
  detail::require(k >= 1 && 2 * k < n, "bounds need k >= 1 and 2k < n");
  std::uint64_t ball = 0;
  for (int i = 0; i <= k; ++i) ball = detail::checked_add(ball, binomial(n, i));
  std::uint64_t gv = 1;
  for (int i = 0; i <= 2 * k - 1; ++i) gv = detail::checked_add(gv, binomial(n - 1, i));
  TestingBounds b{ceil_log2(ball), ceil_log2(gv)};
  if (cls == FunctionClass::affine) {
    ++b.lower;
    ++b.upper;
  }
  return b;
}

/// B(n,3) = 2^(n - ceil(log2(n+1))), the largest linear single-error-correcting code.
/// `value` is empty when the exponent does not fit in 63 bits.
struct CodeSize {
  int exponent = 0;
  std::optional<std::uint64_t> value;
};

inline CodeSize b_n_3(int n) {
  detail::require(n >= 1, "b_n_3 needs n >= 1");
  CodeSize c;
  c.exponent = n - ceil_log2(static_cast<std::uint64_t>(n) + 1);
  if (c.exponent <= 62) c.value = std::uint64_t{1} << c.exponent;
  return c;
}

/// Column-greedy (lexicode) parity-check construction: for r rows starting at the
/// Hamming-side bound, each column is the smallest r-bit word outside the sums of
/// at most 2k-1 earlier columns. Any 2k columns are then independent.
inline PointSet greedy_code_testing_set(int n, int k, bool affine = false) {
  detail::require(k >= 1 && 2 * k < n, "greedy construction needs k >= 1 and 2k < n");
  detail::require(n <= kMaxCodeLength, "code length above 28");
  const TestingBounds bounds = bounds_min_testing(n, k);
  for (int r = bounds.lower; r <= bounds.upper; ++r) {
    detail::require(r <= 30, "greedy construction limited to 30 rows");
    const std::uint64_t words = std::uint64_t{1} << r;
    // sums[w] = fewest chosen columns summing to w (capped), 0xff = unreachable.
    std::vector<std::uint8_t> dist(words, 0xff);
    dist[0] = 0;
    std::vector<std::uint64_t> cols;
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      std::uint64_t pick = 0;
      for (std::uint64_t w = 1; w < words; ++w)
        if (dist[w] > 2 * k - 1) {
          pick = w;
          break;
        }
      if (pick == 0) {
        ok = false;
        break;
      }
      cols.push_back(pick);
      // Relax: new sums using `pick` once.
      std::vector<std::uint8_t> next = dist;
      for (std::uint64_t w = 0; w < words; ++w)
        if (dist[w] < 2 * k - 1) next[w ^ pick] = std::min<std::uint8_t>(next[w ^ pick], dist[w] + 1);
      dist = std::move(next);
    }
    if (!ok) continue;
    std::vector<Index> rows;
    for (int i = 0; i < r; ++i) {
      BitRow row = 0;
      for (int j = 0; j < n; ++j)
        if ((cols[static_cast<std::size_t>(j)] >> (r - 1 - i)) & 1U) row |= BitRow{1} << (n - 1 - j);
      rows.push_back(static_cast<Index>(row));
    }
    BinMatrix m;
    m.n = n;
    m.rows.assign(rows.begin(), rows.end());
    m.drop_dependent_rows();
    PointSet out = m.to_points();
    if (affine) {
      std::vector<Index> idx = out.indices();
      idx.push_back(0);
      out = PointSet(out.sig(), std::move(idx));
    }
    const auto cls = affine ? FunctionClass::affine : FunctionClass::linear;
    if (!is_testing_for_affine(out, k, cls)) throw std::logic_error("greedy code construction failed certification");
    return out;
  }
  throw std::logic_error("greedy code construction exceeded the GV-side bound");
}

}  // namespace freqcube

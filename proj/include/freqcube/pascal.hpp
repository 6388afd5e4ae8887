#pragma once

// Tables C(k,n), 2 <= k <= n, obeying C(k,n) = C(k,n-1) + C(k-1,n-1), fixed by the
// boundary column C(2,.) and the diagonal C(n,n).

#include <cstdint>
#include <functional>
#include <map>
#include <utility>

#include "freqcube/core.hpp"
#include "freqcube/lincodes.hpp"

namespace freqcube {

using Boundary = std::function<std::int64_t(int)>;

/// Binomial with integer upper index: 0 for b < 0, C(a,b) for a >= 0 (0 when a < b),
/// and (-1)^b C(b-a-1, b) for a < 0, so C(a,0) = 1 for every a.
inline std::int64_t gbinom(std::int64_t a, std::int64_t b) {
  if (b < 0) return 0;
  if (a >= 0) return static_cast<std::int64_t>(binomial(a, b));
  const auto v = static_cast<std::int64_t>(binomial(b - a - 1, b));
  return (b % 2 == 0) ? v : -v;
}

class PascalTable {
 public:
  PascalTable(Boundary column2, Boundary diagonal) : column2_(std::move(column2)), diagonal_(std::move(diagonal)) {}

  /// C(k,n) by the recurrence; k = 2 reads the column, k = n (> 2) reads the diagonal.
  std::int64_t operator()(int k, int n) {
    detail::require(k >= 2 && k <= n, "Pascal table defined for 2 <= k <= n");
    if (k == 2) return column2_(n);
    if (k == n) return diagonal_(n);
    if (auto it = memo_.find({k, n}); it != memo_.end()) return it->second;
    const std::int64_t v = (*this)(k, n - 1) + (*this)(k - 1, n - 1);
    memo_[{k, n}] = v;
    return v;
  }

  /// The closed form expanding C(k,n) over the diagonal entries C(3,3)..C(k,k) and the
  /// column entries C(2,3)..C(2,n-k+2). For k = 2 the column value is returned.
  std::int64_t closed_form(int k, int n) const {
    detail::require(k >= 2 && k <= n, "Pascal table defined for 2 <= k <= n");
    if (k == 2) return column2_(n);
    std::int64_t total = 0;
    for (int t = 0; t <= k - 3; ++t) total += gbinom(n - k - 1 + t, t) * diagonal_(k - t);
    for (int t = 0; t <= n - k - 1; ++t) total += gbinom(k + t - 3, t) * column2_(n - k - t + 2);
    return total;
  }

 private:
  Boundary column2_;
  Boundary diagonal_;
  std::map<std::pair<int, int>, std::int64_t> memo_;
};

inline std::int64_t pascal_eval(const Boundary& column2, const Boundary& diagonal, int k, int n) {
  PascalTable t(column2, diagonal);
  return t(k, n);
}

/// True iff the closed form agrees with the recurrence at (k, n).
inline bool eq1_check(const Boundary& column2, const Boundary& diagonal, int k, int n) {
  PascalTable t(column2, diagonal);
  return t(k, n) == t.closed_form(k, n);
}

namespace boundaries {

/// C(2,n) = n(n-1)/2, C(n,n) = 1: the binomial table.
inline std::pair<Boundary, Boundary> binomial() {
  return {[](int n) { return static_cast<std::int64_t>(n) * (n - 1) / 2; }, [](int) { return std::int64_t{1}; }};
}

/// C(2,n) = n+1, C(n,n) = 2^n - 1: the weight-ball table.
inline std::pair<Boundary, Boundary> weight_ball() {
  return {[](int n) { return static_cast<std::int64_t>(n) + 1; },
          [](int n) { return (std::int64_t{1} << n) - 1; }};
}

/// C(2,n) = ceil(log2(n+1)) + 1, C(n,n) = 2^n - 1: sizes of the recursive supertesting sets.
inline std::pair<Boundary, Boundary> supertesting() {
  return {[](int n) { return static_cast<std::int64_t>(ceil_log2(static_cast<std::uint64_t>(n) + 1)) + 1; },
          [](int n) { return (std::int64_t{1} << n) - 1; }};
}

}  // namespace boundaries

/// Closed-form size of the recursive binary supertesting set for F_k^n(2;.), 2 <= k <= n.
inline std::int64_t q22_cardinality_formula(int n, int k) {
  detail::require(k >= 2 && k <= n, "formula defined for 2 <= k <= n");
  if (k == n) return (std::int64_t{1} << n) - 1;  // both sums are empty at n = k = 2
  std::int64_t total = 0;
  for (int t = 0; t <= k - 3; ++t) total += gbinom(n - k - 1 + t, t) * ((std::int64_t{1} << (k - t)) - 1);
  for (int t = 0; t <= n - k - 1; ++t)
    total += gbinom(k + t - 3, t) * (ceil_log2(static_cast<std::uint64_t>(n - k - t + 3)) + 1);
  return total;
}

/// Closed-form gap sigma(2,n,n-k) - |recursive set|.
inline std::int64_t q22_delta_formula(int n, int k) {
  detail::require(k >= 2 && k <= n, "formula defined for 2 <= k <= n");
  std::int64_t total = 0;
  for (int t = 0; t <= n - k - 1; ++t)
    total += gbinom(k + t - 3, t) * ((n - k - t + 2) - ceil_log2(static_cast<std::uint64_t>(n - k - t + 3)));
  return total;
}

}  // namespace freqcube

#pragma once

// k-bitrades: {-1,0,+1} arrays with as many +1s as -1s in every k-face.
//
// The search engine assigns cells in row-major order with value order
// (0, +1, -1). Each face tracks its +1 count, -1 count and number of open
// cells; a face is infeasible once |plus - minus| exceeds its open count, and
// when the two are equal every open cell of the face is forced to the sign
// that restores balance.

#include <bit>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freqcube/core.hpp"

namespace freqcube {

inline constexpr std::uint64_t kDefaultNodeCap = 100'000'000;

/// Node cap for exhaustive searches; FREQCUBE_NODE_CAP overrides the default.
inline std::uint64_t default_node_cap() {
  if (const char* env = std::getenv("FREQCUBE_NODE_CAP"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultNodeCap;
}

struct SearchOptions {
  std::uint64_t node_cap = default_node_cap();
};

enum class SearchStatus { witness, exhausted, resource_limited };

inline std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::witness: return "witness";
    case SearchStatus::exhausted: return "exhausted";
    case SearchStatus::resource_limited: return "resource_limited";
  }
  return "?";
}

struct SearchOutcome {
  SearchStatus status = SearchStatus::exhausted;
  std::optional<CubeArray> witness;
  std::uint64_t nodes = 0;

  bool exhausted() const { return status == SearchStatus::exhausted; }
};

inline bool is_k_bitrade(const CubeArray& f, int k) {
  const GridSig& sig = f.sig();
  detail::require(k >= 1 && k <= sig.n(), "face dimension must lie in [1, n]");
  for (Value v : f.values()) detail::require(v >= -1 && v <= 1, "bitrade values must lie in {-1,0,1}");
  const FaceIndex faces(sig, k);
  for (std::size_t fi = 0; fi < faces.face_count(); ++fi) {
    int sum = 0;
    for (Index c : faces.cells_of(fi)) sum += f[c];
    if (sum != 0) return false;
  }
  return true;
}

namespace detail {

class BalanceSearch {
 public:
  static constexpr std::int8_t kOpen = 2;

  BalanceSearch(const FaceIndex& faces, std::uint64_t node_cap)
      : faces_(faces),
        node_cap_(node_cap),
        val_(faces.sig().size(), kOpen),
        plus_(faces.face_count(), 0),
        minus_(faces.face_count(), 0),
        open_(faces.face_count(), static_cast<int>(faces.face_size())) {}

  /// Pins cells to zero before the search. Returns false if that alone is contradictory.
  bool force_zero(const PointSet& t) {
    for (Index c : t.indices())
      if (!assign(c, 0)) return false;
    return true;
  }

  /// Runs the search; on_solution returns false to stop. Solutions are never all-zero.
  /// With break_sign the first nonzero cell is restricted to +1.
  SearchStatus run(bool break_sign, const std::function<bool(const std::vector<std::int8_t>&)>& on_solution) {
    break_sign_ = break_sign;
    on_solution_ = &on_solution;
    stopped_ = false;
    limited_ = false;
    descend(0);
    if (limited_) return SearchStatus::resource_limited;
    return stopped_ ? SearchStatus::witness : SearchStatus::exhausted;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  bool set(Index c, std::int8_t v) {
    val_[c] = v;
    trail_.push_back(c);
    if (v != 0) ++nonzero_;
    bool ok = true;
    for (std::uint32_t f : faces_.faces_of(c)) {
      --open_[f];
      if (v > 0) ++plus_[f];
      if (v < 0) ++minus_[f];
    }
    for (std::uint32_t f : faces_.faces_of(c)) {
      const int d = plus_[f] - minus_[f];
      const int ad = d < 0 ? -d : d;
      if (ad > open_[f]) {
        ok = false;
        break;
      }
      if (ad == open_[f] && ad > 0) {
        const std::int8_t need = d > 0 ? -1 : 1;
        for (Index x : faces_.cells_of(f))
          if (val_[x] == kOpen) pending_.emplace_back(x, need);
      }
    }
    return ok;
  }

  bool assign(Index c, std::int8_t v) {
    pending_.clear();
    if (!set(c, v)) return false;
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
      const std::int8_t v = val_[c];
      if (v != 0) --nonzero_;
      for (std::uint32_t f : faces_.faces_of(c)) {
        ++open_[f];
        if (v > 0) --plus_[f];
        if (v < 0) --minus_[f];
      }
      val_[c] = kOpen;
    }
  }

  void descend(Index cursor) {
    while (cursor < val_.size() && val_[cursor] != kOpen) ++cursor;
    if (cursor == val_.size()) {
      if (nonzero_ > 0 && !(*on_solution_)(val_)) stopped_ = true;
      return;
    }
    static constexpr std::int8_t kOrder[3] = {0, 1, -1};
    const int choices = (break_sign_ && nonzero_ == 0) ? 2 : 3;
    for (int i = 0; i < choices && !stopped_ && !limited_; ++i) {
      if (++nodes_ > node_cap_) {
        limited_ = true;
        return;
      }
      const std::size_t mark = trail_.size();
      if (assign(cursor, kOrder[i])) descend(cursor + 1);
      undo(mark);
    }
  }

  const FaceIndex& faces_;
  std::uint64_t node_cap_;
  std::vector<std::int8_t> val_;
  std::vector<int> plus_, minus_, open_;
  std::vector<Index> trail_;
  std::vector<std::pair<Index, std::int8_t>> pending_;
  std::size_t nonzero_ = 0;
  std::uint64_t nodes_ = 0;
  bool break_sign_ = true;
  bool stopped_ = false;
  bool limited_ = false;
  const std::function<bool(const std::vector<std::int8_t>&)>* on_solution_ = nullptr;
};

inline CubeArray to_array(const GridSig& sig, const std::vector<std::int8_t>& v) {
  CubeArray a(sig);
  for (Index i = 0; i < v.size(); ++i) a[i] = v[i];
  return a;
}

}  // namespace detail

/// Searches for a nonzero k-bitrade whose support avoids `avoid`.
/// `exhausted` means none exists; a witness is always re-validated before return.
inline SearchOutcome find_bitrade_avoiding(const GridSig& sig, int k, const PointSet& avoid,
                                           const SearchOptions& opts = {}) {
  detail::require(k >= 1 && k <= sig.n(), "face dimension must lie in [1, n]");
  detail::require(avoid.sig() == sig, "point set lives on a different grid");
  const FaceIndex faces(sig, k);
  detail::BalanceSearch search(faces, opts.node_cap);
  SearchOutcome out;
  if (!search.force_zero(avoid)) return out;  // zeros can never unbalance a face
  out.status = search.run(true, [&](const std::vector<std::int8_t>& v) {
    out.witness = detail::to_array(sig, v);
    return false;
  });
  out.nodes = search.nodes();
  if (out.witness) {
    if (!is_k_bitrade(*out.witness, k)) throw std::logic_error("bitrade search returned an unbalanced witness");
    for (Index c : avoid.indices())
      if ((*out.witness)[c] != 0) throw std::logic_error("bitrade witness meets the avoided set");
  }
  return out;
}

/// Visits every nonzero k-bitrade (both signs) vanishing on `zeros`, in search order.
/// Returns the node count; throws ResourceLimit when the cap is hit.
inline std::uint64_t for_each_bitrade(const GridSig& sig, int k, const PointSet& zeros,
                                      const std::function<bool(const CubeArray&)>& fn,
                                      const SearchOptions& opts = {}) {
  detail::require(k >= 1 && k <= sig.n(), "face dimension must lie in [1, n]");
  const FaceIndex faces(sig, k);
  detail::BalanceSearch search(faces, opts.node_cap);
  if (!search.force_zero(zeros)) return 0;
  const auto status = search.run(false, [&](const std::vector<std::int8_t>& v) { return fn(detail::to_array(sig, v)); });
  if (status == SearchStatus::resource_limited) throw ResourceLimit("bitrade enumeration exceeded the node cap");
  return search.nodes();
}

// ---------------------------------------------------------------------------
// Boolean functions: algebraic normal form

/// ANF coefficients mu_g(y) over [2]^n, indexed like the function itself.
struct AnfMap {
  GridSig sig;
  std::vector<std::uint8_t> coeff;

  bool at(const Point& y) const { return coeff[sig.index_of(y)] != 0; }
};

namespace detail {

inline void require_boolean(const CubeArray& g) {
  detail::require(g.sig().q() == 2, "Boolean analysis needs q = 2");
  for (Value v : g.values()) detail::require(v == 0 || v == 1, "Boolean function values must be 0 or 1");
}

// In-place subset-parity transform; it is its own inverse over GF(2).
inline void moebius(std::vector<std::uint8_t>& a) {
  for (std::size_t step = 1; step < a.size(); step <<= 1)
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i & step) a[i] ^= a[i ^ step];
}

}  // namespace detail

/// mu_g(y) = parity of g over {x : x <= y coordinatewise}.
inline AnfMap anf(const CubeArray& g) {
  detail::require_boolean(g);
  std::vector<std::uint8_t> a(g.size());
  for (Index i = 0; i < g.size(); ++i) a[i] = static_cast<std::uint8_t>(g[i]);
  detail::moebius(a);
  return AnfMap{g.sig(), std::move(a)};
}

inline CubeArray anf_inverse(const AnfMap& m) {
  std::vector<std::uint8_t> a = m.coeff;
  detail::moebius(a);
  CubeArray g(m.sig);
  for (Index i = 0; i < a.size(); ++i) g[i] = a[i];
  return g;
}

/// Algebraic degree; the zero function has degree 0.
inline int degree(const CubeArray& g) {
  const AnfMap m = anf(g);
  int d = 0;
  for (Index y = 0; y < m.coeff.size(); ++y)
    if (m.coeff[y]) d = std::max(d, std::popcount(y));
  return d;
}

/// Positions (0-based) the function depends on, read off the ANF.
inline std::vector<int> essential_variables(const CubeArray& g) {
  const AnfMap m = anf(g);
  const int n = g.sig().n();
  Index used = 0;
  for (Index y = 0; y < m.coeff.size(); ++y)
    if (m.coeff[y]) used |= y;
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (used & g.sig().stride(i)) out.push_back(i);
  return out;
}

inline bool is_affine_leq2(const CubeArray& g) {
  return degree(g) <= 1 && essential_variables(g).size() <= 2;
}

/// |beta| as a 0/1 array.
inline CubeArray support(const CubeArray& beta) {
  CubeArray g(beta.sig());
  for (Index i = 0; i < beta.size(); ++i) g[i] = beta[i] != 0 ? 1 : 0;
  return g;
}

struct BitradeClassReport {
  int n = 0;
  int k = 0;
  std::uint64_t bitrades = 0;  // nonzero, both signs
  std::uint64_t nodes = 0;
  std::map<int, std::uint64_t> degree_histogram;  // degree of |beta| -> count
  std::uint64_t affine_leq2 = 0;
  int max_degree = 0;
};

/// Enumerates every nonzero k-bitrade of [2]^n and tallies the degrees of the supports.
inline BitradeClassReport classify_small_bitrades(const GridSig& sig, int k, const SearchOptions& opts = {}) {
  detail::require(sig.q() == 2, "classification runs over [2]^n");
  detail::require(sig.n() <= 4, "classification is limited to n <= 4");
  BitradeClassReport r;
  r.n = sig.n();
  r.k = k;
  r.nodes = for_each_bitrade(
      sig, k, PointSet(sig),
      [&](const CubeArray& beta) {
        const CubeArray g = support(beta);
        const int d = degree(g);
        ++r.bitrades;
        ++r.degree_histogram[d];
        r.max_degree = std::max(r.max_degree, d);
        if (is_affine_leq2(g)) ++r.affine_leq2;
        return true;
      },
      opts);
  return r;
}

}  // namespace freqcube

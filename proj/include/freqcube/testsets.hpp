#pragma once

// Testing and supertesting sets: constructions, certifiers, and the
// symmetry-reduced search for a minimum supertesting set.
//
// A set T is supertesting for F_k^n(q;.) when every nonzero k-bitrade of [q]^n
// is nonzero somewhere on T; such a T is testing for every choice of m and
// lambdas. Constructions that take certified inputs do not re-check them;
// certification is always a separate call.

#include <algorithm>
#include <atomic>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "freqcube/bitrades.hpp"
#include "freqcube/core.hpp"
#include "freqcube/cubes.hpp"
#include "freqcube/lincodes.hpp"

namespace freqcube {

inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Constructions

/// Points of weight > n-k; |result| = sigma(q,n,n-k).
inline PointSet baseline_set(int q, int n, int k) {
  const GridSig sig(q, n);
  detail::require(k >= 1 && k <= n, "face dimension k must lie in [1, n]");
  std::vector<Index> idx;
  for (Index i = 0; i < sig.size(); ++i)
    if (sig.weight(i) > n - k) idx.push_back(i);
  return PointSet(sig, std::move(idx));
}

/// The seven-cell set over [3]^3 drawn as three layers (first coordinate = layer,
/// second = row, third = column): the diagonal of layer 0, the anti-diagonal of
/// layer 1, and the cell at row 0, column 1 of layer 2.
inline PointSet three_cube_set() {
  const GridSig sig(3, 3);
  return PointSet::from_points(sig, {
                                        {0, 0, 0}, {0, 1, 1}, {0, 2, 2},  // layer 0
                                        {1, 0, 2}, {1, 1, 1}, {1, 2, 0},  // layer 1
                                        {2, 0, 1},                        // layer 2
                                    });
}

/// Canonical form of the first seven-point supertesting set found by
/// min_supertesting_search(3, 3, 1, 7); regenerated and compared in the tests.
inline PointSet three_cube_minimal_set() {
  const GridSig sig(3, 3);
  return PointSet(sig, {0, 1, 3, 9, 13, 17, 23});
}

/// Lifts a supertesting set of [q']^n to [q]^n, q' < q, by adding every point of
/// weight > n-k outside [q']^n.
inline PointSet lift_set(const PointSet& inner, int q, int k) {
  const GridSig& in_sig = inner.sig();
  const int n = in_sig.n();
  detail::require(in_sig.q() < q, "lift needs a strictly smaller inner alphabet");
  detail::require(k >= 1 && k <= n, "face dimension k must lie in [1, n]");
  const GridSig sig(q, n);
  std::vector<Index> idx;
  for (const auto& p : inner.points()) idx.push_back(sig.index_of(p));
  for (Index i = 0; i < sig.size(); ++i) {
    if (sig.weight(i) <= n - k) continue;
    bool inside = true;
    for (int pos = 0; pos < n && inside; ++pos) inside = sig.digit(i, pos) < in_sig.q();
    if (!inside) idx.push_back(i);
  }
  return PointSet(sig, std::move(idx));
}

/// Cartesian product over [q]^(n+n').
inline PointSet product_set(const PointSet& a, const PointSet& b) {
  detail::require(a.sig().q() == b.sig().q(), "product factors must share the alphabet");
  const GridSig sig(a.sig().q(), a.sig().n() + b.sig().n());
  std::vector<Index> idx;
  idx.reserve(a.size() * b.size());
  for (Index x : a.indices())
    for (Index y : b.indices()) idx.push_back(x * b.sig().size() + y);
  return PointSet(sig, std::move(idx));
}

/// ({1..q-1} x upper) u ({0} x lower), prepending the new coordinate. `upper` is
/// supertesting for F_k^n(q;.) and `lower` for F_{k-1}^n(q;.).
inline PointSet step_up_set(const PointSet& upper, const PointSet& lower, int k) {
  detail::require(upper.sig() == lower.sig(), "step-up inputs must live on the same grid");
  detail::require(k >= 2, "step-up needs k >= 2 so that k-1 >= 1");
  detail::require(k <= upper.sig().n(), "step-up needs k <= n for the upper set");
  const GridSig& in = upper.sig();
  const GridSig sig(in.q(), in.n() + 1);
  std::vector<Index> idx;
  for (Index y : lower.indices()) idx.push_back(y);
  for (int c = 1; c < in.q(); ++c)
    for (Index y : upper.indices()) idx.push_back(static_cast<Index>(c) * in.size() + y);
  return PointSet(sig, std::move(idx));
}

/// Binary supertesting set for F_k^n(2;.): all nonzero points when k = n, the affine
/// Hamming set when k = 2, and the step-up of (n-1, k) and (n-1, k-1) otherwise.
inline PointSet q22_recursive_set(int n, int k) {
  detail::require(k >= 2 && k <= n, "recursive construction needs 2 <= k <= n");
  if (k == n) return baseline_set(2, n, n);
  if (k == 2) return hamming_testing_set(n, true);
  return step_up_set(q22_recursive_set(n - 1, k), q22_recursive_set(n - 1, k - 1), k);
}

/// Testing set for F_1^n(q;.), q >= 3: with n = 3m + t, the product of m copies of the
/// three-dimensional set (lifted to [q]^3 when q > 3) and [q \ {0}]^t.
inline PointSet main_theorem_set(int q, int n) {
  detail::require(q >= 3, "the three-dimensional construction needs q >= 3");
  detail::require(n >= 1, "dimension n must be >= 1");
  const int m = n / 3;
  const int t = n % 3;
  const PointSet block = q == 3 ? three_cube_set() : lift_set(three_cube_set(), q, 1);
  std::optional<PointSet> out;
  for (int i = 0; i < m; ++i) out = out ? product_set(*out, block) : block;
  if (t > 0) {
    const PointSet tail = baseline_set(q, t, 1);
    out = out ? product_set(*out, tail) : tail;
  }
  return *out;
}

// ---------------------------------------------------------------------------
// Certificates

enum class Verdict { holds, fails, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct Certificate {
  std::string kind;
  PointSet set;
  std::string params;
  Verdict verdict = Verdict::inconclusive;
  std::map<std::string, std::uint64_t> evidence;
  std::vector<std::string> warnings;
  std::vector<CubeArray> counterexample;  // bitrade witness, or two colliding cubes
};

inline Certificate certify_supertesting(const PointSet& t, int k, const SearchOptions& opts = {}) {
  const GridSig& sig = t.sig();
  Certificate c{"supertesting-by-exhaustion", t,
                "q=" + std::to_string(sig.q()) + " n=" + std::to_string(sig.n()) + " k=" + std::to_string(k), {}, {}, {}, {}};
  const SearchOutcome r = find_bitrade_avoiding(sig, k, t, opts);
  c.evidence["nodes"] = r.nodes;
  c.evidence["set_size"] = t.size();
  switch (r.status) {
    case SearchStatus::exhausted: c.verdict = Verdict::holds; break;
    case SearchStatus::witness:
      c.verdict = Verdict::fails;
      c.counterexample.push_back(*r.witness);
      break;
    case SearchStatus::resource_limited:
      c.verdict = Verdict::inconclusive;
      c.warnings.push_back("node cap reached before the search finished");
      break;
  }
  return c;
}

struct TestingCertOptions {
  std::uint64_t member_cap = 1'000'000;
  std::uint64_t node_cap = default_node_cap();
  // Sampling mode when set: draw members with this seed until `samples` distinct ones are seen.
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 10'000;
  std::uint64_t max_draws = 0;  // 0 means 4 * samples
};

/// Checks that restriction to T separates the members of a family, either over the
/// whole enumeration or over a seeded sample. A sampled pass is never reported as
/// exhaustive.
inline Certificate certify_testing_by_enumeration(const PointSet& t, const FreqParams& p,
                                                  const TestingCertOptions& opts = {}) {
  p.validate();
  detail::require(t.sig() == p.sig(), "point set grid does not match the parameters");
  Certificate c{opts.seed ? "testing-by-sampling" : "testing-by-enumeration", t, p.to_string(), {}, {}, {}, {}};
  std::map<std::vector<Value>, CubeArray> seen;  // restriction -> member
  std::set<std::vector<Value>> members;
  bool collision = false;
  auto visit = [&](const CubeArray& f) {
    if (!members.insert(f.values()).second) return true;
    std::vector<Value> key;
    key.reserve(t.size());
    for (Index i : t.indices()) key.push_back(f[i]);
    auto [it, fresh] = seen.emplace(std::move(key), f);
    if (!fresh) {
      collision = true;
      c.counterexample = {it->second, f};
      return false;
    }
    return true;
  };

  CubeSearchOptions cs{opts.node_cap};
  if (opts.seed) {
    std::mt19937_64 rng(*opts.seed);
    const std::uint64_t max_draws = opts.max_draws ? opts.max_draws : 4 * opts.samples;
    std::uint64_t draws = 0;
    while (draws < max_draws && members.size() < opts.samples && !collision) {
      ++draws;
      const auto f = sample_cube(p, rng, cs);
      if (!f) break;  // empty family
      visit(*f);
    }
    c.evidence["draws"] = draws;
    c.evidence["distinct_members"] = members.size();
    c.evidence["seed"] = *opts.seed;
    c.evidence["requested_samples"] = opts.samples;
    if (members.size() < opts.samples && !collision)
      c.warnings.push_back("fewer distinct members found than requested");
  } else {
    cs.max_results = opts.member_cap + 1;
    std::uint64_t total = 0;
    const auto nodes = for_each_cube(p, [&](const CubeArray& f) {
      ++total;
      if (total > opts.member_cap) return false;
      return visit(f);
    }, cs);
    if (total > opts.member_cap) throw ResourceLimit("family larger than the member cap; use sampling mode");
    c.evidence["nodes"] = nodes;
    c.evidence["members"] = members.size();
  }
  c.evidence["set_size"] = t.size();
  c.verdict = collision ? Verdict::fails : Verdict::holds;
  return c;
}

// ---------------------------------------------------------------------------
// Minimum supertesting sets

struct MinSearchOptions {
  std::uint64_t subset_budget = 100'000'000;  // cap on C(q^n, size_bound)
  // For q = n = 3, k = 1 and sizes <= 6: keep only sets with exactly two cells in
  // every 2-face and at most one per line, necessary conditions for such small sets.
  bool proof_filters = true;
  unsigned jobs = 0;  // 0: hardware concurrency
  SearchOptions search;
};

struct MinSearchResult {
  std::optional<PointSet> set;
  std::vector<std::uint64_t> orbits;     // orbit representatives per size
  std::vector<std::uint64_t> certified;  // bitrade searches run per size
  std::uint64_t nodes = 0;
};

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(count, 1)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

// C(cells, s) > budget, without overflowing. C(cells-s+i, i) grows with i.
inline bool binomial_exceeds(Index cells, int s, std::uint64_t budget) {
  unsigned __int128 c = 1;
  for (int i = 1; i <= s; ++i) {
    c = c * (cells - static_cast<Index>(s) + static_cast<Index>(i)) / static_cast<unsigned>(i);
    if (c > budget) return true;
  }
  return false;
}

// Exactly two points in every 2-face and at most one per line, over [3]^3.
inline bool passes_small_set_filters(const PointSet& t) {
  const GridSig& sig = t.sig();
  for (int k = 1; k <= 2; ++k) {
    for (const auto& face : enumerate_faces(sig, k)) {
      std::size_t hits = 0;
      for (Index c : face.cells(sig)) hits += t.contains(c) ? 1 : 0;
      if (k == 1 && hits > 1) return false;
      if (k == 2 && hits != 2) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Smallest supertesting set of size <= size_bound, searching orbit representatives
/// of Aut([q]^n) size by size in lexicographic order; absent if none exists.
inline MinSearchResult min_supertesting_search(int q, int n, int k, int size_bound, const MinSearchOptions& opts = {}) {
  const GridSig sig(q, n);
  detail::require(k >= 1 && k <= n, "face dimension k must lie in [1, n]");
  detail::require(size_bound >= 0 && static_cast<Index>(size_bound) <= sig.size(), "size bound out of range");
  if (group_order(sig) > kMaxGroupOrder) throw ResourceLimit("symmetry group too large to enumerate");
  if (detail::binomial_exceeds(sig.size(), size_bound, opts.subset_budget))
    throw ResourceLimit("subset space exceeds the search budget");
  const bool filters = opts.proof_filters && q == 3 && n == 3 && k == 1;

  MinSearchResult res;
  std::vector<std::vector<Index>> level{{}};
  for (int s = 0; s <= size_bound; ++s) {
    res.orbits.push_back(level.size());
    const bool filtered = filters && s <= 6;
    std::vector<int> status(level.size(), 0);  // 1 holds, 2 fails, 3 inconclusive, 0 skipped
    std::vector<std::uint64_t> nodes(level.size(), 0);
    detail::parallel_for(level.size(), opts.jobs, [&](std::size_t i) {
      const PointSet t(sig, level[i]);
      if (filtered && !detail::passes_small_set_filters(t)) return;
      const auto r = find_bitrade_avoiding(sig, k, t, opts.search);
      nodes[i] = r.nodes;
      status[i] = r.status == SearchStatus::exhausted ? 1 : r.status == SearchStatus::witness ? 2 : 3;
    });
    std::uint64_t runs = 0;
    for (std::size_t i = 0; i < level.size(); ++i) {
      res.nodes += nodes[i];
      runs += status[i] != 0 ? 1 : 0;
    }
    res.certified.push_back(runs);
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (status[i] == 3) throw ResourceLimit("bitrade search hit the node cap during the minimality search");
      if (status[i] == 1) {
        res.set = PointSet(sig, level[i]);
        return res;
      }
    }
    if (s == size_bound) break;

    // Extend every representative by one point and keep canonical forms.
    std::vector<std::vector<std::vector<Index>>> grown(level.size());
    detail::parallel_for(level.size(), opts.jobs, [&](std::size_t i) {
      const auto& base = level[i];
      for (Index p = 0; p < sig.size(); ++p) {
        if (std::binary_search(base.begin(), base.end(), p)) continue;
        std::vector<Index> ext = base;
        ext.insert(std::upper_bound(ext.begin(), ext.end(), p), p);
        grown[i].push_back(canonical_form(PointSet(sig, std::move(ext))).indices());
      }
    });
    std::set<std::vector<Index>> next;
    for (auto& g : grown)
      for (auto& v : g) next.insert(std::move(v));
    level.assign(next.begin(), next.end());
  }
  return res;
}

struct MinTestingResult {
  std::optional<PointSet> set;
  std::uint64_t members = 0;
  std::uint64_t subsets = 0;  // subsets examined
};

/// Lexicographically first smallest T (size <= size_bound) whose restriction map is
/// injective on the enumerated family. Parallel over first-element strata.
inline MinTestingResult min_testing_search(const FreqParams& p, int size_bound, const MinSearchOptions& opts = {}) {
  p.validate();
  const GridSig sig = p.sig();
  detail::require(size_bound >= 0 && static_cast<Index>(size_bound) <= sig.size(), "size bound out of range");
  std::uint64_t total = 0;
  for (int s = 0; s <= size_bound && total <= opts.subset_budget; ++s) {
    if (detail::binomial_exceeds(sig.size(), s, opts.subset_budget)) total = opts.subset_budget + 1;
    else total += binomial(static_cast<std::int64_t>(sig.size()), s);
  }
  if (total > opts.subset_budget) throw ResourceLimit("subset space exceeds the search budget");
  const auto family = enumerate_cubes(p, CubeSearchOptions{opts.search.node_cap, 1'000'000});
  MinTestingResult res;
  res.members = family.size();

  const std::size_t cells = sig.size();
  for (int s = 0; s <= size_bound; ++s) {
    if (s == 0) {
      ++res.subsets;
      if (family.size() <= 1) {
        res.set = PointSet(sig, {});
        return res;
      }
      continue;
    }
    std::vector<std::optional<std::vector<Index>>> hit(cells);
    std::vector<std::uint64_t> examined(cells, 0);
    detail::parallel_for(cells, opts.jobs, [&](std::size_t first) {
      if (cells - first < static_cast<std::size_t>(s)) return;
      std::vector<Index> rest;
      for (Index c = first + 1; c < cells; ++c) rest.push_back(c);
      std::set<std::vector<Value>> keys;
      detail::for_each_combination(static_cast<int>(rest.size()), s - 1, [&](const std::vector<int>& pick) {
        ++examined[first];
        keys.clear();
        for (const auto& f : family) {
          std::vector<Value> key{f[first]};
          for (int j : pick) key.push_back(f[rest[j]]);
          if (!keys.insert(std::move(key)).second) return true;
        }
        std::vector<Index> t{first};
        for (int j : pick) t.push_back(rest[j]);
        hit[first] = std::move(t);
        return false;
      });
    });
    for (auto e : examined) res.subsets += e;
    for (auto& h : hit)
      if (h) {
        res.set = PointSet(sig, std::move(*h));
        return res;
      }
  }
  return res;
}

}  // namespace freqcube

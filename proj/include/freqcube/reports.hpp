#pragma once

// Cardinality and counting-bound reports. Every number carries a source tag:
// "constructed" (size of a set actually built), "enumerated", or "formula".

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "freqcube/io.hpp"
#include "freqcube/pascal.hpp"
#include "freqcube/testsets.hpp"

namespace freqcube {

struct ReportField {
  std::string name;
  io::json value;
  std::string source;
  std::string note;
};

struct Report {
  std::string title;
  std::vector<ReportField> fields;

  const ReportField& field(const std::string& name) const {
    for (const auto& f : fields)
      if (f.name == name) return f;
    throw InvalidArgument("report has no field " + name);
  }

  io::json to_json() const {
    io::json j;
    j["report"] = title;
    io::json fs = io::json::array();
    for (const auto& f : fields) {
      io::json e;
      e["name"] = f.name;
      e["value"] = f.value;
      e["source"] = f.source;
      if (!f.note.empty()) e["note"] = f.note;
      fs.push_back(std::move(e));
    }
    j["fields"] = std::move(fs);
    return j;
  }

  std::string to_table() const {
    std::size_t w = 4;
    for (const auto& f : fields) w = std::max(w, f.name.size());
    std::ostringstream os;
    os << title << '\n';
    for (const auto& f : fields) {
      os << "  " << std::left << std::setw(static_cast<int>(w)) << f.name << "  " << std::setw(14) << f.value.dump()
         << "  [" << f.source << "]";
      if (!f.note.empty()) os << "  " << f.note;
      os << '\n';
    }
    return os.str();
  }
};

namespace detail {

inline double log_base(double base, double x) { return std::log(x) / std::log(base); }

// Sizes are built explicitly only when the grid is small enough to materialize.
inline bool buildable(int q, int n) {
  return std::pow(static_cast<double>(q), n) <= static_cast<double>(Index{1} << 22);
}

inline std::uint64_t main_theorem_size_formula(int q, int n) {
  const auto block = ipow(static_cast<std::uint64_t>(q - 1), 3) - 1;
  return detail::checked_mul(ipow(block, static_cast<unsigned>(n / 3)),
                             ipow(static_cast<std::uint64_t>(q - 1), static_cast<unsigned>(n % 3)));
}

}  // namespace detail

/// Trivial testing-set size sigma(q,n,n-k) against the best construction available
/// for (q, n, k).
inline Report cardinality_report(int q, int n, int k) {
  detail::require(q >= 2 && q <= kMaxAlphabet && n >= 1, "need 2 <= q <= 255 and n >= 1");
  detail::require(k >= 1 && k <= n, "face dimension k must lie in [1, n]");
  Report r;
  r.title = "cardinality q=" + std::to_string(q) + " n=" + std::to_string(n) + " k=" + std::to_string(k);
  const std::uint64_t trivial = sigma(q, n, n - k);
  r.fields.push_back({"trivial_size", trivial, "formula", "sigma(q,n,n-k): points of weight > n-k"});

  std::uint64_t constructed = trivial;
  std::string construction = "baseline";
  std::string source = "formula";
  const bool build = detail::buildable(q, n);
  if (q == 2 && k >= 2) {
    construction = k == 2 ? "hamming affine set" : (k == n ? "all nonzero points" : "recursive step-up");
    if (build) {
      constructed = q22_recursive_set(n, k).size();
      source = "constructed";
    } else {
      constructed = static_cast<std::uint64_t>(q22_cardinality_formula(n, k));
    }
    r.fields.push_back({"formula_size", q22_cardinality_formula(n, k), "formula", "double-sum closed form; log read as log2"});
  } else if (k == 1 && q >= 3) {
    construction = "product of three-dimensional blocks";
    if (build) {
      constructed = main_theorem_set(q, n).size();
      source = "constructed";
    } else {
      constructed = detail::main_theorem_size_formula(q, n);
    }
    r.fields.push_back({"formula_size", detail::main_theorem_size_formula(q, n), "formula", "((q-1)^3-1)^m (q-1)^t, n = 3m+t"});
  } else if (q >= 3 && k >= 2) {
    construction = "binary recursive set lifted to [q]^n";
    const auto binary = static_cast<std::uint64_t>(q22_cardinality_formula(n, k));
    const std::uint64_t lifted = binary + trivial - sigma(2, n, n - k);
    if (build) {
      constructed = lift_set(q22_recursive_set(n, k), q, k).size();
      source = "constructed";
    } else {
      constructed = lifted;
    }
    r.fields.push_back({"formula_size", lifted, "formula", "binary size + sigma(q,n,n-k) - sigma(2,n,n-k)"});
  } else if (build) {
    constructed = baseline_set(q, n, k).size();
    source = "constructed";
  }
  r.fields.push_back({"constructed_size", constructed, source, construction});
  r.fields.push_back({"delta", static_cast<std::int64_t>(trivial) - static_cast<std::int64_t>(constructed), source,
                      "trivial_size - constructed_size"});
  if (q == 2 && k >= 2)
    r.fields.push_back({"delta_formula", q22_delta_formula(n, k), "formula", "closed-form difference; log read as log2"});
  if (k == 1 && q >= 3) {
    const double exponent = detail::log_base(q - 1, static_cast<double>(constructed));
    r.fields.push_back({"log_q1_size", exponent, source, "log_{q-1}|T|; count <= m^|T| vs trivial exponent n"});
    r.fields.push_back({"trivial_log_q1_size", n, "formula", "log_{q-1} (q-1)^n"});
  }
  return r;
}

/// |T| from the product construction, alpha_n = log_{q-1}|T| / n, and the limit
/// (1/3) log_{q-1}((q-1)^3 - 1).
inline Report report_bound(int q, int n) {
  detail::require(q >= 3, "the counting bound report needs q >= 3");
  detail::require(n >= 1, "dimension n must be >= 1");
  Report r;
  r.title = "bound q=" + std::to_string(q) + " n=" + std::to_string(n);
  std::uint64_t size = 0;
  std::string source;
  if (detail::buildable(q, n)) {
    size = main_theorem_set(q, n).size();
    source = "constructed";
  } else {
    size = detail::main_theorem_size_formula(q, n);
    source = "formula";
  }
  const double exponent = detail::log_base(q - 1, static_cast<double>(size));
  const double limit = detail::log_base(q - 1, std::pow(q - 1.0, 3) - 1) / 3.0;
  r.fields.push_back({"testing_set_size", size, source, ""});
  r.fields.push_back({"trivial_size", ipow(static_cast<std::uint64_t>(q - 1), static_cast<unsigned>(n)), "formula", "(q-1)^n"});
  r.fields.push_back({"alpha_n_times_n", exponent, source, "log_{q-1}|T|"});
  r.fields.push_back({"alpha_n", exponent / n, source, ""});
  r.fields.push_back({"alpha_limit", limit, "formula", "(1/3) log_{q-1}((q-1)^3-1)"});
  return r;
}

}  // namespace freqcube

// freqcube: command-line front end for the frequency-cube toolkit.
//
// Exit codes: 0 success, 1 certified negative verdict, 2 validation error,
// 3 resource cap reached or result inconclusive.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "freqcube/freqcube.hpp"

namespace fc = freqcube;
using fc::io::json;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInvalid = 2;
constexpr int kInconclusive = 3;

struct Common {
  bool pretty = false;
  unsigned jobs = 0;
};

// Flattens a JSON document into "key  value" rows.
void table_rows(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) table_rows(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
  } else {
    rows.emplace_back(prefix, j.dump());
  }
}

std::string to_table(const json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  table_rows(j, "", rows);
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.first.size());
  std::string out;
  for (const auto& [k, v] : rows) out += k + std::string(w - k.size() + 2, ' ') + v + '\n';
  return out;
}

void emit(const Common& c, const json& doc, const std::string& extra_text = {}) {
  if (c.pretty) {
    std::cout << to_table(doc);
    if (!extra_text.empty()) std::cout << extra_text;
  } else {
    std::cout << doc.dump(2) << '\n';
  }
}

fc::FreqParams params_from(int q, int n, int k, const std::vector<int>& lambdas) {
  fc::FreqParams p;
  p.q = q;
  p.n = n;
  p.k = k;
  p.lambdas = lambdas;
  p.validate();
  return p;
}

// The node cap comes from FREQCUBE_NODE_CAP; a malformed value is a usage error.
std::uint64_t node_cap_from_env() {
  const char* env = std::getenv("FREQCUBE_NODE_CAP");
  if (!env || !*env) return fc::kDefaultNodeCap;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (!end || *end != '\0' || v == 0 || env[0] == '-')
    throw fc::InvalidArgument("FREQCUBE_NODE_CAP must be a positive integer");
  return v;
}

fc::PointSet load_set(const std::string& path) { return fc::io::point_set_from_json(fc::io::read_json_file(path)); }

// ---------------------------------------------------------------------------
// construct

struct ConstructArgs {
  std::string family;
  std::string spec;
  std::optional<int> q, n, k;
  bool affine = false;
  std::string inner, second, upper, lower;
};

fc::PointSet build_family(const ConstructArgs& a) {
  auto need = [&](const std::optional<int>& v, const char* name) {
    if (!v) throw fc::InvalidArgument("family " + a.family + " needs --" + name);
    return *v;
  };
  const std::string& f = a.family;
  if (f == "baseline") return fc::baseline_set(need(a.q, "q"), need(a.n, "n"), need(a.k, "k"));
  if (f == "three-cube") return fc::three_cube_set();
  if (f == "three-cube-minimal") return fc::three_cube_minimal_set();
  if (f == "hamming") return fc::hamming_testing_set(need(a.n, "n"), a.affine);
  if (f == "greedy") return fc::greedy_code_testing_set(need(a.n, "n"), need(a.k, "k"), a.affine);
  if (f == "q22-recursive") return fc::q22_recursive_set(need(a.n, "n"), need(a.k, "k"));
  if (f == "main-theorem") return fc::main_theorem_set(need(a.q, "q"), need(a.n, "n"));
  if (f == "lift") {
    if (a.inner.empty()) throw fc::InvalidArgument("family lift needs --inner");
    return fc::lift_set(load_set(a.inner), need(a.q, "q"), need(a.k, "k"));
  }
  if (f == "product") {
    if (a.inner.empty() || a.second.empty()) throw fc::InvalidArgument("family product needs --inner and --second");
    return fc::product_set(load_set(a.inner), load_set(a.second));
  }
  if (f == "step-up") {
    if (a.upper.empty() || a.lower.empty()) throw fc::InvalidArgument("family step-up needs --upper and --lower");
    return fc::step_up_set(load_set(a.upper), load_set(a.lower), need(a.k, "k"));
  }
  throw fc::InvalidArgument("unknown family " + f);
}

// A construction spec file holds the same keys as the flags, e.g.
// {"family":"baseline","q":3,"n":2,"k":1}.
void merge_spec(ConstructArgs& a) {
  const json j = fc::io::read_json_file(a.spec);
  fc::detail::require(j.is_object(), "construction spec must be a JSON object");
  static const std::set<std::string> known{"family", "q", "n", "k", "affine", "inner", "second", "upper", "lower"};
  for (const auto& [key, v] : j.items())
    fc::detail::require(known.contains(key), "unknown key \"" + key + "\" in construction spec");
  auto str = [&](const char* key, std::string& dst) {
    if (!j.contains(key)) return;
    fc::detail::require(j[key].is_string(), std::string("\"") + key + "\" must be a string");
    if (dst.empty()) dst = j[key].get<std::string>();
  };
  auto num = [&](const char* key, std::optional<int>& dst) {
    if (!j.contains(key)) return;
    fc::detail::require(j[key].is_number_integer(), std::string("\"") + key + "\" must be an integer");
    if (!dst) dst = j[key].get<int>();
  };
  str("family", a.family);
  str("inner", a.inner);
  str("second", a.second);
  str("upper", a.upper);
  str("lower", a.lower);
  num("q", a.q);
  num("n", a.n);
  num("k", a.k);
  if (j.contains("affine")) {
    fc::detail::require(j["affine"].is_boolean(), "\"affine\" must be a boolean");
    a.affine = a.affine || j["affine"].get<bool>();
  }
}

int run_construct(const Common& c, ConstructArgs a) {
  if (!a.spec.empty()) merge_spec(a);
  if (a.family.empty()) throw fc::InvalidArgument("construct needs --family or --spec");
  const fc::PointSet t = build_family(a);
  json doc = fc::io::to_json(t);
  doc["family"] = a.family;
  doc["size"] = t.size();
  emit(c, doc, t.sig().n() <= 3 ? fc::render_grid(t) : std::string{});
  return kOk;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyArgs {
  std::string mode;
  std::string set;
  int k = 1;
  std::vector<int> lambdas;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::uint64_t member_cap = 1'000'000;
  std::string cls = "affine";
};

int verdict_code(fc::Verdict v) {
  switch (v) {
    case fc::Verdict::holds: return kOk;
    case fc::Verdict::fails: return kNegative;
    case fc::Verdict::inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

int run_certify(const Common& c, const CertifyArgs& a, std::uint64_t cap) {
  const fc::PointSet t = load_set(a.set);
  if (a.mode == "supertesting") {
    if (a.seed || a.samples) throw fc::InvalidArgument("supertesting certification is exhaustive; --seed/--samples do not apply");
    const auto cert = fc::certify_supertesting(t, a.k, fc::SearchOptions{cap});
    emit(c, fc::io::to_json(cert));
    return verdict_code(cert.verdict);
  }
  if (a.mode == "testing") {
    if (a.samples && !a.seed) throw fc::InvalidArgument("sampling needs an explicit --seed");
    const auto p = params_from(t.sig().q(), t.sig().n(), a.k, a.lambdas);
    fc::TestingCertOptions o;
    o.member_cap = a.member_cap;
    o.node_cap = cap;
    o.seed = a.seed;
    if (a.samples) o.samples = *a.samples;
    const auto cert = fc::certify_testing_by_enumeration(t, p, o);
    emit(c, fc::io::to_json(cert));
    return verdict_code(cert.verdict);
  }
  if (a.mode == "affine") {
    if (t.sig().q() != 2) throw fc::InvalidArgument("affine mode needs a binary point set");
    fc::FunctionClass cls;
    if (a.cls == "affine") cls = fc::FunctionClass::affine;
    else if (a.cls == "linear") cls = fc::FunctionClass::linear;
    else throw fc::InvalidArgument("--class must be linear or affine");
    const bool ok = fc::is_testing_for_affine(t, a.k, cls);
    json doc;
    doc["kind"] = "affine-testing";
    doc["params"] = "n=" + std::to_string(t.sig().n()) + " k=" + std::to_string(a.k) + " class=" + a.cls;
    doc["verdict"] = ok ? "holds" : "fails";
    doc["set"] = fc::io::to_json(t);
    doc["tool_version"] = fc::kToolVersion;
    emit(c, doc);
    return ok ? kOk : kNegative;
  }
  throw fc::InvalidArgument("--mode must be supertesting, testing, or affine");
}

// ---------------------------------------------------------------------------
// reconstruct

struct ReconstructArgs {
  std::string partial;
  int k = 1;
  std::vector<int> lambdas;
  std::string method = "csp";
};

int run_reconstruct(const Common& c, const ReconstructArgs& a, std::uint64_t cap) {
  const fc::PartialCube pc = fc::io::partial_from_json(fc::io::read_json_file(a.partial));
  const auto p = params_from(pc.sig.q(), pc.sig.n(), a.k, a.lambdas);
  fc::detail::require(pc.m == p.m(), "\"m\" in the partial cube differs from the number of lambdas");
  json doc;
  doc["method"] = a.method;
  if (a.method == "baseline") {
    const auto f = fc::reconstruct_baseline(pc, p);
    doc["cube"] = fc::io::to_json(f, p.m());
    doc["unique"] = true;
  } else if (a.method == "csp") {
    const auto r = fc::reconstruct_csp(pc, pc.domain(), p, fc::CubeSearchOptions{cap});
    doc["cube"] = fc::io::to_json(r.cube, p.m());
    doc["unique"] = r.unique;
    doc["nodes"] = r.nodes;
    emit(c, doc, p.n <= 3 ? fc::render_grid(r.cube) : std::string{});
    return r.unique ? kOk : kNegative;
  } else {
    throw fc::InvalidArgument("--method must be baseline or csp");
  }
  emit(c, doc);
  return kOk;
}

// ---------------------------------------------------------------------------
// count

struct GridArgs {
  int q = 2;
  int n = 1;
  int k = 1;
  std::vector<int> lambdas;
};

int run_count(const Common& c, const GridArgs& a, std::uint64_t cap) {
  const auto p = params_from(a.q, a.n, a.k, a.lambdas);
  const std::uint64_t count = fc::count_cubes(p, fc::CubeSearchOptions{cap});
  json doc;
  doc["count"] = count;
  doc["params"] = p.to_string();
  doc["source"] = "enumerated";
  emit(c, doc);
  return kOk;
}

// ---------------------------------------------------------------------------
// search-min

struct SearchMinArgs {
  GridArgs grid;
  int max_size = 0;
  bool no_filters = false;
  bool testing = false;
};

int run_search_min(const Common& c, const SearchMinArgs& a, std::uint64_t cap) {
  fc::MinSearchOptions o;
  o.jobs = c.jobs;
  o.proof_filters = !a.no_filters;
  o.search.node_cap = cap;
  json doc;
  doc["q"] = a.grid.q;
  doc["n"] = a.grid.n;
  doc["k"] = a.grid.k;
  doc["max_size"] = a.max_size;
  if (a.testing) {
    const auto p = params_from(a.grid.q, a.grid.n, a.grid.k, a.grid.lambdas);
    const auto r = fc::min_testing_search(p, a.max_size, o);
    doc["kind"] = "testing";
    doc["params"] = p.to_string();
    doc["members"] = r.members;
    doc["subsets_examined"] = r.subsets;
    doc["found"] = r.set.has_value();
    if (r.set) {
      doc["size"] = r.set->size();
      doc["set"] = fc::io::to_json(*r.set);
    }
    emit(c, doc);
    return r.set ? kOk : kNegative;
  }
  if (!a.grid.lambdas.empty()) throw fc::InvalidArgument("--lambdas applies only with --testing");
  const auto r = fc::min_supertesting_search(a.grid.q, a.grid.n, a.grid.k, a.max_size, o);
  doc["kind"] = "supertesting";
  doc["found"] = r.set.has_value();
  doc["orbits_per_size"] = r.orbits;
  doc["certified_per_size"] = r.certified;
  doc["nodes"] = r.nodes;
  if (r.set) {
    doc["size"] = r.set->size();
    doc["set"] = fc::io::to_json(*r.set);
  }
  emit(c, doc, r.set && a.grid.n <= 3 ? fc::render_grid(*r.set) : std::string{});
  return r.set ? kOk : kNegative;
}

// ---------------------------------------------------------------------------
// bounds, dim, report

struct BoundsArgs {
  int n = 1;
  int k = 1;
  bool affine = false;
  bool greedy = false;
};

int run_bounds(const Common& c, const BoundsArgs& a) {
  const auto cls = a.affine ? fc::FunctionClass::affine : fc::FunctionClass::linear;
  const auto b = fc::bounds_min_testing(a.n, a.k, cls);
  json doc;
  doc["n"] = a.n;
  doc["k"] = a.k;
  doc["class"] = a.affine ? "affine" : "linear";
  doc["lower"] = b.lower;
  doc["upper"] = b.upper;
  doc["source"] = "formula";
  if (a.k == 1) {
    const auto code = fc::b_n_3(a.n);
    doc["log2_b_n_3"] = code.exponent;
    if (code.value) doc["b_n_3"] = *code.value;
  }
  if (a.greedy) {
    const auto t = fc::greedy_code_testing_set(a.n, a.k, a.affine);
    doc["greedy_size"] = t.size();
    doc["greedy_source"] = "constructed";
  }
  emit(c, doc);
  return kOk;
}

int run_dim(const Common& c, const GridArgs& a) {
  const int by_basis = fc::lk_dimension(a.q, a.n, a.k);
  const int by_faces = fc::face_system_nullity(a.q, a.n, a.k);
  const auto sigma = fc::sigma(a.q, a.n, a.n - a.k);
  json doc;
  doc["q"] = a.q;
  doc["n"] = a.n;
  doc["k"] = a.k;
  doc["dimension_basis_rank"] = by_basis;
  doc["dimension_face_nullity"] = by_faces;
  doc["sigma"] = sigma;
  const bool agree = by_basis == by_faces && static_cast<std::uint64_t>(by_basis) == sigma;
  doc["agree"] = agree;
  emit(c, doc);
  return agree ? kOk : kNegative;
}

struct ReportArgs {
  std::string kind = "cardinality";
  int q = 2;
  int n = 1;
  std::optional<int> k;
};

int run_report(const Common& c, const ReportArgs& a) {
  fc::Report r;
  if (a.kind == "cardinality") {
    if (!a.k) throw fc::InvalidArgument("cardinality report needs --k");
    r = fc::cardinality_report(a.q, a.n, *a.k);
  } else if (a.kind == "bound") {
    if (a.k) throw fc::InvalidArgument("bound report takes no --k");
    r = fc::report_bound(a.q, a.n);
  } else {
    throw fc::InvalidArgument("--kind must be cardinality or bound");
  }
  if (c.pretty)
    std::cout << r.to_table();
  else
    std::cout << r.to_json().dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency hypercubes: testing sets, bitrades, and counting bounds"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may also follow the verb
  Common common;
  app.add_flag("--pretty", common.pretty, "Print a text table instead of JSON");
  app.add_option("--jobs", common.jobs, "Worker threads (default: available parallelism)")->check(CLI::PositiveNumber);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a point set");
  construct->add_option("--family", ca.family,
                        "baseline | three-cube | three-cube-minimal | hamming | greedy | q22-recursive | "
                        "main-theorem | lift | product | step-up");
  construct->add_option("--spec", ca.spec, "JSON file with the same keys as the flags")->check(CLI::ExistingFile);
  construct->add_option("--q", ca.q);
  construct->add_option("--n", ca.n);
  construct->add_option("--k", ca.k);
  construct->add_flag("--affine", ca.affine, "Affine variant (hamming, greedy)");
  construct->add_option("--inner", ca.inner, "Point-set file (lift, product)");
  construct->add_option("--second", ca.second, "Second factor file (product)");
  construct->add_option("--upper", ca.upper, "Upper set file (step-up)");
  construct->add_option("--lower", ca.lower, "Lower set file (step-up)");

  CertifyArgs cert;
  auto* certify = app.add_subcommand("certify", "Certify a point set");
  certify->add_option("--mode", cert.mode, "supertesting | testing | affine")->required();
  certify->add_option("--set", cert.set, "Point-set JSON file")->required()->check(CLI::ExistingFile);
  certify->add_option("--k", cert.k, "Face dimension")->required();
  certify->add_option("--lambdas", cert.lambdas, "Symbol frequencies (testing mode)")->delimiter(',');
  certify->add_option("--seed", cert.seed, "Seed; switches testing mode to sampling");
  certify->add_option("--samples", cert.samples, "Distinct members to sample (needs --seed)");
  certify->add_option("--member-cap", cert.member_cap, "Largest family enumerated exhaustively");
  certify->add_option("--class", cert.cls, "linear | affine (affine mode)");

  ReconstructArgs ra;
  auto* reconstruct = app.add_subcommand("reconstruct", "Recover a cube from its values on a testing set");
  reconstruct->add_option("--partial", ra.partial, "Partial-cube JSON file")->required()->check(CLI::ExistingFile);
  reconstruct->add_option("--k", ra.k)->required();
  reconstruct->add_option("--lambdas", ra.lambdas)->required()->delimiter(',');
  reconstruct->add_option("--method", ra.method, "csp | baseline");

  GridArgs cnt;
  auto* count = app.add_subcommand("count", "Count frequency cubes by exhaustive enumeration");
  count->add_option("--q", cnt.q)->required();
  count->add_option("--n", cnt.n)->required();
  count->add_option("--k", cnt.k)->required();
  count->add_option("--lambdas", cnt.lambdas)->required()->delimiter(',');

  SearchMinArgs sm;
  auto* search = app.add_subcommand("search-min", "Search for a smallest supertesting (or testing) set");
  search->add_option("--q", sm.grid.q)->required();
  search->add_option("--n", sm.grid.n)->required();
  search->add_option("--k", sm.grid.k)->required();
  search->add_option("--max-size", sm.max_size)->required();
  search->add_flag("--no-filters", sm.no_filters, "Disable the small-set pruning filters");
  search->add_flag("--testing", sm.testing, "Search testing sets for the family given by --lambdas");
  search->add_option("--lambdas", sm.grid.lambdas)->delimiter(',');

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Bounds on minimum testing sets for affine functions");
  bounds->add_option("--n", ba.n)->required();
  bounds->add_option("--k", ba.k)->required();
  bounds->add_flag("--affine", ba.affine);
  bounds->add_flag("--greedy", ba.greedy, "Also build the greedy code-based set");

  GridArgs da;
  auto* dim = app.add_subcommand("dim", "Dimension of the zero-face-sum space, computed two ways");
  dim->add_option("--q", da.q)->required();
  dim->add_option("--n", da.n)->required();
  dim->add_option("--k", da.k)->required();

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Cardinality and counting-bound reports");
  report->add_option("--kind", rep.kind, "cardinality | bound");
  report->add_option("--q", rep.q)->required();
  report->add_option("--n", rep.n)->required();
  report->add_option("--k", rep.k);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }

  try {
    const std::uint64_t cap = node_cap_from_env();
    if (*construct) return run_construct(common, ca);
    if (*certify) return run_certify(common, cert, cap);
    if (*reconstruct) return run_reconstruct(common, ra, cap);
    if (*count) return run_count(common, cnt, cap);
    if (*search) return run_search_min(common, sm, cap);
    if (*bounds) return run_bounds(common, ba);
    if (*dim) return run_dim(common, da);
    if (*report) return run_report(common, rep);
  } catch (const fc::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kInconclusive;
  } catch (const fc::Inconsistent& e) {
    std::cerr << "negative: " << e.what() << '\n';
    return kNegative;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const json::exception& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}

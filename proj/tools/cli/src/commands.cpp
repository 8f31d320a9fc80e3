#include "xprod_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "xprod/ckalg.hpp"
#include "xprod/crossalg.hpp"
#include "xprod/dynsys_ext.hpp"
#include "xprod/errors.hpp"
#include "xprod/funalg.hpp"
#include "xprod/regrep.hpp"
#include "xprod_cli/cache.hpp"
#include "xprod_cli/expression.hpp"

namespace xprod::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kDefaultTolerance = 1e-9;
constexpr double kDisplayChop = 1e-13;
constexpr int kEvalLevelCap = 24;
constexpr double kEvalEntryBudget = 1e6;

double chop(double v) { return std::abs(v) < kDisplayChop ? 0.0 : v; }

std::string fmt_entry(Complex z) { return format_complex({chop(z.real()), chop(z.imag())}); }

std::string fmt_matrix(const Matrix& m) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) s += ", ";
    s += "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) s += ", ";
      s += fmt_entry(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

/// 1x1 blocks print as a flat list, larger blocks as a list of matrices.
std::string fmt_element(const BlockElement& x) {
  const bool scalar = std::all_of(x.blocks().begin(), x.blocks().end(),
                                  [](const Matrix& b) { return b.rows() == 1 && b.cols() == 1; });
  if (scalar) return format_list(x.blocks(), [](const Matrix& b) { return fmt_entry(b(0, 0)); });
  return format_list(x.blocks(), [](const Matrix& b) { return fmt_matrix(b); });
}

std::string fmt_subset(const funalg::PointSet& X, const funalg::PointSubset& s) {
  return format_list(s, [&](funalg::PointIndex i) { return X.label(i); });
}

std::string fmt_point(const funalg::PointSet& X, const dynsys::OrbitPoint& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.entries.size(); ++i) {
    if (i) s += ",";
    s += X.label(p.entries[i]);
  }
  return s + (p.terminated ? ")" : ",...)");
}

std::string fmt_reals(const std::vector<double>& v) {
  return format_list(v, [](double d) { return format_real(d); });
}

template <class T>
std::string fmt_ints(const std::vector<T>& v) {
  return format_list(v, [](T i) { return std::to_string(i); });
}

double resolve_tolerance(const SystemSpec& spec, const GlobalOptions& opts) {
  const double t = opts.tolerance.value_or(spec.tolerance.value_or(kDefaultTolerance));
  if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("tolerance must be a positive number");
  return t;
}

Report header(const char* command, const SystemSpec& spec, const GlobalOptions& opts) {
  Report r;
  r.set("command", command);
  r.set("kind", spec.kind == SystemKind::Dynsys ? "dynsys" : "ck");
  r.set("seed", std::to_string(opts.seed));
  r.set("tolerance", resolve_tolerance(spec, opts));
  return r;
}

void describe_system(Report& r, const SystemSpec& spec) {
  if (spec.kind == SystemKind::Dynsys) {
    r.set("points", format_list(spec.labels, [](const std::string& s) { return s; }));
    r.set("map", format_list(spec.pairs, [](const auto& p) { return p.first + "->" + p.second; }));
  } else {
    r.set("matrix", format_list(spec.rows, [](const std::vector<int>& row) { return fmt_ints(row); }));
  }
}

int resolve_depth(std::optional<int> flag, const SystemSpec& spec, int cap) {
  const int depth = flag.value_or(spec.depth.value_or(kDefaultDepth));
  if (depth < 0) throw ValidationError("depth must be non-negative");
  if (depth > cap)
    throw ResourceError("depth " + std::to_string(depth) + " exceeds the cap " + std::to_string(cap));
  return depth;
}

struct CacheOutcome {
  std::string file = "none";
  std::optional<bool> verified;
};

/// Writes the cache unless an identical one is present, then reloads and
/// compares against the fresh value.
template <class T, class Parse>
CacheOutcome sync_cache(const std::optional<fs::path>& dir_flag, const std::string& prefix, const std::string& key_text,
                        const T& fresh, Parse parse) {
  CacheOutcome out;
  const auto dir = resolve_cache_dir(dir_flag);
  if (!dir) return out;
  std::error_code ec;
  fs::create_directories(*dir, ec);
  if (ec) throw ResourceError("cannot create cache directory '" + dir->string() + "': " + ec.message());
  const std::string name = prefix + "-" + cache_key(key_text) + ".txt";
  const fs::path path = *dir / name;
  CacheLock lock(path);
  bool current = false;
  if (auto text = read_file(path)) {
    try {
      current = parse(*text) == fresh;
    } catch (const ValidationError&) {
      current = false;
    }
  }
  if (!current) write_atomic(path, serialize(fresh));
  const auto reread = read_file(path);
  out.file = name;
  out.verified = reread && parse(*reread) == fresh;
  return out;
}

void report_cache(Report& r, const CacheOutcome& c) {
  r.set("cache_file", c.file);
  if (c.verified) r.set("cache_verified", *c.verified);
}

/// Orbit points at each depth, refusing to enumerate past kOrbitGuard.
std::vector<std::vector<dynsys::OrbitPoint>> enumerate_orbits(const dynsys::ReversibleExtension& ext, int depth) {
  std::size_t branching = 1;
  for (const auto& f : ext.map().fibers()) branching = std::max(branching, f.size());
  std::vector<std::vector<dynsys::OrbitPoint>> out;
  for (int n = 0; n <= depth; ++n) {
    if (!out.empty() && out.back().size() * branching > kOrbitGuard)
      throw ResourceError("orbit enumeration at depth " + std::to_string(n) + " exceeds " +
                          std::to_string(kOrbitGuard) + " points");
    out.push_back(ext.orbit_points(n));
  }
  return out;
}

void report_extension_counts(Report& r, const std::string& prefix,
                             const std::vector<std::vector<dynsys::OrbitPoint>>& orbits) {
  std::vector<std::size_t> term, cyl;
  for (const auto& pts : orbits) {
    const std::size_t t = dynsys::count_terminated(pts);
    term.push_back(t);
    cyl.push_back(pts.size() - t);
  }
  r.set(prefix + "terminated", fmt_ints(term));
  r.set(prefix + "cylinders", fmt_ints(cyl));
}

std::vector<std::size_t> phi_fibers(std::size_t n, const std::vector<dynsys::OrbitPoint>& pts) {
  std::vector<std::size_t> sizes(n, 0);
  for (const auto& p : pts) ++sizes[dynsys::ReversibleExtension::projection_Phi(p)];
  return sizes;
}

bool all_ones(const std::vector<std::size_t>& v) {
  return std::all_of(v.begin(), v.end(), [](std::size_t s) { return s == 1; });
}

Report analyze_dynsys(const SystemSpec& spec, const GlobalOptions& opts) {
  Report r = header("analyze", spec, opts);
  describe_system(r, spec);
  const auto X = spec.point_set();
  const auto gamma = spec.partial_map();
  const int depth = resolve_depth(std::nullopt, spec, 24);
  r.set("injective", gamma.injective());
  r.set("domain", fmt_subset(X, gamma.domain()));
  r.set("image", fmt_subset(X, gamma.image()));

  const auto rep = funalg::complete_transfer(X, gamma);
  r.set("classification", funalg::to_string(rep.classification));
  r.set("is_transfer", rep.is_transfer);
  r.set("is_nondegenerate", rep.is_nondegenerate);
  r.set("is_complete", rep.is_complete);
  r.set("hereditary_range", rep.is_hereditary_range);
  r.set("projection_P", rep.projection_P ? fmt_subset(X, funalg::support(*rep.projection_P)) : "none");
  r.set("reason", rep.reason);
  r.set("delta", fmt_matrix(rep.delta));
  if (rep.transfer) {
    const auto nd = funalg::check_nondegenerate(rep.delta, *rep.transfer);
    r.set("transfer", fmt_matrix(*rep.transfer));
    r.set("nondegenerate.conditional_expectation", nd.conditional_expectation);
    r.set("nondegenerate.delta_fixed", nd.delta_fixed);
    r.set("nondegenerate.unit_condition", nd.unit_condition);
  }
  r.set("depth", depth);
  if (rep.is_complete) {
    const auto pa = funalg::partial_automorphism_data(X, gamma, depth);
    for (const auto& ideal : pa.ideals) {
      r.set("ideals.D_" + std::to_string(ideal.n), fmt_subset(X, ideal.positive));
      r.set("ideals.D_-" + std::to_string(ideal.n), fmt_subset(X, ideal.negative));
    }
    r.set("theta.source", fmt_subset(X, pa.theta_domains.first));
    r.set("theta.target", fmt_subset(X, pa.theta_domains.second));
    r.set("delta_one_central", pa.delta_one_central);
    r.set("delta_star_multiplicative", pa.delta_star_multiplicative);
  }
  const dynsys::ReversibleExtension ext(X, gamma);
  const auto orbits = enumerate_orbits(ext, depth);
  report_extension_counts(r, "extension.", orbits);
  r.set("extension.phi_bijective", all_ones(phi_fibers(X.size(), orbits.back())));
  return r;
}

Report analyze_ck(const SystemSpec& spec, const GlobalOptions& opts) {
  Report r = header("analyze", spec, opts);
  const double tolerance = resolve_tolerance(spec, opts);
  describe_system(r, spec);
  const auto A = spec.matrix();
  const int depth = resolve_depth(std::nullopt, spec, ck::kDefaultDepthCap);
  if (depth < 1) throw ValidationError("ck analysis needs depth >= 1");
  const auto spectral = ck::spectral_coeffs(A);
  r.set("symbols", A.size());
  r.set("gamma", fmt_ints(spectral.gamma));
  r.set("gamma_perfect_squares", spectral.perfect_squares());
  r.set("depth", depth);

  auto af = std::make_shared<const ck::AFStructure>(A, depth);
  std::vector<std::size_t> counts;
  for (int k = 0; k <= depth; ++k) counts.push_back(ck::admissible_words(A, k).size());
  r.set("words", fmt_ints(counts));
  for (int k = 0; k <= depth; ++k) r.set("block_dims.level_" + std::to_string(k), fmt_ints(af->block_dims(k)));

  const double iso = ck::verify_isometry(A, depth);
  r.set("isometry_residual", iso);
  r.set("isometry_ok", iso <= tolerance);

  const auto rel = ck::check_ck_relations(A, depth);
  r.set("relations.ranges_orthogonal", rel.ranges_orthogonal);
  r.set("relations.support_relation", rel.support_relation);
  r.set("relations.word_orthogonality", rel.word_orthogonality);
  r.set("relations.word_ranges_orthogonal", rel.word_ranges_orthogonal);
  r.set("relations.partition_of_unity", rel.partition_of_unity);
  r.set("relations.inclusions", rel.inclusions);
  r.set("relations.commutation", rel.commutation);
  r.set("relations.delta_consistency_residual", rel.delta_consistency_residual);
  r.set("relations.checks", rel.checks);
  r.set("relations.all_pass", rel.all_pass() && rel.delta_consistency_residual <= tolerance);

  const std::string system = spec.canonical() + ";levels=" + std::to_string(depth);
  report_cache(r, sync_cache(opts.cache_dir, "af", system, build_af_cache(*af, system), parse_af_cache));
  return r;
}

/// Highest level <= kEvalLevelCap whose blocks hold at most kEvalEntryBudget
/// entries in total, so the norm sequence can climb past the window.
int affordable_level(const ck::CKMatrix& A) {
  const int n = A.size();
  std::vector<double> ends(static_cast<std::size_t>(n), 1.0);
  int level = 0;
  for (int k = 1; k <= kEvalLevelCap; ++k) {
    double entries = 0.0;
    for (double c : ends) entries += c * c;
    if (entries > kEvalEntryBudget) break;
    level = k;
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < n; ++r)
        if (A(i, r)) next[static_cast<std::size_t>(r)] += ends[static_cast<std::size_t>(i)];
    ends = std::move(next);
  }
  return level;
}

std::vector<std::shared_ptr<const Functional>> select_functionals(const Backend& backend, const std::string& sel) {
  auto all = backend.functionals();
  if (sel == "all") return all;
  for (const auto& f : all)
    if (f->name() == sel) return {f};
  std::string names;
  for (const auto& f : all) names += (names.empty() ? "" : ", ") + f->name();
  throw ValidationError("unknown functional '" + sel + "' (available: all, " + names + ")");
}

}  // namespace

Report cmd_analyze(const SystemSpec& spec, const GlobalOptions& opts) {
  return spec.kind == SystemKind::Dynsys ? analyze_dynsys(spec, opts) : analyze_ck(spec, opts);
}

Report cmd_eval(const SystemSpec& spec, const EvalOptions& eval, const GlobalOptions& opts) {
  Report r = header("eval", spec, opts);
  const double tolerance = resolve_tolerance(spec, opts);
  describe_system(r, spec);
  const int window = eval.window.value_or(spec.window.value_or(kDefaultWindow));
  if (window < 1) throw ValidationError("window must be >= 1");
  if (eval.norm_iters < 1) throw ValidationError("--norm-iters must be >= 1");

  int coeff_level = 0;
  BackendPtr backend;
  if (spec.kind == SystemKind::Dynsys) {
    const auto X = spec.point_set();
    const auto gamma = spec.partial_map();
    const auto rep = funalg::complete_transfer(X, gamma);
    if (!rep.is_complete)
      throw ValidationError(std::string("system is classified ") + funalg::to_string(rep.classification) +
                            " and has no complete transfer operator; extend the system first");
    backend = std::make_shared<funalg::FunBackend>(X, gamma);
  } else {
    coeff_level = spec.level.value_or(kDefaultCKCoeffLevel);
    if (coeff_level < 0) throw ValidationError("level must be non-negative");
    const auto A = spec.matrix();
    const int levels = std::max(regrep::required_level(window, coeff_level), affordable_level(A));
    backend = std::make_shared<ck::CKBackend>(A, levels);
  }
  const auto check = cross::backend_self_check(*backend, 50, opts.seed);
  r.set("backend", backend->name());
  r.set("self_check.transfer_residual", check.transfer_residual);
  r.set("self_check.completeness_residual", check.completeness_residual);
  r.set("self_check.multiplicativity_residual", check.multiplicativity_residual);
  r.set("self_check.ok", check.ok());
  if (!check.ok()) throw ValidationError("backend " + backend->name() + " failed its self-check");

  const auto x = parse_expression(eval.expression, backend);
  r.set("expression", eval.expression);
  const auto zt = cross::zero_test(x);
  r.set("is_zero", zt.by_n0);
  r.set("zero_test.n0_norm", zt.n0_norm);
  r.set("zero_test.coefficients_vanish", zt.by_coeffs);
  std::vector<int> degrees;
  for (const auto& [k, a] : x.terms()) degrees.push_back(k);
  r.set("degrees", fmt_ints(degrees));
  for (const auto& [k, a] : x.terms()) {
    r.set("N_" + std::to_string(k), fmt_element(a));
    r.set("N_" + std::to_string(k) + ".norm", a.norm());
  }

  const auto est = cross::norm_estimate(x, eval.norm_iters);
  r.set("norm_iters", eval.norm_iters);
  r.set("norm_sequence", fmt_reals(est.s));
  r.set("norm_sequence.truncated", est.truncated);
  if (est.truncated) r.set("norm_sequence.reason", est.reason);

  r.set("window", window);
  if (spec.kind == SystemKind::CK) r.set("coefficient_level", coeff_level);
  if (x.degree() > window)
    throw ValidationError("expression degree " + std::to_string(x.degree()) + " exceeds the window " +
                          std::to_string(window));
  if (x.level() > coeff_level && backend->graded())
    throw ValidationError("expression coefficients live at level " + std::to_string(x.level()) +
                          ", above the coefficient level " + std::to_string(coeff_level));
  double oracle = 0.0;
  for (const auto& f : select_functionals(*backend, spec.functional)) {
    const regrep::TruncatedRep rep(backend, f, window, coeff_level);
    const double n = regrep::oracle_norm(rep, x);
    r.set("oracle." + f->name(), n);
    oracle = std::max(oracle, n);
  }
  r.set("oracle_norm", oracle);
  r.set("star_property", cross::coeff_N(x, 0).norm() <= oracle + tol::kStar);
  if (!est.s.empty()) {
    r.set("norm_gap", std::abs(est.last() - oracle));
    r.set("norm_agrees", std::abs(est.last() - oracle) <= std::max(tolerance, 0.1 * oracle));
  }
  return r;
}

Report cmd_extend(const SystemSpec& spec, std::optional<int> depth_flag, const GlobalOptions& opts) {
  if (spec.kind != SystemKind::Dynsys) throw ValidationError("extend needs a dynsys spec");
  Report r = header("extend", spec, opts);
  describe_system(r, spec);
  const auto X = spec.point_set();
  const auto gamma = spec.partial_map();
  const int depth = resolve_depth(depth_flag, spec, 24);
  r.set("depth", depth);
  r.set("injective", gamma.injective());

  const dynsys::ReversibleExtension ext(X, gamma);
  const auto orbits = enumerate_orbits(ext, depth);
  report_extension_counts(r, "", orbits);
  std::vector<std::size_t> totals;
  std::vector<bool> bijective;
  for (const auto& pts : orbits) {
    totals.push_back(pts.size());
    bijective.push_back(all_ones(phi_fibers(X.size(), pts)));
  }
  r.set("points_total", fmt_ints(totals));
  r.set("phi_bijective_by_depth", format_list(bijective, [](bool b) { return format_bool(b); }));

  const auto& top = orbits.back();
  for (const auto& p : top) {
    const bool defined = gamma.defined_at(p.entries.front());
    r.set("gamma_tilde." + fmt_point(X, p), defined ? fmt_point(X, ext.gamma_tilde(p)) : "undefined");
  }
  const auto fibers = phi_fibers(X.size(), top);
  for (std::size_t i = 0; i < X.size(); ++i) r.set("phi_fiber." + X.label(i), fibers[i]);
  const bool bij = all_ones(fibers);
  r.set("phi_bijective", bij);
  r.set("collapse", gamma.injective() && bij);

  const std::string system = spec.canonical() + ";depth=" + std::to_string(depth);
  report_cache(r, sync_cache(opts.cache_dir, "orbits", system, build_orbit_cache(ext, system, depth),
                             parse_orbit_cache));
  return r;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Crossed products by endomorphisms: analysis, evaluation and orbit extension."};
  app.name("xprod");
  app.require_subcommand(1);

  GlobalOptions opts;
  std::string cache_dir;
  double tolerance = 0.0;
  app.add_option("--seed", opts.seed, "Seed for randomized checks")->capture_default_str();
  auto* tol_opt = app.add_option("--tolerance", tolerance, "Numeric tolerance for verdicts");
  auto* cache_opt = app.add_option("--cache-dir", cache_dir, "Cache directory (default $XPROD_CACHE_DIR)");
  app.add_flag("--timings", opts.timings, "Append wall-clock timings to the report");

  std::string spec_path;
  auto* analyze = app.add_subcommand("analyze", "Classify a system and check its relations");
  analyze->add_option("spec", spec_path, "System description file")->required();

  EvalOptions ev;
  int window = 0;
  auto* eval = app.add_subcommand("eval", "Evaluate a crossed-product expression");
  eval->add_option("spec", spec_path, "System description file")->required();
  eval->add_option("-e,--expr", ev.expression, "Expression")->required();
  eval->add_option("--norm-iters", ev.norm_iters, "Number of norm sequence terms")->capture_default_str();
  auto* window_opt = eval->add_option("--window", window, "Truncation window N");

  int depth = 0;
  auto* extend = app.add_subcommand("extend", "Enumerate the reversible extension");
  extend->add_option("spec", spec_path, "System description file")->required();
  auto* depth_opt = extend->add_option("--depth", depth, "Orbit depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (tol_opt->count()) opts.tolerance = tolerance;
  if (cache_opt->count()) opts.cache_dir = fs::path(cache_dir);
  if (window_opt->count()) ev.window = window;

  try {
    const auto start = std::chrono::steady_clock::now();
    const SystemSpec spec = load_spec(spec_path);
    Report report;
    if (*analyze) report = cmd_analyze(spec, opts);
    else if (*eval) report = cmd_eval(spec, ev, opts);
    else report = cmd_extend(spec, depth_opt->count() ? std::optional<int>(depth) : std::nullopt, opts);
    if (opts.timings) {
      const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
      report.set("timing.total_ms", ms.count());
    }
    report.write(out);
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace xprod::cli

// horolab command-line front end: JSON reports on stdout (and under --out),
// CSV series for growth runs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "horolab/auxiliary/constructor.hpp"
#include "horolab/independence/lab.hpp"
#include "horolab/io/system_json.hpp"
#include "horolab/isomonodromy/family.hpp"
#include "horolab/isomonodromy/monodromy.hpp"
#include "horolab/lg/certifier.hpp"
#include "horolab/nevanlinna/functions.hpp"
#include "horolab/zero_lemma/tower.hpp"

using namespace horolab;

namespace {

constexpr const char* kSchemaVersion = "1.0";

struct Options {
  std::string system;
  std::size_t degree = 2;
  std::string points = "0";
  std::optional<std::size_t> order;
  std::string alpha = "1";
  std::size_t truncation = 40;
  std::string rgrid;
  unsigned precision = 30;
  std::string out;
  std::string initial;
  // growth
  std::string map = "exp";
  double rmax = 100;
  std::size_t samples = 8192;
  std::string target = "1";
  bool raw = false;
  // certify-lg
  std::string germ;
  std::string sweep;
  // construct
  std::string profile;
  bool slack = false;
  // zero-lemma
  std::string at = "1";
  // independence
  std::vector<std::string> constants;
  double height = 100;
  bool subspace = false;
  // isomono / example-1-3
  std::string family = "corrected";
  std::string a = "1/2", b = "1/3", c = "1";
  std::string x0 = "1", x1 = "2";
  double tolerance = 1e-6;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<Rational> rationals(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& t : split(s, ',')) out.push_back(Rational::parse(t));
  return out;
}

std::vector<std::size_t> size_list(const std::string& s) {
  std::vector<std::size_t> out;
  if (auto pos = s.find(".."); pos != std::string::npos) {
    std::size_t lo = std::stoul(s.substr(0, pos)), hi = std::stoul(s.substr(pos + 2));
    for (std::size_t k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  for (const auto& t : split(s, ',')) out.push_back(std::stoul(t));
  return out;
}

std::size_t thread_cap() {
  const char* env = std::getenv("HOROLAB_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end || v < 1) fail(ErrorKind::InvalidArgument, "HOROLAB_THREADS must be a positive integer");
  return static_cast<std::size_t>(v);
}

// Evaluates fn(0..n-1) on up to HOROLAB_THREADS threads; results keep their
// index, so the output does not depend on scheduling.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers = std::min(thread_cap(), std::max<std::size_t>(n, 1));
  auto run = [&](std::size_t first) {
    for (std::size_t i = first; i < n; i += workers) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

json series_json(const TruncatedSeries& s) {
  json c = json::array();
  for (const auto& v : s.coefficients()) c.push_back(v.str());
  return {{"base", s.base_point().str()}, {"order", s.order()}, {"coefficients", c}};
}

json section_json(const PolySection& p) {
  json comps = json::array();
  for (const auto& c : p.components) comps.push_back(poly_json(c));
  return {{"degree_bound", p.degree_bound}, {"components", comps}};
}

std::string hp_str(const HpReal& v, unsigned digits) { return v.str(static_cast<std::streamsize>(digits), std::ios::scientific); }

json hp_matrix_json(const HpMatrix& m, unsigned digits) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back({hp_str(m(i, j).real(), digits), hp_str(m(i, j).imag(), digits)});
    rows.push_back(row);
  }
  return rows;
}

json complex_matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

json sym_matrix_json(const SymMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

// One initial vector per point: "1,1;1,0". Defaults to all ones.
std::vector<std::vector<Rational>> initial_vectors(const std::string& spec, std::size_t points, std::size_t m) {
  std::vector<std::vector<Rational>> out;
  if (spec.empty()) return std::vector<std::vector<Rational>>(points, std::vector<Rational>(m, Rational(1)));
  for (const auto& v : split(spec, ';')) out.push_back(rationals(v));
  if (out.size() == 1 && points > 1) out.resize(points, out[0]);
  if (out.size() != points) fail(ErrorKind::InvalidArgument, "--initial needs one vector per point");
  for (const auto& v : out)
    if (v.size() != m) fail(ErrorKind::InvalidArgument, "--initial vectors must have the system rank as length");
  return out;
}

DifferentialSystem need_system(const Options& o) {
  if (o.system.empty()) fail(ErrorKind::InvalidArgument, "--system is required");
  return load_system(o.system);
}

// ---------------------------------------------------------------- solve

json cmd_solve(const Options& o) {
  auto sys = need_system(o);
  auto pts = rationals(o.points);
  json out = json::array();
  for (std::size_t j = 0; j < pts.size(); ++j) {
    json entry{{"point", pts[j].str()}};
    if (!o.initial.empty()) {
      auto init = initial_vectors(o.initial, pts.size(), sys.rank());
      json comps = json::array();
      for (const auto& s : solve_series(sys, pts[j], o.truncation, init[j])) comps.push_back(series_json(s));
      entry["solution"] = comps;
    } else {
      json basis = json::array();
      for (const auto& v : local_solution_basis(sys, pts[j], o.truncation)) {
        json comps = json::array();
        for (const auto& s : v) comps.push_back(series_json(s));
        basis.push_back(comps);
      }
      entry["basis"] = basis;
    }
    out.push_back(entry);
  }
  return {{"system", system_to_json(sys)}, {"expansions", out}};
}

// ---------------------------------------------------------------- certify-lg

TruncatedSeries builtin_germ(const std::string& name, std::size_t t) {
  std::vector<Rational> c(t + 1, Rational(0));
  if (name == "exp") {
    for (std::size_t j = 0; j <= t; ++j) c[j] = Rational(Integer(1), factorial(j));
  } else if (name == "inv-factorial-squared") {
    for (std::size_t j = 0; j <= t; ++j) {
      Integer f = factorial(j);
      c[j] = Rational(Integer(1), Integer(f * f));
    }
  } else if (name == "exp-square") {
    for (std::size_t k = 0; 2 * k <= t; ++k) c[2 * k] = Rational(Integer(1), factorial(k));
  } else {
    fail(ErrorKind::InvalidArgument, "unknown germ '" + name + "' (exp, exp-square, inv-factorial-squared)");
  }
  return {Rational(0), c};
}

std::vector<TruncatedSeries> germs_for(const Options& o, std::size_t t) {
  if (!o.germ.empty()) return {builtin_germ(o.germ, t)};
  auto sys = need_system(o);
  auto p = rationals(o.points).at(0);
  return solve_series(sys, p, t, initial_vectors(o.initial, 1, sys.rank())[0]);
}

json cmd_certify_lg(const Options& o) {
  const Rational alpha = Rational::parse(o.alpha);
  auto germs = germs_for(o, o.truncation);
  auto cert = certify_lg(germs, alpha);
  json bad = json::array();
  for (const auto& b : cert.bad_primes) bad.push_back({{"prime", b.prime.get_str()}, {"slope", b.slope.str()}});
  json rep{{"alpha", alpha.str()},
           {"truncation_order", cert.truncation_order},
           {"bad_primes", bad},
           {"slope_sum", cert.slope_sum()},
           {"verdict", "certified to order " + std::to_string(cert.truncation_order)}};
  rep["first_violation"] = cert.first_violation ? json(*cert.first_violation) : json(nullptr);
  if (!o.sweep.empty()) {
    auto orders = size_list(o.sweep);
    std::size_t tmax = *std::max_element(orders.begin(), orders.end());
    auto sw = lg_slope_sweep(germs_for(o, tmax), alpha, orders);
    rep["sweep"] = {{"orders", sw.orders},
                    {"slope_sums", sw.slope_sums},
                    {"bad_prime_counts", sw.bad_prime_counts},
                    {"growing", sw.growing},
                    {"stable", sw.stable},
                    {"refuted", sw.growing}};
  }
  return rep;
}

// ---------------------------------------------------------------- construct

ProblemTemplate problem_template(const DifferentialSystem& sys, const Options& o) {
  auto pts = rationals(o.points);
  auto init = initial_vectors(o.initial, pts.size(), sys.rank());
  return {pts, solution_germs(sys, pts, init), o.slack ? OrderPolicy::Slack : OrderPolicy::Maximal};
}

VanishingProblem problem_at(const ProblemTemplate& tmpl, const DifferentialSystem& sys, const Options& o,
                            std::size_t x) {
  auto prob = tmpl.at(x, sys.rank());
  if (o.order) {
    prob.target_order = *o.order;
    prob.germs = tmpl.germs(*o.order + x + 2);
  }
  return prob;
}

json cmd_construct(const Options& o) {
  auto sys = need_system(o);
  auto tmpl = problem_template(sys, o);
  if (!o.profile.empty()) {
    if (o.order) fail(ErrorKind::InvalidArgument, "--profile uses the default order per x; drop --order");
    auto prof = height_profile(tmpl, sys.rank(), size_list(o.profile));
    json rows = json::array();
    for (const auto& r : prof.rows)
      rows.push_back({{"x", r.x},
                      {"target_order", r.target_order},
                      {"achieved_order", r.achieved_order},
                      {"log_height", r.log_height},
                      {"kernel_dimension", r.kernel_dimension}});
    return {{"profile", rows},
            {"ratio_fit", {{"intercept", prof.ratio_intercept}, {"slope", prof.ratio_slope}}},
            {"max_ratio", prof.max_ratio},
            {"height_fit", {{"x_log_x", prof.a}, {"x", prof.b}}}};
  }
  auto prob = problem_at(tmpl, sys, o, o.degree);
  auto sec = construct_small_section(prob);
  json coeffs = json::array();
  for (const auto& v : sec.coefficients) coeffs.push_back(v.get_str());
  return {{"degree", o.degree},
          {"target_order", prob.target_order},
          {"section", section_json(sec.section)},
          {"coefficients", coeffs},
          {"achieved_orders", sec.achieved_orders},
          {"saturated", sec.saturated},
          {"log_height", sec.height.value},
          {"kernel_dimension", sec.kernel_dimension},
          {"constraint_rank", sec.constraint_rank}};
}

// ---------------------------------------------------------------- zero-lemma

json cmd_zero_lemma(const Options& o) {
  auto sys = need_system(o);
  auto tmpl = problem_template(sys, o);
  auto prob = problem_at(tmpl, sys, o, o.degree);
  auto sec = construct_small_section(prob);
  auto der = DerivationField::clearing(sys);
  const std::size_t t = std::max(o.truncation, 2 * (prob.target_order + o.degree + 2) + 4);
  auto germs = tmpl.germs(t)[0];
  auto rep = zero_lemma_check(sec.section, sys, der, germs, o.degree);
  const Rational q = Rational::parse(o.at);
  const std::size_t bound = sys.rank() + o.degree + 2;
  auto w = nonvanishing_wedge_indices(sec.section, sys, der, q, bound);
  return {{"x", rep.x},
          {"section", section_json(sec.section)},
          {"rank", rep.rank},
          {"ord", rep.ord},
          {"measured_c", rep.measured_c},
          {"ord_drop_ok", rep.ord_drop_ok},
          {"wedge_degree", rep.wedge_degree},
          {"wedge_slack", rep.wedge_slack},
          {"wedge", {{"point", q.str()}, {"bound", bound}, {"indices", w.indices}, {"minor", w.minor_value.str()}}}};
}

// ---------------------------------------------------------------- growth

struct MapSpec {
  AnalyticMap map;
  std::optional<std::vector<ZeroPoint>> zeros;  // of f - a inside |z| <= radius
};

std::vector<Complex> complex_list(const std::string& s) {
  std::vector<Complex> out;
  for (const auto& t : split(s, ',')) out.emplace_back(std::stod(t));
  return out;
}

MapSpec map_spec(const Options& o, Complex a, double radius) {
  const double two_pi = 2 * std::acos(-1.0);
  const std::string& m = o.map;
  MapSpec s;
  auto log_targets = [&](double bound) {
    std::vector<Complex> w;
    if (a == Complex(0)) return w;
    const Complex l = std::log(a);
    const long kmax = static_cast<long>(bound / two_pi) + 1;
    for (long k = -kmax; k <= kmax; ++k) {
      Complex v = l + Complex(0, two_pi * static_cast<double>(k));
      if (std::abs(v) <= bound) w.push_back(v);
    }
    return w;
  };
  if (m == "z") {
    s.map = map_identity();
    s.zeros = std::vector<ZeroPoint>{{a, 1}};
  } else if (m == "exp") {
    s.map = map_exp();
    s.zeros.emplace();
    for (auto v : log_targets(radius)) s.zeros->push_back({v, 1});
  } else if (m == "exp2") {
    s.map = map_exp_square();
    s.zeros.emplace();
    for (auto v : log_targets(radius * radius)) {
      s.zeros->push_back({std::sqrt(v), 1});
      s.zeros->push_back({-std::sqrt(v), 1});
    }
  } else if (m.rfind("poly:", 0) == 0) {
    auto c = complex_list(m.substr(5));
    s.map = map_polynomial(c);
    c.at(0) -= a;
    s.zeros.emplace();
    for (auto r : polynomial_roots(c)) s.zeros->push_back({r, 1});
  } else if (m.rfind("const:", 0) == 0) {
    Complex c(std::stod(m.substr(6)));
    if (c == a) fail(ErrorKind::InvalidArgument, "constant map equal to the target has infinite counting function");
    s.map = map_constant(c);
    s.zeros = std::vector<ZeroPoint>{};
  } else if (m == "series") {
    auto germs = germs_for(o, o.truncation);
    s.map = map_from_series(germs.at(0));
  } else {
    fail(ErrorKind::InvalidArgument, "unknown map '" + m + "' (z, exp, exp2, poly:c0,c1,..., const:c, series)");
  }
  return s;
}

std::vector<double> parse_rgrid(const Options& o) {
  if (o.rgrid.empty()) return log_grid(o.rmax / 100, o.rmax, 16);
  auto parts = split(o.rgrid, ':');
  if (parts.size() != 3) fail(ErrorKind::InvalidArgument, "--rgrid expects min:max:steps");
  return log_grid(std::stod(parts[0]), std::stod(parts[1]), std::stoul(parts[2]));
}

json cmd_growth(const Options& o, std::string& csv) {
  const auto conv = o.raw ? LevelConvention::Raw : LevelConvention::Calibrated;
  auto grid = parse_rgrid(o);
  const Complex a(std::stod(o.target));
  const double rlast = grid.back();
  const double radius = conv == LevelConvention::Calibrated ? rlast : std::sqrt(rlast);
  auto spec = map_spec(o, a, radius + 1);
  auto g = ExhaustionFunction::plane(Complex(0));
  auto rows = parallel_map<NevanlinnaRow>(grid.size(), [&](std::size_t i) {
    auto curve = level_curve(g, grid[i], o.samples, conv);
    NevanlinnaRow row;
    row.r = grid[i];
    row.mass = curve.mass;
    row.T = characteristic(spec.map, curve);
    row.m = proximity(spec.map, a, curve);
    if (spec.zeros) {
      row.N = counting(*spec.zeros, g, grid[i], conv);
      row.residual = row.N + row.m - row.T;
    }
    return row;
  });
  std::vector<double> ts;
  double drift = 0, mass_err = 0;
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ts.push_back(rows[i].T);
    mass_err = std::max(mass_err, std::fabs(rows[i].mass - 1));
    if (i > 0) {
      drift = std::max(drift, std::fabs(rows[i].residual - rows[0].residual));
      if (rows[i].T < rows[i - 1].T - 1e-9) monotone = false;
    }
  }
  json fit = nullptr;
  try {
    fit = growth_order_fit(grid, ts).rho;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidArgument && e.kind() != ErrorKind::NoData) throw;
  }
  std::ostringstream out;
  out.precision(17);
  out << "r,T,N,m,residual\n";
  for (const auto& r : rows) {
    out << r.r << ',' << r.T << ',';
    if (spec.zeros) out << r.N << ',' << r.m << ',' << r.residual;
    else out << ",,";
    out << '\n';
  }
  csv = out.str();
  json rep{{"map", spec.map.name},
           {"target", o.target},
           {"convention", o.raw ? "raw" : "calibrated"},
           {"samples", o.samples},
           {"rho", fit},
           {"monotone", monotone},
           {"max_mass_error", mass_err},
           {"zeros_known", spec.zeros.has_value()}};
  if (spec.zeros) rep["residual_drift"] = drift;
  json table = json::array();
  for (const auto& r : rows) {
    json row{{"r", r.r}, {"T", r.T}, {"m", r.m}, {"mass", r.mass}};
    if (spec.zeros) {
      row["N"] = r.N;
      row["residual"] = r.residual;
    }
    table.push_back(row);
  }
  rep["rows"] = table;
  return rep;
}

// ---------------------------------------------------------------- independence

json cmd_independence(const Options& o) {
  if (o.constants.empty()) fail(ErrorKind::InvalidArgument, "--constants is required");
  RelationQuery q{constant_values(o.constants), static_cast<int>(o.degree), o.height, o.precision};
  json rep;
  auto r = integer_relation_search(q);
  rep["monomial_count"] = r.monomial_count;
  rep["searched_height"] = r.searched_height;
  rep["norm_lower_bound"] = r.norm_lower_bound;
  rep["verdict"] = r.verdict;
  if (r.found) {
    json c = json::array();
    for (const auto& v : *r.found) c.push_back(v.get_str());
    rep["relation"] = {{"coefficients", c}, {"text", r.relation}, {"residual_log10", r.residual_log10}};
  } else {
    rep["relation"] = nullptr;
  }
  if (o.subspace) {
    auto s = subspace_dimension_estimate(q);
    rep["subspace"] = {{"dim_e", s.dim_e}, {"estimate", s.estimate}, {"relations", s.relations}, {"caveat", s.caveat}};
  }
  return rep;
}

// ---------------------------------------------------------------- isomono

const std::set<std::string> kFamilyParams{"a", "b", "c"};

SymMatrix sym_matrix_from(const json& rows, const std::set<std::string>& params) {
  const std::size_t n = rows.size();
  SymMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) fail(ErrorKind::DataError, "family matrices must be square");
    for (std::size_t j = 0; j < n; ++j) {
      const auto& cell = rows[i][j];
      m(i, j) = cell.is_number_integer() ? SymExpr(cell.get<long>()) : parse_sym(cell.get<std::string>(), params);
    }
  }
  return m;
}

// Built-in name or a JSON file {"parameters": [...], "dz": [[...]], "dx": [[...]]}.
MatrixOneForm load_family(const std::string& spec) {
  if (spec == "corrected") return family::corrected();
  if (spec == "printed") return family::printed();
  if (spec == "literal") return family::printed_literal();
  std::ifstream in(spec);
  if (!in) fail(ErrorKind::DataError, "unknown family '" + spec + "' (corrected, printed, literal or a JSON path)");
  try {
    json doc;
    in >> doc;
    std::set<std::string> params;
    if (doc.contains("parameters"))
      for (const auto& p : doc.at("parameters")) params.insert(p.get<std::string>());
    MatrixOneForm w{sym_matrix_from(doc.at("dz"), params), sym_matrix_from(doc.at("dx"), params)};
    if (w.dz_part.rows() != w.dx_part.rows()) fail(ErrorKind::DataError, "dz and dx parts differ in size");
    return w;
  } catch (const json::exception& e) {
    fail(ErrorKind::DataError, std::string("malformed family document: ") + e.what());
  }
}

const std::vector<Loop>& family_loops() {
  static const std::vector<Loop> loops{Loop{{0, 0}, 0.5, 1, 0}, Loop{{1, 0}, 0.5, 1, 0.5}};
  return loops;
}

json loop_json(const Loop& l) {
  return {{"center", {l.center.real(), l.center.imag()}},
          {"radius", l.radius},
          {"orientation", l.orientation},
          {"start_turn", l.start_turn}};
}

struct MemberMonodromy {
  std::vector<MonodromyMatrix> matrices;
  json report;
};

MemberMonodromy member_monodromy(const MatrixOneForm& w, const Rational& t, const Options& o) {
  auto sys = complex_system(
      family::member(w, t, Rational::parse(o.a), Rational::parse(o.b), Rational::parse(o.c)));
  MemberMonodromy out;
  out.matrices = parallel_map<MonodromyMatrix>(family_loops().size(), [&](std::size_t i) {
    return numerical_monodromy(sys, family_loops()[i], o.precision);
  });
  json mats = json::array();
  for (const auto& m : out.matrices)
    mats.push_back({{"loop", loop_json(m.loop)},
                    {"matrix", hp_matrix_json(m.matrix, o.precision)},
                    {"digits", m.digits},
                    {"macro_steps", m.macro_steps},
                    {"liouville_error", m.liouville_error}});
  out.report = {{"parameter", t.str()}, {"monodromy", mats}};
  return out;
}

json conjugacy_json(const ConjugacyReport& r) {
  return {{"conjugate", r.conjugate},
          {"unique", r.unique},
          {"residual", r.residual},
          {"smallest_singular", r.smallest_singular},
          {"threshold", r.threshold},
          {"null_dimension", r.null_dimension},
          {"transform_condition", r.transform_condition},
          {"transform", complex_matrix_json(r.transform)},
          {"verdict", r.verdict}};
}

std::vector<Eigen::MatrixXcd> to_eigen(const std::vector<MonodromyMatrix>& ms) {
  std::vector<Eigen::MatrixXcd> out;
  for (const auto& m : ms) out.push_back(m.matrix.to_eigen());
  return out;
}

json isomono_report(const MatrixOneForm& w, const Options& o) {
  auto res = check_integrability(w);
  json rep{{"integrability_residual", sym_matrix_json(res)}, {"integrable", res.is_zero()}};
  if (!res.is_zero()) {
    auto opp = check_integrability_opposite(w);
    rep["opposite_sign_residual_zero"] = opp.is_zero();
  }
  auto m0 = member_monodromy(w, Rational::parse(o.x0), o);
  auto m1 = member_monodromy(w, Rational::parse(o.x1), o);
  auto c = conjugacy_check(to_eigen(m0.matrices), to_eigen(m1.matrices), o.tolerance);
  rep["members"] = {m0.report, m1.report};
  rep["conjugacy"] = conjugacy_json(c);
  return rep;
}

json cmd_isomono(const Options& o) {
  auto w = load_family(o.family);
  json rep = isomono_report(w, o);
  rep["family"] = o.family;
  rep["parameter_meaning"] = "members are evaluated at log(x) = t and x = t for the listed t values";
  return rep;
}

// ---------------------------------------------------------------- example-1-3

json basis_json(const std::vector<SymMatrix>& basis) {
  json items = json::array();
  bool all = true;
  for (const auto& w : basis) {
    bool ok = verify_deformation_equation(w, family::deformation_n());
    all = all && ok;
    items.push_back({{"W", sym_matrix_json(w)}, {"solves", ok}});
  }
  return {{"elements", items}, {"all_solve", all}};
}

json cmd_example_1_3(const Options& o) {
  json printed = isomono_report(family::printed(), o);
  printed["basis"] = basis_json(family::printed_basis());
  json corrected = isomono_report(family::corrected(), o);
  corrected["basis"] = basis_json(family::corrected_basis());
  auto pass = [](bool b) { return b ? "PASS" : "FAIL"; };
  json summary{
      {"printed", {{"integrability", pass(printed["integrable"])},
                   {"basis", pass(printed["basis"]["all_solve"])},
                   {"conjugacy", pass(printed["conjugacy"]["conjugate"])},
                   {"conjugacy_residual", printed["conjugacy"]["residual"]}}},
      {"corrected", {{"integrability", pass(corrected["integrable"])},
                     {"basis", pass(corrected["basis"]["all_solve"])},
                     {"conjugacy", pass(corrected["conjugacy"]["conjugate"])},
                     {"conjugacy_residual", corrected["conjugacy"]["residual"]}}}};
  return {{"summary", summary},
          {"printed", printed},
          {"corrected", corrected},
          {"notes",
           {"printed: B(x) = [[1-L, -L^2], [1, 1]] and dx part +N/x, L = log x",
            "corrected: B(x)(2,2) = 1+L and dx part -N/x, the constant gauge transform of the x = 1 member by "
            "[[1, L], [0, 1]]",
            "corrected basis: third element [[-L, -L^2], [1, L]]"}}};
}

// ---------------------------------------------------------------- driver

json manifest(const std::string& sub, const Options& o, const std::vector<std::string>& used) {
  json params;
  json inputs = json::array();
  auto put = [&](const std::string& k, json v) {
    if (v.is_string() && v.get<std::string>().empty()) return;
    if (std::find(used.begin(), used.end(), k) != used.end()) params[k] = std::move(v);
  };
  put("degree", o.degree);
  put("points", o.points);
  put("order", o.order ? json(*o.order) : json("default"));
  put("alpha", o.alpha);
  put("truncation", o.truncation);
  put("rgrid", o.rgrid.empty() ? json("default") : json(o.rgrid));
  put("precision", o.precision);
  put("initial", o.initial.empty() ? json("ones") : json(o.initial));
  put("map", o.map);
  put("rmax", o.rmax);
  put("samples", o.samples);
  put("target", o.target);
  put("convention", o.raw ? "raw" : "calibrated");
  put("germ", o.germ);
  put("sweep", o.sweep);
  put("profile", o.profile);
  put("policy", o.slack ? "slack" : "maximal");
  put("at", o.at);
  put("constants", o.constants);
  put("height", o.height);
  put("subspace", o.subspace);
  put("family", o.family);
  put("a", o.a);
  put("b", o.b);
  put("c", o.c);
  put("x0", o.x0);
  put("x1", o.x1);
  put("tolerance", o.tolerance);
  if (!o.system.empty()) inputs.push_back(o.system);
  json outputs = json::array();
  if (!o.out.empty()) {
    outputs.push_back(o.out + "/" + sub + ".json");
    if (sub == "growth") outputs.push_back(o.out + "/" + sub + ".csv");
  }
  const char* threads = std::getenv("HOROLAB_THREADS");
  return {{"subcommand", sub},
          {"inputs", inputs},
          {"parameters", params},
          {"outputs", outputs},
          {"threads", threads ? threads : "1"}};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) fail(ErrorKind::DataError, "cannot write " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"horolab: connections, auxiliary sections, growth and monodromy experiments"};
  app.require_subcommand(1);
  Options o;

  auto add_system = [&](CLI::App* s) {
    s->add_option("--system", o.system, "system JSON {rank, matrix, poles, parameters}");
    s->add_option("--points", o.points, "comma-separated rational points");
    s->add_option("--initial", o.initial, "initial vectors per point, e.g. 1,1;1,0 (default all ones)");
  };

  struct Sub {
    CLI::App* app;
    std::vector<std::string> params;
  };
  std::vector<Sub> subs;

  auto* solve = app.add_subcommand("solve", "local series solutions at points");
  add_system(solve);
  solve->add_option("--truncation", o.truncation, "series order T");
  subs.push_back({solve, {"points", "initial", "truncation"}});

  auto* lg = app.add_subcommand("certify-lg", "LG certificate of a germ");
  add_system(lg);
  lg->add_option("--germ", o.germ, "built-in germ: exp, exp-square, inv-factorial-squared");
  lg->add_option("--alpha", o.alpha, "type alpha (rational)");
  lg->add_option("--truncation", o.truncation, "series order T");
  lg->add_option("--sweep", o.sweep, "truncations for the slope sweep, e.g. 50,100,200");
  subs.push_back({lg, {"points", "initial", "germ", "alpha", "truncation", "sweep"}});

  auto* construct = app.add_subcommand("construct", "small auxiliary section with high-order vanishing");
  add_system(construct);
  construct->add_option("--degree", o.degree, "degree bound x");
  construct->add_option("--order", o.order, "vanishing order target per point");
  construct->add_option("--profile", o.profile, "height profile over x values, e.g. 2..20");
  construct->add_flag("--slack", o.slack, "default order one below the maximal count");
  subs.push_back({construct, {"points", "initial", "degree", "order", "profile", "policy"}});

  auto* zl = app.add_subcommand("zero-lemma", "derivative tower, measured constant and wedge indices");
  add_system(zl);
  zl->add_option("--degree", o.degree, "degree bound x");
  zl->add_option("--order", o.order, "vanishing order target");
  zl->add_option("--truncation", o.truncation, "minimum series order for the tower pairings");
  zl->add_option("--at", o.at, "ordinary point for the wedge search");
  subs.push_back({zl, {"points", "initial", "degree", "order", "truncation", "at", "policy"}});

  auto* growth = app.add_subcommand("growth", "Nevanlinna functions on the plane and the fitted order");
  add_system(growth);
  growth->add_option("--map", o.map, "z, exp, exp2, poly:c0,c1,..., const:c, series");
  growth->add_option("--rmax", o.rmax, "largest r (grid rmax/100..rmax, 16 points)");
  growth->add_option("--rgrid", o.rgrid, "min:max:steps, logarithmic");
  growth->add_option("--samples", o.samples, "level-curve samples");
  growth->add_option("--target", o.target, "target value a (real)");
  growth->add_option("--truncation", o.truncation, "series order for --map series");
  growth->add_flag("--raw", o.raw, "raw level log r instead of 2 log r");
  subs.push_back({growth, {"map", "rmax", "rgrid", "samples", "target", "convention"}});

  auto* indep = app.add_subcommand("independence", "integer relation search among monomials in constants");
  indep->add_option("--constants", o.constants, "constant expressions, e.g. e e^2")->expected(1, -1);
  indep->add_option("--degree", o.degree, "monomial degree");
  indep->add_option("--height", o.height, "relation height bound");
  indep->add_option("--precision", o.precision, "working digits");
  indep->add_flag("--subspace", o.subspace, "also estimate the dimension of the relation-free span");
  subs.push_back({indep, {"constants", "degree", "height", "precision", "subspace"}});

  auto add_family = [&](CLI::App* s) {
    s->add_option("--a", o.a);
    s->add_option("--b", o.b);
    s->add_option("--c", o.c);
    s->add_option("--x0", o.x0, "first family parameter");
    s->add_option("--x1", o.x1, "second family parameter");
    s->add_option("--precision", o.precision, "monodromy digits (5..45)");
    s->add_option("--tolerance", o.tolerance, "conjugacy tolerance");
  };
  auto* iso = app.add_subcommand("isomono", "integrability and monodromy conjugacy of a family");
  iso->add_option("--family", o.family, "corrected, printed, literal or a JSON file");
  add_family(iso);
  subs.push_back({iso, {"family", "a", "b", "c", "x0", "x1", "precision", "tolerance"}});

  auto* ex = app.add_subcommand("example-1-3", "the two-parameter family: printed and corrected forms");
  add_family(ex);
  subs.push_back({ex, {"a", "b", "c", "x0", "x1", "precision", "tolerance"}});

  for (auto& s : subs) s.app->add_option("--out", o.out, "directory for the report files");

  CLI11_PARSE(app, argc, argv);

  const Sub* active = nullptr;
  for (const auto& s : subs)
    if (s.app->parsed()) active = &s;
  const std::string name = active->app->get_name();
  json doc{{"schema_version", kSchemaVersion}, {"manifest", manifest(name, o, active->params)}};
  try {
    thread_cap();
    std::string csv;
    json report;
    if (name == "solve") report = cmd_solve(o);
    else if (name == "certify-lg") report = cmd_certify_lg(o);
    else if (name == "construct") report = cmd_construct(o);
    else if (name == "zero-lemma") report = cmd_zero_lemma(o);
    else if (name == "growth") report = cmd_growth(o, csv);
    else if (name == "independence") report = cmd_independence(o);
    else if (name == "isomono") report = cmd_isomono(o);
    else report = cmd_example_1_3(o);
    doc["report"] = report;
    const std::string text = doc.dump(2) + "\n";
    if (!o.out.empty()) {
      std::filesystem::create_directories(o.out);
      write_file(o.out + "/" + name + ".json", text);
      if (!csv.empty()) {
        std::string header = "# " + doc["manifest"].dump() + "\n";
        if (!report["rho"].is_null()) header += "# rho " + report["rho"].dump() + "\n";
        write_file(o.out + "/" + name + ".csv", header + csv);
      }
    }
    std::cout << text;
    return 0;
  } catch (const Error& e) {
    doc["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  } catch (const std::exception& e) {
    doc["error"] = {{"kind", "invalid-argument"}, {"message", e.what()}};
  }
  std::cout << doc.dump(2) << "\n";
  return 1;
}

#ifndef RANDERS_CLI_HPP
#define RANDERS_CLI_HPP

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "randers/constructor.hpp"
#include "randers/error.hpp"
#include "randers/killing.hpp"
#include "randers/lie_core.hpp"
#include "randers/randers_metric.hpp"

namespace randers::cli {

using json = nlohmann::json;

inline constexpr const char* kToolName = "randers-cw";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kRefuted = 2, kInconclusive = 3 };

// ---------------------------------------------------------------------------
// JSON helpers

inline json to_json(const Vector& v)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline json to_json(const RealMatrix& m)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
  return out;
}

/// Complex matrix as rows of [re, im] pairs.
inline json to_json(const Matrix& m)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    out.push_back(row);
  }
  return out;
}

inline json to_json(const LengthReport& r)
{
  return {{"min", r.min},       {"max", r.max},
          {"mean", r.mean},     {"spread", r.spread},
          {"relative_spread", r.relative_spread},
          {"sample_count", r.sample_count},
          {"seed", r.seed}};
}

inline json to_json(const CriterionReport& r)
{
  return {{"variant", to_string(r.variant)},
          {"max_abs_residual", r.max_abs_residual},
          {"normalized_residual", r.normalized_residual},
          {"f_scale", r.f_scale},
          {"argmax_sample", r.argmax_sample},
          {"argmax_direction", r.argmax_direction},
          {"samples", r.samples},
          {"directions", r.directions}};
}

inline json to_json(const ConstancyReport& r)
{
  return {{"verdict", to_string(r.verdict)},
          {"spectrum_verdict", to_string(r.spectrum_verdict)},
          {"criterion_verdict", to_string(r.criterion_verdict)},
          {"length_report", to_json(r.spectrum)},
          {"criterion", to_json(r.criterion)},
          {"notes", r.notes}};
}

inline json metric_to_json(const RandersMetricSpec& m)
{
  return {{"alpha_gram", to_json(m.alpha_gram)},
          {"v", to_json(m.v_vector)},
          {"beta_convention", to_string(m.beta_convention)}};
}

inline json to_json(const ConstructionResult& r)
{
  return {{"status", to_string(r.status)},
          {"accepted", r.accepted()},
          {"monomials", r.monomial_names},
          {"coefficients", to_json(r.coefficients)},
          {"solution_space_dim", r.solution_space_dim},
          {"rank", r.rank},
          {"null_space", to_json(r.null_space)},
          {"singular_values", to_json(r.singular_values)},
          {"condition_number", r.condition_number},
          {"fit_residual", r.fit_residual},
          {"residual", r.residual},
          {"residual_scale", r.residual_scale},
          {"consistent", r.consistent},
          {"rank_saturated", r.rank_saturated},
          {"degenerate", r.degenerate},
          {"sign_ok", r.sign_ok},
          {"min_sign_margin", r.min_sign_margin},
          {"spd_ok", r.spd_ok},
          {"min_alpha_eigenvalue", r.min_alpha_eigenvalue},
          {"validity_ok", r.validity_ok},
          {"alpha_norm_of_beta", r.alpha_norm_of_beta}};
}

// ---------------------------------------------------------------------------
// Scenario parsing

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& what)
{
  throw Error(ErrorKind::Parse, "field '" + field + "': " + what);
}

inline double number(const json& j, const std::string& field)
{
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

inline Vector vector_field(const json& j, const std::string& field, Eigen::Index expected)
{
  if (!j.is_array()) field_error(field, "expected an array of numbers");
  if (Eigen::Index(j.size()) != expected)
    field_error(field, "has " + std::to_string(j.size()) + " entries, expected " + std::to_string(expected));
  Vector v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) v(i) = number(j[std::size_t(i)], field + "[" + std::to_string(i) + "]");
  return v;
}

inline RealMatrix matrix_field(const json& j, const std::string& field, Eigen::Index n)
{
  if (!j.is_array() || Eigen::Index(j.size()) != n)
    field_error(field, "expected " + std::to_string(n) + " rows");
  RealMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    m.row(i) = vector_field(j[std::size_t(i)], field + "[" + std::to_string(i) + "]", n).transpose();
  return m;
}

inline std::vector<FactorDescriptor> parse_factors(const json& j)
{
  if (!j.is_array() || j.empty()) field_error("algebra", "expected a nonempty list like [[\"su\",3]]");
  std::vector<FactorDescriptor> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = "algebra[" + std::to_string(i) + "]";
    const auto& e = j[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_number_integer())
      field_error(f, "expected [\"su\", k] or [\"abelian\", 1]");
    const auto kind = e[0].get<std::string>();
    const int size = e[1].get<int>();
    if (kind == "su") {
      if (size < 2) field_error(f, "su(k) needs k >= 2");
      out.push_back(su(size));
    } else if (kind == "abelian") {
      if (size != 1) field_error(f, "abelian factors have size 1");
      out.push_back(abelian());
    } else {
      field_error(f, "unknown factor kind '" + kind + "'");
    }
  }
  return out;
}

}  // namespace detail

/// Parsed `check` / `ideals` / `orbit` input.
struct Scenario {
  json source;
  MatrixLieAlgebra algebra{{su(2)}};
  HomogeneousSpace space = HomogeneousSpace::group(algebra);
  RandersMetricSpec metric;
  bool metric_from_weights = false;
  Vector x;
  std::uint64_t seed = 0;
  std::size_t samples = 500;
  Tolerances tolerances;
  CriterionVariant variant = CriterionVariant::Hrs1;
};

inline Scenario parse_scenario(const json& j)
{
  using detail::field_error;
  if (!j.is_object()) field_error("<root>", "expected a JSON object");
  Scenario sc;
  sc.source = j;
  if (!j.contains("algebra")) field_error("algebra", "missing");
  sc.algebra = MatrixLieAlgebra(detail::parse_factors(j["algebra"]));
  const int d = sc.algebra.dim();

  std::vector<double> bi_weights;
  if (j.contains("bi_weights")) {
    const Vector w = detail::vector_field(j["bi_weights"], "bi_weights", Eigen::Index(sc.algebra.factors().size()));
    bi_weights.assign(w.data(), w.data() + w.size());
  }
  try {
    sc.space.algebra = sc.algebra;
    sc.space.bi = BiInvariantForm::standard(sc.algebra, bi_weights);
  } catch (const Error& e) {
    field_error("bi_weights", e.what());
  }

  sc.space.decomposition = ReductiveDecomposition::trivial(d);
  if (j.contains("h_basis")) {
    const auto& h = j["h_basis"];
    if (!h.is_array()) field_error("h_basis", "expected a list of coefficient lists");
    RealMatrix cols(d, Eigen::Index(h.size()));
    for (std::size_t c = 0; c < h.size(); ++c)
      cols.col(Eigen::Index(c)) = detail::vector_field(h[c], "h_basis[" + std::to_string(c) + "]", d);
    try {
      sc.space.decomposition = ReductiveDecomposition::from_isotropy(sc.space.bi, cols);
    } catch (const Error& e) {
      field_error("h_basis", e.what());
    }
  }
  const int m = sc.space.decomposition.m_dim();

  if (!j.contains("x")) field_error("x", "missing");
  sc.x = detail::vector_field(j["x"], "x", d);

  if (!j.contains("metric")) field_error("metric", "missing");
  const auto& mj = j["metric"];
  if (!mj.is_object()) field_error("metric", "expected an object");
  if (mj.contains("alpha_gram")) {
    sc.metric.alpha_gram = detail::matrix_field(mj["alpha_gram"], "metric.alpha_gram", m);
  } else if (mj.contains("bi-invariant-scaled")) {
    const Vector w = detail::vector_field(mj["bi-invariant-scaled"], "metric.bi-invariant-scaled",
                                          Eigen::Index(sc.algebra.factors().size()));
    BiInvariantForm scaled;
    try {
      scaled = BiInvariantForm::standard(sc.algebra, std::vector<double>(w.data(), w.data() + w.size()));
    } catch (const Error& e) {
      field_error("metric.bi-invariant-scaled", e.what());
    }
    const RealMatrix& mb = sc.space.decomposition.m_basis;
    sc.metric.alpha_gram = mb.transpose() * scaled.gram * mb;
    sc.metric_from_weights = true;
  } else {
    field_error("metric", "needs 'alpha_gram' or 'bi-invariant-scaled'");
  }
  sc.metric.v_vector = mj.contains("v") ? detail::vector_field(mj["v"], "metric.v", m) : Vector(Vector::Zero(m));
  const std::string conv = mj.value("beta_convention", std::string("alpha"));
  if (conv == "alpha") {
    sc.metric.beta_convention = BetaConvention::AlphaDual;
  } else if (conv == "bi") {
    sc.metric.beta_convention = BetaConvention::BiDual;
  } else {
    field_error("metric.beta_convention", "expected \"alpha\" or \"bi\"");
  }
  sc.metric.bi_gram = sc.space.m_bi_gram();

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
      field_error("seed", "expected a nonnegative integer");
    sc.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer() || j["samples"].get<long long>() < 2)
      field_error("samples", "expected an integer >= 2");
    sc.samples = j["samples"].get<std::size_t>();
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) field_error("tolerances", "expected an object");
    if (t.contains("constant")) sc.tolerances.constant = detail::number(t["constant"], "tolerances.constant");
    if (t.contains("nonconstant"))
      sc.tolerances.nonconstant = detail::number(t["nonconstant"], "tolerances.nonconstant");
    if (t.contains("orthogonality"))
      sc.tolerances.orthogonality = detail::number(t["orthogonality"], "tolerances.orthogonality");
  }
  if (j.contains("variant")) {
    const auto v = j["variant"].is_string() ? j["variant"].get<std::string>() : std::string();
    if (v == "HRS1") {
      sc.variant = CriterionVariant::Hrs1;
    } else if (v == "HRS2") {
      sc.variant = CriterionVariant::Hrs2;
    } else {
      field_error("variant", "expected \"HRS1\" or \"HRS2\"");
    }
  }
  return sc;
}

inline json read_json_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& fallback)
{
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Parse, "cannot write '" + path + "'");
  out << text;
}

inline std::string dump(const json& report) { return report.dump(2) + "\n"; }

/// Basis matrices in documented order.
inline json basis_manifest(const MatrixLieAlgebra& alg)
{
  json factors = json::array();
  for (const auto& f : alg.factors())
    factors.push_back({{"name", f.name()}, {"first_basis", f.first_basis}, {"basis_count", f.basis_count}});
  json mats = json::array();
  for (const auto& b : alg.basis()) mats.push_back(to_json(b));
  return {{"ambient_dim", alg.ambient_dim()},
          {"dim", alg.dim()},
          {"factors", factors},
          {"inner_product", "Re tr(P^* Q)"},
          {"basis", mats}};
}

inline json header(const char* command)
{
  return {{"tool", kToolName}, {"version", kToolVersion}, {"command", command}};
}

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// ---------------------------------------------------------------------------
// Subcommands

struct CheckOptions {
  std::string scenario;
  std::string out;
  std::string csv;
  std::string manifest;
};

inline int cmd_check(const CheckOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
  Stopwatch clock;
  try {
    const Scenario sc = parse_scenario(read_json_file(opt.scenario));
    if (!opt.manifest.empty()) write_text(opt.manifest, dump(basis_manifest(sc.algebra)), out);
    const RandersMetric metric(sc.metric);
    const SamplerParams sampler{sc.samples, sc.seed};
    const auto report = check_constant_length(sc.space, metric, sc.x, sampler, sc.tolerances, sc.variant);

    json j = header("check");
    j["scenario"] = sc.source;
    j["verdict"] = to_string(report.verdict);
    j["validity"] = {{"valid", metric.validity().valid},
                     {"alpha_norm_of_beta", metric.validity().alpha_norm_of_beta},
                     {"min_alpha_eigenvalue", metric.validity().min_alpha_eigenvalue}};
    j["reversible"] = reversibility_check(metric, sc.seed);
    j["constancy"] = to_json(report);
    j["sampler"] = {{"count", sampler.count}, {"seed", sampler.seed}, {"factors_per_sample", 3}, {"scale", 1.0}};
    j["timings"] = {{"wall_seconds", clock.seconds()}};
    write_text(opt.out, dump(j), out);

    if (!opt.csv.empty()) {
      const auto lengths = sample_lengths(sc.space, metric, sc.x, sampler);
      std::ostringstream csv;
      csv.precision(17);
      csv << "sample,length\n";
      for (std::size_t i = 0; i < lengths.size(); ++i) csv << i << "," << lengths[i] << "\n";
      write_text(opt.csv, csv.str(), out);
    }
    switch (report.verdict) {
      case Verdict::Constant: return kOk;
      case Verdict::NonConstant: return kRefuted;
      case Verdict::Inconclusive: return kInconclusive;
    }
    return kInconclusive;
  } catch (const Error& e) {
    err << "check: " << e.what() << "\n";
    return kUsage;
  }
}

struct IdealsOptions {
  std::string scenario;
  std::string out;
  std::string manifest;
};

inline int cmd_ideals(const IdealsOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
  Stopwatch clock;
  try {
    const Scenario sc = parse_scenario(read_json_file(opt.scenario));
    if (!opt.manifest.empty()) write_text(opt.manifest, dump(basis_manifest(sc.algebra)), out);
    if (sc.space.decomposition.has_isotropy())
      throw Error(ErrorKind::Parse, "field 'h_basis': the equivalence check works on the group itself");
    if (!is_bi_invariant(sc.algebra, sc.metric.alpha_gram))
      throw Error(ErrorKind::Parse, "field 'metric': alpha must be bi-invariant for the ideal check");
    const RandersMetric metric(sc.metric);
    const Vector v_alpha = metric.alpha_dual_vector();
    const auto rep = equivalence_check(sc.algebra, sc.space.bi, sc.metric.alpha_gram, sc.x, v_alpha,
                                       {sc.samples, sc.seed}, sc.tolerances);
    json j = header("ideals");
    j["scenario"] = sc.source;
    j["v_alpha_dual"] = to_json(v_alpha);
    j["conditions"] = {
        {"cond1_constant_length", {{"relative_spread", rep.cond1_spread}, {"verdict", to_string(rep.cond1_verdict)}}},
        {"cond2_ideal_gX_perp_ideal_V",
         {{"orthogonal", rep.cond2_orthogonal}, {"max_inner", rep.cond2_max_inner},
          {"dim_ideal_gX", rep.ideal_gx_dim}, {"dim_ideal_V", rep.ideal_v_dim}}},
        {"cond3_ideal_gV_perp_ideal_X",
         {{"orthogonal", rep.cond3_orthogonal}, {"max_inner", rep.cond3_max_inner},
          {"dim_ideal_gV", rep.ideal_gv_dim}, {"dim_ideal_X", rep.ideal_x_dim}}},
        {"cond4_orbit_pairing_constant", {{"relative_spread", rep.cond4_spread}, {"verdict", to_string(rep.cond4_verdict)}}},
    };
    j["verdicts_agree"] = rep.verdicts_agree;
    j["all_hold"] = rep.all_hold;
    j["timings"] = {{"wall_seconds", clock.seconds()}};
    write_text(opt.out, dump(j), out);
    if (!rep.verdicts_agree) return kInconclusive;
    return rep.all_hold ? kOk : kRefuted;
  } catch (const Error& e) {
    err << "ideals: " << e.what() << "\n";
    return kUsage;
  }
}

struct OrbitOptions {
  std::string scenario;
  std::string out;
  std::size_t count = 0;  ///< 0: use the scenario's sample count
  std::string manifest;
};

/// One CSV row per Ad_g X: algebra coefficients, F-length, alpha-length.
inline int cmd_orbit(const OrbitOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
  try {
    const Scenario sc = parse_scenario(read_json_file(opt.scenario));
    if (!opt.manifest.empty()) write_text(opt.manifest, dump(basis_manifest(sc.algebra)), out);
    const RandersMetric metric(sc.metric);
    const std::size_t count = opt.count > 0 ? opt.count : sc.samples;
    const auto orbit = sample_orbit(sc.algebra, sc.x, count, sc.seed);
    std::ostringstream csv;
    csv.precision(17);
    for (int k = 0; k < sc.algebra.dim(); ++k) csv << "c" << k << ",";
    csv << "F,alpha\n";
    for (const auto& p : orbit.points) {
      const Vector z = sc.space.decomposition.project(p);
      for (Eigen::Index k = 0; k < p.size(); ++k) csv << p(k) << ",";
      csv << finsler_norm(metric, z) << "," << metric.alpha(z) << "\n";
    }
    write_text(opt.out, csv.str(), out);
    return kOk;
  } catch (const Error& e) {
    err << "orbit: " << e.what() << "\n";
    return kUsage;
  }
}

struct ConstructOptions {
  std::string case_name;
  double lambda = 0.0;
  double a = 0.0;
  double b = 0.0;
  double r = 1.0;
  double s = 1.0;
  double l = 1.0;
  std::uint64_t seed = 0;
  std::size_t points = 0;  ///< 0: case default
  std::size_t samples = 500;
  std::string out;
  std::string manifest;
};

inline int cmd_construct(const ConstructOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
  Stopwatch clock;
  try {
    if (!(opt.l > 0.0)) throw Error(ErrorKind::Parse, "--l must be positive");
    json j = header("construct");
    j["case"] = opt.case_name;
    j["seed"] = opt.seed;
    j["samples"] = opt.samples;
    bool ok = false;
    std::optional<MatrixLieAlgebra> alg;

    if (opt.case_name == "su3-two-eig" || opt.case_name == "su3-diag") {
      const bool two = opt.case_name == "su3-two-eig";
      const std::size_t pts = opt.points > 0 ? opt.points : (two ? 16 : 25);
      const auto problem = two ? make_su3_two_eigenvalue_problem(opt.lambda, opt.l, opt.seed, pts)
                               : make_su3_general_diagonal_problem(opt.a, opt.b, opt.l, opt.seed, pts);
      const auto res = solve_construction(problem);
      alg = problem.algebra;
      j["parameters"] = two ? json{{"lambda", opt.lambda}, {"l", opt.l}, {"points", pts}}
                            : json{{"a", opt.a}, {"b", opt.b}, {"c", -opt.a - opt.b}, {"l", opt.l}, {"points", pts}};
      j["algebra"] = json::array({json::array({"su", 3})});
      j["x"] = to_json(problem.x);
      j["metric"] = metric_to_json(res.metric);
      j["construction"] = to_json(res);
      j["symmetry_group"] = problem.ansatz.symmetry_group;
      ok = res.accepted();
      if (ok) {
        const auto space = HomogeneousSpace::group(problem.algebra);
        const auto c = check_constant_length(space, RandersMetric(res.metric), problem.x, {opt.samples, opt.seed});
        const auto alpha_spec =
            length_spectrum(space, RandersMetric(res.metric), problem.x, {opt.samples, opt.seed}, LengthKind::Alpha);
        j["constancy"] = to_json(c);
        j["alpha_length_report"] = to_json(alpha_spec);
        ok = c.verdict == Verdict::Constant;
      }
    } else if (opt.case_name == "su2xs1") {
      const std::size_t pts = opt.points > 0 ? opt.points : 24;
      const auto fam = construct_su2_circle(opt.a, opt.b, opt.r, opt.s, opt.l, opt.seed, pts, 5, {opt.samples, opt.seed});
      const auto frame = su2_circle_frame();
      alg = frame.algebra;
      j["parameters"] = {{"a", opt.a}, {"b", opt.b}, {"r", opt.r}, {"s", opt.s}, {"l", opt.l}, {"points", pts}};
      j["algebra"] = json::array({json::array({"su", 2}), json::array({"abelian", 1})});
      j["x"] = to_json(Vector(opt.r * frame.u1 + opt.s * frame.u2));
      j["construction"] = to_json(fam.particular);
      json members = json::array();
      for (const auto& m : fam.members) {
        members.push_back({{"tau", m.tau},
                           {"coefficients", to_json(m.coefficients)},
                           {"spd_ok", m.spd_ok},
                           {"validity_ok", m.validity_ok},
                           {"alpha_norm_of_beta", m.alpha_norm_of_beta},
                           {"residual", m.residual},
                           {"metric", metric_to_json(m.metric)},
                           {"constancy", to_json(m.constancy)}});
      }
      j["family"] = {{"dimension", fam.particular.solution_space_dim},
                     {"null_direction", to_json(fam.null_direction)},
                     {"tau_min", fam.tau_min},
                     {"tau_max", fam.tau_max},
                     {"status", to_string(fam.status)},
                     {"members", members}};
      ok = fam.status == ConstructionStatus::Ok;
      // the central member is the one embedded for re-checking
      j["metric"] = ok ? metric_to_json(fam.members[fam.members.size() / 2].metric)
                       : metric_to_json(fam.particular.metric);
    } else {
      throw Error(ErrorKind::Parse, "--case must be one of su3-two-eig, su3-diag, su2xs1");
    }
    j["status"] = ok ? "ok" : "no valid metric";
    j["timings"] = {{"wall_seconds", clock.seconds()}};
    if (!opt.manifest.empty() && alg) write_text(opt.manifest, dump(basis_manifest(*alg)), out);
    write_text(opt.out, dump(j), out);
    return ok ? kOk : kRefuted;
  } catch (const Error& e) {
    err << "construct: " << e.what() << "\n";
    return kUsage;
  }
}

/// Full command-line entry point.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
  CLI::App app{"Constant-length Killing fields and Clifford-Wolf translations of left-invariant Randers metrics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  CheckOptions check;
  auto* c = app.add_subcommand("check", "verify constant length of the Killing field of X");
  c->add_option("scenario", check.scenario, "scenario JSON")->required();
  c->add_option("--out", check.out, "report path (default stdout)");
  c->add_option("--csv", check.csv, "per-sample lengths CSV");
  c->add_option("--basis-manifest", check.manifest, "write the basis matrices as JSON");

  IdealsOptions ideals;
  auto* i = app.add_subcommand("ideals", "four-condition equivalence for bi-invariant alpha");
  i->add_option("scenario", ideals.scenario, "scenario JSON")->required();
  i->add_option("--out", ideals.out, "report path (default stdout)");
  i->add_option("--basis-manifest", ideals.manifest, "write the basis matrices as JSON");

  OrbitOptions orbit;
  auto* o = app.add_subcommand("orbit", "dump sampled Ad-orbit points of X as CSV");
  o->add_option("scenario", orbit.scenario, "scenario JSON")->required();
  o->add_option("--out", orbit.out, "CSV path (default stdout)");
  o->add_option("--count", orbit.count, "number of points (default: scenario samples)");
  o->add_option("--basis-manifest", orbit.manifest, "write the basis matrices as JSON");

  ConstructOptions con;
  auto* k = app.add_subcommand("construct", "construct alpha so that X has constant F-length");
  k->add_option("--case", con.case_name, "su3-two-eig | su3-diag | su2xs1")
      ->required()
      ->check(CLI::IsMember({"su3-two-eig", "su3-diag", "su2xs1"}));
  k->add_option("--lambda", con.lambda, "V = lambda X (su3-two-eig)");
  k->add_option("--a", con.a, "first V coefficient");
  k->add_option("--b", con.b, "second V coefficient");
  k->add_option("--r", con.r, "X = r U1 + s U2 (su2xs1)")->check(CLI::PositiveNumber);
  k->add_option("--s", con.s, "X = r U1 + s U2 (su2xs1), nonzero");
  k->add_option("--l", con.l, "target length")->check(CLI::PositiveNumber);
  k->add_option("--seed", con.seed, "seed");
  k->add_option("--points", con.points, "constraint points (default per case)");
  k->add_option("--samples", con.samples, "certification samples")->check(CLI::Range(2, 1 << 24));
  k->add_option("--out", con.out, "report path (default stdout)");
  k->add_option("--basis-manifest", con.manifest, "write the basis matrices as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  if (c->parsed()) return cmd_check(check, out, err);
  if (i->parsed()) return cmd_ideals(ideals, out, err);
  if (o->parsed()) return cmd_orbit(orbit, out, err);
  if (k->parsed()) {
    if (con.case_name == "su2xs1" && con.s == 0.0) {
      err << "construct: --s must be nonzero\n";
      return kUsage;
    }
    return cmd_construct(con, out, err);
  }
  return kUsage;
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
  std::vector<const char*> argv{kToolName};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(int(argv.size()), argv.data(), out, err);
}

}  // namespace randers::cli

#endif  // RANDERS_CLI_HPP

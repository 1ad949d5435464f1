#ifndef RANDERS_CONSTRUCTOR_HPP
#define RANDERS_CONSTRUCTOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "randers/error.hpp"
#include "randers/killing.hpp"
#include "randers/lie_core.hpp"
#include "randers/randers_metric.hpp"

namespace randers {

/// A quadratic form on the ambient matrix space, restricted to the algebra.
struct Monomial {
  std::string name;
  std::function<double(const Matrix&)> eval;
};

/// Symmetry-reduced family of candidate alpha^2: sum_k c_k q_k.
struct AnsatzBasis {
  std::vector<Monomial> monomials;
  std::string symmetry_group;
  int expected_nullity = 0;  ///< solution-space dimension forced by the ansatz itself

  std::size_t size() const { return monomials.size(); }

  Vector evaluate(const Matrix& m) const
  {
    Vector row(Eigen::Index(monomials.size()));
    for (std::size_t k = 0; k < monomials.size(); ++k) row(Eigen::Index(k)) = monomials[k].eval(m);
    return row;
  }

  std::vector<std::string> names() const
  {
    std::vector<std::string> out;
    for (const auto& m : monomials) out.push_back(m.name);
    return out;
  }

  /// Gram of monomial k on the algebra basis, by polarization.
  RealMatrix monomial_gram(const MatrixLieAlgebra& alg, std::size_t k) const
  {
    const int d = alg.dim();
    const auto& q = monomials.at(k).eval;
    RealMatrix g(d, d);
    Vector diag(d);
    for (int i = 0; i < d; ++i) diag(i) = q(alg.basis(i));
    for (int i = 0; i < d; ++i) {
      g(i, i) = diag(i);
      for (int j = i + 1; j < d; ++j) {
        g(i, j) = 0.5 * (q(alg.basis(i) + alg.basis(j)) - diag(i) - diag(j));
        g(j, i) = g(i, j);
      }
    }
    return g;
  }

  RealMatrix assemble_gram(const MatrixLieAlgebra& alg, const Vector& coefficients) const
  {
    if (std::size_t(coefficients.size()) != monomials.size())
      throw Error(ErrorKind::DimensionMismatch, "one coefficient per monomial is required");
    RealMatrix g = RealMatrix::Zero(alg.dim(), alg.dim());
    for (std::size_t k = 0; k < monomials.size(); ++k) g += coefficients(Eigen::Index(k)) * monomial_gram(alg, k);
    return g;
  }
};

/// Regenerates orbit points for a seed; used for rank saturation,
/// validation and uniqueness probes.
using PointSource = std::function<std::vector<Vector>(std::uint64_t seed, std::size_t count)>;

/// alpha(X')^2 = (l - <X', V>_bi)^2 for X' in the orbit of X.
struct ConstructionProblem {
  MatrixLieAlgebra algebra;
  BiInvariantForm bi;
  Vector x;
  Vector v;
  double l = 1.0;
  AnsatzBasis ansatz;
  std::vector<Vector> orbit_points;
  PointSource point_source;
  std::uint64_t seed = 0;
  std::size_t validation_count = 1000;
};

namespace detail {

inline void require_on_orbit(const MatrixLieAlgebra& alg, const Vector& x, const std::vector<Vector>& points)
{
  const Vector spec_x = imaginary_spectrum(alg.to_matrix(x));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double err = (imaginary_spectrum(alg.to_matrix(points[i])) - spec_x).cwiseAbs().maxCoeff();
    if (err > 1e-9)
      throw Error(ErrorKind::ConstraintViolation,
                  "orbit point " + std::to_string(i) + " has a different spectrum (error " + std::to_string(err) + ")");
  }
}

}  // namespace detail

inline ConstructionProblem make_problem(const MatrixLieAlgebra& alg, const BiInvariantForm& bi, const Vector& x,
                                        const Vector& v, double l, AnsatzBasis ansatz, PointSource source,
                                        std::uint64_t seed, std::size_t point_count)
{
  alg.check_coords(x);
  alg.check_coords(v);
  if (!(l > 0.0)) throw Error(ErrorKind::Precondition, "target length l must be positive");
  ConstructionProblem p{alg, bi, x, v, l, std::move(ansatz), {}, std::move(source), seed, 1000};
  if (p.point_source) p.orbit_points = p.point_source(seed, point_count);
  detail::require_on_orbit(alg, x, p.orbit_points);
  return p;
}

/// Rows (q_1(X'_i), ..., q_m(X'_i)) against (l - <X'_i, V>_bi)^2.
struct LinearSystem {
  RealMatrix matrix;
  Vector rhs;
  Eigen::Index rank = 0;
  Vector singular_values;
  bool degenerate = false;  ///< rank below (unknowns - expected nullity)
};

namespace detail {

inline Eigen::Index numerical_rank(const Vector& sv)
{
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > kRankTolerance * sv(0)) ++r;
  return r;
}

inline LinearSystem assemble_system(const ConstructionProblem& p, const std::vector<Vector>& points)
{
  if (points.empty()) throw Error(ErrorKind::Precondition, "construction needs orbit points");
  const auto cols = Eigen::Index(p.ansatz.size());
  LinearSystem sys;
  sys.matrix.resize(Eigen::Index(points.size()), cols);
  sys.rhs.resize(Eigen::Index(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    sys.matrix.row(Eigen::Index(i)) = p.ansatz.evaluate(p.algebra.to_matrix(points[i])).transpose();
    const double target = p.l - p.bi.inner(points[i], p.v);
    sys.rhs(Eigen::Index(i)) = target * target;
  }
  Eigen::JacobiSVD<RealMatrix> svd(sys.matrix);
  sys.singular_values = svd.singularValues();
  sys.rank = numerical_rank(sys.singular_values);
  sys.degenerate = sys.rank < cols - p.ansatz.expected_nullity;
  return sys;
}

}  // namespace detail

inline LinearSystem build_constraint_system(const ConstructionProblem& problem)
{
  detail::require_on_orbit(problem.algebra, problem.x, problem.orbit_points);
  return detail::assemble_system(problem, problem.orbit_points);
}

enum class ConstructionStatus {
  Ok,
  NoMetricInAnsatz,
  DegeneratePoints,
  SignFailure,
  NotPositiveDefinite,
  NotValid,
  EmptyFamily,
};

inline const char* to_string(ConstructionStatus s)
{
  switch (s) {
    case ConstructionStatus::Ok: return "ok";
    case ConstructionStatus::NoMetricInAnsatz: return "no metric in this ansatz";
    case ConstructionStatus::DegeneratePoints: return "degenerate point set";
    case ConstructionStatus::SignFailure: return "l - <X',V>_bi is not positive on the orbit";
    case ConstructionStatus::NotPositiveDefinite: return "coefficients do not form a positive definite alpha";
    case ConstructionStatus::NotValid: return "||beta||_alpha is not below 1";
    case ConstructionStatus::EmptyFamily: return "no member of the solution family is a valid metric";
  }
  return "unknown";
}

/// SPD / validity / identity checks of one coefficient vector.
struct MetricCheck {
  RandersMetricSpec metric;
  bool spd_ok = false;
  bool validity_ok = false;
  double min_alpha_eigenvalue = 0.0;
  double alpha_norm_of_beta = std::numeric_limits<double>::infinity();
};

struct ConstructionResult {
  Vector coefficients;
  std::vector<std::string> monomial_names;
  RealMatrix null_space;  ///< columns: directions of the solution family
  int solution_space_dim = 0;
  int rank = 0;
  Vector singular_values;
  double condition_number = 0.0;
  double fit_residual = 0.0;  ///< max |M c - r| on the system points
  double residual = 0.0;      ///< max identity defect on the held-out validation points
  double residual_scale = 1.0;
  bool consistent = false;
  bool degenerate = false;
  bool rank_saturated = true;
  bool sign_ok = false;
  double min_sign_margin = 0.0;  ///< min of l - <X',V>_bi over all points
  bool spd_ok = false;
  bool validity_ok = false;
  double min_alpha_eigenvalue = 0.0;
  double alpha_norm_of_beta = 0.0;
  RandersMetricSpec metric;
  Vector x;
  double l = 1.0;
  ConstructionStatus status = ConstructionStatus::NoMetricInAnsatz;

  bool accepted() const { return status == ConstructionStatus::Ok; }
};

inline MetricCheck check_coefficients(const ConstructionProblem& p, const Vector& coefficients)
{
  MetricCheck out;
  out.metric = RandersMetricSpec{p.ansatz.assemble_gram(p.algebra, coefficients), p.v, BetaConvention::BiDual,
                                 p.bi.gram};
  try {
    const auto v = validity_check(out.metric);
    out.spd_ok = true;
    out.min_alpha_eigenvalue = v.min_alpha_eigenvalue;
    out.alpha_norm_of_beta = v.alpha_norm_of_beta;
    out.validity_ok = v.valid;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(out.metric.alpha_gram, Eigen::EigenvaluesOnly);
    out.min_alpha_eigenvalue = es.eigenvalues()(0);
  }
  return out;
}

namespace detail {

inline std::vector<Vector> validation_points(const ConstructionProblem& p)
{
  return sample_orbit(p.algebra, p.x, p.validation_count, splitmix64(p.seed ^ 0x76616c6964ULL)).points;
}

/// max |alpha(X')^2 - (l - <X',V>_bi)^2| and min (l - <X',V>_bi).
inline std::pair<double, double> identity_defect(const ConstructionProblem& p, const RealMatrix& gram,
                                                 const std::vector<Vector>& points)
{
  double defect = 0.0;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& z : points) {
    const double target = p.l - p.bi.inner(z, p.v);
    defect = std::max(defect, std::abs(z.dot(gram * z) - target * target));
    margin = std::min(margin, target);
  }
  return {defect, margin};
}

}  // namespace detail

/// Minimum-norm least-squares solve by SVD, then validation of the
/// assembled metric on held-out orbit points.
inline ConstructionResult solve_construction(const ConstructionProblem& p, const LinearSystem& sys)
{
  if (sys.matrix.rows() == 0) throw Error(ErrorKind::Precondition, "empty constraint system");
  const auto cols = sys.matrix.cols();
  Eigen::JacobiSVD<RealMatrix> svd(sys.matrix, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const auto rank = detail::numerical_rank(sv);

  ConstructionResult r;
  r.monomial_names = p.ansatz.names();
  r.x = p.x;
  r.l = p.l;
  r.singular_values = sv;
  r.rank = int(rank);
  r.solution_space_dim = int(cols - rank);
  r.condition_number = rank > 0 ? sv(0) / sv(rank - 1) : std::numeric_limits<double>::infinity();
  r.coefficients = Vector::Zero(cols);
  const RealMatrix& u = svd.matrixU();
  const RealMatrix& v = svd.matrixV();
  for (Eigen::Index i = 0; i < rank; ++i) r.coefficients += v.col(i) * (u.col(i).dot(sys.rhs) / sv(i));
  r.null_space = v.rightCols(cols - rank);
  r.degenerate = sys.degenerate;

  r.residual_scale = std::max(1.0, sys.rhs.cwiseAbs().maxCoeff());
  r.fit_residual = (sys.matrix * r.coefficients - sys.rhs).cwiseAbs().maxCoeff();

  if (p.point_source) {
    const auto doubled = p.point_source(p.seed, 2 * p.orbit_points.size());
    r.rank_saturated = detail::assemble_system(p, doubled).rank == rank;
  }

  const auto check = check_coefficients(p, r.coefficients);
  r.metric = check.metric;
  r.spd_ok = check.spd_ok;
  r.validity_ok = check.validity_ok;
  r.min_alpha_eigenvalue = check.min_alpha_eigenvalue;
  r.alpha_norm_of_beta = check.alpha_norm_of_beta;

  const auto held_out = detail::validation_points(p);
  const auto [defect, margin] = detail::identity_defect(p, r.metric.alpha_gram, held_out);
  const auto [sys_defect, sys_margin] = detail::identity_defect(p, r.metric.alpha_gram, p.orbit_points);
  r.residual = defect;
  r.min_sign_margin = std::min(margin, sys_margin);
  r.sign_ok = r.min_sign_margin > 0.0;
  r.consistent = std::max({r.fit_residual, r.residual, sys_defect}) <= 1e-8 * r.residual_scale;

  if (!r.consistent) {
    r.status = ConstructionStatus::NoMetricInAnsatz;
  } else if (r.degenerate || !r.rank_saturated) {
    r.status = ConstructionStatus::DegeneratePoints;
  } else if (!r.sign_ok) {
    r.status = ConstructionStatus::SignFailure;
  } else if (!r.spd_ok) {
    r.status = ConstructionStatus::NotPositiveDefinite;
  } else if (!r.validity_ok) {
    r.status = ConstructionStatus::NotValid;
  } else {
    r.status = ConstructionStatus::Ok;
  }
  return r;
}

inline ConstructionResult solve_construction(const ConstructionProblem& p)
{
  return solve_construction(p, build_constraint_system(p));
}

// ---------------------------------------------------------------------------
// SU(3)

/// Hermitian entries H = M / sqrt(-1).
inline Matrix hermitian_part(const Matrix& m) { return -kI * m; }

/// x tr Q^2 + y u^*u + z q^2 for A = sqrt(-1) [[Q, u], [u^*, q]].
inline AnsatzBasis su3_two_eigenvalue_ansatz()
{
  AnsatzBasis a;
  a.symmetry_group = "S(U(2) x U(1))";
  a.monomials.push_back({"trQ^2", [](const Matrix& m) { return hermitian_part(m).topLeftCorner(2, 2).squaredNorm(); }});
  a.monomials.push_back({"u*u", [](const Matrix& m) {
                           const Matrix h = hermitian_part(m);
                           return std::norm(h(0, 2)) + std::norm(h(1, 2));
                         }});
  a.monomials.push_back({"q^2", [](const Matrix& m) {
                           const double q = hermitian_part(m)(2, 2).real();
                           return q * q;
                         }});
  return a;
}

/// x1 a11^2 + x2 a22^2 + x3 a33^2 + y1 |u|^2 + y2 |v|^2 + y3 |w|^2 for
/// A = sqrt(-1) [[a11, u, v], [u-bar, a22, w], [v-bar, w-bar, a33]].
inline AnsatzBasis su3_diagonal_ansatz()
{
  AnsatzBasis a;
  a.symmetry_group = "maximal torus of SU(3)";
  for (int i = 0; i < 3; ++i) {
    a.monomials.push_back({"a" + std::to_string(i + 1) + std::to_string(i + 1) + "^2", [i](const Matrix& m) {
                             const double d = hermitian_part(m)(i, i).real();
                             return d * d;
                           }});
  }
  const std::pair<int, int> entries[3] = {{0, 1}, {0, 2}, {1, 2}};
  const char* names[3] = {"|u|^2", "|v|^2", "|w|^2"};
  for (int k = 0; k < 3; ++k) {
    const auto [i, j] = entries[k];
    a.monomials.push_back({names[k], [i, j](const Matrix& m) { return std::norm(hermitian_part(m)(i, j)); }});
  }
  return a;
}

/// sqrt(-1) (3 w w^* - I) with w = (sqrt(1-t) cos(theta) e^{i phi1},
/// sqrt(1-t) sin(theta) e^{i phi2}, sqrt(t)); |w_3|^2 = t.
inline Matrix two_eigenvalue_orbit_matrix(double t, double theta, double phi1, double phi2)
{
  if (t < 0.0 || t > 1.0) throw Error(ErrorKind::ConstraintViolation, "t must lie in [0, 1]");
  Eigen::VectorXcd w(3);
  const double c = std::sqrt(1.0 - t);
  w << c * std::cos(theta) * std::exp(kI * phi1), c * std::sin(theta) * std::exp(kI * phi2), std::sqrt(t);
  return kI * (3.0 * w * w.adjoint() - Matrix::Identity(3, 3));
}

inline Vector su3_diagonal_element(const MatrixLieAlgebra& su3, double d1, double d2, double d3)
{
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = kI * d1;
  m(1, 1) = kI * d2;
  m(2, 2) = kI * d3;
  return su3.coordinates(m);
}

/// Stratified t in [0, 1] with seeded phases.
inline PointSource two_eigenvalue_point_source(const MatrixLieAlgebra& su3)
{
  return [su3](std::uint64_t seed, std::size_t count) {
    std::vector<Vector> pts;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t k = 0; k < count; ++k) {
      auto rng = detail::stream_rng(seed, k);
      const double t = (double(k) + unit(rng)) / double(count);
      const double theta = unit(rng) * std::numbers::pi / 2;
      const double phi1 = unit(rng) * 2 * std::numbers::pi;
      const double phi2 = unit(rng) * 2 * std::numbers::pi;
      pts.push_back(su3.coordinates(two_eigenvalue_orbit_matrix(t, theta, phi1, phi2)));
    }
    return pts;
  };
}

/// Stratified (s, t) grid over [-1, 2] x [0, 1] with seeded phases, fed
/// through parametrized_su3_orbit. Returns ceil(sqrt(count))^2 points.
inline PointSource diagonal_point_source(const MatrixLieAlgebra& su3)
{
  return [su3](std::uint64_t seed, std::size_t count) {
    const auto side = std::size_t(std::ceil(std::sqrt(double(std::max<std::size_t>(count, 1)))));
    std::vector<Vector> pts;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < side; ++i) {
      for (std::size_t j = 0; j < side; ++j) {
        auto rng = detail::stream_rng(seed, i * side + j);
        const double s = -1.0 + 3.0 * (double(i) + unit(rng)) / double(side);
        const double t = (double(j) + unit(rng)) / double(side);
        const Complex u = std::sqrt(t) * std::exp(kI * (2 * std::numbers::pi * unit(rng)));
        const Complex v = std::sqrt(1.0 - t) * std::exp(kI * (2 * std::numbers::pi * unit(rng)));
        const Complex w = std::sqrt(std::max(0.0, 2.0 + s - s * s)) * std::exp(kI * (2 * std::numbers::pi * unit(rng)));
        pts.push_back(parametrized_su3_orbit(su3, u, v, s, w));
      }
    }
    return pts;
  };
}

/// Random conjugates Ad_g X.
inline PointSource conjugation_point_source(const MatrixLieAlgebra& alg, const Vector& x)
{
  return [alg, x](std::uint64_t seed, std::size_t count) { return sample_orbit(alg, x, count, seed).points; };
}

inline ConstructionProblem make_su3_two_eigenvalue_problem(double lambda, double l, std::uint64_t seed = 0,
                                                           std::size_t points = 16)
{
  const MatrixLieAlgebra su3({su(3)});
  const auto bi = BiInvariantForm::standard(su3);
  const Vector x = su3_diagonal_element(su3, -1, -1, 2);
  const Vector v = lambda * x;
  return make_problem(su3, bi, x, v, l, su3_two_eigenvalue_ansatz(), two_eigenvalue_point_source(su3), seed, points);
}

/// X = sqrt(-1) diag(-1,-1,2), V = lambda X, ansatz x trQ^2 + y u*u + z q^2.
inline ConstructionResult construct_su3_two_eigenvalue(double lambda, double l, std::uint64_t seed = 0,
                                                       std::size_t points = 16)
{
  return solve_construction(make_su3_two_eigenvalue_problem(lambda, l, seed, points));
}

inline ConstructionProblem make_su3_general_diagonal_problem(double a, double b, double l, std::uint64_t seed = 0,
                                                             std::size_t points = 25)
{
  const MatrixLieAlgebra su3({su(3)});
  const auto bi = BiInvariantForm::standard(su3);
  const Vector x = su3_diagonal_element(su3, -1, -1, 2);
  const Vector v = su3_diagonal_element(su3, a, b, -a - b);
  return make_problem(su3, bi, x, v, l, su3_diagonal_ansatz(), diagonal_point_source(su3), seed, points);
}

/// X = sqrt(-1) diag(-1,-1,2), V = sqrt(-1) diag(a, b, -a-b), torus-invariant ansatz.
inline ConstructionResult construct_su3_general_diagonal(double a, double b, double l, std::uint64_t seed = 0,
                                                         std::size_t points = 25)
{
  return solve_construction(make_su3_general_diagonal_problem(a, b, l, seed, points));
}

/// Two-eigenvalue coefficients (x, y, z) written in the diagonal ansatz
/// (x1, x2, x3, y1, y2, y3) = (x, x, z, 2x, y, y).
inline Vector two_eigenvalue_to_diagonal(const Vector& xyz)
{
  Vector out(6);
  out << xyz(0), xyz(0), xyz(2), 2 * xyz(0), xyz(1), xyz(1);
  return out;
}

// ---------------------------------------------------------------------------
// SU(2) x S^1

struct Su2CircleFrame {
  MatrixLieAlgebra algebra{{su(2), abelian()}};
  Vector u1;  ///< unit vector of su(2)
  Vector u2;  ///< unit vector of the circle factor
};

inline Su2CircleFrame su2_circle_frame()
{
  Su2CircleFrame f;
  const auto bi = BiInvariantForm::standard(f.algebra);
  f.u1 = Vector::Unit(4, 0) / bi.norm(Vector::Unit(4, 0));
  f.u2 = Vector::Unit(4, 3) / bi.norm(Vector::Unit(4, 3));
  return f;
}

/// a11 x1^2 + a22 <X'',X''>_bi + a33 x2^2 + 2 a13 x1 x2 for
/// X = x1 U1 + X'' + x2 U2 with X'' orthogonal to U1 in su(2).
inline AnsatzBasis su2_circle_ansatz(const Su2CircleFrame& frame)
{
  const Matrix u1 = frame.algebra.to_matrix(frame.u1);
  const Matrix u2 = frame.algebra.to_matrix(frame.u2);
  auto x1 = [u1](const Matrix& m) { return detail::trace_pairing(u1, m); };
  auto x2 = [u2](const Matrix& m) { return detail::trace_pairing(u2, m); };
  AnsatzBasis a;
  a.symmetry_group = "stabilizer of U1 in SU(2), times S^1";
  a.expected_nullity = 1;
  a.monomials.push_back({"a11: x1^2", [x1](const Matrix& m) { return x1(m) * x1(m); }});
  a.monomials.push_back({"a22: <X'',X''>_bi", [x1](const Matrix& m) {
                           return m.topLeftCorner(2, 2).squaredNorm() - x1(m) * x1(m);
                         }});
  a.monomials.push_back({"a33: x2^2", [x2](const Matrix& m) { return x2(m) * x2(m); }});
  a.monomials.push_back({"a13: 2 x1 x2", [x1, x2](const Matrix& m) { return 2 * x1(m) * x2(m); }});
  return a;
}

inline ConstructionProblem make_su2_circle_problem(double a, double b, double r, double s, double l,
                                                   std::uint64_t seed = 0, std::size_t points = 24)
{
  if (!(r > 0.0)) throw Error(ErrorKind::Precondition, "r must be positive");
  if (s == 0.0) throw Error(ErrorKind::Precondition, "s must be nonzero");
  const auto frame = su2_circle_frame();
  const auto bi = BiInvariantForm::standard(frame.algebra);
  const Vector x = r * frame.u1 + s * frame.u2;
  const Vector v = a * frame.u1 + b * frame.u2;
  return make_problem(frame.algebra, bi, x, v, l, su2_circle_ansatz(frame),
                      conjugation_point_source(frame.algebra, x), seed, points);
}

struct FamilyMember {
  double tau = 0.0;  ///< coefficients = particular + tau * null direction
  Vector coefficients;
  RandersMetricSpec metric;
  bool spd_ok = false;
  bool validity_ok = false;
  double alpha_norm_of_beta = 0.0;
  double residual = 0.0;
  ConstancyReport constancy;
};

struct Su2CircleResult {
  ConstructionResult particular;  ///< minimum-norm solution and family data
  Vector null_direction;
  double tau_min = 0.0;  ///< feasible (SPD and valid) interval of tau
  double tau_max = 0.0;
  std::vector<FamilyMember> members;
  ConstructionStatus status = ConstructionStatus::EmptyFamily;
};

namespace detail {

inline bool feasible_member(const ConstructionProblem& p, const Vector& c)
{
  const auto chk = check_coefficients(p, c);
  return chk.spd_ok && chk.validity_ok;
}

}  // namespace detail

/// One-parameter family for X = r U1 + s U2, V = a U1 + b U2; samples
/// `member_count` members evenly inside the feasible interval and certifies
/// each one.
inline Su2CircleResult construct_su2_circle(double a, double b, double r, double s, double l, std::uint64_t seed = 0,
                                            std::size_t points = 24, std::size_t member_count = 5,
                                            const SamplerParams& certify = {200, 0})
{
  const auto p = make_su2_circle_problem(a, b, r, s, l, seed, points);
  Su2CircleResult out;
  out.particular = solve_construction(p);
  const auto& base = out.particular;
  if (!base.consistent || base.degenerate || !base.rank_saturated) {
    out.status = base.consistent ? ConstructionStatus::DegeneratePoints : ConstructionStatus::NoMetricInAnsatz;
    return out;
  }
  if (!base.sign_ok) {
    out.status = ConstructionStatus::SignFailure;
    return out;
  }
  if (base.solution_space_dim != 1) {
    out.status = ConstructionStatus::DegeneratePoints;
    return out;
  }
  out.null_direction = base.null_space.col(0);
  const Vector& c0 = base.coefficients;
  const Vector& n = out.null_direction;

  // bracket tau by positivity of the Gram diagonal, which is affine in tau
  const RealMatrix g0 = p.ansatz.assemble_gram(p.algebra, c0);
  const RealMatrix gn = p.ansatz.assemble_gram(p.algebra, n);
  const double cap = 1e3 * (1.0 + c0.norm());
  double lo = -cap;
  double hi = cap;
  for (Eigen::Index i = 0; i < g0.rows(); ++i) {
    if (gn(i, i) > 0) lo = std::max(lo, -g0(i, i) / gn(i, i));
    if (gn(i, i) < 0) hi = std::min(hi, -g0(i, i) / gn(i, i));
  }
  if (!(lo < hi)) return out;

  constexpr int kScan = 4001;
  int first = -1;
  int last = -1;
  for (int k = 0; k < kScan; ++k) {
    const double tau = lo + (hi - lo) * k / (kScan - 1);
    if (detail::feasible_member(p, c0 + tau * n)) {
      if (first < 0) first = k;
      last = k;
    }
  }
  if (first < 0) return out;

  // feasible set is an interval (SPD cone and the validity sublevel set are convex)
  auto refine = [&](double inside, double outside) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (inside + outside);
      (detail::feasible_member(p, c0 + mid * n) ? inside : outside) = mid;
    }
    return inside;
  };
  const double step = (hi - lo) / (kScan - 1);
  out.tau_min = first > 0 ? refine(lo + step * first, lo + step * (first - 1)) : lo;
  out.tau_max = last < kScan - 1 ? refine(lo + step * last, lo + step * (last + 1)) : hi;

  const auto space = HomogeneousSpace{p.algebra, p.bi, ReductiveDecomposition::trivial(p.algebra.dim())};
  const auto held_out = detail::validation_points(p);
  bool all_ok = member_count > 0;
  for (std::size_t k = 0; k < member_count; ++k) {
    FamilyMember m;
    m.tau = out.tau_min + (out.tau_max - out.tau_min) * double(k + 1) / double(member_count + 1);
    m.coefficients = c0 + m.tau * n;
    const auto chk = check_coefficients(p, m.coefficients);
    m.metric = chk.metric;
    m.spd_ok = chk.spd_ok;
    m.validity_ok = chk.validity_ok;
    m.alpha_norm_of_beta = chk.alpha_norm_of_beta;
    m.residual = detail::identity_defect(p, m.metric.alpha_gram, held_out).first;
    if (m.spd_ok && m.validity_ok) m.constancy = check_constant_length(space, RandersMetric(m.metric), p.x, certify);
    all_ok = all_ok && m.spd_ok && m.validity_ok && m.constancy.verdict == Verdict::Constant;
    out.members.push_back(std::move(m));
  }
  out.status = all_ok ? ConstructionStatus::Ok : ConstructionStatus::EmptyFamily;
  return out;
}

// ---------------------------------------------------------------------------
// SU(2) rigidity and uniqueness

struct RigidityVerdict {
  ConstancyReport constancy;
  bool triggered = false;        ///< constancy certified, so rigidity assertions apply
  bool beta_zero = false;
  bool alpha_bi_invariant = false;
  double beta_max = 0.0;         ///< largest |beta coefficient|
  double alpha_scale = 0.0;      ///< fitted c with alpha_gram ~ c * bi_gram
  double alpha_fit_defect = 0.0; ///< ||A - cB|| / ||A||
  bool rigidity_holds = true;    ///< false only if certified constancy coexists with beta != 0 or non-invariant alpha
  GroupElement witness;          ///< g with Ad_g X = -X
  double witness_error = 0.0;    ///< ||Ad_g X + X||
  double f_plus = 0.0;           ///< F(X)
  double f_minus = 0.0;          ///< F(-X) = F(Ad_g X)
};

/// Any constant-length X on SU(2) forces beta = 0 and alpha bi-invariant;
/// X and -X share an orbit, so their F-lengths coincide.
inline RigidityVerdict su2_rigidity_check(const MatrixLieAlgebra& alg, const RandersMetric& metric, const Vector& x,
                                          const SamplerParams& sampler = {}, const Tolerances& tol = {})
{
  if (alg.factors().size() != 1 || alg.factors()[0].kind != FactorKind::SpecialUnitary || alg.factors()[0].size != 2)
    throw Error(ErrorKind::Precondition, "rigidity check applies to su(2) only");
  alg.check_coords(x);
  if (x.isZero(0.0)) throw Error(ErrorKind::ZeroVector, "X must be nonzero");
  const auto space = HomogeneousSpace::group(alg);
  const RealMatrix& bgram = space.bi.gram;

  RigidityVerdict r;
  r.constancy = check_constant_length(space, metric, x, sampler, tol);
  r.triggered = r.constancy.verdict == Verdict::Constant;

  // witness: rotation by pi about an axis orthogonal to X
  int pick = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(x(i)) < std::abs(x(pick))) pick = i;
  Vector axis = Vector::Unit(3, pick);
  axis -= x * (space.bi.inner(axis, x) / space.bi.inner(x, x));
  axis *= std::sqrt(0.5) / space.bi.norm(axis);
  r.witness = exponential(alg, std::numbers::pi * axis);
  const Vector flipped = ad_orbit_point(alg, r.witness, x);
  r.witness_error = (flipped + x).norm();
  r.f_plus = finsler_norm(metric, x);
  r.f_minus = finsler_norm(metric, flipped);

  const RealMatrix& a = metric.spec().alpha_gram;
  r.beta_max = metric.beta_covector().cwiseAbs().maxCoeff();
  r.beta_zero = r.beta_max <= 1e-9 * std::max(1.0, std::sqrt(a.norm()));
  r.alpha_scale = (a.cwiseProduct(bgram)).sum() / bgram.squaredNorm();
  r.alpha_fit_defect = (a - r.alpha_scale * bgram).norm() / a.norm();
  r.alpha_bi_invariant = r.alpha_scale > 0.0 && r.alpha_fit_defect <= 1e-9;
  if (r.triggered) r.rigidity_holds = r.beta_zero && r.alpha_bi_invariant;
  return r;
}

struct UniquenessReport {
  std::vector<Vector> coefficients;
  double max_pairwise_distance = 0.0;
  double max_condition_number = 0.0;
  bool agree = false;
};

/// Re-solves from `trials` disjoint seeded point sets and compares the
/// coefficient vectors.
inline UniquenessReport uniqueness_probe(const ConstructionProblem& problem, std::size_t trials,
                                         double tolerance = 1e-9)
{
  if (!problem.point_source) throw Error(ErrorKind::Precondition, "uniqueness probe needs a point source");
  const auto base = solve_construction(problem);
  if (base.solution_space_dim != 0)
    throw Error(ErrorKind::Precondition, "solution space has dimension " + std::to_string(base.solution_space_dim) +
                                             "; uniqueness probe requires 0");
  UniquenessReport out;
  out.coefficients.push_back(base.coefficients);
  out.max_condition_number = base.condition_number;
  for (std::size_t k = 0; k < trials; ++k) {
    ConstructionProblem q = problem;
    q.seed = detail::splitmix64(problem.seed + 0x100000ULL * (k + 1));
    q.orbit_points = q.point_source(q.seed, problem.orbit_points.size());
    const auto res = solve_construction(q);
    out.coefficients.push_back(res.coefficients);
    out.max_condition_number = std::max(out.max_condition_number, res.condition_number);
  }
  for (std::size_t i = 0; i < out.coefficients.size(); ++i)
    for (std::size_t j = i + 1; j < out.coefficients.size(); ++j)
      out.max_pairwise_distance =
          std::max(out.max_pairwise_distance, (out.coefficients[i] - out.coefficients[j]).norm());
  out.agree = out.max_pairwise_distance <= tolerance;
  return out;
}

}  // namespace randers

#endif  // RANDERS_CONSTRUCTOR_HPP

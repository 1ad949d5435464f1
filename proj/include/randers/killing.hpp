#ifndef RANDERS_KILLING_HPP
#define RANDERS_KILLING_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "randers/error.hpp"
#include "randers/lie_core.hpp"
#include "randers/randers_metric.hpp"

namespace randers {

struct SamplerParams {
  std::size_t count = 500;
  std::uint64_t seed = 0;
};

/// Thresholds of the three-way constancy verdict.
struct Tolerances {
  double constant = 1e-8;       ///< relative spread/residual at or below: constant
  double nonconstant = 1e-4;    ///< at or above: certified non-constant
  double orthogonality = 1e-10; ///< ideal orthogonality
};

enum class Verdict { Constant, NonConstant, Inconclusive };

inline const char* to_string(Verdict v)
{
  switch (v) {
    case Verdict::Constant: return "constant";
    case Verdict::NonConstant: return "non-constant";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

inline Verdict classify(double relative, const Tolerances& tol)
{
  if (relative <= tol.constant) return Verdict::Constant;
  if (relative >= tol.nonconstant) return Verdict::NonConstant;
  return Verdict::Inconclusive;
}

/// G/H data shared by every constancy computation: the algebra, the
/// bi-invariant form and the splitting g = h + m.
struct HomogeneousSpace {
  MatrixLieAlgebra algebra;
  BiInvariantForm bi;
  ReductiveDecomposition decomposition;

  static HomogeneousSpace group(const MatrixLieAlgebra& alg, std::vector<double> weights = {})
  {
    return {alg, BiInvariantForm::standard(alg, std::move(weights)), ReductiveDecomposition::trivial(alg.dim())};
  }

  /// Bi-invariant Gram restricted to m.
  RealMatrix m_bi_gram() const
  {
    const RealMatrix& mb = decomposition.m_basis;
    return mb.transpose() * bi.gram * mb;
  }
};

enum class LengthKind { Finsler, Alpha };
enum class DerivativeVariant { Left, Right };
enum class CriterionVariant { Hrs1, Hrs2 };

inline const char* to_string(CriterionVariant v) { return v == CriterionVariant::Hrs1 ? "HRS1" : "HRS2"; }

namespace detail {

inline Vector projected_orbit_point(const HomogeneousSpace& space, const GroupElement& g, const Vector& x)
{
  const Vector z = space.decomposition.project(ad_orbit_point(space.algebra, g, x));
  if (z.norm() <= 1e-12 * x.norm())
    throw Error(ErrorKind::ZeroVector, "(Ad_g X)_m vanishes; F is undefined at 0");
  return z;
}

}  // namespace detail

/// Per-sample lengths F((Ad_g X)_m) (or alpha only) over sampled g.
inline std::vector<double> sample_lengths(const HomogeneousSpace& space, const RandersMetric& metric, const Vector& x,
                                          const SamplerParams& sampler, LengthKind kind = LengthKind::Finsler)
{
  space.algebra.check_coords(x);
  if (x.isZero(0.0)) throw Error(ErrorKind::ZeroVector, "X must be nonzero");
  if (metric.dim() != space.decomposition.m_dim())
    throw Error(ErrorKind::DimensionMismatch, "metric dimension does not match m");
  std::vector<double> out;
  out.reserve(sampler.count);
  for (const auto& g : sample_group(space.algebra, sampler.count, sampler.seed)) {
    const Vector z = detail::projected_orbit_point(space, g, x);
    out.push_back(kind == LengthKind::Finsler ? finsler_norm(metric, z) : metric.alpha(z));
  }
  return out;
}

inline LengthReport length_spectrum(const HomogeneousSpace& space, const RandersMetric& metric, const Vector& x,
                                    const SamplerParams& sampler, LengthKind kind = LengthKind::Finsler)
{
  if (sampler.count < 2) throw Error(ErrorKind::Precondition, "length spectrum needs at least 2 samples");
  const auto lengths = sample_lengths(space, metric, x, sampler, kind);
  return summarize_lengths(lengths, sampler.seed);
}

/// d/dt F at t = 0 along g_t = exp(tY) g (Left) or g exp(tY) (Right).
inline double length_derivative(const HomogeneousSpace& space, const RandersMetric& metric, const Vector& x,
                                const GroupElement& g, const Vector& y, DerivativeVariant variant)
{
  const auto& alg = space.algebra;
  const Vector adx = ad_orbit_point(alg, g, x);
  const Vector z = space.decomposition.project(adx);
  if (z.norm() <= 1e-12 * x.norm()) throw Error(ErrorKind::ZeroVector, "(Ad_g X)_m vanishes");
  const Vector dz = space.decomposition.project(variant == DerivativeVariant::Left
                                                    ? bracket(alg, y, adx)
                                                    : ad_orbit_point(alg, g, bracket(alg, y, x)));
  return metric.alpha_inner(dz, z) / metric.alpha(z) + metric.beta(dz);
}

struct CriterionReport {
  double max_abs_residual = 0.0;
  double normalized_residual = 0.0;  ///< max_abs_residual / mean F over the samples
  double f_scale = 0.0;
  std::size_t argmax_sample = 0;     ///< index into the sampled group elements
  std::size_t argmax_direction = 0;  ///< index of Y in the direction basis
  std::size_t samples = 0;
  std::size_t directions = 0;
  CriterionVariant variant = CriterionVariant::Hrs1;
};

/// Largest derivative of the length function over sampled g and a basis of
/// directions Y: all of g for HRS1 (left family), the m-basis for HRS2
/// (right family).
inline CriterionReport criterion_residual(const HomogeneousSpace& space, const RandersMetric& metric,
                                          const Vector& x, const SamplerParams& sampler, CriterionVariant variant)
{
  const auto& alg = space.algebra;
  alg.check_coords(x);
  if (x.isZero(0.0)) throw Error(ErrorKind::ZeroVector, "X must be nonzero");

  std::vector<Vector> directions;
  if (variant == CriterionVariant::Hrs1) {
    for (int i = 0; i < alg.dim(); ++i) directions.push_back(Vector::Unit(alg.dim(), i));
  } else {
    for (int i = 0; i < space.decomposition.m_dim(); ++i) directions.push_back(space.decomposition.m_basis.col(i));
  }
  const auto dir = variant == CriterionVariant::Hrs1 ? DerivativeVariant::Left : DerivativeVariant::Right;

  CriterionReport r;
  r.variant = variant;
  r.directions = directions.size();
  double f_sum = 0.0;
  const auto group = sample_group(alg, sampler.count, sampler.seed);
  for (std::size_t s = 0; s < group.size(); ++s) {
    f_sum += finsler_norm(metric, detail::projected_orbit_point(space, group[s], x));
    for (std::size_t k = 0; k < directions.size(); ++k) {
      const double d = std::abs(length_derivative(space, metric, x, group[s], directions[k], dir));
      if (d > r.max_abs_residual) {
        r.max_abs_residual = d;
        r.argmax_sample = s;
        r.argmax_direction = k;
      }
    }
  }
  r.samples = group.size();
  r.f_scale = group.empty() ? 0.0 : f_sum / double(group.size());
  r.normalized_residual = r.f_scale > 0.0 ? r.max_abs_residual / r.f_scale : r.max_abs_residual;
  return r;
}

/// Spectrum and criterion combined into one three-way verdict. Disagreement
/// between the two certificates is reported as inconclusive.
struct ConstancyReport {
  LengthReport spectrum;
  CriterionReport criterion;
  Verdict spectrum_verdict = Verdict::Inconclusive;
  Verdict criterion_verdict = Verdict::Inconclusive;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> notes;
};

inline ConstancyReport check_constant_length(const HomogeneousSpace& space, const RandersMetric& metric,
                                             const Vector& x, const SamplerParams& sampler,
                                             const Tolerances& tol = {},
                                             CriterionVariant variant = CriterionVariant::Hrs1)
{
  ConstancyReport r;
  r.spectrum = length_spectrum(space, metric, x, sampler);
  r.criterion = criterion_residual(space, metric, x, sampler, variant);
  r.spectrum_verdict = classify(r.spectrum.relative_spread, tol);
  r.criterion_verdict = classify(r.criterion.normalized_residual, tol);
  if (r.spectrum_verdict == r.criterion_verdict) {
    r.verdict = r.spectrum_verdict;
  } else if (r.spectrum_verdict != Verdict::Constant && r.criterion_verdict != Verdict::Constant) {
    r.verdict = Verdict::NonConstant;
  } else {
    r.verdict = Verdict::Inconclusive;
  }
  r.notes.push_back("group samples are products of 3 exponentials of standard-normal algebra elements "
                    "(not Haar distributed)");
  if (r.verdict == Verdict::Constant)
    r.notes.push_back("constant length certified at sampling resolution: the flows exp(tX) act as "
                      "Clifford-Wolf translations for sufficiently small t");
  if (space.decomposition.has_isotropy())
    r.notes.push_back("the vanishing criterion is sufficient only when H is connected; "
                      "connectedness is assumed, not verified");
  if (r.verdict == Verdict::Inconclusive) r.notes.push_back("inconclusive: raise the sample count");
  return r;
}

struct EquivalenceReport {
  double cond1_spread = 0.0;  ///< relative spread of sampled F-lengths
  Verdict cond1_verdict = Verdict::Inconclusive;
  bool cond2_orthogonal = false;
  double cond2_max_inner = 0.0;
  bool cond3_orthogonal = false;
  double cond3_max_inner = 0.0;
  double cond4_spread = 0.0;  ///< spread of <X', V'>_alpha over orbit pairs, relative to alpha(X) alpha(V)
  Verdict cond4_verdict = Verdict::Inconclusive;
  int ideal_gx_dim = 0;
  int ideal_v_dim = 0;
  int ideal_gv_dim = 0;
  int ideal_x_dim = 0;
  bool verdicts_agree = false;
  bool all_hold = false;
};

/// True when alpha_gram is Ad-invariant, tested infinitesimally:
/// ad_b^T A + A ad_b = 0 for every basis element b.
inline bool is_bi_invariant(const MatrixLieAlgebra& alg, const RealMatrix& alpha_gram, double tol = 1e-9)
{
  if (alpha_gram.rows() != alg.dim() || alpha_gram.cols() != alg.dim()) return false;
  const double scale = std::max(1e-300, alpha_gram.norm());
  for (int i = 0; i < alg.dim(); ++i) {
    const RealMatrix ad = alg.ad_matrix(Vector::Unit(alg.dim(), i));
    if ((ad.transpose() * alpha_gram + alpha_gram * ad).norm() > tol * scale) return false;
  }
  return true;
}

namespace detail {

/// generate_ideal that tolerates numerically vanishing generators and
/// returns the zero ideal when nothing survives.
inline RealMatrix ideal_or_zero(const MatrixLieAlgebra& alg, const BiInvariantForm& bi,
                                const std::vector<Vector>& generators, double reference_norm)
{
  std::vector<Vector> kept;
  for (const auto& g : generators)
    if (bi.norm(g) > 1e-12 * std::max(1.0, reference_norm)) kept.push_back(g);
  if (kept.empty()) return RealMatrix(alg.dim(), 0);
  return generate_ideal(alg, bi, kept);
}

inline double max_cross_inner(const RealMatrix& a_gram, const RealMatrix& u, const RealMatrix& w)
{
  if (u.cols() == 0 || w.cols() == 0) return 0.0;
  return (u.transpose() * a_gram * w).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Evaluates the four equivalent conditions for a bi-invariant alpha on a
/// compact connected group. V is the alpha-dual of beta.
inline EquivalenceReport equivalence_check(const MatrixLieAlgebra& alg, const BiInvariantForm& bi,
                                           const RealMatrix& alpha_gram, const Vector& x, const Vector& v,
                                           const SamplerParams& sampler, const Tolerances& tol = {})
{
  alg.check_coords(x);
  alg.check_coords(v);
  if (!is_bi_invariant(alg, alpha_gram))
    throw Error(ErrorKind::Precondition, "alpha is not bi-invariant; the four-condition equivalence needs a bi-invariant alpha");
  const RandersMetric metric(RandersMetricSpec{alpha_gram, v, BetaConvention::AlphaDual, bi.gram});
  const auto space = HomogeneousSpace{alg, bi, ReductiveDecomposition::trivial(alg.dim())};

  EquivalenceReport r;
  const auto spectrum = length_spectrum(space, metric, x, sampler);
  r.cond1_spread = spectrum.relative_spread;
  r.cond1_verdict = classify(r.cond1_spread, tol);

  std::vector<Vector> gx, gv;
  for (int i = 0; i < alg.dim(); ++i) {
    const Vector b = Vector::Unit(alg.dim(), i);
    gx.push_back(bracket(alg, b, x));
    gv.push_back(bracket(alg, b, v));
  }
  const double xn = bi.norm(x);
  const double vn = bi.norm(v);
  const RealMatrix ideal_gx = detail::ideal_or_zero(alg, bi, gx, xn);
  const RealMatrix ideal_v = detail::ideal_or_zero(alg, bi, {v}, vn);
  const RealMatrix ideal_gv = detail::ideal_or_zero(alg, bi, gv, vn);
  const RealMatrix ideal_x = detail::ideal_or_zero(alg, bi, {x}, xn);
  r.ideal_gx_dim = int(ideal_gx.cols());
  r.ideal_v_dim = int(ideal_v.cols());
  r.ideal_gv_dim = int(ideal_gv.cols());
  r.ideal_x_dim = int(ideal_x.cols());
  r.cond2_max_inner = detail::max_cross_inner(alpha_gram, ideal_gx, ideal_v);
  r.cond3_max_inner = detail::max_cross_inner(alpha_gram, ideal_gv, ideal_x);
  r.cond2_orthogonal = r.cond2_max_inner <= tol.orthogonality;
  r.cond3_orthogonal = r.cond3_max_inner <= tol.orthogonality;

  const double ax = metric.alpha(x);
  const double av = metric.alpha(v);
  if (av == 0.0) {
    r.cond4_spread = 0.0;
  } else {
    const auto gs = sample_group(alg, sampler.count, sampler.seed);
    const auto hs = sample_group(alg, sampler.count, detail::splitmix64(sampler.seed ^ 0x6f72626974ULL));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < gs.size(); ++i) {
      const double p = metric.alpha_inner(ad_orbit_point(alg, gs[i], x), ad_orbit_point(alg, hs[i], v));
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    r.cond4_spread = (hi - lo) / (ax * av);
  }
  r.cond4_verdict = classify(r.cond4_spread, tol);

  const bool c1_decided = r.cond1_verdict != Verdict::Inconclusive;
  const bool c4_decided = r.cond4_verdict != Verdict::Inconclusive;
  const bool c1 = r.cond1_verdict == Verdict::Constant;
  const bool c4 = r.cond4_verdict == Verdict::Constant;
  r.verdicts_agree =
      c1_decided && c4_decided && c1 == r.cond2_orthogonal && c1 == r.cond3_orthogonal && c1 == c4;
  r.all_hold = r.verdicts_agree && c1;
  return r;
}

}  // namespace randers

#endif  // RANDERS_KILLING_HPP

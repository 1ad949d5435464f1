#ifndef RANDERS_RANDERS_METRIC_HPP
#define RANDERS_RANDERS_METRIC_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "randers/error.hpp"
#include "randers/lie_core.hpp"

namespace randers {

/// How the vector V induces the one-form beta.
enum class BetaConvention {
  AlphaDual,  ///< beta(y) = <y, V> in the inner product of alpha
  BiDual,     ///< beta(y) = <y, V>_bi in the bi-invariant form
};

inline const char* to_string(BetaConvention c) { return c == BetaConvention::AlphaDual ? "alpha" : "bi"; }

/// Raw left-invariant Randers data at the base point, in m-coordinates.
struct RandersMetricSpec {
  RealMatrix alpha_gram;
  Vector v_vector;
  BetaConvention beta_convention = BetaConvention::AlphaDual;
  RealMatrix bi_gram;  ///< only read for BiDual

  int dim() const { return int(alpha_gram.rows()); }

  /// Covector b with beta(y) = b . y
  Vector beta_covector() const
  {
    return beta_convention == BetaConvention::AlphaDual ? Vector(alpha_gram * v_vector) : Vector(bi_gram * v_vector);
  }
};

struct ValidityReport {
  bool valid = false;
  double alpha_norm_of_beta = 0.0;
  double min_alpha_eigenvalue = 0.0;
};

namespace detail {

inline void check_shapes(const RandersMetricSpec& spec)
{
  const auto d = spec.alpha_gram.rows();
  if (spec.alpha_gram.cols() != d) throw Error(ErrorKind::DimensionMismatch, "alpha_gram is not square");
  if (spec.v_vector.size() != d)
    throw Error(ErrorKind::DimensionMismatch, "v has length " + std::to_string(spec.v_vector.size()) +
                                                  ", alpha_gram is " + std::to_string(d) + "x" + std::to_string(d));
  if (spec.beta_convention == BetaConvention::BiDual && (spec.bi_gram.rows() != d || spec.bi_gram.cols() != d))
    throw Error(ErrorKind::DimensionMismatch, "bi_gram must match alpha_gram for the bi convention");
}

}  // namespace detail

/// ||beta||_alpha < 1 - 1e-12, which is equivalent to strong convexity of
/// alpha + beta. Throws NotPositiveDefinite when alpha_gram is not SPD.
inline ValidityReport validity_check(const RandersMetricSpec& spec)
{
  detail::check_shapes(spec);
  const RealMatrix& a = spec.alpha_gram;
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::NotPositiveDefinite, "alpha_gram is not symmetric");
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(a, Eigen::EigenvaluesOnly);
  ValidityReport out;
  out.min_alpha_eigenvalue = es.eigenvalues()(0);
  if (!(out.min_alpha_eigenvalue > 0.0))
    throw Error(ErrorKind::NotPositiveDefinite,
                "alpha_gram smallest eigenvalue " + std::to_string(out.min_alpha_eigenvalue));
  const Vector b = spec.beta_covector();
  out.alpha_norm_of_beta = std::sqrt(std::max(0.0, b.dot(a.ldlt().solve(b))));
  out.valid = out.alpha_norm_of_beta < 1.0 - 1e-12;
  return out;
}

/// Validated, immutable Randers norm F = alpha + beta on m.
class RandersMetric {
 public:
  explicit RandersMetric(RandersMetricSpec spec) : spec_(std::move(spec))
  {
    validity_ = validity_check(spec_);
    if (!validity_.valid)
      throw Error(ErrorKind::InvalidMetric,
                  "||beta||_alpha = " + std::to_string(validity_.alpha_norm_of_beta) + " is not below 1");
    beta_ = spec_.beta_covector();
  }

  const RandersMetricSpec& spec() const { return spec_; }
  const ValidityReport& validity() const { return validity_; }
  int dim() const { return spec_.dim(); }
  const Vector& beta_covector() const { return beta_; }

  double alpha(const Vector& y) const { return std::sqrt(std::max(0.0, y.dot(spec_.alpha_gram * y))); }
  double alpha_inner(const Vector& y, const Vector& z) const { return y.dot(spec_.alpha_gram * z); }
  double beta(const Vector& y) const { return beta_.dot(y); }

  /// V re-expressed so that beta(y) = <y, V'>_alpha.
  Vector alpha_dual_vector() const { return spec_.alpha_gram.ldlt().solve(beta_); }

 private:
  RandersMetricSpec spec_;
  ValidityReport validity_;
  Vector beta_;
};

inline double finsler_norm(const RandersMetric& metric, const Vector& y)
{
  if (y.size() != metric.dim())
    throw Error(ErrorKind::DimensionMismatch, "vector length " + std::to_string(y.size()) + " vs metric dimension " +
                                                  std::to_string(metric.dim()));
  if (y.isZero(0.0)) throw Error(ErrorKind::ZeroVector, "Finsler norm is not evaluated at 0");
  return metric.alpha(y) + metric.beta(y);
}

inline double finsler_norm(const RandersMetricSpec& spec, const Vector& y)
{
  return finsler_norm(RandersMetric(spec), y);
}

/// True iff beta vanishes; cross-checked against F(y) = F(-y) on 20 seeded
/// random directions.
inline bool reversibility_check(const RandersMetric& metric, std::uint64_t seed = 0)
{
  const double scale = std::max(1.0, metric.beta_covector().cwiseAbs().maxCoeff());
  const bool beta_zero = metric.beta_covector().cwiseAbs().maxCoeff() <= 1e-12 * scale;
  auto rng = detail::stream_rng(seed, 0x7265766572ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  bool symmetric = true;
  for (int trial = 0; trial < 20; ++trial) {
    Vector y(metric.dim());
    for (int k = 0; k < y.size(); ++k) y(k) = normal(rng);
    const double f_plus = finsler_norm(metric, y);
    const double f_minus = finsler_norm(metric, Vector(-y));
    if (std::abs(f_plus - f_minus) > 1e-12 * std::max(1.0, f_plus)) symmetric = false;
  }
  return beta_zero && symmetric;
}

/// Numerical summary of a length sample.
struct LengthReport {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double spread = 0.0;
  double relative_spread = 0.0;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
};

inline LengthReport summarize_lengths(std::span<const double> lengths, std::uint64_t seed)
{
  if (lengths.empty()) throw Error(ErrorKind::Precondition, "no lengths to summarize");
  LengthReport r;
  r.min = std::numeric_limits<double>::infinity();
  r.max = -std::numeric_limits<double>::infinity();
  for (double v : lengths) {
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
  }
  r.mean = std::accumulate(lengths.begin(), lengths.end(), 0.0) / double(lengths.size());
  r.mean = std::clamp(r.mean, r.min, r.max);
  r.spread = r.max - r.min;
  r.relative_spread = r.mean != 0.0 ? r.spread / std::abs(r.mean) : std::numeric_limits<double>::infinity();
  r.sample_count = lengths.size();
  r.seed = seed;
  return r;
}

}  // namespace randers

#endif  // RANDERS_RANDERS_METRIC_HPP

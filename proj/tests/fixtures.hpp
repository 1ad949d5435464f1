// Shared test fixtures built on the library types: random metrics and the
// finite-difference length oracle.
#ifndef RANDERS_TESTS_FIXTURES_HPP
#define RANDERS_TESTS_FIXTURES_HPP

#include <random>

#include "oracles.hpp"
#include "randers/killing.hpp"

namespace fixture {

using namespace randers;

/// Randers metric with Gram = bi Gram (scaled per factor) and alpha-dual V.
inline RandersMetric bi_invariant_metric(const HomogeneousSpace& space, const Vector& v)
{
  return RandersMetric({space.bi.gram, v, BetaConvention::AlphaDual, space.bi.gram});
}

/// Random SPD alpha on m and a V with ||beta||_alpha = norm in the given convention.
inline RandersMetric generic_metric(const HomogeneousSpace& space, std::uint64_t seed, double norm, BetaConvention conv)
{
  const int d = space.decomposition.m_dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0, 1);
  RealMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = n(rng);
  RandersMetricSpec spec{m * m.transpose() / d + 0.5 * RealMatrix::Identity(d, d), Vector(d), conv,
                         space.m_bi_gram()};
  for (int i = 0; i < d; ++i) spec.v_vector(i) = n(rng);
  spec.v_vector *= norm / validity_check(spec).alpha_norm_of_beta;
  return RandersMetric(spec);
}

/// F((Ad_{exp(tY) g} X)_m) for left, F((Ad_{g exp(tY)} X)_m) otherwise,
/// computed with a Taylor exponential and explicit trace pairings.
inline double length_along(const HomogeneousSpace& space, const RandersMetric& metric, const Vector& x,
                           const GroupElement& g, const Vector& y, double t, bool left)
{
  const auto& alg = space.algebra;
  const oracle::CMat e = oracle::expm_taylor(t * alg.to_matrix(y));
  const oracle::CMat h = left ? oracle::CMat(e * g.matrix) : oracle::CMat(g.matrix * e);
  const oracle::CMat conj = h * alg.to_matrix(x) * h.adjoint();
  Vector c(alg.dim());
  for (int i = 0; i < alg.dim(); ++i)
    c(i) = (alg.basis(i).adjoint() * conj).trace().real() / alg.trace_gram()(i, i);
  const Vector z = space.decomposition.project(c);
  const RealMatrix& a = metric.spec().alpha_gram;
  return std::sqrt(z.dot(a * z)) + metric.spec().beta_covector().dot(z);
}

/// Relative gap between length_derivative and a central difference with step h.
/// The denominator is floored at 1e-3 F so near-critical points do not
/// divide by a vanishing derivative.
inline double fd_relative_error(const HomogeneousSpace& space, const RandersMetric& metric, const Vector& x,
                                const GroupElement& g, const Vector& y, bool left, double h = 1e-4)
{
  const double analytic =
      length_derivative(space, metric, x, g, y, left ? DerivativeVariant::Left : DerivativeVariant::Right);
  const double fd =
      (length_along(space, metric, x, g, y, h, left) - length_along(space, metric, x, g, y, -h, left)) / (2 * h);
  const double f = length_along(space, metric, x, g, y, 0.0, left);
  return std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-3 * f);
}

}  // namespace fixture

#endif  // RANDERS_TESTS_FIXTURES_HPP

#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "randers/lie_core.hpp"

using namespace randers;

namespace {

std::vector<MatrixLieAlgebra> standard_algebras()
{
  return {MatrixLieAlgebra({su(2)}), MatrixLieAlgebra({su(2), abelian()}), MatrixLieAlgebra({su(2), su(2)}),
          MatrixLieAlgebra({su(3)})};
}

Vector coords_of(const MatrixLieAlgebra& alg, const oracle::CMat& m) { return alg.coordinates(m); }

}  // namespace

TEST(LieAlgebra, BasisIsAntiHermitianTracelessAndOrthogonal)
{
  for (const auto& alg : standard_algebras()) {
    for (int i = 0; i < alg.dim(); ++i) {
      const Matrix& b = alg.basis(i);
      EXPECT_LE((b + b.adjoint()).norm(), 1e-12);
      if (alg.factors()[std::size_t(alg.factor_of(i))].kind == FactorKind::SpecialUnitary) {
        EXPECT_LE(std::abs(b.trace()), 1e-12);
      }
    }
    const RealMatrix& g = alg.trace_gram();
    EXPECT_LE((g - RealMatrix(g.diagonal().asDiagonal())).norm(), 1e-12);
  }
  EXPECT_EQ(MatrixLieAlgebra({su(3)}).dim(), 8);
  EXPECT_EQ(MatrixLieAlgebra({su(4)}).dim(), 15);
  EXPECT_EQ(MatrixLieAlgebra({su(2), abelian()}).ambient_dim(), 3);
}

TEST(LieAlgebra, RejectsBadFactors)
{
  EXPECT_THROW(MatrixLieAlgebra({}), Error);
  EXPECT_THROW(MatrixLieAlgebra({su(1)}), Error);
  EXPECT_THROW(MatrixLieAlgebra({FactorDescriptor{FactorKind::Abelian, 2}}), Error);
}

TEST(LieAlgebra, StructureConstantsAntisymmetricAndJacobi)
{
  for (const auto& alg : standard_algebras()) {
    const int d = alg.dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          EXPECT_NEAR(alg.structure_constant(i, j, k), -alg.structure_constant(j, i, k), 1e-12);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
          const Vector bi = Vector::Unit(d, i), bj = Vector::Unit(d, j), bk = Vector::Unit(d, k);
          const Vector jac = bracket(alg, bi, bracket(alg, bj, bk)) + bracket(alg, bj, bracket(alg, bk, bi)) +
                             bracket(alg, bk, bracket(alg, bi, bj));
          EXPECT_LE(jac.norm(), 1e-10);
        }
      }
    }
  }
}

TEST(LieAlgebra, DistinctFactorsCommute)
{
  const MatrixLieAlgebra alg({su(2), su(2)});
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) EXPECT_LE(bracket(alg, Vector::Unit(6, i), Vector::Unit(6, j)).norm(), 1e-15);
}

TEST(Bracket, SelfBracketVanishes)
{
  const MatrixLieAlgebra alg({su(3)});
  const Vector x = random_element(alg, 3);
  EXPECT_LE(bracket(alg, x, x).norm(), 1e-14);
}

TEST(Bracket, HalfPauliBasisMatchesDirectMultiplication)
{
  const MatrixLieAlgebra alg({su(2)});
  const auto e = oracle::half_pauli();
  const oracle::CMat expected = oracle::mul2(e[0], e[1]) - oracle::mul2(e[1], e[0]);
  EXPECT_LE((expected - e[2]).norm(), 1e-15);  // oracle agrees with [e1,e2] = e3
  const Vector got = bracket(alg, coords_of(alg, e[0]), coords_of(alg, e[1]));
  EXPECT_LE((got - coords_of(alg, e[2])).norm(), 1e-12);
}

TEST(Bracket, AcrossFactorsOfSu2PlusRIsZero)
{
  const MatrixLieAlgebra alg({su(2), abelian()});
  Vector p = Vector::Zero(4), q = Vector::Zero(4);
  p << 0.3, -1.2, 0.7, 0.0;
  q << 0.0, 0.0, 0.0, 2.5;
  EXPECT_LE(bracket(alg, p, q).norm(), 1e-15);
}

TEST(Bracket, DimensionMismatchAndOutOfSpan)
{
  const MatrixLieAlgebra alg({su(2)});
  try {
    bracket(alg, Vector::Zero(3), Vector::Zero(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
  // identity matrix times i is not in su(2)
  try {
    alg.coordinates(Matrix(kI * Matrix::Identity(2, 2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInAlgebra);
  }
}

TEST(Exponential, ZeroGivesIdentity)
{
  const MatrixLieAlgebra alg({su(3)});
  EXPECT_LE((exponential(alg, Vector::Zero(8)).matrix - Matrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(Exponential, PiDiagonalGivesMinusIdentity)
{
  Matrix z(2, 2);
  z << kI * std::numbers::pi, 0, 0, -kI * std::numbers::pi;
  EXPECT_LE((expm_antihermitian(z) + Matrix::Identity(2, 2)).norm(), 1e-14);
}

TEST(Exponential, MatchesTaylorOracleAndInverse)
{
  for (const auto& alg : standard_algebras()) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Vector z = random_element(alg, s);
      const auto g = exponential(alg, z);
      EXPECT_LE((g.matrix - oracle::expm_taylor(alg.to_matrix(z))).norm(), 1e-11);
      EXPECT_LE(g.unitarity_defect(), 1e-11 * alg.ambient_dim());
      EXPECT_LE((g.matrix * exponential(alg, -z).matrix - Matrix::Identity(alg.ambient_dim(), alg.ambient_dim())).norm(),
                1e-11);
    }
  }
}

TEST(Exponential, RejectsNonAntiHermitian)
{
  Matrix z = Matrix::Identity(2, 2);
  try {
    expm_antihermitian(z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAntiHermitian);
  }
}

TEST(Exponential, OneParameterSubgroupProperty)
{
  const MatrixLieAlgebra alg({su(3)});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector z = random_element(alg, 100 + trial);
    const double s = unif(rng), t = unif(rng);
    const Matrix lhs = exponential(alg, (s + t) * z).matrix;
    const Matrix rhs = exponential(alg, s * z).matrix * exponential(alg, t * z).matrix;
    EXPECT_LE((lhs - rhs).norm(), 1e-10);
  }
}

TEST(GroupSampling, DeterministicUnitaryAndSpecial)
{
  for (const auto& alg : standard_algebras()) {
    const auto a = sample_group(alg, 25, 42);
    const auto b = sample_group(alg, 25, 42);
    const auto c = sample_group(alg, 25, 43);
    ASSERT_EQ(a.size(), 25u);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].matrix, b[i].matrix);
      EXPECT_EQ(a[i].log_factors.size(), 3u);
      EXPECT_LE(a[i].unitarity_defect(), 1e-11 * alg.ambient_dim());
      EXPECT_LE(std::abs(std::abs(a[i].matrix.determinant()) - 1.0), 1e-10);
      for (const auto& f : alg.factors()) {
        if (f.kind != FactorKind::SpecialUnitary) continue;
        const Complex det = a[i].matrix.block(f.block_offset, f.block_offset, f.size, f.size).determinant();
        EXPECT_LE(std::abs(det - 1.0), 1e-10);
      }
    }
    EXPECT_NE(a[0].matrix, c[0].matrix);
  }
}

TEST(GroupSampling, PrefixStableUnderCount)
{
  // item i depends only on (seed, i): a worker sampling a sub-range gets the same elements
  const MatrixLieAlgebra alg({su(2)});
  const auto small = sample_group(alg, 5, 9);
  const auto big = sample_group(alg, 50, 9);
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small[i].matrix, big[i].matrix);
}

TEST(GroupElement, LogHistoryReproducesMatrix)
{
  const MatrixLieAlgebra alg({su(3)});
  const auto g = sample_group(alg, 1, 5).front();
  Matrix m = Matrix::Identity(3, 3);
  for (const auto& z : g.log_factors) m = m * oracle::expm_taylor(alg.to_matrix(z));
  EXPECT_LE((m - g.matrix).norm(), 1e-11);
  EXPECT_LE(((g * g.inverse()).matrix - Matrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(AdjointAction, IdentityFixesAndSpectrumPreserved)
{
  for (const auto& alg : standard_algebras()) {
    const Vector x = random_element(alg, 77);
    EXPECT_LE((ad_orbit_point(alg, GroupElement::identity(alg.ambient_dim()), x) - x).norm(), 1e-14);
    const Vector spec = imaginary_spectrum(alg.to_matrix(x));
    for (const auto& g : sample_group(alg, 30, 8)) {
      const Vector y = ad_orbit_point(alg, g, x);
      EXPECT_LE((imaginary_spectrum(alg.to_matrix(y)) - spec).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(AdjointAction, BiNormOfSu3ElementIsSix)
{
  const MatrixLieAlgebra alg({su(3)});
  const auto bi = BiInvariantForm::standard(alg);
  Matrix xm = Matrix::Zero(3, 3);
  xm.diagonal() << -kI, -kI, 2.0 * kI;
  const Vector x = alg.coordinates(xm);
  EXPECT_NEAR(bi.inner(x, x), 6.0, 1e-12);
  for (const auto& g : sample_group(alg, 1000, 1)) {
    const Vector y = ad_orbit_point(alg, g, x);
    EXPECT_NEAR(bi.inner(y, y), 6.0, 1e-10);
  }
}

TEST(BiInvariantForm, AdInvarianceProperty)
{
  for (const auto& alg : standard_algebras()) {
    const auto bi = BiInvariantForm::standard(alg);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Vector p = random_element(alg, s, 0), q = random_element(alg, s, 1);
      const auto g = sample_group(alg, 1, 1000 + s).front();
      const double lhs = bi.inner(ad_orbit_point(alg, g, p), ad_orbit_point(alg, g, q));
      EXPECT_LE(std::abs(lhs - bi.inner(p, q)), 1e-10 * bi.norm(p) * bi.norm(q));
    }
  }
}

TEST(BiInvariantForm, WeightsScalePerFactor)
{
  const MatrixLieAlgebra alg({su(2), abelian()});
  const auto bi = BiInvariantForm::standard(alg, {2.0, 3.0});
  EXPECT_DOUBLE_EQ(bi.gram(0, 0), 4.0);
  EXPECT_DOUBLE_EQ(bi.gram(3, 3), 3.0);
  EXPECT_THROW(BiInvariantForm::standard(alg, {1.0}), Error);
  EXPECT_THROW(BiInvariantForm::standard(alg, {1.0, -1.0}), Error);
}

TEST(ReductiveDecomposition, ComplementIsOrthogonalAndProjects)
{
  const MatrixLieAlgebra alg({su(3)});
  const auto bi = BiInvariantForm::standard(alg);
  RealMatrix h(8, 1);
  h.col(0) = alg.coordinates(Matrix(kI * Eigen::Vector3cd(1, -1, 0).asDiagonal().toDenseMatrix()));
  const auto dec = ReductiveDecomposition::from_isotropy(bi, h);
  EXPECT_EQ(dec.h_basis.cols() + dec.m_basis.cols(), 8);
  EXPECT_LE((dec.h_basis.transpose() * bi.gram * dec.m_basis).cwiseAbs().maxCoeff(), 1e-10);
  const Vector x = random_element(alg, 4);
  const Vector z = dec.project(x);
  const Vector h_part = x - dec.m_basis * z;
  EXPECT_LE(subspace_residual(bi.gram, dec.h_basis, h_part), 1e-10);
  EXPECT_LE(dec.project(h.col(0)).norm(), 1e-12);
}

TEST(GenerateIdeal, SimpleAlgebraIsEverything)
{
  const MatrixLieAlgebra alg({su(2)});
  const auto bi = BiInvariantForm::standard(alg);
  EXPECT_EQ(generate_ideal(alg, bi, {random_element(alg, 1)}).cols(), 3);
  const MatrixLieAlgebra su3({su(3)});
  EXPECT_EQ(generate_ideal(su3, BiInvariantForm::standard(su3), {Vector::Unit(8, 7)}).cols(), 8);
}

TEST(GenerateIdeal, CentralElementSpansItself)
{
  const MatrixLieAlgebra alg({su(2), abelian()});
  const auto bi = BiInvariantForm::standard(alg);
  const RealMatrix w = generate_ideal(alg, bi, {Vector::Unit(4, 3)});
  ASSERT_EQ(w.cols(), 1);
  EXPECT_LE(subspace_residual(bi.gram, w, Vector::Unit(4, 3)), 1e-12);
}

TEST(GenerateIdeal, FirstFactorOfSu2Squared)
{
  const MatrixLieAlgebra alg({su(2), su(2)});
  const auto bi = BiInvariantForm::standard(alg);
  Vector x = Vector::Zero(6);
  x.head(3) = random_element(MatrixLieAlgebra({su(2)}), 2);
  const RealMatrix w = generate_ideal(alg, bi, {x});
  EXPECT_EQ(w.cols(), 3);
  EXPECT_EQ(oracle::ideal_dimension(alg.basis(), {alg.to_matrix(x)}), 3);
  for (int i = 0; i < 3; ++i) EXPECT_LE(subspace_residual(bi.gram, w, Vector::Unit(6, i)), 1e-10);
  EXPECT_GE(subspace_residual(bi.gram, w, Vector::Unit(6, 4)), 0.5);
}

TEST(GenerateIdeal, BracketClosedOrthonormalIdempotentMonotone)
{
  const MatrixLieAlgebra alg({su(2), su(2), abelian()});
  const auto bi = BiInvariantForm::standard(alg);
  for (std::uint64_t s = 0; s < 20; ++s) {
    Vector x = random_element(alg, s);
    if (s % 3 == 0) x.segment(3, 3).setZero();
    if (s % 3 == 1) x.head(3).setZero();
    if (s % 2 == 0) x(6) = 0.0;
    const RealMatrix w = generate_ideal(alg, bi, {x});
    EXPECT_LE((w.transpose() * bi.gram * w - RealMatrix::Identity(w.cols(), w.cols())).norm(), 1e-10);
    EXPECT_EQ(int(w.cols()), oracle::ideal_dimension(alg.basis(), {alg.to_matrix(x)}));
    for (int i = 0; i < alg.dim(); ++i)
      for (Eigen::Index c = 0; c < w.cols(); ++c)
        EXPECT_LE(subspace_residual(bi.gram, w, bracket(alg, Vector::Unit(alg.dim(), i), w.col(c))), 1e-10);
    std::vector<Vector> cols;
    for (Eigen::Index c = 0; c < w.cols(); ++c) cols.push_back(w.col(c));
    EXPECT_EQ(generate_ideal(alg, bi, cols).cols(), w.cols());
    const RealMatrix bigger = generate_ideal(alg, bi, {x, random_element(alg, s + 500)});
    for (Eigen::Index c = 0; c < w.cols(); ++c) EXPECT_LE(subspace_residual(bi.gram, bigger, w.col(c)), 1e-10);
  }
}

TEST(GenerateIdeal, AllZeroInputRejected)
{
  const MatrixLieAlgebra alg({su(2)});
  const auto bi = BiInvariantForm::standard(alg);
  EXPECT_THROW(generate_ideal(alg, bi, {Vector::Zero(3)}), Error);
  EXPECT_THROW(generate_ideal(alg, bi, {}), Error);
}

TEST(OrbitSample, InvariantsHold)
{
  const MatrixLieAlgebra alg({su(3)});
  const auto bi = BiInvariantForm::standard(alg);
  const Vector x = random_element(alg, 19);
  const auto orbit = sample_orbit(alg, x, 200, 6);
  EXPECT_EQ(orbit.points.size(), 200u);
  const Vector spec = imaginary_spectrum(alg.to_matrix(x));
  for (const auto& p : orbit.points) {
    EXPECT_LE((imaginary_spectrum(alg.to_matrix(p)) - spec).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(bi.norm(p), bi.norm(x), 1e-10);
  }
}

TEST(ParametrizedOrbit, BoundaryPointMatchesCharacteristicPolynomial)
{
  const Complex w = std::sqrt(2.0) * std::exp(kI * 0.4);
  const Matrix m = parametrized_su3_orbit_matrix(1.0, 0.0, 1.0, w);
  Matrix expected(3, 3);
  expected << -1, 0, 0, 0, 1, w, 0, std::conj(w), 0;
  expected *= kI;
  EXPECT_LE((m - expected).norm(), 1e-15);
  // lower block: lambda^2 - lambda - 2
  const auto roots = oracle::quadratic_roots(-1.0, -2.0);
  EXPECT_DOUBLE_EQ(roots[0], -1.0);
  EXPECT_DOUBLE_EQ(roots[1], 2.0);
  const Vector spec = imaginary_spectrum(m);
  EXPECT_NEAR(spec(0), -1.0, 1e-12);
  EXPECT_NEAR(spec(1), roots[0], 1e-12);
  EXPECT_NEAR(spec(2), roots[1], 1e-12);
}

TEST(ParametrizedOrbit, DiagonalEndpoint)
{
  const Matrix m = parametrized_su3_orbit_matrix(0.0, 1.0, 2.0, 0.0);
  Matrix expected = Matrix::Zero(3, 3);
  expected.diagonal() << 2.0 * kI, -kI, -kI;
  EXPECT_LE((m - expected).norm(), 1e-15);
  EXPECT_THROW(parametrized_su3_orbit_matrix(0.0, 1.0, 0.5, 0.0), Error);
  EXPECT_THROW(parametrized_su3_orbit_matrix(0.5, 0.5, 2.0, 0.0), Error);
}

TEST(ParametrizedOrbit, RandomAdmissibleInputsLieOnOrbit)
{
  const MatrixLieAlgebra alg({su(3)});
  const auto bi = BiInvariantForm::standard(alg);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const double t = unit(rng);
    const double s = -1 + 3 * unit(rng);
    const Complex u = std::sqrt(t) * std::exp(kI * 6.0 * unit(rng));
    const Complex v = std::sqrt(1 - t) * std::exp(kI * 6.0 * unit(rng));
    const Complex w = std::sqrt(2 + s - s * s) * std::exp(kI * 6.0 * unit(rng));
    const Matrix m = parametrized_su3_orbit_matrix(u, v, s, w);
    // the displayed matrix equals R diag-block R^*
    Matrix r(3, 3), mid(3, 3);
    r << u, v, 0, -std::conj(v), std::conj(u), 0, 0, 0, 1;
    mid << -1, 0, 0, 0, s, w, 0, std::conj(w), 1 - s;
    EXPECT_LE((m - kI * r * mid * r.adjoint()).norm(), 1e-12);
    const Vector x = parametrized_su3_orbit(alg, u, v, s, w);
    EXPECT_NEAR(bi.inner(x, x), 6.0, 1e-10);
    EXPECT_LE(std::abs(m.trace()), 1e-12);
    const Vector spec = imaginary_spectrum(m);
    EXPECT_NEAR(spec(0), -1, 1e-9);
    EXPECT_NEAR(spec(1), -1, 1e-9);
    EXPECT_NEAR(spec(2), 2, 1e-9);
  }
}

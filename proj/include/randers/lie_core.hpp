#ifndef RANDERS_LIE_CORE_HPP
#define RANDERS_LIE_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "randers/error.hpp"

namespace randers {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Relative singular-value cutoff used for every rank decision.
inline constexpr double kRankTolerance = 1e-10;

enum class FactorKind { SpecialUnitary, Abelian };

/// One simple or abelian summand, embedded as a diagonal block.
struct Factor {
  FactorKind kind = FactorKind::SpecialUnitary;
  int size = 2;          ///< k for su(k); always 1 for abelian
  int block_offset = 0;  ///< first ambient row/column of the block
  int first_basis = 0;   ///< index of the first basis element of this factor
  int basis_count = 0;

  std::string name() const
  {
    return kind == FactorKind::Abelian ? std::string("abelian(1)")
                                       : "su(" + std::to_string(size) + ")";
  }
};

struct FactorDescriptor {
  FactorKind kind;
  int size;
};

inline FactorDescriptor su(int k) { return {FactorKind::SpecialUnitary, k}; }
inline FactorDescriptor abelian() { return {FactorKind::Abelian, 1}; }

namespace detail {

inline double frobenius(const Matrix& m) { return m.norm(); }

/// Re tr(P^* Q)
inline double trace_pairing(const Matrix& p, const Matrix& q)
{
  return (p.adjoint() * q).trace().real();
}

/// Generalized Gell-Mann basis of su(k), each multiplied by sqrt(-1).
/// Order: for each pair j<k, the symmetric then antisymmetric
/// off-diagonal element; then the k-1 diagonal elements.
inline std::vector<Matrix> su_basis(int k)
{
  std::vector<Matrix> out;
  for (int j = 0; j < k; ++j) {
    for (int l = j + 1; l < k; ++l) {
      Matrix sym = Matrix::Zero(k, k);
      sym(j, l) = kI;
      sym(l, j) = kI;
      out.push_back(sym);
      Matrix anti = Matrix::Zero(k, k);
      anti(j, l) = 1.0;
      anti(l, j) = -1.0;
      out.push_back(anti);
    }
  }
  for (int l = 1; l < k; ++l) {
    const double c = std::sqrt(2.0 / (l * (l + 1.0)));
    Matrix d = Matrix::Zero(k, k);
    for (int j = 0; j < l; ++j) d(j, j) = kI * c;
    d(l, l) = -kI * c * double(l);
    out.push_back(d);
  }
  return out;
}

inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-item generator: item i of a seeded stream is independent of how the
/// stream is partitioned between workers.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index)
{
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

}  // namespace detail

/// Real Lie algebra of anti-Hermitian matrices, a direct sum of su(k) and
/// abelian(1) factors laid out block-diagonally in one ambient space.
class MatrixLieAlgebra {
 public:
  explicit MatrixLieAlgebra(std::vector<FactorDescriptor> factors)
  {
    if (factors.empty()) throw Error(ErrorKind::Precondition, "algebra needs at least one factor");
    int offset = 0;
    for (const auto& f : factors) {
      if (f.kind == FactorKind::SpecialUnitary && f.size < 2)
        throw Error(ErrorKind::Precondition, "su(k) requires k >= 2");
      if (f.kind == FactorKind::Abelian && f.size != 1)
        throw Error(ErrorKind::Precondition, "abelian factors are one-dimensional");
      offset += f.size;
    }
    ambient_ = offset;

    offset = 0;
    for (const auto& f : factors) {
      Factor fac;
      fac.kind = f.kind;
      fac.size = f.size;
      fac.block_offset = offset;
      fac.first_basis = int(basis_.size());
      std::vector<Matrix> local;
      if (f.kind == FactorKind::Abelian) {
        local.push_back(Matrix::Constant(1, 1, kI));
      } else {
        local = detail::su_basis(f.size);
      }
      for (const auto& b : local) {
        Matrix full = Matrix::Zero(ambient_, ambient_);
        full.block(offset, offset, f.size, f.size) = b;
        basis_.push_back(full);
        factor_index_.push_back(int(factors_.size()));
      }
      fac.basis_count = int(local.size());
      factors_.push_back(fac);
      offset += f.size;
    }

    const int d = dim();
    gram_.resize(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) gram_(i, j) = detail::trace_pairing(basis_[i], basis_[j]);
    gram_solver_.compute(gram_);

    structure_.assign(std::size_t(d) * d * d, 0.0);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const Vector c = coordinates(basis_[i] * basis_[j] - basis_[j] * basis_[i]);
        for (int k = 0; k < d; ++k) structure_[(std::size_t(i) * d + j) * d + k] = c(k);
      }
    }
  }

  int ambient_dim() const { return ambient_; }
  int dim() const { return int(basis_.size()); }
  const std::vector<Factor>& factors() const { return factors_; }
  const std::vector<Matrix>& basis() const { return basis_; }
  const Matrix& basis(int i) const { return basis_.at(std::size_t(i)); }
  int factor_of(int basis_index) const { return factor_index_.at(std::size_t(basis_index)); }

  /// Gram matrix Re tr(b_i^* b_j).
  const RealMatrix& trace_gram() const { return gram_; }

  /// c[i][j][k] with [b_i, b_j] = sum_k c[i][j][k] b_k.
  double structure_constant(int i, int j, int k) const
  {
    const int d = dim();
    return structure_[(std::size_t(i) * d + j) * d + k];
  }

  /// Matrix of ad_X acting on coordinates.
  RealMatrix ad_matrix(const Vector& x) const
  {
    check_coords(x);
    const int d = dim();
    RealMatrix ad = RealMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      if (x(i) == 0.0) continue;
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) ad(k, j) += x(i) * structure_constant(i, j, k);
    }
    return ad;
  }

  Matrix to_matrix(const Vector& coords) const
  {
    check_coords(coords);
    Matrix m = Matrix::Zero(ambient_, ambient_);
    for (int i = 0; i < dim(); ++i)
      if (coords(i) != 0.0) m += coords(i) * basis_[std::size_t(i)];
    return m;
  }

  /// Expand an ambient matrix in the basis. Throws NotInAlgebra when the
  /// expansion residual exceeds tol relative to the matrix norm.
  Vector coordinates(const Matrix& m, double tol = 1e-10) const
  {
    if (m.rows() != ambient_ || m.cols() != ambient_)
      throw Error(ErrorKind::DimensionMismatch,
                  "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                      ", ambient dimension is " + std::to_string(ambient_));
    const int d = dim();
    Vector rhs(d);
    for (int i = 0; i < d; ++i) rhs(i) = detail::trace_pairing(basis_[std::size_t(i)], m);
    Vector c = gram_solver_.solve(rhs);
    Matrix back = Matrix::Zero(ambient_, ambient_);
    for (int i = 0; i < d; ++i) back += c(i) * basis_[std::size_t(i)];
    const double residual = (back - m).norm();
    if (residual > tol * std::max(1.0, m.norm()))
      throw Error(ErrorKind::NotInAlgebra, "expansion residual " + std::to_string(residual));
    return c;
  }

  void check_coords(const Vector& x) const
  {
    if (x.size() != dim())
      throw Error(ErrorKind::DimensionMismatch, "coefficient vector has length " +
                                                    std::to_string(x.size()) + ", algebra dimension is " +
                                                    std::to_string(dim()));
  }

  /// Component of x in factor f.
  Vector restrict_to_factor(const Vector& x, int f) const
  {
    check_coords(x);
    Vector out = Vector::Zero(dim());
    const auto& fac = factors_.at(std::size_t(f));
    out.segment(fac.first_basis, fac.basis_count) = x.segment(fac.first_basis, fac.basis_count);
    return out;
  }

 private:
  int ambient_ = 0;
  std::vector<Factor> factors_;
  std::vector<Matrix> basis_;
  std::vector<int> factor_index_;
  RealMatrix gram_;
  Eigen::LDLT<RealMatrix> gram_solver_;
  std::vector<double> structure_;
};

/// A unitary matrix together with the algebra elements whose exponential
/// product produced it.
struct GroupElement {
  Matrix matrix;
  std::vector<Vector> log_factors;

  static GroupElement identity(int n) { return {Matrix::Identity(n, n), {}}; }

  double unitarity_defect() const
  {
    const auto n = matrix.rows();
    return (matrix.adjoint() * matrix - Matrix::Identity(n, n)).norm();
  }

  GroupElement inverse() const
  {
    GroupElement out{matrix.adjoint(), {}};
    for (auto it = log_factors.rbegin(); it != log_factors.rend(); ++it) out.log_factors.push_back(-*it);
    return out;
  }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b)
  {
    GroupElement out{a.matrix * b.matrix, a.log_factors};
    out.log_factors.insert(out.log_factors.end(), b.log_factors.begin(), b.log_factors.end());
    return out;
  }
};

/// Exponential of an anti-Hermitian matrix via the eigendecomposition of
/// the Hermitian matrix sqrt(-1) Z.
inline Matrix expm_antihermitian(const Matrix& z)
{
  if (z.rows() != z.cols()) throw Error(ErrorKind::DimensionMismatch, "exponential of a non-square matrix");
  if ((z + z.adjoint()).norm() > 1e-12 * std::max(1.0, z.norm()))
    throw Error(ErrorKind::NotAntiHermitian, "exponential input fails Z* = -Z");
  const Matrix h = kI * z;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd& lambda = es.eigenvalues();
  Eigen::VectorXcd phase(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) phase(i) = std::exp(-kI * lambda(i));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

inline GroupElement exponential(const MatrixLieAlgebra& alg, const Vector& z)
{
  return {expm_antihermitian(alg.to_matrix(z)), {z}};
}

/// Sorted eigenvalues of sqrt(-1)^{-1} M for anti-Hermitian M, i.e. the
/// imaginary parts of the spectrum.
inline Vector imaginary_spectrum(const Matrix& m)
{
  const Matrix h = -kI * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// [P, Q] computed as PQ - QP in the ambient space and re-expanded.
inline Vector bracket(const MatrixLieAlgebra& alg, const Vector& p, const Vector& q)
{
  alg.check_coords(p);
  alg.check_coords(q);
  const Matrix pm = alg.to_matrix(p);
  const Matrix qm = alg.to_matrix(q);
  return alg.coordinates(pm * qm - qm * pm);
}

/// Ad_g X = g X g^{-1}.
inline Vector ad_orbit_point(const MatrixLieAlgebra& alg, const GroupElement& g, const Vector& x)
{
  if (g.matrix.rows() != alg.ambient_dim())
    throw Error(ErrorKind::DimensionMismatch, "group element does not act on this algebra");
  return alg.coordinates(g.matrix * alg.to_matrix(x) * g.matrix.adjoint());
}

/// Matrix of Ad_g on coordinates (column j = Ad_g b_j).
inline RealMatrix adjoint_matrix(const MatrixLieAlgebra& alg, const GroupElement& g)
{
  const int d = alg.dim();
  RealMatrix out(d, d);
  for (int j = 0; j < d; ++j)
    out.col(j) = alg.coordinates(g.matrix * alg.basis(j) * g.matrix.adjoint());
  return out;
}

/// Ad-invariant inner product Re tr(P^* Q), optionally scaled per factor.
struct BiInvariantForm {
  RealMatrix gram;
  std::vector<double> weights;

  static BiInvariantForm standard(const MatrixLieAlgebra& alg, std::vector<double> factor_weights = {})
  {
    if (factor_weights.empty()) factor_weights.assign(alg.factors().size(), 1.0);
    if (factor_weights.size() != alg.factors().size())
      throw Error(ErrorKind::DimensionMismatch, "one weight per factor is required");
    for (double w : factor_weights)
      if (!(w > 0.0)) throw Error(ErrorKind::Precondition, "factor weights must be positive");
    BiInvariantForm out;
    out.weights = factor_weights;
    out.gram = alg.trace_gram();
    for (int i = 0; i < alg.dim(); ++i)
      for (int j = 0; j < alg.dim(); ++j) out.gram(i, j) *= factor_weights[std::size_t(alg.factor_of(i))];
    return out;
  }

  double inner(const Vector& p, const Vector& q) const { return p.dot(gram * q); }
  double norm(const Vector& p) const { return std::sqrt(std::max(0.0, inner(p, p))); }
};

/// Columns spanning the same space as `candidates`, orthonormal for the
/// positive-definite form `gram`. Rank cut at kRankTolerance * sigma_max.
inline RealMatrix orthonormal_span(const RealMatrix& gram, const RealMatrix& candidates)
{
  const auto d = gram.rows();
  if (candidates.cols() == 0) return RealMatrix(d, 0);
  Eigen::LLT<RealMatrix> llt(gram);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "form is not positive definite");
  const RealMatrix lt = llt.matrixU();  // gram = U^T U
  const RealMatrix y = lt * candidates;
  Eigen::JacobiSVD<RealMatrix> svd(y, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return RealMatrix(d, 0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > kRankTolerance * sv(0)) ++rank;
  return lt.triangularView<Eigen::Upper>().solve(svd.matrixU().leftCols(rank));
}

/// Distance from v to the span of the `gram`-orthonormal columns of w.
inline double subspace_residual(const RealMatrix& gram, const RealMatrix& w, const Vector& v)
{
  Vector r = v;
  if (w.cols() > 0) r -= w * (w.transpose() * (gram * v));
  return std::sqrt(std::max(0.0, r.dot(gram * r)));
}

/// Orthogonal splitting g = h + m under a bi-invariant form. With an empty
/// h the m-coordinates coincide with the algebra coordinates.
struct ReductiveDecomposition {
  RealMatrix h_basis;       ///< d x dim(h), columns in algebra coordinates
  RealMatrix m_basis;       ///< d x dim(m)
  RealMatrix projector_m;   ///< dim(m) x d: algebra coordinates -> m coordinates along h

  static ReductiveDecomposition trivial(int d)
  {
    return {RealMatrix(d, 0), RealMatrix::Identity(d, d), RealMatrix::Identity(d, d)};
  }

  static ReductiveDecomposition from_isotropy(const BiInvariantForm& bi, const RealMatrix& h_columns)
  {
    const auto d = bi.gram.rows();
    if (h_columns.rows() != d) throw Error(ErrorKind::DimensionMismatch, "isotropy basis has wrong length");
    if (h_columns.cols() == 0) return trivial(int(d));
    ReductiveDecomposition out;
    out.h_basis = orthonormal_span(bi.gram, h_columns);
    if (out.h_basis.cols() != h_columns.cols())
      throw Error(ErrorKind::Precondition, "isotropy basis is linearly dependent");
    // complement: orthonormalize the unit vectors after removing their h part
    RealMatrix rest = RealMatrix::Identity(d, d) - out.h_basis * (out.h_basis.transpose() * bi.gram);
    out.m_basis = orthonormal_span(bi.gram, rest);
    if (out.h_basis.cols() + out.m_basis.cols() != d)
      throw Error(ErrorKind::Precondition, "h + m does not span the algebra");
    RealMatrix full(d, d);
    full << out.h_basis, out.m_basis;
    const RealMatrix inv = full.inverse();
    out.projector_m = inv.bottomRows(out.m_basis.cols());
    return out;
  }

  int m_dim() const { return int(m_basis.cols()); }
  bool has_isotropy() const { return h_basis.cols() > 0; }
  Vector project(const Vector& x) const { return projector_m * x; }
};

/// Smallest ideal containing S, as bi-orthonormal columns. Grows
/// W <- span(W, [b_i, W]) until one full sweep leaves the dimension unchanged.
inline RealMatrix generate_ideal(const MatrixLieAlgebra& alg, const BiInvariantForm& bi,
                                 const std::vector<Vector>& generators)
{
  if (generators.empty()) throw Error(ErrorKind::Precondition, "ideal of an empty set");
  const int d = alg.dim();
  RealMatrix seed(d, Eigen::Index(generators.size()));
  for (std::size_t c = 0; c < generators.size(); ++c) {
    alg.check_coords(generators[c]);
    seed.col(Eigen::Index(c)) = generators[c];
  }
  RealMatrix w = orthonormal_span(bi.gram, seed);
  if (w.cols() == 0) throw Error(ErrorKind::ZeroVector, "all generators vanish");

  std::vector<RealMatrix> ads;
  for (int i = 0; i < d; ++i) ads.push_back(alg.ad_matrix(Vector::Unit(d, i)));
  while (true) {
    RealMatrix grown(d, w.cols() * (d + 1));
    grown.leftCols(w.cols()) = w;
    for (int i = 0; i < d; ++i) grown.middleCols(w.cols() * (i + 1), w.cols()) = ads[std::size_t(i)] * w;
    RealMatrix next = orthonormal_span(bi.gram, grown);
    if (next.cols() == w.cols()) return next;
    w = std::move(next);
  }
}

/// Deterministic sampler: element i is exp(Z1) exp(Z2) exp(Z3) with
/// standard-normal coordinates drawn from a stream keyed by (seed, i).
/// Not Haar distributed.
inline std::vector<GroupElement> sample_group(const MatrixLieAlgebra& alg, std::size_t count, std::uint64_t seed,
                                              double scale = 1.0)
{
  std::vector<GroupElement> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = detail::stream_rng(seed, i);
    std::normal_distribution<double> normal(0.0, 1.0);
    GroupElement g = GroupElement::identity(alg.ambient_dim());
    for (int f = 0; f < 3; ++f) {
      Vector z(alg.dim());
      for (int k = 0; k < alg.dim(); ++k) z(k) = scale * normal(rng);
      g = g * exponential(alg, z);
    }
    out.push_back(std::move(g));
  }
  return out;
}

/// Standard-normal algebra element drawn from the (seed, index) stream.
inline Vector random_element(const MatrixLieAlgebra& alg, std::uint64_t seed, std::uint64_t index = 0)
{
  auto rng = detail::stream_rng(seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(alg.dim());
  for (int k = 0; k < alg.dim(); ++k) z(k) = normal(rng);
  return z;
}

struct OrbitSample {
  Vector base_point;
  std::vector<Vector> points;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  double scale = 1.0;
};

inline OrbitSample sample_orbit(const MatrixLieAlgebra& alg, const Vector& x, std::size_t count, std::uint64_t seed)
{
  OrbitSample out{x, {}, seed, count, 1.0};
  for (const auto& g : sample_group(alg, count, seed)) out.points.push_back(ad_orbit_point(alg, g, x));
  return out;
}

/// Orbit point of sqrt(-1) diag(-1,-1,2) in su(3), as the ambient matrix,
/// parametrized by |u|^2+|v|^2 = 1 and |w|^2 = 2+s-s^2.
inline Matrix parametrized_su3_orbit_matrix(Complex u, Complex v, double s, Complex w)
{
  const double norm_uv = std::norm(u) + std::norm(v);
  if (std::abs(norm_uv - 1.0) > 1e-12)
    throw Error(ErrorKind::ConstraintViolation, "|u|^2+|v|^2 = " + std::to_string(norm_uv) + ", expected 1");
  const double target = 2.0 + s - s * s;
  if (std::abs(std::norm(w) - target) > 1e-12)
    throw Error(ErrorKind::ConstraintViolation,
                "|w|^2 = " + std::to_string(std::norm(w)) + ", expected 2+s-s^2 = " + std::to_string(target));
  const double uu = std::norm(u);
  const double vv = std::norm(v);
  Matrix m(3, 3);
  m << s * vv - uu, (s + 1.0) * u * v, v * w,
       (s + 1.0) * std::conj(u) * std::conj(v), s * uu - vv, std::conj(u) * w,
       std::conj(v) * std::conj(w), u * std::conj(w), 1.0 - s;
  return kI * m;
}

inline Vector parametrized_su3_orbit(const MatrixLieAlgebra& su3, Complex u, Complex v, double s, Complex w)
{
  if (su3.ambient_dim() != 3 || su3.dim() != 8)
    throw Error(ErrorKind::DimensionMismatch, "parametrized orbit lives in su(3)");
  return su3.coordinates(parametrized_su3_orbit_matrix(u, v, s, w));
}

}  // namespace randers

#endif  // RANDERS_LIE_CORE_HPP

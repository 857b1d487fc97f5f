#pragma once

// Finite-dimensional linear algebra of possibly degenerate Hermitian forms.
//
// Convention: a form b on C^n is stored as its Gram matrix with
// gram(j, k) = b(e_k, conj(e_j)), so that b(s, conj(t)) = t^* gram s.
// Rank decisions use a relative cutoff: eigenvalues with modulus below
// rank_tol * (largest modulus) count as zero.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "hermitia/errors.hpp"

namespace hermitia {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

inline constexpr double kDefaultRankTol = 1e-10;

namespace detail {

/// Orthonormal basis of the null space of m (columns). The cutoff is tol times
/// the largest singular value, or times `scale` when that is larger (use it
/// when m may be entirely roundoff, e.g. a product that vanishes exactly).
template <typename Real>
CMatrix<Real> null_space(const CMatrix<Real>& m, Real tol, Real scale = Real(0)) {
  const Index n = m.cols();
  if (m.rows() == 0 || n == 0) return CMatrix<Real>::Identity(n, n);
  Eigen::JacobiSVD<CMatrix<Real>> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Real top = std::max(sv.size() > 0 ? sv(0) : Real(0), scale);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (top > Real(0) && sv(i) > tol * top) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

/// Orthonormal basis of the column space of m.
template <typename Real>
CMatrix<Real> range_basis(const CMatrix<Real>& m, Real tol) {
  if (m.cols() == 0 || m.rows() == 0) return CMatrix<Real>(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix<Real>> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const Real top = sv(0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (top > Real(0) && sv(i) > tol * top) ++rank;
  return svd.matrixU().leftCols(rank);
}

template <typename Real>
Index numerical_rank(const CMatrix<Real>& m, Real tol) {
  return range_basis<Real>(m, tol).cols();
}

template <typename Real>
CMatrix<Real> hermitian_part(const CMatrix<Real>& m) {
  return (m + m.adjoint()) / Real(2);
}

}  // namespace detail

/// Eigen-decomposition of a Gram matrix split into range and kernel.
template <typename Real>
struct Spectrum {
  RVector<Real> values;      // ascending, as returned by the solver
  CMatrix<Real> range;       // orthonormal columns spanning (Ker b)^perp
  CMatrix<Real> kernel;      // orthonormal columns spanning Ker b
  RVector<Real> range_values;
};

template <typename Real = double>
class HermitianForm {
 public:
  using Scalar = std::complex<Real>;
  using Matrix = CMatrix<Real>;
  using Vector = CVector<Real>;

  explicit HermitianForm(const Matrix& gram, Real rank_tol = Real(kDefaultRankTol))
      : gram_(detail::hermitian_part<Real>(gram)), rank_tol_(rank_tol) {
    if (gram.rows() != gram.cols())
      throw GeometryError(ErrorKind::InvalidModel, "Gram matrix must be square");
  }

  static HermitianForm identity(Index n) { return HermitianForm(Matrix::Identity(n, n)); }
  static HermitianForm zero(Index n) { return HermitianForm(Matrix::Zero(n, n)); }

  Index dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }
  Real rank_tol() const { return rank_tol_; }

  /// b(s, conj(t)).
  Scalar operator()(const Vector& s, const Vector& t) const { return t.dot(gram_ * s); }

  Spectrum<Real> spectrum() const {
    Spectrum<Real> out;
    const Index n = dim();
    if (n == 0) return out;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_);
    out.values = eig.eigenvalues();
    const Real top = out.values.cwiseAbs().maxCoeff();
    std::vector<Index> keep, drop;
    for (Index i = 0; i < n; ++i) {
      if (top > Real(0) && std::abs(out.values(i)) > rank_tol_ * top)
        keep.push_back(i);
      else
        drop.push_back(i);
    }
    out.range.resize(n, static_cast<Index>(keep.size()));
    out.range_values.resize(static_cast<Index>(keep.size()));
    out.kernel.resize(n, static_cast<Index>(drop.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      out.range.col(static_cast<Index>(c)) = eig.eigenvectors().col(keep[c]);
      out.range_values(static_cast<Index>(c)) = out.values(keep[c]);
    }
    for (std::size_t c = 0; c < drop.size(); ++c)
      out.kernel.col(static_cast<Index>(c)) = eig.eigenvectors().col(drop[c]);
    return out;
  }

  Index rank() const { return spectrum().range.cols(); }
  bool nondegenerate() const { return rank() == dim(); }

  /// Smallest eigenvalue relative to the largest modulus; positive-definite
  /// forms have this above rank_tol.
  bool positive_definite() const {
    if (dim() == 0) return true;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_, Eigen::EigenvaluesOnly);
    const Real top = eig.eigenvalues().cwiseAbs().maxCoeff();
    return top > Real(0) && eig.eigenvalues()(0) > rank_tol_ * top;
  }

  /// Moore-Penrose pseudoinverse with the form's rank cutoff.
  Matrix pseudo_inverse() const {
    const auto sp = spectrum();
    Matrix inv_values = sp.range_values.cwiseInverse().template cast<Scalar>().asDiagonal();
    return sp.range * inv_values * sp.range.adjoint();
  }

  HermitianForm scaled(Real c) const { return HermitianForm(gram_ * c, rank_tol_); }

  /// (f^* b)(s, conj(t)) = b(f s, conj(f t)).
  HermitianForm pullback(const Matrix& f) const {
    return HermitianForm(f.adjoint() * gram_ * f, rank_tol_);
  }

 private:
  Matrix gram_;
  Real rank_tol_;
};

template <typename Real = double>
class Subspace {
 public:
  using Matrix = CMatrix<Real>;

  Subspace(Index ambient_dim, const Matrix& basis, Real rank_tol = Real(kDefaultRankTol))
      : ambient_dim_(ambient_dim), basis_(basis) {
    if (basis.rows() != ambient_dim)
      throw GeometryError(ErrorKind::InvalidModel, "subspace basis has wrong ambient dimension");
    if (basis.cols() > 0 && detail::numerical_rank<Real>(basis, rank_tol) != basis.cols())
      throw GeometryError(ErrorKind::InvalidModel, "subspace basis is not linearly independent");
  }

  /// Spans the columns of m, dropping dependent ones.
  static Subspace span(const Matrix& m, Real tol = Real(kDefaultRankTol)) {
    return Subspace(m.rows(), detail::range_basis<Real>(m, tol));
  }
  static Subspace zero(Index n) { return Subspace(n, Matrix(n, 0)); }
  static Subspace whole(Index n) { return Subspace(n, Matrix::Identity(n, n)); }

  Index ambient_dim() const { return ambient_dim_; }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  /// Orthogonal projector for the standard inner product.
  Matrix projector() const {
    if (dim() == 0) return Matrix::Zero(ambient_dim_, ambient_dim_);
    const Matrix q = detail::range_basis<Real>(basis_, Real(1e-14));
    return q * q.adjoint();
  }

  bool contains(const CVector<Real>& v, Real tol = Real(1e-9)) const {
    const CVector<Real> rest = v - projector() * v;
    return rest.norm() <= tol * (Real(1) + v.norm());
  }

 private:
  Index ambient_dim_;
  Matrix basis_;
};

template <typename Real>
Subspace<Real> span_sum(const Subspace<Real>& a, const Subspace<Real>& b) {
  CMatrix<Real> both(a.ambient_dim(), a.dim() + b.dim());
  both << a.basis(), b.basis();
  return Subspace<Real>::span(both);
}

template <typename Real>
Subspace<Real> intersection(const Subspace<Real>& a, const Subspace<Real>& b) {
  if (a.dim() == 0 || b.dim() == 0) return Subspace<Real>::zero(a.ambient_dim());
  const CMatrix<Real> qa = detail::range_basis<Real>(a.basis(), Real(1e-12));
  const CMatrix<Real> qb = detail::range_basis<Real>(b.basis(), Real(1e-12));
  CMatrix<Real> stacked(a.ambient_dim(), qa.cols() + qb.cols());
  stacked << qa, -qb;
  const CMatrix<Real> coeffs = detail::null_space<Real>(stacked, Real(1e-9));
  return Subspace<Real>::span(qa * coeffs.topRows(qa.cols()));
}

template <typename Real = double>
struct LinearMap {
  CMatrix<Real> matrix;

  LinearMap() = default;
  explicit LinearMap(CMatrix<Real> m) : matrix(std::move(m)) {}

  Index rows() const { return matrix.rows(); }
  Index cols() const { return matrix.cols(); }
};

template <typename Real = double>
struct PurgeResult {
  LinearMap<Real> quotient_map;   // V -> V / Ker b, rows are conj. range vectors
  HermitianForm<Real> purged_form;
  CMatrix<Real> lift;             // V / Ker b -> V, the range-vector section
};

template <typename Real>
Subspace<Real> kernel(const HermitianForm<Real>& b) {
  return Subspace<Real>(b.dim(), b.spectrum().kernel);
}

/// Quotient by the kernel with the induced nondegenerate form. The quotient
/// basis is the eigenvector complement of the kernel.
template <typename Real>
PurgeResult<Real> purge(const HermitianForm<Real>& b) {
  const auto sp = b.spectrum();
  CMatrix<Real> q = sp.range.adjoint();
  HermitianForm<Real> hat(sp.range.adjoint() * b.gram() * sp.range, b.rank_tol());
  return PurgeResult<Real>{LinearMap<Real>(q), hat, sp.range};
}

namespace detail {

template <typename Real>
Real adjoint_threshold(const CMatrix<Real>& f, Real rank_tol) {
  return Real(100) * rank_tol * (Real(1) + f.norm());
}

template <typename Real>
void check_shapes(const LinearMap<Real>& f, const HermitianForm<Real>& bV,
                  const HermitianForm<Real>& bW) {
  if (f.cols() != bV.dim() || f.rows() != bW.dim())
    throw GeometryError(ErrorKind::InvalidModel, "map shape does not match the forms");
}

}  // namespace detail

/// True iff f maps Ker bV into Ker bW.
template <typename Real>
bool admits_adjoint(const LinearMap<Real>& f, const HermitianForm<Real>& bV,
                    const HermitianForm<Real>& bW) {
  detail::check_shapes(f, bV, bW);
  const CMatrix<Real> kv = bV.spectrum().kernel;
  if (kv.cols() == 0) return true;
  const CMatrix<Real> image = f.matrix * kv;
  const CMatrix<Real> kw = bW.spectrum().kernel;
  const CMatrix<Real> residual = image - kw * (kw.adjoint() * image);
  return residual.norm() <= detail::adjoint_threshold(f.matrix, bV.rank_tol());
}

/// Canonical adjoint: the unique adjoint between the purged spaces, lifted
/// back with the minimum-norm section. Any other adjoint differs from it by
/// a map into Ker bV.
template <typename Real>
LinearMap<Real> adjoint(const LinearMap<Real>& f, const HermitianForm<Real>& bV,
                        const HermitianForm<Real>& bW) {
  if (!admits_adjoint(f, bV, bW))
    throw GeometryError(ErrorKind::NoAdjoint, "f does not map Ker bV into Ker bW");
  const auto pv = purge(bV);
  const auto pw = purge(bW);
  if (pv.lift.cols() == 0)
    return LinearMap<Real>(CMatrix<Real>::Zero(bV.dim(), bW.dim()));
  const CMatrix<Real> f_hat = pw.quotient_map.matrix * f.matrix * pv.lift;
  // b_V^ f^dagger_hat = f_hat^* b_W^
  const CMatrix<Real> rhs = f_hat.adjoint() * pw.purged_form.gram();
  const CMatrix<Real> f_hat_dagger = pv.purged_form.gram().partialPivLu().solve(rhs);
  return LinearMap<Real>(pv.lift * f_hat_dagger * pw.quotient_map.matrix);
}

template <typename Real>
struct AdjointFreedom {
  std::optional<Index> torsor_dim;  // empty when f is not adjointable
  Index adjointable_codim = 0;      // dim Ker bV * (dim W - dim Ker bW)
  Index computed_codim = 0;         // rank of the constraint system on Hom(V, W)
};

template <typename Real>
AdjointFreedom<Real> adjoint_freedom_dims(const LinearMap<Real>& f, const HermitianForm<Real>& bV,
                                          const HermitianForm<Real>& bW) {
  detail::check_shapes(f, bV, bW);
  const CMatrix<Real> kv = bV.spectrum().kernel;
  const CMatrix<Real> kw = bW.spectrum().kernel;
  const Index dim_w = bW.dim();
  const Index dim_v = bV.dim();

  AdjointFreedom<Real> out;
  if (admits_adjoint(f, bV, bW)) out.torsor_dim = dim_w * kv.cols();
  out.adjointable_codim = kv.cols() * (dim_w - kw.cols());

  // Constraint (I - P_KW) f KV = 0, linear in vec(f): (KV^T kron (I - P_KW)) vec(f).
  const CMatrix<Real> left = CMatrix<Real>::Identity(dim_w, dim_w) - kw * kw.adjoint();
  const CMatrix<Real> right = kv.transpose();
  CMatrix<Real> system(left.rows() * right.rows(), dim_v * dim_w);
  for (Index i = 0; i < right.rows(); ++i)
    for (Index j = 0; j < right.cols(); ++j)
      system.block(i * left.rows(), j * left.cols(), left.rows(), left.cols()) = right(i, j) * left;
  out.computed_codim =
      system.rows() == 0 ? 0 : detail::numerical_rank<Real>(system, Real(1e-10));
  return out;
}

/// S^perp = { v : b(v, conj(w)) = 0 for all w in S }.
template <typename Real>
Subspace<Real> orthogonal_complement(const Subspace<Real>& s, const HermitianForm<Real>& b) {
  if (s.ambient_dim() != b.dim())
    throw GeometryError(ErrorKind::InvalidModel, "subspace and form live in different spaces");
  if (s.dim() == 0) return Subspace<Real>::whole(b.dim());
  const CMatrix<Real> q = detail::range_basis<Real>(s.basis(), Real(1e-14));
  const CMatrix<Real> constraint = q.adjoint() * b.gram();
  const Real scale = b.dim() > 0 ? b.spectrum().values.cwiseAbs().maxCoeff() : Real(0);
  return Subspace<Real>(b.dim(), detail::null_space<Real>(constraint, b.rank_tol(), scale));
}

/// Dimension bookkeeping for the three complement identities.
struct ComplementIdentities {
  Index dim_s = 0, dim_perp = 0, dim_sum = 0, dim_intersection = 0;
  Index dim_s_cap_kernel = 0, ambient = 0;
  bool kernel_in_perp = false;

  bool sum_is_everything() const { return dim_sum == ambient; }
  bool intersection_is_s_cap_kernel() const { return dim_intersection == dim_s_cap_kernel; }
  bool grassmann_formula() const { return dim_sum + dim_intersection == dim_s + dim_perp; }
};

template <typename Real>
ComplementIdentities complement_identities(const Subspace<Real>& s, const HermitianForm<Real>& b) {
  const auto perp = orthogonal_complement(s, b);
  const auto ker = kernel(b);
  ComplementIdentities out;
  out.ambient = b.dim();
  out.dim_s = s.dim();
  out.dim_perp = perp.dim();
  out.dim_sum = span_sum(s, perp).dim();
  const auto cap = intersection(s, perp);
  out.dim_intersection = cap.dim();
  out.dim_s_cap_kernel = intersection(s, ker).dim();
  out.kernel_in_perp = span_sum(perp, ker).dim() == perp.dim();
  return out;
}

template <typename Real>
struct QuotientFormResult {
  HermitianForm<Real> form;
  CMatrix<Real> lift;            // Q -> S^perp, q * lift = identity
  Real lift_discrepancy = 0;     // |b_Q - b_Q'| using a second lift
};

/// Induced form on Q = V / Ker q: b_Q(qx, conj(qy)) = bV(x, conj(y)) for
/// x, y in (Ker q)^perp.
template <typename Real>
QuotientFormResult<Real> quotient_form_checked(const LinearMap<Real>& qmap,
                                               const HermitianForm<Real>& bV) {
  if (qmap.cols() != bV.dim())
    throw GeometryError(ErrorKind::InvalidModel, "quotient map shape mismatch");
  const Index dim_q = qmap.rows();
  if (detail::numerical_rank<Real>(qmap.matrix, Real(1e-10)) != dim_q)
    throw GeometryError(ErrorKind::NotSurjective, "quotient map is not of full row rank");

  const Subspace<Real> s(bV.dim(), detail::null_space<Real>(qmap.matrix, Real(1e-10)));
  const auto perp = orthogonal_complement(s, bV);
  const CMatrix<Real> qn = qmap.matrix * perp.basis();
  const CMatrix<Real> lift =
      perp.basis() * qn.completeOrthogonalDecomposition().pseudoInverse();
  const CMatrix<Real> gram = lift.adjoint() * bV.gram() * lift;

  // Any other lift differs by an element of S^perp cap Ker q = S cap Ker bV.
  const auto slack = intersection(s, kernel(bV));
  CMatrix<Real> lift2 = lift;
  if (slack.dim() > 0)
    lift2 += slack.basis() * CMatrix<Real>::Ones(slack.dim(), dim_q);
  const CMatrix<Real> gram2 = lift2.adjoint() * bV.gram() * lift2;
  const Real discrepancy = (gram - gram2).norm();
  return QuotientFormResult<Real>{HermitianForm<Real>(gram, bV.rank_tol()), lift, discrepancy};
}

template <typename Real>
HermitianForm<Real> quotient_form(const LinearMap<Real>& qmap, const HermitianForm<Real>& bV) {
  auto result = quotient_form_checked(qmap, bV);
  if (result.lift_discrepancy > Real(1e-10) * (Real(1) + bV.gram().norm()))
    throw GeometryError(ErrorKind::SolverResidual, "quotient form depends on the lift");
  return result.form;
}

/// tr(g_hat^dagger f_hat) on the purged spaces.
template <typename Real>
std::complex<Real> hom_form(const LinearMap<Real>& f, const LinearMap<Real>& g,
                            const HermitianForm<Real>& bV, const HermitianForm<Real>& bW) {
  if (!admits_adjoint(f, bV, bW) || !admits_adjoint(g, bV, bW))
    throw GeometryError(ErrorKind::NoAdjoint, "hom_form needs adjointable maps");
  const auto pv = purge(bV);
  const auto pw = purge(bW);
  if (pv.lift.cols() == 0 || pw.lift.cols() == 0) return {0, 0};
  const CMatrix<Real> f_hat = pw.quotient_map.matrix * f.matrix * pv.lift;
  const CMatrix<Real> g_hat = pw.quotient_map.matrix * g.matrix * pv.lift;
  const CMatrix<Real> g_hat_dagger =
      pv.purged_form.gram().partialPivLu().solve(g_hat.adjoint() * pw.purged_form.gram());
  return (g_hat_dagger * f_hat).trace();
}

namespace detail {

template <typename Real>
void require_positive(const CMatrix<Real>& h, Real tol, const char* what) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> eig(hermitian_part<Real>(h), Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const Real top = ev.cwiseAbs().maxCoeff();
  if (!(top > Real(0)) || ev(0) <= tol * top) throw GeometryError(ErrorKind::NotPositive, what);
}

}  // namespace detail

/// q(s, t) = b1(h^-1 b2 s, h^-1 b2 t) + b2(h^-1 b1 s, h^-1 b1 t), h = b1 + b2.
template <typename Real>
HermitianForm<Real> sum_quotient_form(const HermitianForm<Real>& b1, const HermitianForm<Real>& b2) {
  const CMatrix<Real> h = b1.gram() + b2.gram();
  detail::require_positive<Real>(h, b1.rank_tol(), "b1 + b2 is not positive-definite");
  const auto llt = h.llt();
  const CMatrix<Real> m2 = llt.solve(b2.gram());
  const CMatrix<Real> m1 = llt.solve(b1.gram());
  return HermitianForm<Real>(m2.adjoint() * b1.gram() * m2 + m1.adjoint() * b2.gram() * m1,
                             b1.rank_tol());
}

template <typename Real>
struct LimitFormResult {
  std::vector<Real> lambdas;
  std::vector<HermitianForm<Real>> q_values;
  HermitianForm<Real> q_infinity;
  HermitianForm<Real> q_infinity_projection;  // (j j^dagger)^* b1
  Real projection_residual = 0;
  RVector<Real> x_coefficients;  // b1 against h0 = b1 + b2
  RVector<Real> y_coefficients;  // b2 against h0
};

/// Quotient forms of b1 + e^lambda b2 and their limit as lambda -> infinity.
template <typename Real>
LimitFormResult<Real> limit_form(const HermitianForm<Real>& b1, const HermitianForm<Real>& b2,
                                 const std::vector<Real>& lambda_grid) {
  const CMatrix<Real> h0 = b1.gram() + b2.gram();
  detail::require_positive<Real>(h0, b1.rank_tol(), "b1 + b2 is not positive-definite");

  std::vector<HermitianForm<Real>> values;
  for (Real lambda : lambda_grid)
    values.push_back(sum_quotient_form(b1, b2.scaled(std::exp(lambda))));

  // Simultaneous diagonalization: V^* h0 V = I, V^* b1 V = diag(x).
  Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix<Real>> gen(b1.gram(), h0);
  const CMatrix<Real> v = gen.eigenvectors();
  const RVector<Real> x = gen.eigenvalues();
  const RVector<Real> y = RVector<Real>::Ones(x.size()) - x;
  RVector<Real> limit(x.size());
  for (Index i = 0; i < x.size(); ++i)
    limit(i) = std::abs(y(i)) > Real(1e3) * b1.rank_tol() ? x(i) : Real(0);
  const CMatrix<Real> back = h0 * v;  // coordinates c = V^* h0 s
  const CMatrix<Real> q_inf =
      back * limit.template cast<std::complex<Real>>().asDiagonal() * back.adjoint();

  // Second route: h0-orthogonal projection onto a complement of Ker b2.
  const CMatrix<Real> k2 = b2.spectrum().kernel;
  const Index n = b1.dim();
  CMatrix<Real> complement = CMatrix<Real>::Identity(n, n);
  if (k2.cols() > 0) complement = detail::null_space<Real>(CMatrix<Real>(k2.adjoint() * h0), Real(1e-12));
  CMatrix<Real> proj = CMatrix<Real>::Zero(n, n);
  if (complement.cols() > 0) {
    const CMatrix<Real> jhj = complement.adjoint() * h0 * complement;
    proj = complement * jhj.ldlt().solve(complement.adjoint() * h0);
  }
  const CMatrix<Real> q_proj = proj.adjoint() * b1.gram() * proj;

  LimitFormResult<Real> out{lambda_grid,
                            std::move(values),
                            HermitianForm<Real>(q_inf, b1.rank_tol()),
                            HermitianForm<Real>(q_proj, b1.rank_tol()),
                            (q_inf - q_proj).norm(),
                            x,
                            y};
  return out;
}

/// s ~ t modulo Ker b.
template <typename Real>
bool equiv_mod_kernel(const CVector<Real>& s, const CVector<Real>& t, const HermitianForm<Real>& b) {
  if (s.size() != t.size() || s.size() != b.dim())
    throw GeometryError(ErrorKind::InvalidModel, "vector dimension mismatch");
  const CVector<Real> d = s - t;
  const CMatrix<Real> range = b.spectrum().range;
  const CVector<Real> part = range * (range.adjoint() * d);
  return part.norm() <= Real(1e-9) * (Real(1) + d.norm());
}

using HermitianFormd = HermitianForm<double>;
using Subspaced = Subspace<double>;
using LinearMapd = LinearMap<double>;

}  // namespace hermitia

#pragma once

// Pointwise differential geometry of Hermitian form fields on a polydisc
// chart, in a fixed holomorphic frame.
//
// A field is z -> G(z), an r x r Gram matrix in the convention of
// herm_core.hpp. The Chern connection solves dG/dz_a = G A_a; curvature is
// contracted as R(a, b, s, t) = -(e_t^* G (dbar_b A_a) e_s), normalized so the
// Fubini-Study line has holomorphic sectional curvature 2.

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "hermitia/herm_core.hpp"
#include "hermitia/sampling.hpp"

namespace hermitia {

struct Polydisc {
  Vector center;
  double radius = std::numeric_limits<double>::infinity();

  bool contains(const Vector& z) const {
    if (z.size() != center.size()) return false;
    for (Index i = 0; i < z.size(); ++i)
      if (std::abs(z(i) - center(i)) > radius) return false;
    return true;
  }

  static Polydisc around_origin(Index dim, double radius) {
    return Polydisc{Vector::Zero(dim), radius};
  }
};

/// Value of a Gram field and the derivatives curvature needs.
struct GramJet {
  Matrix value;
  std::vector<Matrix> d;                   // d[a] = d/dz_a G
  std::vector<std::vector<Matrix>> ddbar;  // ddbar[a][b] = d/dzbar_b d/dz_a G

  Index chart_dim() const { return static_cast<Index>(d.size()); }

  static GramJet zero(Index chart_dim, Index rank);
};

/// a * ca + b * cb, entrywise on every component.
GramJet combine(const GramJet& a, double ca, const GramJet& b, double cb);

struct StepSizes {
  double inner = 1e-4;  // first derivatives
  double outer = 1e-3;  // outer step of nested second differences
};

enum class DerivativeMode { FiniteDifference, Analytic };

using MatrixFunction = std::function<Matrix(const Vector&)>;

class ChartField {
 public:
  using JetEvaluator = std::function<GramJet(const Vector&)>;

  ChartField(Index chart_dim, Index bundle_rank, MatrixFunction value, Polydisc domain,
             StepSizes steps = {});

  /// Analytic mode. Unless self_check is false, the first derivatives are
  /// compared against finite differences at ten seeded points.
  ChartField(Index chart_dim, Index bundle_rank, MatrixFunction value, JetEvaluator jet,
             Polydisc domain, bool self_check = true, StepSizes steps = {});

  Index chart_dim() const { return chart_dim_; }
  Index bundle_rank() const { return bundle_rank_; }
  const Polydisc& domain() const { return domain_; }
  const StepSizes& steps() const { return steps_; }
  DerivativeMode mode() const { return jet_ ? DerivativeMode::Analytic : DerivativeMode::FiniteDifference; }
  double rank_tol() const { return rank_tol_; }

  Matrix value(const Vector& z) const;
  HermitianFormd form(const Vector& z) const { return HermitianFormd(value(z), rank_tol_); }
  GramJet jet(const Vector& z) const;
  GramJet finite_difference_jet(const Vector& z) const;

  ChartField with_finite_differences() const;
  ChartField with_steps(StepSizes steps) const;
  ChartField with_domain(Polydisc domain) const;
  const MatrixFunction& evaluator() const { return value_; }
  const JetEvaluator& jet_evaluator() const { return jet_; }

  /// Largest relative deviation between analytic and finite-difference first
  /// derivatives found by the self check (0 in finite-difference mode).
  double self_check_error() const { return self_check_error_; }

 private:
  Index chart_dim_;
  Index bundle_rank_;
  MatrixFunction value_;
  JetEvaluator jet_;
  Polydisc domain_;
  StepSizes steps_;
  double rank_tol_ = kDefaultRankTol;
  double self_check_error_ = 0.0;
};

/// G1 * c1 + G2 * c2 as a field; analytic when both inputs are.
ChartField linear_combination(const ChartField& a, double ca, const ChartField& b, double cb);

ChartField constant_field(const Matrix& gram, Index chart_dim);

/// Wirtinger derivative by central differences:
/// d/dz = (d/dx - i d/dy) / 2, d/dzbar = (d/dx + i d/dy) / 2.
Matrix wirtinger(const MatrixFunction& f, const Vector& z, Index alpha, bool conjugate, double step);
Matrix wirtinger(const ChartField& field, const Vector& z, Index alpha, bool conjugate);

struct ConnectionAt {
  Vector z;
  std::vector<Matrix> a;  // A(d/dz_alpha)
  double residual = 0.0;  // max_a |G A_a - dG_a| / (1 + |dG_a|)
  Matrix kernel_basis;    // orthonormal basis of Ker G(z)
};

/// Four-index curvature tensor stored as one r x r block per (alpha, beta):
/// block(alpha, beta)(t, s) = R(d_alpha, dbar_beta, e_s, conj(e_t)). Each block
/// is therefore the Gram matrix of the form (s, t) -> R(alpha, beta, s, t).
class CurvatureTensor {
 public:
  CurvatureTensor() = default;
  CurvatureTensor(Index chart_dim, Index rank);

  Index chart_dim() const { return m_; }
  Index rank() const { return r_; }

  Matrix& block(Index alpha, Index beta) { return blocks_[static_cast<std::size_t>(alpha * m_ + beta)]; }
  const Matrix& block(Index alpha, Index beta) const {
    return blocks_[static_cast<std::size_t>(alpha * m_ + beta)];
  }
  cd operator()(Index alpha, Index beta, Index s, Index t) const { return block(alpha, beta)(t, s); }

  /// R(u, conj(w), s, conj(t)) for tangent vectors u, w.
  cd contract(const Vector& u, const Vector& w, const Vector& s, const Vector& t) const;
  /// Gram matrix of (s, t) -> R(u, conj(w), s, conj(t)).
  Matrix directional(const Vector& u, const Vector& w) const;

  double norm() const;
  double pair_symmetry_defect() const;

  CurvatureTensor operator+(const CurvatureTensor& o) const;
  CurvatureTensor operator-(const CurvatureTensor& o) const;
  CurvatureTensor operator*(double c) const;

 private:
  Index m_ = 0, r_ = 0;
  std::vector<Matrix> blocks_;
};

/// max |a - b| / (1 + |b|) over all entries' Frobenius norm.
double relative_difference(const CurvatureTensor& a, const CurvatureTensor& b);

struct CurvatureAt {
  Vector z;
  CurvatureTensor r;
  HermitianFormd form_at_point;
};

inline constexpr double kSolverTol = 1e-7;

/// True iff the numerical rank is the same at z and at the outer stencil.
bool constant_rank(const ChartField& field, const Vector& z);
void require_constant_rank(const ChartField& field, const Vector& z);

ConnectionAt connection_from_jet(const GramJet& jet, double rank_tol);
CurvatureTensor curvature_from_jet(const GramJet& jet, double rank_tol);

ConnectionAt chern_connection(const ChartField& field, const Vector& z, double solver_tol = kSolverTol);
CurvatureAt curvature_tensor(const ChartField& field, const Vector& z);

using ConnectionFunction = std::function<std::vector<Matrix>(const Vector&)>;

/// Curvature of an arbitrary connection field, dbar-differentiated numerically.
CurvatureTensor curvature_from_connection(const ChartField& field, const ConnectionFunction& connection,
                                          const Vector& z, double step);

/// Kernel-valued perturbation z -> (I - P(z)) Phi_a(z) with a seeded smooth Phi.
ConnectionFunction random_kernel_perturbation(const ChartField& field, std::uint64_t seed,
                                              double amplitude = 1.0);

/// |R(A) - R(A + K)| / (1 + |R(A)|).
double gauge_independence_residual(const ChartField& field, const Vector& z, const ConnectionFunction& k);

/// R(v, conj v, v, conj v) / b(v, conj v)^2 for a metric on the tangent bundle.
double hsc(const CurvatureTensor& r, const Matrix& gram, const Vector& v);
double hsc(const ChartField& metric, const Vector& z, const Vector& v);

/// max over a < b, c of |b(tau(d_a, d_b), conj(e_c))| from the connection.
double torsion_defect(const ChartField& metric, const Vector& z);
/// Same quantity from antisymmetrized first derivatives of the metric.
double torsion_defect_from_derivatives(const ChartField& metric, const Vector& z);

/// (D')^2 mod kernel: max over a < b of
/// |G (d_b A_a - d_a A_b + A_b A_a - A_a A_b)| / (1 + |G| |A|^2).
double purity_defect(const ChartField& field, const Vector& z);

struct HolomorphicMap {
  Index source_dim = 0;
  Index target_dim = 0;
  std::function<Vector(const Vector&)> value;
  std::function<Matrix(const Vector&)> jacobian;  // target_dim x source_dim
};

/// Mod-kernel residual between the Chern connection of the pulled-back form
/// and the pulled-back Chern connection.
double pullback_consistency(const HolomorphicMap& f, const ChartField& field, const Vector& z);

}  // namespace hermitia

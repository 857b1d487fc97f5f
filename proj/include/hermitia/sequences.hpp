#pragma once

// Curvature of sub- and quotient bundles of a chart field: second fundamental
// form, the adjoint identity table, block splitting, Codazzi-Griffiths, and the
// curvature of a sum of two forms.

#include <array>
#include <string>

#include "hermitia/chart_calc.hpp"

namespace hermitia {

/// Holomorphic r x k matrix field with its z-derivatives.
struct HolomorphicMatrixField {
  Index rows = 0, cols = 0, chart_dim = 0;
  std::function<Matrix(const Vector&)> value;
  std::function<std::vector<Matrix>(const Vector&)> derivative;

  /// j(z) = j0 + sum_c z_c j1[c].
  static HolomorphicMatrixField affine(const Matrix& j0, const std::vector<Matrix>& j1);
  static HolomorphicMatrixField constant(const Matrix& j0, Index chart_dim);
};

/// 0 -> S -> E -> Q -> 0 on a chart. S is framed by the columns of j(z); Q by
/// the coordinates of q(z) = [0 I] [j(z) C]^-1, with C a fixed orthonormal
/// complement of the range of j at the chart center. Both frames are
/// holomorphic.
class ExactSeqChart {
 public:
  ExactSeqChart(ChartField ambient, HolomorphicMatrixField inclusion, Vector center = {});

  Index chart_dim() const { return ambient_.chart_dim(); }
  Index rank() const { return ambient_.bundle_rank(); }
  Index sub_rank() const { return j_.cols; }
  Index quotient_rank() const { return rank() - sub_rank(); }

  const ChartField& ambient() const { return ambient_; }
  const HolomorphicMatrixField& inclusion() const { return j_; }
  const Matrix& complement() const { return complement_; }

  Matrix j(const Vector& z) const { return j_.value(z); }
  Matrix q(const Vector& z) const;
  std::vector<Matrix> dq(const Vector& z) const;

  /// b_S = j^* G_E j, with jets from the ambient jet.
  const ChartField& sub_field() const { return sub_; }
  /// b_Q = quotient form of G_E along q(z).
  const ChartField& quotient_field() const { return quot_; }

  /// Largest |dbar j| found by finite differences at the validation points.
  double holomorphy_defect() const { return holomorphy_defect_; }

 private:
  ChartField ambient_;
  HolomorphicMatrixField j_;
  Matrix complement_;
  ChartField sub_;
  ChartField quot_;
  double holomorphy_defect_ = 0;
};

/// Pointwise data shared by the sequence checks.
struct SequencePoint {
  Vector z;
  Matrix g_e, g_s, g_q;
  std::vector<Matrix> a_e, a_s, a_q;
  Matrix j, q, j_dagger, q_dagger;
  std::vector<Matrix> dj;
};

SequencePoint sequence_point(const ExactSeqChart& seq, const Vector& z);

struct SecondFundamentalFormAt {
  Vector z;
  std::vector<Matrix> sigma;         // sigma[alpha]: S -> Q
  std::vector<Matrix> sigma_dagger;  // sigma_dagger[beta]: Q -> S
  /// |b_Q sigma_alpha k| over k in Ker b_S, relative; zero iff sigma maps
  /// Ker b_S into Ker b_Q.
  double kernel_residual = 0;
};

SecondFundamentalFormAt second_fundamental_form(const ExactSeqChart& seq, const Vector& z);

/// |q D_E(j f s) - f sigma(s)| for a seeded smooth scalar f and section s.
double sigma_linearity_residual(const ExactSeqChart& seq, const Vector& z, std::uint64_t seed);

/// (0,1)-part of sigma: q (dbar_beta j) by finite differences, max over beta.
double sigma_antiholomorphic_part(const ExactSeqChart& seq, const Vector& z);

struct DemaillyReport {
  static constexpr std::array<const char*, 5> names = {
      "D'j ~ q^dagger sigma", "D'q ~ -sigma j^dagger", "D'j^dagger ~ 0, dbar j^dagger ~ sigma^dagger q",
      "D'q^dagger ~ 0, dbar q^dagger ~ -j sigma^dagger", "D'sigma ~ 0, dbar sigma^dagger ~ 0"};
  std::array<double, 5> residuals{};
  double max() const;
};

/// Five identity lines, each measured after contraction with the relevant Gram
/// matrix and normalized by 1 + the size of the terms.
DemaillyReport demailly_residuals(const ExactSeqChart& seq, const Vector& z, double step = 1e-4);

/// Right-hand sides of the two Codazzi-Griffiths equations as tensors.
CurvatureTensor codazzi_sub_tensor(const ExactSeqChart& seq, const Vector& z);
CurvatureTensor codazzi_quot_tensor(const ExactSeqChart& seq, const Vector& z);

cd codazzi_sub(const ExactSeqChart& seq, const Vector& z, Index alpha, Index beta, Index s, Index t);
cd codazzi_quot(const ExactSeqChart& seq, const Vector& z, Index alpha, Index beta, Index s, Index t);

struct CodazziCheck {
  CurvatureTensor sub_formula, sub_direct, quot_formula, quot_direct;
  double sub_residual = 0, quot_residual = 0;
};

/// Formulas against the intrinsic curvature of b_S and b_Q.
CodazziCheck codazzi_check(const ExactSeqChart& seq, const Vector& z);

struct SplittingBlocks {
  struct Entry {
    Matrix ss, sq, qs, qq;  // endomorphism blocks in the splitting e -> (j^dagger e, q e)
  };
  Index chart_dim = 0;
  std::vector<Entry> blocks;  // index alpha * chart_dim + beta
  double reassembly_residual = 0;
  double max_off_diagonal = 0;  // contracted off-diagonal size

  const Entry& at(Index alpha, Index beta) const { return blocks[static_cast<std::size_t>(alpha * chart_dim + beta)]; }
};

SplittingBlocks splitting_curvature_blocks(const ExactSeqChart& seq, const Vector& z, double step = 1e-4);

struct SumCurvatureResult {
  CurvatureTensor formula;
  CurvatureTensor direct;
  double residual = 0;
  Matrix q;
  std::vector<Matrix> sigma;
};

SumCurvatureResult sum_curvature(const ChartField& b1, const ChartField& b2, const Vector& z);

/// Change of the q(sigma, sigma) term under seeded kernel-valued changes of
/// both connections, relative to its size.
double sum_sigma_gauge_residual(const ChartField& b1, const ChartField& b2, const Vector& z, std::uint64_t seed);

// Instances.

/// O(-1) in the trivial C^2 bundle over the standard chart of P^1.
ExactSeqChart o_minus_one_sequence();
/// Constant block-diagonal metric with the first k coordinates as subbundle.
ExactSeqChart split_constant_sequence(Index chart_dim, Index rank, Index sub_rank, std::uint64_t seed);

struct RandomFieldTerm {
  Index rows;         // rows of the holomorphic factor M(z)
  double curvature;   // weight exp(c |z|^2 + Re(a . z))
};

/// G(z) = sum_i exp(psi_i) M_i(z)^* M_i(z), M_i affine holomorphic, analytic jets.
ChartField random_analytic_field(Index chart_dim, Index rank, const std::vector<RandomFieldTerm>& terms,
                                 std::uint64_t seed, double radius = 0.6);

/// Same construction with prescribed holomorphic factors M(z) = m0 + sum z_c m1[c].
ChartField analytic_field_from_factors(const std::vector<std::pair<Matrix, std::vector<Matrix>>>& factors,
                                       const std::vector<double>& curvatures, const std::vector<Vector>& linear,
                                       double radius);

/// Positive ambient metric with an affine (or constant) inclusion.
ExactSeqChart random_sequence(std::uint64_t seed, Index chart_dim, Index rank, Index sub_rank, bool constant_j);

/// Ambient form of rank r - 2 whose kernel contains the first column of j(z)
/// for every z, so b_S and b_Q are both degenerate with constant rank.
ExactSeqChart random_degenerate_sequence(std::uint64_t seed, Index chart_dim, Index rank = 4);

/// Two constant-rank forms with positive sum. When degenerate, each has rank
/// below the bundle rank.
std::pair<ChartField, ChartField> random_sum_pair(std::uint64_t seed, Index chart_dim, Index rank, bool degenerate);

}  // namespace hermitia

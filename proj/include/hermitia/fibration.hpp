#pragma once

// The family h_lambda = b1 + e^lambda b2 on a fibered chart: curvature
// decomposition, limit quotient form, vertical curvature, and the search for
// a threshold lambda_0 past which holomorphic sectional curvature is positive.

#include <optional>
#include <string>

#include "hermitia/models.hpp"
#include "hermitia/sequences.hpp"

namespace hermitia {

ChartField h_lambda(const FibrationModel& model, double lambda);

/// Smallest eigenvalue of h_lambda(z) relative to the largest.
double h_lambda_min_eigenvalue(const FibrationModel& model, double lambda, const Vector& z);

struct RLambdaDecomposition {
  CurvatureTensor direct;
  std::optional<CurvatureTensor> formula;  // empty when a rank check fails
  std::optional<double> residual;
  std::string note;                        // reason when not applicable
};

/// Sum formula with summands b1 and e^lambda b2 against the direct curvature
/// of h_lambda.
RLambdaDecomposition r_lambda_decomposed(const FibrationModel& model, double lambda, const Vector& z);

struct LimitRecord {
  std::vector<double> lambdas;
  std::vector<double> errors;   // |q_lambda - q_inf|
  std::vector<double> ratios;   // errors[i + 1] / errors[i]
  Matrix q_infinity;
  double projection_residual = 0;  // |q_inf - (j j^dagger)^* b1|
  bool semipositive = false;
  /// Smallest eigenvalue of q_inf on a complement of Ker b2 and its largest
  /// value on Ker b2 (the latter is zero by the kernel lemma).
  double complement_min_eigenvalue = 0;
  double vertical_max = 0;
};

LimitRecord q_lambda_limit(const HermitianFormd& b1, const HermitianFormd& b2, const std::vector<double>& lambdas);
LimitRecord q_lambda_limit(const FibrationModel& model, const Vector& z, const std::vector<double>& lambdas);

struct VerticalHscRecord {
  double lambda = 0;
  double min_h = 0;           // over grid points and vertical directions
  double max_fiber_gap = 0;   // max |H_lambda(v) - H_fiber(v)|
};

struct VerticalHscReport {
  std::vector<VerticalHscRecord> records;
  bool positive = false;      // min_h > margin for every tested lambda
  double margin = 1e-3;
};

/// H of h_lambda on vertical directions compared with the curvature of the
/// fiber metric itself (b1 restricted to the fiber over the same base point).
VerticalHscReport vertical_hsc_check(const FibrationModel& model, const std::vector<Vector>& points,
                                     const std::vector<double>& lambdas, std::size_t directions,
                                     std::uint64_t seed, double margin = 1e-3);

struct LambdaScanOptions {
  std::vector<double> schedule = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::size_t points = 200;
  std::size_t directions = 16;
  std::size_t refine_candidates = 6;
  int refine_steps = 200;
  double margin = 1e-3;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct LambdaRecord {
  double lambda = 0;
  double min_h = 0;
  Vector argmin_point, argmin_direction;
  bool positive_definite = false;
  bool passed = false;    // positive-definite and min_h > margin
  bool positive = false;  // positive-definite and min_h > 0
};

struct LambdaScanResult {
  std::optional<double> lambda0;
  std::vector<LambdaRecord> records;
  std::optional<LambdaRecord> bisection;
  /// Same scan with twice the points and directions at every scheduled
  /// lambda >= lambda0.
  std::vector<LambdaRecord> stability;
  /// H > 0 at every lambda >= lambda0 in both scans. The margin only selects
  /// lambda0: on product models min H decays like e^-lambda while staying positive.
  bool stable = false;
  std::uint64_t seed = 0;
  std::size_t points = 0, directions = 0;
  std::string region;
};

/// Min of H over sampled points of the region and refined directions on the
/// standard unit sphere, for one lambda.
LambdaRecord min_hsc_at_lambda(const FibrationModel& model, double lambda, const LambdaScanOptions& options);

LambdaScanResult find_lambda0(const FibrationModel& model, const LambdaScanOptions& options);

}  // namespace hermitia

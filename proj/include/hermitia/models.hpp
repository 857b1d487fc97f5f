#pragma once

// Model metrics on coordinate charts: projective spaces, Grassmannians (two
// constructions), fibered models, and curvature scans over them.

#include <optional>
#include <string>
#include <utility>

#include "hermitia/chart_calc.hpp"

namespace hermitia {

/// Sampling region in a chart: polydisc or Euclidean ball.
struct Region {
  enum class Shape { Polydisc, Ball };
  Shape shape = Shape::Polydisc;
  Vector center;
  double radius = 0.9;

  static Region polydisc(Index dim, double radius) { return {Shape::Polydisc, Vector::Zero(dim), radius}; }
  static Region ball(Index dim, double radius) { return {Shape::Ball, Vector::Zero(dim), radius}; }

  Vector sample(Rng& rng) const {
    return shape == Shape::Ball ? rng.in_ball(center, radius) : rng.in_polydisc(center, radius);
  }
  bool contains(const Vector& z) const;
  std::string describe() const;
};

/// g(z) = d dbar log(1 + |z|^2) on the standard chart of P^n, analytic jets.
ChartField fubini_study_chart(Index n);

/// Gr(k, n) on the chart of row spaces of [I_k | Z]. Chart coordinate
/// alpha = a * (n - k) + b is the entry Z(a, b).
struct GrassmannChartModel {
  Index k = 0;
  Index n = 0;
  ChartField metric;

  Index chart_dim() const { return k * (n - k); }
  Matrix to_matrix(const Vector& z) const;
  Vector to_vector(const Matrix& z) const;
};

/// Metric from the Hom(S, Q) description of the tangent space:
/// g(V, W) = tr((I + Z Z^*)^-1 V (I + Z^* Z)^-1 W^*), analytic jets.
GrassmannChartModel grassmannian_chart(Index k, Index n);

/// Plucker coordinates of [I_k | Z] (all k x k minors, lexicographic column sets).
Vector pluecker_coordinates(Index k, Index n, const Matrix& z);
/// Derivatives of the Plucker coordinates with respect to the chart coordinates
/// (columns indexed by alpha).
Matrix pluecker_jacobian(Index k, Index n, const Matrix& z);

/// Gram field d dbar log |p(Z)|^2. Values are exact; jets use nested finite
/// differences.
ChartField pluecker_pullback(Index k, Index n);

/// Ric[beta][alpha] = -d_alpha dbar_beta log det G, stored as a Gram matrix.
Matrix ricci(const ChartField& metric, const Vector& z);

/// max over points of |Ric - n G| / |G|.
double einstein_residual(const ChartField& metric, double n, const std::vector<Vector>& points);

struct HscScanOptions {
  std::size_t samples = 2000;
  int refine_steps = 200;
  std::size_t refine_candidates = 8;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct HscScanResult {
  double min_h = 0, max_h = 0;                  // after refinement
  double sample_min = 0, sample_max = 0;        // raw samples only
  Vector argmin_point, argmin_direction;
  Vector argmax_point, argmax_direction;
  std::size_t samples = 0;
  std::size_t failed_points = 0;                // rank jumps / indefinite points skipped
  std::string region;
  std::uint64_t seed = 0;
};

/// Direction-sphere refinement of H at a fixed point; sign = +1 ascends,
/// -1 descends. Returns the refined (value, direction).
std::pair<double, Vector> refine_direction(const CurvatureTensor& r, const Matrix& gram, Vector v,
                                           double sign, int steps);

HscScanResult hsc_extremes(const ChartField& metric, const Region& region, const HscScanOptions& options);

/// Chart (base..., fiber...) with a vertical form b1 and a base pullback b2.
struct FibrationModel {
  std::string name;
  Index base_dim = 0;
  Index fiber_dim = 0;
  ChartField b1;
  ChartField b2;
  Region region;

  Index dim() const { return base_dim + fiber_dim; }
  /// Throws InvalidModel unless b1 is positive on fiber directions and b2
  /// annihilates them at seeded sample points.
  void validate(std::size_t samples = 10, std::uint64_t seed = 17) const;
};

/// b1 = fiber metric pulled back along the fiber projection, b2 = base metric
/// pulled back along the base projection.
FibrationModel product_model(const ChartField& base, const ChartField& fiber, Region region);

/// Chart (z, w): b1 = d dbar log(1 + (1 + |z|^2)^k |w|^2), b2 = Fubini-Study in z.
FibrationModel hirzebruch_model(int twist, Region region = Region::ball(2, 0.7));

/// Rank of b1 at z (varies for the Hirzebruch model).
Index b1_rank(const FibrationModel& model, const Vector& z);

/// Registry entry addressed by ids "fs:N", "gr:K:N", "pl:K:N", "flat:N",
/// "prod:fs1:fs1", "hirz:K".
struct Model {
  std::string id;
  ChartField metric;
  Region region;
  std::optional<double> einstein_constant;
  /// Claimed bounds 2/k^2 <= H <= 2 for Grassmannians.
  std::optional<std::pair<double, double>> hsc_bounds;
  std::optional<FibrationModel> fibration;
};

Model resolve_model(const std::string& id);

}  // namespace hermitia

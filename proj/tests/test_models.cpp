#include <doctest.h>

#include <cmath>

#include "hermitia/models.hpp"
#include "oracles.hpp"

using namespace hermitia;

namespace {

Vector point(std::initializer_list<cd> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (const auto& x : v) out(i++) = x;
  return out;
}

std::vector<Vector> points(const Region& region, int count, std::uint64_t seed) {
  std::vector<Vector> out;
  Rng rng(seed);
  for (int i = 0; i < count; ++i) out.push_back(region.sample(rng));
  return out;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("Fubini-Study chart equals the closed form and the potential") {
  for (Index n : {1, 2, 3}) {
    const ChartField fs = fubini_study_chart(n);
    for (const auto& z : points(Region::polydisc(n, 0.9), 5, 10 + static_cast<std::uint64_t>(n))) {
      CHECK((fs.value(z) - oracle::fubini_study(z)).norm() < 1e-14);
      const oracle::Scalar phi = [](const oracle::Vec& p) { return std::log(1.0 + p.squaredNorm()); };
      CHECK((fs.value(z) - oracle::levi(phi, z)).norm() < 1e-8);
    }
  }
}

TEST_CASE("grassmannian chart examples") {
  const auto g12 = grassmannian_chart(1, 2);
  const ChartField fs = fubini_study_chart(1);
  for (const auto& z : points(Region::polydisc(1, 0.9), 20, 3)) CHECK((g12.metric.value(z) - fs.value(z)).norm() < 1e-10);

  const auto gr = grassmannian_chart(2, 4);
  CHECK(gr.chart_dim() == 4);
  const Vector zero = Vector::Zero(4);
  Matrix e11 = Matrix::Zero(2, 2), diag = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  diag(0, 0) = diag(1, 1) = 1.0 / std::sqrt(2.0);
  CHECK(hsc(gr.metric, zero, gr.to_vector(e11)) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(hsc(gr.metric, zero, gr.to_vector(diag)) == doctest::Approx(1.0).epsilon(1e-9));
  // Same values from the oracle contraction on the Plücker potential.
  const oracle::Field pot = [](const oracle::Vec& p) { return oracle::grassmannian_from_potential(2, 4, p); };
  CHECK(oracle::hsc(pot, zero, gr.to_vector(diag)) == doctest::Approx(1.0).epsilon(1e-4));

  Matrix z(2, 2);
  z << cd(0.1, 0.2), 0.3, cd(0, -0.1), cd(0.2, 0.2);
  CHECK((gr.to_matrix(gr.to_vector(z)) - z).norm() == 0.0);
}

TEST_CASE("Plücker pullback examples") {
  const ChartField p12 = pluecker_pullback(1, 2);
  const ChartField fs = fubini_study_chart(1);
  for (const auto& z : points(Region::polydisc(1, 0.9), 5, 4)) CHECK((p12.value(z) - fs.value(z)).norm() < 1e-12);

  CHECK((pluecker_pullback(2, 4).value(Vector::Zero(4)) - Matrix::Identity(4, 4)).norm() < 1e-12);

  const Matrix zm = Matrix::Constant(2, 2, cd(0.2, -0.1));
  CHECK((pluecker_coordinates(2, 4, zm) - oracle::pluecker(2, 4, zm)).norm() < 1e-14);
}

TEST_CASE("two constructions agree on Gr(2,4) and Gr(2,5)") {
  for (Index n : {4, 5}) {
    const ChartField chart = grassmannian_chart(2, n).metric;
    const ChartField pl = pluecker_pullback(2, n);
    for (const auto& z : points(Region::polydisc(2 * (n - 2), 0.7), 20, 50 + static_cast<std::uint64_t>(n))) {
      CHECK((chart.value(z) - pl.value(z)).norm() / chart.value(z).norm() < 1e-8);
      // Independent potential-Hessian oracle (finite differences, looser).
      CHECK((chart.value(z) - oracle::grassmannian_from_potential(2, static_cast<int>(n), z)).norm() < 1e-6);
    }
  }
}

TEST_CASE("Ricci and Einstein residuals") {
  CHECK(ricci(constant_field(Matrix::Identity(2, 2), 2), point({0.1, 0.2})).norm() < 1e-12);
  struct Case {
    ChartField metric;
    double n;
    Region region;
  };
  const std::vector<Case> cases = {{fubini_study_chart(1), 2, Region::polydisc(1, 0.9)},
                                   {fubini_study_chart(2), 3, Region::polydisc(2, 0.9)},
                                   {grassmannian_chart(2, 4).metric, 4, Region::polydisc(4, 0.7)}};
  for (const auto& c : cases) {
    const auto pts = points(c.region, 10, 77);
    CHECK(einstein_residual(c.metric, c.n, pts) < 1e-6);
    const oracle::Field f = [&c](const oracle::Vec& p) { return oracle::Mat(c.metric.value(p)); };
    const Vector& z = pts.front();
    const Matrix ric = ricci(c.metric, z);
    CHECK((ric - oracle::ricci(f, z)).norm() < 1e-5);
    CHECK((ric - c.n * c.metric.value(z)).norm() < 1e-6);
  }
}

TEST_CASE("hsc_extremes examples") {
  HscScanOptions opt;
  opt.samples = 100;
  opt.refine_steps = 20;
  const auto fs = hsc_extremes(fubini_study_chart(1), Region::polydisc(1, 0.9), opt);
  CHECK(fs.min_h == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(fs.max_h == doctest::Approx(2.0).epsilon(1e-5));

  const auto flat = hsc_extremes(constant_field(Matrix::Identity(2, 2), 2), Region::polydisc(2, 0.5), opt);
  CHECK(std::abs(flat.min_h) < 1e-12);
  CHECK(std::abs(flat.max_h) < 1e-12);

  opt.samples = 300;
  opt.refine_steps = 200;
  const auto gr = hsc_extremes(grassmannian_chart(2, 4).metric, Region::polydisc(4, 0.7), opt);
  CHECK(gr.sample_min >= 0.5 - 1e-3);
  CHECK(gr.sample_max <= 2.0 + 1e-3);
  CHECK(gr.max_h == doctest::Approx(2.0).epsilon(1e-3));
  // The refined minimum is 1 = 2/k, not 2/k^2 = 1/2: H = 2 sum s_i^4 / (sum s_i^2)^2
  // over the singular values of the tangent direction at Z = 0.
  CHECK(gr.min_h == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("Gr(2,4) HSC at the origin is 2 sum s^4 / (sum s^2)^2") {
  const auto gr = grassmannian_chart(2, 4);
  const CurvatureAt c = curvature_tensor(gr.metric, Vector::Zero(4));
  Rng rng(91);
  for (int i = 0; i < 20; ++i) {
    const Matrix x = rng.matrix(2, 2);
    Eigen::JacobiSVD<Matrix> svd(x);
    const Eigen::VectorXd s = svd.singularValues();
    const double expected = 2.0 * s.array().pow(4).sum() / std::pow(s.squaredNorm(), 2);
    CHECK(hsc(c.r, c.form_at_point.gram(), gr.to_vector(x)) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("model metrics are Kahler") {
  CHECK(torsion_defect(fubini_study_chart(3), Vector::Constant(3, cd(0.2, 0.1))) < 1e-6);
  CHECK(torsion_defect(grassmannian_chart(2, 5).metric, Vector::Constant(6, cd(-0.1, 0.1))) < 1e-6);
  CHECK(torsion_defect(pluecker_pullback(2, 4), Vector::Constant(4, cd(0.1, 0.05))) < 1e-6);
  const auto hirz = hirzebruch_model(1);
  CHECK(torsion_defect(linear_combination(hirz.b1, 1.0, hirz.b2, 1.0), point({0.2, cd(0.1, 0.3)})) < 1e-6);
}

TEST_CASE("fibration model examples") {
  const auto prod = product_model(fubini_study_chart(1), fubini_study_chart(1), Region::ball(2, 0.7));
  for (const auto& z : points(prod.region, 5, 8)) {
    const Matrix k = prod.b1.form(z).spectrum().kernel;
    REQUIRE(k.cols() == 1);
    CHECK(std::abs(std::abs(k(0, 0)) - 1.0) < 1e-12);  // span of the base direction
    CHECK(prod.b2.value(z).col(1).norm() < 1e-12);
  }

  const auto h0 = hirzebruch_model(0);
  for (const auto& z : points(prod.region, 5, 9)) {
    CHECK((h0.b1.value(z) - prod.b1.value(z)).norm() < 1e-12);
    CHECK((h0.b2.value(z) - prod.b2.value(z)).norm() < 1e-12);
  }

  const auto h1 = hirzebruch_model(1);
  CHECK(std::abs(h1.b1.value(Vector::Zero(2))(1, 1) - 1.0) < 1e-12);
  CHECK(b1_rank(h1, Vector::Zero(2)) == 1);
  CHECK(b1_rank(h1, point({0.2, 0.3})) == 2);
  // b1 against the potential log(1 + (1 + |z|^2) |w|^2).
  const oracle::Scalar phi = [](const oracle::Vec& p) {
    return std::log(1.0 + (1.0 + std::norm(p(0))) * std::norm(p(1)));
  };
  const Vector z = point({cd(0.2, 0.1), cd(-0.3, 0.2)});
  CHECK((h1.b1.value(z) - oracle::levi(phi, z)).norm() < 1e-8);

  FibrationModel flipped = prod;
  flipped.b1 = linear_combination(prod.b1, -1.0, prod.b1, 0.0);
  CHECK_THROWS_AS(flipped.validate(), GeometryError);
}

TEST_CASE("model registry") {
  CHECK(resolve_model("fs:2").metric.chart_dim() == 2);
  CHECK(resolve_model("gr:2:4").metric.chart_dim() == 4);
  CHECK(resolve_model("pl:2:4").metric.chart_dim() == 4);
  CHECK(resolve_model("flat:3").metric.chart_dim() == 3);
  CHECK(resolve_model("prod:fs1:fs1").fibration.has_value());
  CHECK(resolve_model("hirz:1").fibration.has_value());
  for (const char* bad : {"fs", "gr:3:2", "nope:1", "fs:x"}) {
    try {
      resolve_model(bad);
      FAIL("expected ConfigError for " << bad);
    } catch (const GeometryError& e) {
      CHECK(e.kind() == ErrorKind::ConfigError);
    }
  }
}

}  // TEST_SUITE

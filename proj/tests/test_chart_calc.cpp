#include <doctest.h>

#include <cmath>

#include "hermitia/chart_calc.hpp"
#include "hermitia/models.hpp"
#include "hermitia/sequences.hpp"
#include "oracles.hpp"

using namespace hermitia;

namespace {

Vector point(std::initializer_list<cd> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (const auto& x : v) out(i++) = x;
  return out;
}

Matrix scalar(cd v) { return Matrix::Constant(1, 1, v); }

/// FD field from a closed-form Gram function.
ChartField fd_field(Index m, Index r, const oracle::Field& g, double radius = 10.0) {
  return ChartField(m, r, [g](const Vector& z) { return Matrix(g(z)); }, Polydisc::around_origin(m, radius));
}

/// G = diag(FS(z1), FS(z2)), the product of two Fubini-Study lines.
Matrix product_fs(const Vector& z) {
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = oracle::fubini_study(z.head(1))(0, 0);
  g(1, 1) = oracle::fubini_study(z.tail(1))(0, 0);
  return g;
}

ChartField diag_exp_zero(Index m) {
  Matrix m0(1, 2);
  m0 << 1.0, 0.0;
  return analytic_field_from_factors({{m0, std::vector<Matrix>(static_cast<std::size_t>(m), Matrix::Zero(1, 2))}},
                                     {1.0}, {Vector::Zero(m)}, 0.8);
}

}  // namespace

TEST_SUITE("chart_calc") {

TEST_CASE("wirtinger examples") {
  const Vector z = point({cd(0.3, -0.2)});
  const MatrixFunction constant = [](const Vector&) { return scalar(3.0); };
  CHECK(wirtinger(constant, z, 0, false, 1e-4).norm() < 1e-12);

  const MatrixFunction fs = [](const Vector& p) { return scalar(std::pow(1.0 + std::norm(p(0)), -2.0)); };
  CHECK(wirtinger(fs, Vector::Zero(1), 0, false, 1e-4).norm() < 1e-10);
  const cd expected = -2.0 * std::conj(z(0)) * std::pow(1.0 + std::norm(z(0)), -3.0);
  // Central differences at 1e-4 carry an O(h^2) error of about 1e-8 here.
  CHECK(std::abs(wirtinger(fs, z, 0, false, 1e-4)(0, 0) - expected) < 1e-7);

  const MatrixFunction ident = [](const Vector& p) { return scalar(p(0)); };
  CHECK(std::abs(wirtinger(ident, z, 0, false, 1e-4)(0, 0) - 1.0) < 1e-10);
  CHECK(std::abs(wirtinger(ident, z, 0, true, 1e-4)(0, 0)) < 1e-10);
}

TEST_CASE("central differences converge at second order") {
  // F = sin(z) conj(z): dF/dz = cos(z) conj(z).
  const MatrixFunction f = [](const Vector& p) { return scalar(std::sin(p(0)) * std::conj(p(0))); };
  const Vector z = point({cd(0.4, 0.3)});
  const cd exact = std::cos(z(0)) * std::conj(z(0));
  const double e1 = std::abs(wirtinger(f, z, 0, false, 1e-2)(0, 0) - exact);
  const double e2 = std::abs(wirtinger(f, z, 0, false, 5e-3)(0, 0) - exact);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("chern_connection examples") {
  const ChartField flat = constant_field(Matrix::Identity(2, 2) * 3.0, 2);
  const ConnectionAt c0 = chern_connection(flat, point({0.1, 0.2}));
  for (const auto& a : c0.a) CHECK(a.norm() < 1e-12);
  CHECK(c0.residual < 1e-12);

  const ConnectionAt fs = chern_connection(fubini_study_chart(1), point({1.0}));
  CHECK(std::abs(fs.a[0](0, 0) - (-1.0)) < 1e-12);

  const Vector z = point({cd(0.2, 0.1)});
  const ConnectionAt deg = chern_connection(diag_exp_zero(1), z);
  CHECK(std::abs(deg.a[0](0, 0) - std::conj(z(0))) < 1e-10);
  CHECK(std::abs(deg.a[0](1, 1)) < 1e-10);
  CHECK(deg.residual < 1e-10);
  CHECK(deg.kernel_basis.cols() == 1);
}

TEST_CASE("connection errors: rank jump and dG outside the range of G") {
  const ChartField jump = fd_field(1, 2, [](const oracle::Vec& p) {
    oracle::Mat g = oracle::Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = std::norm(p(0));
    return g;
  });
  CHECK_THROWS_AS(chern_connection(jump, Vector::Zero(1)), GeometryError);

  // G = v v^* has rank 1 everywhere. With v = (1, conj z), dG = v (0, 1) stays
  // in the range of G; with v = (1, z), dG = (0, 1)^T v^* does not, and the
  // solve leaves a residual.
  const auto rank_one = [](bool conjugate) {
    return fd_field(1, 2, [conjugate](const oracle::Vec& p) {
      oracle::Vec v(2);
      v << 1.0, conjugate ? std::conj(p(0)) : p(0);
      return oracle::Mat(v * v.adjoint());
    });
  };
  CHECK(chern_connection(rank_one(true), point({0.3})).residual < 1e-7);
  try {
    chern_connection(rank_one(false), point({0.3}));
    FAIL("expected SolverResidual");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::SolverResidual);
  }
}

TEST_CASE("curvature examples against closed forms") {
  const CurvatureAt flat = curvature_tensor(constant_field(Matrix::Identity(2, 2), 2), point({0.1, 0.2}));
  CHECK(flat.r.norm() < 1e-12);

  CHECK(std::abs(curvature_tensor(fubini_study_chart(1), Vector::Zero(1)).r(0, 0, 0, 0) - 2.0) < 1e-10);

  const ChartField o1 = fd_field(1, 1, [](const oracle::Vec& p) { return oracle::Mat::Constant(1, 1, 1.0 + std::norm(p(0))); });
  CHECK(std::abs(curvature_tensor(o1, Vector::Zero(1)).r(0, 0, 0, 0) - (-1.0)) < 1e-5);
  const Vector z = point({cd(0.3, 0.4)});
  CHECK(std::abs(curvature_tensor(o1, z).r(0, 0, 0, 0) - (-1.0 / (1.0 + std::norm(z(0))))) < 1e-5);
}

TEST_CASE("curvature matches the oracle on random analytic fields") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const ChartField g = random_analytic_field(2, 3, {{3, 0.7}, {2, -0.3}}, seed);
    Rng rng(seed + 100);
    const Vector z = rng.in_ball(Vector::Zero(2), 0.3);
    const CurvatureAt c = curvature_tensor(g, z);
    const CurvatureAt cf = curvature_tensor(g.with_finite_differences(), z);
    const oracle::Field f = [&g](const oracle::Vec& p) { return oracle::Mat(g.value(p)); };
    double worst = 0;
    for (Index a = 0; a < 2; ++a)
      for (Index b = 0; b < 2; ++b) {
        const Matrix expected = oracle::curvature_block(f, z, a, b);
        worst = std::max(worst, (c.r.block(a, b) - expected).norm() / (1.0 + expected.norm()));
      }
    CHECK(worst < 1e-6);
    CHECK(relative_difference(cf.r, c.r) < 1e-4);
    CHECK(c.r.pair_symmetry_defect() < 1e-6);
    CHECK(chern_connection(g, z).residual < 1e-7);
  }
}

TEST_CASE("(D')^2 vanishes mod kernel") {
  CHECK(purity_defect(grassmannian_chart(2, 4).metric, Vector::Constant(4, cd(0.1, 0.05))) < 1e-5);
  const ChartField pos = random_analytic_field(2, 3, {{3, 0.5}}, 4);
  CHECK(purity_defect(pos, point({0.1, cd(0, 0.2)})) < 1e-5);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const ChartField deg = random_degenerate_sequence(seed, 2, 4).ambient();
    CHECK(purity_defect(deg, point({0.1, cd(0, -0.1)})) < 1e-5);
  }
}

TEST_CASE("gauge independence examples") {
  const ChartField pos = random_analytic_field(1, 2, {{2, 0.5}}, 1);
  const auto k0 = random_kernel_perturbation(pos, 3);
  CHECK(gauge_independence_residual(pos, point({0.1}), k0) == 0.0);

  const ChartField diag = diag_exp_zero(1);
  const Vector z = point({cd(0.2, -0.1)});
  // K = diag(0, phi(z)) with phi smooth and non-holomorphic.
  const ConnectionFunction k = [](const Vector& p) {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 1) = std::exp(p(0)) * std::conj(p(0)) + std::norm(p(0));
    return std::vector<Matrix>{m};
  };
  CHECK(gauge_independence_residual(diag, z, k) <= 1e-6);
  CHECK(gauge_independence_residual(diag, z, random_kernel_perturbation(diag, 5)) <= 1e-6);

  const ChartField zero = constant_field(Matrix::Zero(2, 2), 1);
  CHECK(curvature_tensor(zero, z).r.norm() == 0.0);
  CHECK(gauge_independence_residual(zero, z, random_kernel_perturbation(zero, 6)) == 0.0);
}

TEST_CASE("hsc examples") {
  const ChartField fs = fubini_study_chart(1);
  Rng rng(2);
  for (int i = 0; i < 5; ++i) {
    const Vector z = rng.in_polydisc(Vector::Zero(1), 0.9);
    CHECK(hsc(fs, z, point({rng.complex_normal()})) == doctest::Approx(2.0).epsilon(1e-9));
  }
  const ChartField prod = fd_field(2, 2, [](const oracle::Vec& p) { return oracle::Mat(product_fs(p)); });
  CHECK(hsc(prod, Vector::Zero(2), point({1, 1})) == doctest::Approx(1.0).epsilon(1e-5));
  const oracle::Field pf = [](const oracle::Vec& p) { return oracle::Mat(product_fs(p)); };
  const Vector z = point({cd(0.2, 0.1), cd(-0.3, 0.2)}), v = point({cd(1, 1), cd(0.5, -2)});
  CHECK(hsc(prod, z, v) == doctest::Approx(oracle::hsc(pf, z, v)).epsilon(1e-5));

  CHECK(hsc(constant_field(Matrix::Identity(2, 2), 2), z, v) == doctest::Approx(0.0));
  CHECK_THROWS_AS(hsc(fs, Vector::Zero(1), Vector::Zero(1)), GeometryError);
}

TEST_CASE("hsc scaling law H(cG) = H(G)/c") {
  const ChartField g = grassmannian_chart(2, 3).metric;
  const ChartField g3 = linear_combination(g, 3.0, g, 0.0);
  Rng rng(44);
  for (int i = 0; i < 10; ++i) {
    const Vector z = rng.in_polydisc(Vector::Zero(2), 0.6), v = rng.unit_vector(2);
    CHECK(hsc(g3, z, v) == doctest::Approx(hsc(g, z, v) / 3.0).epsilon(1e-9));
  }
}

TEST_CASE("torsion examples") {
  CHECK(torsion_defect(fubini_study_chart(2), point({0.2, cd(0.1, 0.3)})) < 1e-6);
  CHECK(torsion_defect(grassmannian_chart(2, 4).metric, Vector::Constant(4, cd(0.1, -0.2))) < 1e-6);
  CHECK(torsion_defect(constant_field(Matrix::Identity(2, 2), 2), point({0.1, 0.1})) == 0.0);

  // G = [[1, conj(z1)/4], [z1/4, 1]]. With entry (j, k) = b(e_k, conj e_j) the
  // (1,2) entry is g_{2 1bar} = conj(z1)/4, antiholomorphic in z1, and the
  // metric is Kahler. Read the other way round (entry (j, k) = g_{j kbar}),
  // the same matrix has d_1 g_{2 1bar} = 1/4 and torsion 1/4.
  const auto ours = [](const oracle::Vec& p) {
    oracle::Mat g(2, 2);
    g << 1.0, std::conj(p(0)) / 4.0, p(0) / 4.0, 1.0;
    return g;
  };
  const auto swapped = [&ours](const oracle::Vec& p) { return oracle::Mat(ours(p).transpose()); };
  const Vector z = point({cd(0.1, 0.2), cd(-0.2, 0.1)});
  CHECK(torsion_defect(fd_field(2, 2, ours, 0.5), z) < 1e-8);
  CHECK(torsion_defect(fd_field(2, 2, swapped, 0.5), z) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(torsion_defect_from_derivatives(fd_field(2, 2, swapped, 0.5), z) == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("pullback examples") {
  const ChartField prod = fd_field(2, 2, [](const oracle::Vec& p) { return oracle::Mat(product_fs(p)); });
  const Vector z = point({cd(0.2, 0.3)});
  const Vector w = point({cd(0.1, 0.2), cd(0.3, -0.1)});

  HolomorphicMap id{2, 2, [](const Vector& p) { return p; }, [](const Vector&) { return Matrix(Matrix::Identity(2, 2)); }};
  CHECK(pullback_consistency(id, prod, w) < 1e-8);

  HolomorphicMap slice{1, 2,
                       [](const Vector& p) {
                         Vector out = Vector::Zero(2);
                         out(0) = p(0);
                         return out;
                       },
                       [](const Vector&) {
                         Matrix j = Matrix::Zero(2, 1);
                         j(0, 0) = 1.0;
                         return j;
                       }};
  CHECK(pullback_consistency(slice, prod, z) <= 1e-5);

  HolomorphicMap constant{1, 2, [w](const Vector&) { return w; }, [](const Vector&) { return Matrix(Matrix::Zero(2, 1)); }};
  CHECK(pullback_consistency(constant, prod, z) < 1e-8);

  HolomorphicMap anti{1, 2,
                      [](const Vector& p) {
                        Vector out = Vector::Zero(2);
                        out(0) = std::conj(p(0));
                        return out;
                      },
                      [](const Vector&) { return Matrix(Matrix::Zero(2, 1)); }};
  CHECK_THROWS_AS(pullback_consistency(anti, prod, z), GeometryError);
}

TEST_CASE("analytic self-check and domain errors") {
  const ChartField fs = fubini_study_chart(1);
  CHECK(fs.mode() == DerivativeMode::Analytic);
  CHECK(fs.self_check_error() < 1e-6);
  const ChartField small = fs.with_domain(Polydisc::around_origin(1, 0.5));
  CHECK_THROWS_AS(small.value(point({0.9})), GeometryError);

  // A jet whose first derivative is wrong is caught on construction.
  const MatrixFunction value = [](const Vector& p) { return scalar(1.0 + std::norm(p(0))); };
  const ChartField::JetEvaluator wrong = [](const Vector& p) {
    GramJet j = GramJet::zero(1, 1);
    j.value = scalar(1.0 + std::norm(p(0)));
    j.d[0] = scalar(2.0 * std::conj(p(0)));
    j.ddbar[0][0] = scalar(1.0);
    return j;
  };
  CHECK_THROWS_AS(ChartField(1, 1, value, wrong, Polydisc::around_origin(1, 1.0)), GeometryError);
}

}  // TEST_SUITE

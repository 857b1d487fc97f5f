#include <doctest.h>

#include <cmath>

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

}  // namespace

TEST_SUITE("sequences") {

TEST_CASE("O(-1) in C^2: closed-form sub and quotient curvature") {
  const ExactSeqChart seq = o_minus_one_sequence();
  for (const cd z0 : {cd(0, 0), cd(0.3, 0.1), cd(-0.2, 0.4)}) {
    const Vector z = point({z0});
    const double s = 1.0 + std::norm(z0);
    // b_S = 1 + |z|^2 (R = -1/s); b_Q = 1/s in the frame q = (-z, 1) (R = 1/s^3).
    CHECK(std::abs(seq.sub_field().value(z)(0, 0) - s) < 1e-12);
    CHECK(std::abs(seq.quotient_field().value(z)(0, 0) - 1.0 / s) < 1e-12);
    const CodazziCheck c = codazzi_check(seq, z);
    CHECK(std::abs(c.sub_formula(0, 0, 0, 0) - (-1.0 / s)) < 1e-8);
    CHECK(std::abs(c.sub_direct(0, 0, 0, 0) - (-1.0 / s)) < 1e-8);
    CHECK(std::abs(c.quot_formula(0, 0, 0, 0) - 1.0 / (s * s * s)) < 1e-8);
    CHECK(std::abs(c.quot_direct(0, 0, 0, 0) - 1.0 / (s * s * s)) < 1e-4);
    CHECK(std::abs(codazzi_sub(seq, z, 0, 0, 0, 0) - c.sub_formula(0, 0, 0, 0)) < 1e-12);
    CHECK(std::abs(codazzi_quot(seq, z, 0, 0, 0, 0) - c.quot_formula(0, 0, 0, 0)) < 1e-12);
  }
}

TEST_CASE("O(-1) second fundamental form in closed form") {
  // sigma = q d_z j = (-z, 1)(0, 1)^T = 1 in these frames.
  const ExactSeqChart seq = o_minus_one_sequence();
  const Vector z = point({cd(0.3, 0.1)});
  const auto sf = second_fundamental_form(seq, z);
  CHECK(std::abs(sf.sigma[0](0, 0) - 1.0) < 1e-10);
  // sigma^dagger = b_S^-1 sigma^* b_Q = 1 / s^2.
  const double s = 1.0 + std::norm(z(0));
  CHECK(std::abs(sf.sigma_dagger[0](0, 0) - 1.0 / (s * s)) < 1e-10);
  CHECK(sigma_antiholomorphic_part(seq, z) < 1e-6);
  CHECK(sigma_linearity_residual(seq, z, 3) < 1e-6);
}

TEST_CASE("split sequences: sigma = 0, Demailly lines 0, flat Codazzi") {
  const ExactSeqChart seq = split_constant_sequence(2, 3, 1, 5);
  const Vector z = point({0.1, cd(0, 0.2)});
  for (const auto& s : second_fundamental_form(seq, z).sigma) CHECK(s.norm() < 1e-12);
  const auto rep = demailly_residuals(seq, z);
  CHECK(rep.max() < 1e-10);
  const CodazziCheck c = codazzi_check(seq, z);
  CHECK(c.sub_formula.norm() < 1e-10);
  CHECK(c.quot_formula.norm() < 1e-10);
  const auto blocks = splitting_curvature_blocks(seq, z);
  CHECK(blocks.max_off_diagonal < 1e-10);
}

TEST_CASE("Demailly table examples") {
  const ExactSeqChart o1 = o_minus_one_sequence();
  CHECK(demailly_residuals(o1, point({cd(0.3, 0.1)})).max() <= 1e-5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ExactSeqChart seq = random_sequence(seed, 2, 3, 1 + static_cast<Index>(seed % 2), true);
    CHECK(demailly_residuals(seq, point({0.1, cd(-0.1, 0.05)})).max() <= 1e-5);
  }
}

TEST_CASE("Codazzi-Griffiths on random and degenerate instances") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const ExactSeqChart seq = random_sequence(seed, 2, 4, 2, false);
    const CodazziCheck c = codazzi_check(seq, point({0.1, cd(0.05, 0.1)}));
    CHECK(c.sub_residual <= 1e-4);
    CHECK(c.quot_residual <= 1e-4);
  }
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const ExactSeqChart seq = random_degenerate_sequence(seed, 1, 4);
    const Vector z = point({cd(0.1, -0.2)});
    const CodazziCheck c = codazzi_check(seq, z);
    CHECK(c.sub_residual <= 1e-4);
    CHECK(c.quot_residual <= 1e-4);
    // sigma sends Ker b_S into Ker b_Q.
    CHECK(second_fundamental_form(seq, z).kernel_residual <= 1e-8);
  }
}

TEST_CASE("sub curvature against an oracle on b_S = j^* G j") {
  const ExactSeqChart seq = random_sequence(7, 2, 3, 2, false);
  const Vector z = point({0.1, 0.2});
  const oracle::Field bs = [&seq](const oracle::Vec& p) {
    const Matrix j = seq.j(p);
    return oracle::Mat(j.adjoint() * seq.ambient().value(p) * j);
  };
  const CurvatureTensor formula = codazzi_sub_tensor(seq, z);
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 2; ++b) {
      const Matrix expected = oracle::curvature_block(bs, z, a, b);
      CHECK((formula.block(a, b) - expected).norm() / (1.0 + expected.norm()) < 1e-6);
    }
}

TEST_CASE("splitting blocks") {
  const auto o1 = splitting_curvature_blocks(o_minus_one_sequence(), Vector::Zero(1));
  // The ambient C^2 is flat, so R_S = -1 and R_Q = +1 are cancelled exactly by
  // the sigma terms and every block vanishes.
  CHECK(o1.max_off_diagonal <= 1e-5);
  CHECK(std::abs(o1.at(0, 0).ss(0, 0)) < 1e-5);
  CHECK(std::abs(o1.at(0, 0).qq(0, 0)) < 1e-5);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto blocks = splitting_curvature_blocks(random_sequence(seed, 2, 3, 1, false), point({0.1, 0.1}));
    CHECK(blocks.reassembly_residual <= 1e-4);
  }
}

TEST_CASE("sum curvature examples") {
  // b2 = 0: R_h = R_b1 and q = 0.
  const ChartField g1 = random_analytic_field(1, 2, {{2, 0.4}}, 3);
  const ChartField zero = constant_field(Matrix::Zero(2, 2), 1);
  const auto r0 = sum_curvature(g1, zero, point({0.2}));
  CHECK(r0.residual <= 1e-6);
  CHECK(r0.q.norm() < 1e-12);
}

TEST_CASE("sum curvature: b1 = b2 = Fubini-Study gives sigma = 0 and H = 1") {
  const auto fs_line = [](const Vector& p) { return Matrix(oracle::fubini_study(p)); };
  const ChartField fs(1, 1, fs_line, Polydisc::around_origin(1, 5.0));
  const Vector z = point({cd(0.3, -0.2)});
  const auto r = sum_curvature(fs, fs, z);
  for (const auto& s : r.sigma) CHECK(s.norm() < 1e-10);
  CHECK(r.residual <= 1e-4);
  const Matrix g2 = 2.0 * fs.value(z);
  CHECK(hsc(r.formula, g2, Vector::Ones(1)) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("sum curvature: vertical plus horizontal Fubini-Study equals the product metric") {
  const auto vert = [](const Vector& p) {
    Matrix g = Matrix::Zero(2, 2);
    g(1, 1) = oracle::fubini_study(p.tail(1))(0, 0);
    return g;
  };
  const auto horiz = [](const Vector& p) {
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = oracle::fubini_study(p.head(1))(0, 0);
    return g;
  };
  const ChartField b1(2, 2, vert, Polydisc::around_origin(2, 5.0));
  const ChartField b2(2, 2, horiz, Polydisc::around_origin(2, 5.0));
  const Vector z = point({cd(0.2, 0.1), cd(-0.1, 0.3)});
  const auto r = sum_curvature(b1, b2, z);
  CHECK(r.residual <= 1e-4);
  const oracle::Field prod = [&](const oracle::Vec& p) { return oracle::Mat(vert(p) + horiz(p)); };
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 2; ++b) {
      const Matrix expected = oracle::curvature_block(prod, z, a, b);
      CHECK((r.formula.block(a, b) - expected).norm() < 1e-5);
    }
}

TEST_CASE("sum curvature on degenerate pairs and gauge invariance of the sigma term") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto pair = random_sum_pair(seed, 2, 4, true);
    const Vector z = point({0.1, cd(0, -0.15)});
    CHECK(sum_curvature(pair.first, pair.second, z).residual <= 1e-4);
    CHECK(sum_sigma_gauge_residual(pair.first, pair.second, z, seed) <= 1e-6);
  }
}

TEST_CASE("non-holomorphic inclusions are rejected") {
  HolomorphicMatrixField bad;
  bad.rows = 2;
  bad.cols = 1;
  bad.chart_dim = 1;
  bad.value = [](const Vector& p) {
    Matrix j(2, 1);
    j << 1.0, std::conj(p(0));
    return j;
  };
  bad.derivative = [](const Vector&) { return std::vector<Matrix>{Matrix::Zero(2, 1)}; };
  CHECK_THROWS_AS(ExactSeqChart(constant_field(Matrix::Identity(2, 2), 1), bad), GeometryError);
}

}  // TEST_SUITE

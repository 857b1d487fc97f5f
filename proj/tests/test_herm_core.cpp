#include <doctest.h>

#include <cmath>

#include "hermitia/herm_core.hpp"
#include "hermitia/properties.hpp"
#include "oracles.hpp"

using namespace hermitia;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<cd>> rows) {
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (const auto& v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

Vector vec(std::initializer_list<cd> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (const auto& x : v) out(i++) = x;
  return out;
}

/// Same subspace: each basis lies in the span of the other.
bool same_span(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) return false;
  if (a.cols() == 0) return true;
  const Subspaced sa(a.rows(), a), sb(b.rows(), b);
  for (Index c = 0; c < a.cols(); ++c)
    if (!sb.contains(a.col(c))) return false;
  for (Index c = 0; c < b.cols(); ++c)
    if (!sa.contains(b.col(c))) return false;
  return true;
}

}  // namespace

TEST_SUITE("herm_core") {

TEST_CASE("Gram convention: b(s, conj t) = t^* G s") {
  Rng rng(3);
  const Matrix g = random_form(rng, 3, 3, true);
  const HermitianFormd b(g);
  const Vector s = rng.vector(3), t = rng.vector(3);
  CHECK(std::abs(b(s, t) - oracle::form(g, s, t)) < 1e-12);
  CHECK(std::abs(b(s, t) - std::conj(b(t, s))) < 1e-12);
}

TEST_CASE("construction Hermitian-averages the Gram matrix") {
  const Matrix g = mat({{1, cd(0, 1)}, {0, 2}});
  const HermitianFormd b(g);
  CHECK((b.gram() - b.gram().adjoint()).norm() < 1e-12);
  CHECK(std::abs(b.gram()(0, 1) - cd(0, 0.5)) < 1e-15);
}

TEST_CASE("kernel examples") {
  CHECK(same_span(kernel(HermitianFormd(mat({{1, 0}, {0, 0}}))).basis(), mat({{0}, {1}})));
  CHECK(kernel(HermitianFormd::identity(3)).dim() == 0);
  const Matrix k = kernel(HermitianFormd(mat({{1, 1}, {1, 1}}))).basis();
  CHECK(same_span(k, mat({{1}, {-1}})));
  CHECK(std::abs(k.norm() - 1.0) < 1e-12);
}

TEST_CASE("purge examples") {
  const auto p = purge(HermitianFormd(mat({{1, 0}, {0, 0}})));
  CHECK(p.purged_form.dim() == 1);
  CHECK(std::abs(p.purged_form.gram()(0, 0) - 1.0) < 1e-12);

  const auto all = purge(HermitianFormd(mat({{1, 1}, {1, 1}})));
  REQUIRE(all.purged_form.dim() == 1);
  CHECK(std::abs(all.purged_form.gram()(0, 0) - 2.0) < 1e-12);
  // The quotient coordinate is along (1, 1)/sqrt(2) up to phase.
  CHECK(std::abs(std::abs(all.lift(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-12);

  Rng rng(5);
  const Matrix g = random_form(rng, 4, 4, false);
  const auto full = purge(HermitianFormd(g));
  CHECK(full.quotient_map.matrix.fullPivLu().rank() == 4);
  // Congruent to b: q^* b_hat q = b.
  CHECK((full.quotient_map.matrix.adjoint() * full.purged_form.gram() * full.quotient_map.matrix - g).norm() < 1e-10);
}

TEST_CASE("admits_adjoint examples") {
  const HermitianFormd bv(mat({{1, 0}, {0, 0}})), bw(mat({{1}}));
  CHECK(admits_adjoint(LinearMapd(mat({{1, 0}})), bv, bw));
  CHECK_FALSE(admits_adjoint(LinearMapd(mat({{0, 1}})), bv, bw));
  Rng rng(8);
  CHECK(admits_adjoint(LinearMapd(rng.matrix(3, 2)), HermitianFormd::identity(2), HermitianFormd(Matrix::Zero(3, 3))));
}

TEST_CASE("adjoint examples") {
  const HermitianFormd bv(mat({{1, 0}, {0, 0}})), bw(mat({{1}}));
  const Matrix fd = adjoint(LinearMapd(mat({{1, 0}})), bv, bw).matrix;
  CHECK((fd - mat({{1}, {0}})).norm() < 1e-12);

  Rng rng(9);
  const Matrix g = random_form(rng, 3, 3, false);
  const HermitianFormd b(g);
  CHECK((adjoint(LinearMapd(Matrix::Identity(3, 3)), b, b).matrix - Matrix::Identity(3, 3)).norm() < 1e-10);

  const Matrix f = rng.matrix(2, 3);
  CHECK((adjoint(LinearMapd(f), HermitianFormd::identity(3), HermitianFormd::identity(2)).matrix - f.adjoint()).norm() < 1e-12);

  CHECK_THROWS_AS(adjoint(LinearMapd(mat({{0, 1}})), bv, bw), GeometryError);
}

TEST_CASE("adjoint agrees with the oracle solution set") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Index dv = rng.integer(1, 5), dw = rng.integer(1, 5);
    const Matrix gv = random_form(rng, dv, rng.integer(0, static_cast<int>(dv)), seed % 3 == 0);
    const Matrix gw = random_form(rng, dw, rng.integer(0, static_cast<int>(dw)), seed % 3 == 0);
    const Matrix f = random_adjointable(rng, gv, gw);
    const auto sol = oracle::adjoint_solutions(gv, gw, f);
    CHECK(sol.residual < 1e-9);
    const Matrix fd = adjoint(LinearMapd(f), HermitianFormd(gv), HermitianFormd(gw)).matrix;
    // Same solution set: fd solves the system and differs from the oracle by a kernel map.
    CHECK((gv * fd - f.adjoint() * gw).norm() < 1e-9 * (1 + gw.norm() * f.norm()));
    CHECK((gv * (fd - sol.particular)).norm() < 1e-9 * (1 + gw.norm() * f.norm()));
    const auto dims = adjoint_freedom_dims(LinearMapd(f), HermitianFormd(gv), HermitianFormd(gw));
    REQUIRE(dims.torsor_dim.has_value());
    CHECK(*dims.torsor_dim == sol.freedom);
  }
}

TEST_CASE("adjoint_freedom_dims examples") {
  const auto nd = adjoint_freedom_dims(LinearMapd(Matrix::Identity(2, 2)), HermitianFormd::identity(2),
                                       HermitianFormd::identity(2));
  CHECK(nd.torsor_dim == 0);
  CHECK(nd.adjointable_codim == 0);
  const auto demo = adjoint_freedom_dims(LinearMapd(mat({{1, 0}})), HermitianFormd(mat({{1, 0}, {0, 0}})),
                                         HermitianFormd(mat({{1}})));
  CHECK(demo.torsor_dim == 1);
  CHECK(demo.adjointable_codim == 1);
  CHECK(demo.computed_codim == 1);
  const auto none = adjoint_freedom_dims(LinearMapd(mat({{0, 1}})), HermitianFormd(mat({{1, 0}, {0, 0}})),
                                         HermitianFormd(mat({{1}})));
  CHECK_FALSE(none.torsor_dim.has_value());
}

TEST_CASE("orthogonal_complement examples") {
  const HermitianFormd b(mat({{1, 0}, {0, 0}}));
  CHECK(same_span(orthogonal_complement(Subspaced(2, mat({{1}, {0}})), b).basis(), mat({{0}, {1}})));
  CHECK(orthogonal_complement(Subspaced(2, mat({{0}, {1}})), b).dim() == 2);

  Rng rng(12);
  const Matrix s = rng.matrix(4, 2);
  const Matrix perp = orthogonal_complement(Subspaced(4, s), HermitianFormd::identity(4)).basis();
  CHECK(perp.cols() == 2);
  CHECK((s.adjoint() * perp).norm() < 1e-12);
}

TEST_CASE("complement identities hold when S meets the kernel") {
  const HermitianFormd b(mat({{1, 0, 0}, {0, 0, 0}, {0, 0, 2}}));
  const Subspaced s(3, mat({{0, 1}, {1, 0}, {0, 1}}));
  const auto id = complement_identities(s, b);
  CHECK(id.sum_is_everything());
  CHECK(id.intersection_is_s_cap_kernel());
  CHECK(id.dim_s_cap_kernel == 1);
  CHECK(id.grassmann_formula());
  CHECK(id.kernel_in_perp);
  // S inside the kernel: the complement is everything.
  CHECK(orthogonal_complement(Subspaced(3, mat({{0}, {1}, {0}})), b).dim() == 3);
}

TEST_CASE("quotient_form examples") {
  const auto r = quotient_form(LinearMapd(mat({{1, -1}})), HermitianFormd(mat({{1, 0}, {0, 2}})));
  CHECK(std::abs(r.gram()(0, 0) - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(quotient_form(LinearMapd(mat({{1, 0}})), HermitianFormd::identity(2)).gram()(0, 0) - 1.0) < 1e-12);
  const auto deg = quotient_form_checked(LinearMapd(mat({{0, 1}})), HermitianFormd(mat({{1, 0}, {0, 0}})));
  CHECK(std::abs(deg.form.gram()(0, 0)) < 1e-12);
  CHECK(deg.lift_discrepancy < 1e-10);
  CHECK_THROWS_AS(quotient_form(LinearMapd(mat({{1, 1}, {2, 2}})), HermitianFormd::identity(2)), GeometryError);
}

TEST_CASE("hom_form examples") {
  const HermitianFormd bv(mat({{1, 0}, {0, 0}})), bw(mat({{1}}));
  const LinearMapd f(mat({{1, 0}}));
  CHECK(std::abs(hom_form(f, f, bv, bw) - 1.0) < 1e-12);
  CHECK(std::abs(hom_form(f, LinearMapd(Matrix::Zero(1, 2)), bv, bw)) < 1e-12);
  const LinearMapd id(Matrix::Identity(2, 2));
  CHECK(std::abs(hom_form(id, id, HermitianFormd::identity(2), HermitianFormd::identity(2)) - 2.0) < 1e-12);
}

TEST_CASE("sum_quotient_form examples") {
  CHECK(std::abs(sum_quotient_form(HermitianFormd(mat({{1}})), HermitianFormd(mat({{2}}))).gram()(0, 0) - 2.0 / 3.0) <
        1e-12);
  CHECK(sum_quotient_form(HermitianFormd(mat({{3}})), HermitianFormd(mat({{0}}))).gram().norm() < 1e-12);
  CHECK(sum_quotient_form(HermitianFormd(mat({{1, 0}, {0, 0}})), HermitianFormd(mat({{0, 0}, {0, 1}}))).gram().norm() <
        1e-12);
  CHECK_THROWS_AS(sum_quotient_form(HermitianFormd(mat({{1, 0}, {0, 0}})), HermitianFormd(mat({{1, 0}, {0, 0}}))),
                  GeometryError);
}

TEST_CASE("sum_quotient_form matches the scalar coefficient formula xy/(x+y)") {
  // Simultaneously diagonal pair: q_jj = x_j y_j / (x_j + y_j).
  const Eigen::Vector3d x(1.0, 0.5, 0.0), y(2.0, 0.0, 4.0);
  const HermitianFormd b1(Matrix(x.cast<cd>().asDiagonal())), b2(Matrix(y.cast<cd>().asDiagonal()));
  const Matrix q = sum_quotient_form(b1, b2).gram();
  for (Index j = 0; j < 3; ++j) CHECK(std::abs(q(j, j) - x(j) * y(j) / (x(j) + y(j))) < 1e-12);
}

TEST_CASE("limit_form examples") {
  const auto scalar = limit_form(HermitianFormd(mat({{1}})), HermitianFormd(mat({{2}})), std::vector<double>{0.0, 20.0});
  CHECK(std::abs(scalar.q_values[0].gram()(0, 0) - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(scalar.q_infinity.gram()(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(scalar.q_values[1].gram()(0, 0) - 1.0) < 1e-8);

  const auto zero = limit_form(HermitianFormd(mat({{1, 0}, {0, 2}})), HermitianFormd(Matrix::Zero(2, 2)),
                               std::vector<double>{1.0, 5.0});
  for (const auto& q : zero.q_values) CHECK(q.gram().norm() < 1e-12);
  CHECK(zero.q_infinity.gram().norm() < 1e-12);

  const auto diag = limit_form(HermitianFormd(mat({{1, 0}, {0, 3}})), HermitianFormd(mat({{2, 0}, {0, 0}})),
                               std::vector<double>{2.0});
  CHECK((diag.q_infinity.gram() - mat({{1, 0}, {0, 0}})).norm() < 1e-12);
  CHECK(diag.projection_residual < 1e-8);
}

TEST_CASE("limit_form errors decay like e^-lambda on random pairs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const Index n = 4;
    const HermitianFormd b1(random_form(rng, n, n, false)), b2(random_form(rng, n, 2, false));
    const std::vector<double> grid = {2, 4, 6, 8};
    const auto lf = limit_form(b1, b2, grid);
    CHECK(lf.projection_residual < 1e-8);
    std::vector<double> err;
    for (const auto& q : lf.q_values) err.push_back((q.gram() - lf.q_infinity.gram()).norm());
    // The e^-2lambda term still shows at lambda = 2; compare from lambda = 4 on.
    for (std::size_t i = 2; i < err.size(); ++i) {
      const double ratio = err[i] / err[i - 1];
      CHECK(std::abs(ratio / std::exp(-2.0) - 1.0) < 0.2);
    }
  }
}

TEST_CASE("equiv_mod_kernel examples") {
  CHECK(equiv_mod_kernel<double>(vec({1, 5}), vec({1, -3}), HermitianFormd(mat({{1, 0}, {0, 0}}))));
  CHECK_FALSE(equiv_mod_kernel<double>(vec({1, 0}), vec({0, 1}), HermitianFormd::identity(2)));
  CHECK(equiv_mod_kernel<double>(vec({2, 0}), vec({1, 1}), HermitianFormd(mat({{1, 1}, {1, 1}}))));
}

TEST_CASE("property runs over random forms") {
  const std::size_t n = 100;
  const auto a = adjoint_identity_property(n, 21);
  CHECK(a.worst < 1e-9);
  CHECK(a.failures == 0);
  const auto t = torsor_property(n, 22);
  CHECK(t.worst < 1e-10);
  CHECK(t.failures == 0);
  const auto d = double_adjoint_property(n, 23);
  CHECK(d.worst < 1e-9);
  CHECK(d.failures == 0);
  const auto c = complement_property(n, 24);
  CHECK(c.failures == 0);
  const auto q = quotient_lift_property(n, 25);
  CHECK(q.worst < 1e-10);
  CHECK(q.failures == 0);
  const auto k = kernel_containment_property(n, 26);
  CHECK(k.worst < 1e-10);
  const auto p = purge_property(n, 27);
  CHECK(p.worst < 1e-10);
  CHECK(p.failures == 0);
}

TEST_CASE("double adjoint differs from f by a map into Ker bW") {
  // f: C^2 -> C^2 with bV = identity and bW = diag(1, 0).
  const HermitianFormd bv = HermitianFormd::identity(2), bw(mat({{1, 0}, {0, 0}}));
  const Matrix f = mat({{1, 2}, {3, 4}});
  const LinearMapd fd = adjoint(LinearMapd(f), bv, bw);
  const Matrix fdd = adjoint(fd, bw, bv).matrix;
  const Matrix diff = fdd - f;
  CHECK(diff.row(0).norm() < 1e-12);  // only the Ker bW coordinate changes
  CHECK(diff.row(1).norm() > 1.0);
}

TEST_CASE("templated on the real type") {
  using F = HermitianForm<float>;
  CMatrix<float> g(2, 2);
  g << 2.0f, 0.0f, 0.0f, 0.0f;
  const F b(g, 1e-5f);
  CHECK(b.rank() == 1);
  CHECK(kernel(b).dim() == 1);
}

}  // TEST_SUITE

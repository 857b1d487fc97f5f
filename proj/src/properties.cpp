#include "hermitia/properties.hpp"

#include <algorithm>

namespace hermitia {

Matrix random_form(Rng& rng, Index dim, Index rank, bool signs) {
  const Matrix a = rng.matrix(rank, dim);
  Eigen::VectorXd d = Eigen::VectorXd::Ones(rank);
  if (signs)
    for (Index i = 0; i < rank; ++i) d(i) = rng.uniform() < 0.5 ? -1.0 : 1.0;
  return a.adjoint() * d.cast<cd>().asDiagonal() * a;
}

Matrix random_adjointable(Rng& rng, const Matrix& g_v, const Matrix& g_w) {
  const Matrix kv = HermitianFormd(g_v).spectrum().kernel;
  const Matrix kw = HermitianFormd(g_w).spectrum().kernel;
  Matrix f = rng.matrix(g_w.rows(), g_v.rows());
  if (kv.cols() == 0) return f;
  // Replace f on Ker bV by a random map into Ker bW.
  const Matrix pv = kv * kv.adjoint();
  f = f * (Matrix::Identity(g_v.rows(), g_v.rows()) - pv);
  if (kw.cols() > 0) f += kw * rng.matrix(kw.cols(), kv.cols()) * kv.adjoint();
  return f;
}

namespace {

struct Instance {
  Matrix g_v, g_w, f;
};

Instance draw(std::uint64_t seed, std::size_t i) {
  Rng rng(derive_seed(seed, i));
  const Index dv = rng.integer(1, 6), dw = rng.integer(1, 6);
  const Index rv = rng.integer(0, static_cast<int>(dv)), rw = rng.integer(0, static_cast<int>(dw));
  const bool signs = rng.uniform() < 0.3;
  Instance in;
  in.g_v = random_form(rng, dv, rv, signs);
  in.g_w = random_form(rng, dw, rw, signs);
  in.f = random_adjointable(rng, in.g_v, in.g_w);
  return in;
}

double scale(const Instance& in) { return 1.0 + in.g_v.norm() + in.g_w.norm() * in.f.norm(); }

}  // namespace

PropertyResult adjoint_identity_property(std::size_t instances, std::uint64_t seed) {
  PropertyResult out;
  for (std::size_t i = 0; i < instances; ++i) {
    const Instance in = draw(seed, i);
    const HermitianFormd bv(in.g_v), bw(in.g_w);
    const LinearMapd f(in.f);
    if (!admits_adjoint(f, bv, bw)) {
      ++out.failures;
      continue;
    }
    const Matrix fd = adjoint(f, bv, bw).matrix;
    // Entry (y, x): bV(f^dagger e_x, conj e_y) - bW(e_x, conj(f e_y)).
    const Matrix defect = in.g_v * fd - in.f.adjoint() * in.g_w;
    out.worst = std::max(out.worst, defect.cwiseAbs().maxCoeff() / scale(in));
  }
  return out;
}

PropertyResult torsor_property(std::size_t instances, std::uint64_t seed) {
  PropertyResult out;
  for (std::size_t i = 0; i < instances; ++i) {
    const Instance in = draw(seed, i);
    const HermitianFormd bv(in.g_v), bw(in.g_w);
    const LinearMapd f(in.f);
    const Matrix fd = adjoint(f, bv, bw).matrix;
    // A second solution of G_V X = f^* G_W from a different solver plus a
    // random kernel-valued term.
    Rng rng(derive_seed(seed ^ 0xabcdefULL, i));
    const Matrix rhs = in.f.adjoint() * in.g_w;
    Matrix other = in.g_v.completeOrthogonalDecomposition().solve(rhs);
    const Matrix kv = bv.spectrum().kernel;
    if (kv.cols() > 0) other += kv * rng.matrix(kv.cols(), in.g_w.rows());
    const double identity = (in.g_v * other - rhs).cwiseAbs().maxCoeff() / scale(in);
    // Difference must lie in Ker bV: G_V (other - fd) = 0.
    const double in_kernel = (in.g_v * (other - fd)).norm() / scale(in);
    out.worst = std::max({out.worst, identity, in_kernel});
    const auto dims = adjoint_freedom_dims(f, bv, bw);
    if (!dims.torsor_dim || *dims.torsor_dim != in.g_w.rows() * kv.cols() ||
        dims.adjointable_codim != dims.computed_codim)
      ++out.failures;
  }
  return out;
}

PropertyResult double_adjoint_property(std::size_t instances, std::uint64_t seed) {
  PropertyResult out;
  for (std::size_t i = 0; i < instances; ++i) {
    const Instance in = draw(seed, i);
    const HermitianFormd bv(in.g_v), bw(in.g_w);
    const LinearMapd fd = adjoint(LinearMapd(in.f), bv, bw);
    if (!admits_adjoint(fd, bw, bv)) {
      ++out.failures;
      continue;
    }
    const Matrix fdd = adjoint(fd, bw, bv).matrix;
    out.worst = std::max(out.worst, (in.g_w * (fdd - in.f)).norm() / scale(in));
  }
  return out;
}

PropertyResult complement_property(std::size_t instances, std::uint64_t seed) {
  PropertyResult out;
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, i));
    const Index n = rng.integer(1, 6);
    const Index rank = rng.integer(0, static_cast<int>(n));
    const HermitianFormd b(random_form(rng, n, rank, rng.uniform() < 0.3));
    const Index ds = rng.integer(0, static_cast<int>(n));
    Matrix basis = rng.matrix(n, ds);
    // Sometimes put kernel vectors inside S so that S cap Ker b is nonzero.
    const Matrix ker = b.spectrum().kernel;
    if (ds > 0 && ker.cols() > 0 && rng.uniform() < 0.5) basis.col(0) = ker.col(0);
    const Subspaced s(n, basis);
    const auto id = complement_identities(s, b);
    if (!id.sum_is_everything() || !id.intersection_is_s_cap_kernel() || !id.grassmann_formula() || !id.kernel_in_perp)
      ++out.failures;
    const Matrix perp = orthogonal_complement(s, b).basis();
    if (perp.cols() > 0 && ds > 0)
      out.worst = std::max(out.worst, (basis.adjoint() * b.gram() * perp).norm() / (1.0 + b.gram().norm() * basis.norm()));
  }
  return out;
}

PropertyResult quotient_lift_property(std::size_t instances, std::uint64_t seed) {
  PropertyResult out;
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, i));
    const Index n = rng.integer(2, 6);
    const Index dq = rng.integer(1, static_cast<int>(n));
    const HermitianFormd b(random_form(rng, n, rng.integer(0, static_cast<int>(n)), rng.uniform() < 0.3));
    Matrix q = rng.matrix(dq, n);
    // Make S = Ker q meet Ker b so the lift has real freedom.
    const Matrix ker = b.spectrum().kernel;
    if (ker.cols() > 0 && dq < n) {
      const Matrix k = ker.col(0);
      q -= (q * k) * k.adjoint();
    }
    try {
      const auto r = quotient_form_checked(LinearMapd(q), b);
      out.worst = std::max(out.worst, r.lift_discrepancy / (1.0 + b.gram().norm()));
    } catch (const GeometryError&) {
      ++out.failures;
    }
  }
  return out;
}

PropertyResult kernel_containment_property(std::size_t instances, std::uint64_t seed) {
  PropertyResult out;
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, i));
    const Index n = rng.integer(1, 6);
    const Index r1 = rng.integer(0, static_cast<int>(n));
    const Index r2 = n - r1 + rng.integer(0, static_cast<int>(r1));
    const HermitianFormd b1(random_form(rng, n, r1, false)), b2(random_form(rng, n, std::min(r2, n), false));
    const Matrix q = sum_quotient_form(b1, b2).gram();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(q, Eigen::EigenvaluesOnly);
    const double size = 1.0 + b1.gram().norm() + b2.gram().norm();
    out.worst = std::max(out.worst, std::max(0.0, -eig.eigenvalues()(0)) / size);
    for (const auto* b : {&b1, &b2}) {
      const Matrix k = b->spectrum().kernel;
      if (k.cols() > 0) out.worst = std::max(out.worst, (q * k).norm() / size);
    }
  }
  return out;
}

PropertyResult purge_property(std::size_t instances, std::uint64_t seed) {
  PropertyResult out;
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(derive_seed(seed, i));
    const Index n = rng.integer(1, 6);
    const HermitianFormd b(random_form(rng, n, rng.integer(0, static_cast<int>(n)), rng.uniform() < 0.3));
    const auto p = purge(b);
    const Matrix q = p.quotient_map.matrix;
    const Matrix back = q.adjoint() * p.purged_form.gram() * q;
    out.worst = std::max(out.worst, (back - b.gram()).cwiseAbs().maxCoeff() / (1.0 + b.gram().norm()));
    if (!p.purged_form.nondegenerate() && p.purged_form.dim() > 0) ++out.failures;
  }
  return out;
}

}  // namespace hermitia

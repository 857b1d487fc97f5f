#include "hermitia/sequences.hpp"

#include <algorithm>
#include <cmath>

namespace hermitia {

namespace {

/// |gram (lhs - rhs)| / (1 + |gram lhs| + |gram rhs|).
double contracted_residual(const Matrix& gram, const Matrix& lhs, const Matrix& rhs) {
  return (gram * (lhs - rhs)).norm() / (1.0 + (gram * lhs).norm() + (gram * rhs).norm());
}

std::vector<Matrix> sigma_from(const SequencePoint& p) {
  std::vector<Matrix> out;
  for (std::size_t a = 0; a < p.a_e.size(); ++a) out.push_back(p.q * (p.a_e[a] * p.j + p.dj[a]));
  return out;
}

std::vector<Matrix> sigma_dagger_from(const SequencePoint& p, const std::vector<Matrix>& sigma) {
  const HermitianFormd gs(p.g_s);
  const Matrix gs_pinv = gs.pseudo_inverse();
  std::vector<Matrix> out;
  for (const Matrix& s : sigma) out.push_back(gs_pinv * s.adjoint() * p.g_q);
  return out;
}

SequencePoint evaluate(const ExactSeqChart& seq, const Vector& z, bool quotient_connection) {
  SequencePoint p;
  p.z = z;
  const GramJet je = seq.ambient().jet(z);
  p.g_e = je.value;
  p.a_e = connection_from_jet(je, seq.ambient().rank_tol()).a;
  const GramJet js = seq.sub_field().jet(z);
  p.g_s = js.value;
  p.a_s = connection_from_jet(js, seq.sub_field().rank_tol()).a;
  p.g_q = seq.quotient_field().value(z);
  if (quotient_connection) p.a_q = chern_connection(seq.quotient_field(), z).a;
  p.j = seq.j(z);
  p.dj = seq.inclusion().derivative(z);
  p.q = seq.q(z);
  p.j_dagger = HermitianFormd(p.g_s).pseudo_inverse() * p.j.adjoint() * p.g_e;
  p.q_dagger = HermitianFormd(p.g_e).pseudo_inverse() * p.q.adjoint() * p.g_q;
  return p;
}

/// Quantities differentiated numerically by the identity checks.
struct Moving {
  Matrix j_dagger, q_dagger;
  std::vector<Matrix> sigma, sigma_dagger;
};

Moving moving_at(const ExactSeqChart& seq, const Vector& z) {
  const SequencePoint p = evaluate(seq, z, false);
  Moving m{p.j_dagger, p.q_dagger, sigma_from(p), {}};
  m.sigma_dagger = sigma_dagger_from(p, m.sigma);
  return m;
}

/// Values at z +- h e_a, z +- i h e_a for every a.
class Stencil {
 public:
  Stencil(const ExactSeqChart& seq, const Vector& z, double h) : h_(h) {
    for (Index a = 0; a < z.size(); ++a) {
      std::array<Moving, 4> vals;
      const std::array<cd, 4> shifts = {cd(h, 0), cd(-h, 0), cd(0, h), cd(0, -h)};
      for (std::size_t i = 0; i < 4; ++i) {
        Vector p = z;
        p(a) += shifts[i];
        vals[i] = moving_at(seq, p);
      }
      values_.push_back(std::move(vals));
    }
  }

  template <typename Get>
  Matrix d(Index a, Get get, bool conjugate) const {
    const auto& v = values_[static_cast<std::size_t>(a)];
    const Matrix dx = (get(v[0]) - get(v[1])) / (2 * h_);
    const Matrix dy = (get(v[2]) - get(v[3])) / (2 * h_);
    const cd i(0, 1);
    return conjugate ? Matrix(0.5 * (dx + i * dy)) : Matrix(0.5 * (dx - i * dy));
  }

 private:
  double h_;
  std::vector<std::array<Moving, 4>> values_;
};

}  // namespace

HolomorphicMatrixField HolomorphicMatrixField::affine(const Matrix& j0, const std::vector<Matrix>& j1) {
  HolomorphicMatrixField f;
  f.rows = j0.rows();
  f.cols = j0.cols();
  f.chart_dim = static_cast<Index>(j1.size());
  f.value = [j0, j1](const Vector& z) {
    Matrix out = j0;
    for (std::size_t c = 0; c < j1.size(); ++c) out += z(static_cast<Index>(c)) * j1[c];
    return out;
  };
  f.derivative = [j1](const Vector&) { return j1; };
  return f;
}

HolomorphicMatrixField HolomorphicMatrixField::constant(const Matrix& j0, Index chart_dim) {
  return affine(j0, std::vector<Matrix>(static_cast<std::size_t>(chart_dim), Matrix::Zero(j0.rows(), j0.cols())));
}

ExactSeqChart::ExactSeqChart(ChartField ambient, HolomorphicMatrixField inclusion, Vector center)
    : ambient_(std::move(ambient)), j_(std::move(inclusion)), sub_(constant_field(Matrix::Zero(0, 0), 1)),
      quot_(constant_field(Matrix::Zero(0, 0), 1)) {
  const Index m = ambient_.chart_dim();
  if (center.size() == 0) center = Vector::Zero(m);
  if (j_.rows != ambient_.bundle_rank() || j_.chart_dim != m || j_.cols < 1 || j_.cols >= j_.rows)
    throw GeometryError(ErrorKind::InvalidModel, "inclusion shape does not match the ambient bundle");
  const Matrix j0 = j_.value(center);
  if (detail::numerical_rank<double>(j0, 1e-10) != j_.cols)
    throw GeometryError(ErrorKind::InvalidModel, "inclusion is not injective at the chart center");
  complement_ = detail::null_space<double>(Matrix(j0.adjoint()), 1e-10);

  Rng rng(0xc0ffee);
  const double radius = std::isfinite(ambient_.domain().radius) ? 0.5 * ambient_.domain().radius : 0.5;
  for (int i = 0; i < 5; ++i) {
    const Vector z = rng.in_polydisc(center, radius);
    const auto dj = j_.derivative(z);
    for (Index a = 0; a < m; ++a) {
      holomorphy_defect_ = std::max(holomorphy_defect_, wirtinger(j_.value, z, a, true, 1e-4).norm());
      const double mismatch = (wirtinger(j_.value, z, a, false, 1e-4) - dj[static_cast<std::size_t>(a)]).norm();
      if (mismatch > 1e-6 * (1.0 + dj[static_cast<std::size_t>(a)].norm()))
        throw GeometryError(ErrorKind::InvalidModel, "inclusion derivative disagrees with the inclusion");
    }
  }
  if (holomorphy_defect_ > 1e-8) throw GeometryError(ErrorKind::NotHolomorphic, "inclusion is not holomorphic");

  const ChartField amb = ambient_;
  const HolomorphicMatrixField jf = j_;
  const Index k = j_.cols;
  MatrixFunction sub_value = [amb, jf](const Vector& z) {
    const Matrix j = jf.value(z);
    return Matrix(j.adjoint() * amb.value(z) * j);
  };
  ChartField::JetEvaluator sub_jet = [amb, jf, m, k](const Vector& z) {
    const GramJet e = amb.jet(z);
    const Matrix j = jf.value(z);
    const auto dj = jf.derivative(z);
    GramJet out = GramJet::zero(m, k);
    out.value = j.adjoint() * e.value * j;
    for (std::size_t a = 0; a < static_cast<std::size_t>(m); ++a) {
      out.d[a] = j.adjoint() * e.d[a] * j + j.adjoint() * e.value * dj[a];
      for (std::size_t b = 0; b < static_cast<std::size_t>(m); ++b)
        out.ddbar[a][b] = dj[b].adjoint() * e.d[a] * j + j.adjoint() * e.ddbar[a][b] * j +
                          dj[b].adjoint() * e.value * dj[a] + j.adjoint() * e.d[b].adjoint() * dj[a];
    }
    return out;
  };
  sub_ = ChartField(m, k, sub_value, sub_jet, ambient_.domain(), false, ambient_.steps());

  const Matrix comp = complement_;
  const auto q_of = [jf, comp](const Vector& z) {
    Matrix full(jf.rows, jf.rows);
    full << jf.value(z), comp;
    return Matrix(full.inverse().bottomRows(comp.cols()));
  };
  MatrixFunction quot_value = [amb, q_of](const Vector& z) {
    return quotient_form(LinearMapd(q_of(z)), amb.form(z)).gram();
  };
  // b_Q only has difference derivatives, and on degenerate ambients its third
  // derivatives are large: at the default steps the O(h^2) error alone reaches
  // the 1e-7 range test and the 1e-4 Codazzi comparison. Both steps shrink.
  StepSizes quot_steps = ambient_.steps();
  quot_steps.inner = std::min(quot_steps.inner, 1e-5);
  quot_steps.outer = std::min(quot_steps.outer, 2.5e-4);
  quot_ = ChartField(m, j_.rows - k, quot_value, ambient_.domain(), quot_steps);
}

Matrix ExactSeqChart::q(const Vector& z) const {
  Matrix full(rank(), rank());
  full << j(z), complement_;
  return full.inverse().bottomRows(quotient_rank());
}

std::vector<Matrix> ExactSeqChart::dq(const Vector& z) const {
  Matrix full(rank(), rank());
  full << j(z), complement_;
  const Matrix inv = full.inverse();
  const Matrix qz = inv.bottomRows(quotient_rank());
  std::vector<Matrix> out;
  for (const Matrix& dj : j_.derivative(z)) {
    Matrix dfull = Matrix::Zero(rank(), rank());
    dfull.leftCols(sub_rank()) = dj;
    out.push_back(-qz * dfull * inv);
  }
  return out;
}

SequencePoint sequence_point(const ExactSeqChart& seq, const Vector& z) {
  require_constant_rank(seq.ambient(), z);
  require_constant_rank(seq.sub_field(), z);
  return evaluate(seq, z, true);
}

SecondFundamentalFormAt second_fundamental_form(const ExactSeqChart& seq, const Vector& z) {
  require_constant_rank(seq.ambient(), z);
  require_constant_rank(seq.sub_field(), z);
  require_constant_rank(seq.quotient_field(), z);
  const SequencePoint p = evaluate(seq, z, false);
  SecondFundamentalFormAt out;
  out.z = z;
  out.sigma = sigma_from(p);
  out.sigma_dagger = sigma_dagger_from(p, out.sigma);
  const Matrix ks = HermitianFormd(p.g_s).spectrum().kernel;
  if (ks.cols() > 0)
    for (const Matrix& s : out.sigma)
      out.kernel_residual = std::max(out.kernel_residual, (p.g_q * s * ks).norm() / (1.0 + p.g_q.norm() * s.norm()));
  return out;
}

double sigma_linearity_residual(const ExactSeqChart& seq, const Vector& z, std::uint64_t seed) {
  Rng rng(seed);
  const Index m = seq.chart_dim();
  const Vector lin = rng.vector(m), anti = rng.vector(m);
  const cd c0 = rng.complex_normal();
  const double quad = rng.normal();
  const auto f = [=](const Vector& p) -> cd {
    return cd(c0 + lin.dot(p.conjugate()) + anti.dot(p) + quad * p.squaredNorm());
  };
  const Vector s = rng.vector(seq.sub_rank());
  const SequencePoint p = sequence_point(seq, z);
  const auto sigma = sigma_from(p);

  const MatrixFunction js = [&](const Vector& w) { return Matrix(seq.j(w) * (f(w) * s)); };
  const MatrixFunction fs = [&](const Vector& w) { return Matrix(f(w) * s); };
  double worst = 0;
  for (Index a = 0; a < m; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const Matrix de = wirtinger(js, z, a, false, 1e-5) + p.a_e[ua] * (p.j * (f(z) * s));
    const Matrix ds = wirtinger(fs, z, a, false, 1e-5) + p.a_s[ua] * (f(z) * s);
    const Matrix lhs = p.q * (de - p.j * ds);
    const Matrix rhs = f(z) * sigma[ua] * s;
    worst = std::max(worst, contracted_residual(p.g_q, lhs, rhs));
  }
  return worst;
}

double sigma_antiholomorphic_part(const ExactSeqChart& seq, const Vector& z) {
  const Matrix q = seq.q(z);
  double worst = 0;
  for (Index b = 0; b < seq.chart_dim(); ++b)
    worst = std::max(worst, (q * wirtinger(seq.inclusion().value, z, b, true, 1e-4)).norm());
  return worst;
}

double DemaillyReport::max() const { return *std::max_element(residuals.begin(), residuals.end()); }

DemaillyReport demailly_residuals(const ExactSeqChart& seq, const Vector& z, double step) {
  const SequencePoint p = sequence_point(seq, z);
  require_constant_rank(seq.quotient_field(), z);
  const auto sigma = sigma_from(p);
  const auto sigma_dagger = sigma_dagger_from(p, sigma);
  const auto dq = seq.dq(z);
  const Stencil st(seq, z, step);
  const Index m = seq.chart_dim();

  DemaillyReport out;
  auto& r = out.residuals;
  for (Index a = 0; a < m; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const Matrix dj = p.a_e[ua] * p.j + p.dj[ua] - p.j * p.a_s[ua];
    r[0] = std::max(r[0], contracted_residual(p.g_e, dj, p.q_dagger * sigma[ua]));

    const Matrix dqa = p.a_q[ua] * p.q + dq[ua] - p.q * p.a_e[ua];
    r[1] = std::max(r[1], contracted_residual(p.g_q, dqa, -sigma[ua] * p.j_dagger));

    const Matrix djd = p.a_s[ua] * p.j_dagger + st.d(a, [](const Moving& v) { return v.j_dagger; }, false) -
                       p.j_dagger * p.a_e[ua];
    r[2] = std::max(r[2], contracted_residual(p.g_s, djd, Matrix::Zero(djd.rows(), djd.cols())));
    const Matrix dbar_jd = st.d(a, [](const Moving& v) { return v.j_dagger; }, true);
    r[2] = std::max(r[2], contracted_residual(p.g_s, dbar_jd, sigma_dagger[ua] * p.q));

    const Matrix dqd = p.a_e[ua] * p.q_dagger + st.d(a, [](const Moving& v) { return v.q_dagger; }, false) -
                       p.q_dagger * p.a_q[ua];
    r[3] = std::max(r[3], contracted_residual(p.g_e, dqd, Matrix::Zero(dqd.rows(), dqd.cols())));
    const Matrix dbar_qd = st.d(a, [](const Moving& v) { return v.q_dagger; }, true);
    r[3] = std::max(r[3], contracted_residual(p.g_e, dbar_qd, -p.j * sigma_dagger[ua]));

    for (Index c = 0; c < m; ++c) {
      const auto uc = static_cast<std::size_t>(c);
      const auto dsig = [&](Index dir, std::size_t idx) {
        return Matrix(p.a_q[static_cast<std::size_t>(dir)] * sigma[idx] +
                      st.d(dir, [idx](const Moving& v) { return v.sigma[idx]; }, false) -
                      sigma[idx] * p.a_s[static_cast<std::size_t>(dir)]);
      };
      r[4] = std::max(r[4], contracted_residual(p.g_q, dsig(a, uc), dsig(c, ua)));
      const Matrix db = st.d(a, [uc](const Moving& v) { return v.sigma_dagger[uc]; }, true);
      const Matrix dd = st.d(c, [ua](const Moving& v) { return v.sigma_dagger[ua]; }, true);
      r[4] = std::max(r[4], contracted_residual(p.g_s, db, dd));
    }
  }
  return out;
}

namespace {

struct CodazziParts {
  SequencePoint p;
  CurvatureTensor ambient;
  std::vector<Matrix> sigma, sigma_dagger;
};

CodazziParts codazzi_parts(const ExactSeqChart& seq, const Vector& z) {
  CodazziParts c;
  c.p = sequence_point(seq, z);
  c.ambient = curvature_tensor(seq.ambient(), z).r;
  c.sigma = sigma_from(c.p);
  c.sigma_dagger = sigma_dagger_from(c.p, c.sigma);
  return c;
}

CurvatureTensor sub_formula(const CodazziParts& c) {
  const Index m = c.ambient.chart_dim();
  CurvatureTensor out(m, c.p.j.cols());
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b)
      out.block(a, b) = c.p.j.adjoint() * c.ambient.block(a, b) * c.p.j -
                        c.sigma[static_cast<std::size_t>(b)].adjoint() * c.p.g_q * c.sigma[static_cast<std::size_t>(a)];
  return out;
}

CurvatureTensor quot_formula(const CodazziParts& c) {
  const Index m = c.ambient.chart_dim();
  CurvatureTensor out(m, c.p.q.rows());
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b)
      out.block(a, b) = c.p.q_dagger.adjoint() * c.ambient.block(a, b) * c.p.q_dagger +
                        c.sigma_dagger[static_cast<std::size_t>(a)].adjoint() * c.p.g_s *
                            c.sigma_dagger[static_cast<std::size_t>(b)];
  return out;
}

}  // namespace

CurvatureTensor codazzi_sub_tensor(const ExactSeqChart& seq, const Vector& z) {
  return sub_formula(codazzi_parts(seq, z));
}

CurvatureTensor codazzi_quot_tensor(const ExactSeqChart& seq, const Vector& z) {
  return quot_formula(codazzi_parts(seq, z));
}

cd codazzi_sub(const ExactSeqChart& seq, const Vector& z, Index alpha, Index beta, Index s, Index t) {
  return codazzi_sub_tensor(seq, z)(alpha, beta, s, t);
}

cd codazzi_quot(const ExactSeqChart& seq, const Vector& z, Index alpha, Index beta, Index s, Index t) {
  return codazzi_quot_tensor(seq, z)(alpha, beta, s, t);
}

CodazziCheck codazzi_check(const ExactSeqChart& seq, const Vector& z) {
  const CodazziParts parts = codazzi_parts(seq, z);
  CodazziCheck out;
  out.sub_formula = sub_formula(parts);
  out.quot_formula = quot_formula(parts);
  out.sub_direct = curvature_tensor(seq.sub_field(), z).r;
  out.quot_direct = curvature_tensor(seq.quotient_field(), z).r;
  out.sub_residual = relative_difference(out.sub_formula, out.sub_direct);
  out.quot_residual = relative_difference(out.quot_formula, out.quot_direct);
  return out;
}

SplittingBlocks splitting_curvature_blocks(const ExactSeqChart& seq, const Vector& z, double step) {
  const SequencePoint p = sequence_point(seq, z);
  const CurvatureTensor re = curvature_tensor(seq.ambient(), z).r;
  const CurvatureTensor rs = curvature_tensor(seq.sub_field(), z).r;
  const CurvatureTensor rq = curvature_tensor(seq.quotient_field(), z).r;
  const Matrix gs_pinv = HermitianFormd(p.g_s).pseudo_inverse();
  const Matrix gq_pinv = HermitianFormd(p.g_q).pseudo_inverse();
  const auto sigma = sigma_from(p);
  const auto sigma_dagger = sigma_dagger_from(p, sigma);
  const Stencil st(seq, z, step);
  const Index m = seq.chart_dim();

  SplittingBlocks out;
  out.chart_dim = m;
  double worst = 0;
  for (Index a = 0; a < m; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    for (Index b = 0; b < m; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      SplittingBlocks::Entry e;
      e.ss = gs_pinv * rs.block(a, b) + sigma_dagger[ub] * sigma[ua];
      e.sq = -(p.a_s[ua] * sigma_dagger[ub] + st.d(a, [ub](const Moving& v) { return v.sigma_dagger[ub]; }, false) -
               sigma_dagger[ub] * p.a_q[ua]);
      e.qs = -st.d(b, [ua](const Moving& v) { return v.sigma[ua]; }, true);
      e.qq = gq_pinv * rq.block(a, b) - sigma[ua] * sigma_dagger[ub];
      const Matrix theta = p.j * e.ss * p.j_dagger + p.j * e.sq * p.q + p.q_dagger * e.qs * p.j_dagger +
                           p.q_dagger * e.qq * p.q;
      worst = std::max(worst, (p.g_e * theta - re.block(a, b)).norm() / (1.0 + re.block(a, b).norm()));
      out.max_off_diagonal = std::max({out.max_off_diagonal, (p.g_s * e.sq).norm(), (p.g_q * e.qs).norm()});
      out.blocks.push_back(std::move(e));
    }
  }
  out.reassembly_residual = worst;
  return out;
}

SumCurvatureResult sum_curvature(const ChartField& b1, const ChartField& b2, const Vector& z) {
  const Matrix g1 = b1.value(z), g2 = b2.value(z);
  SumCurvatureResult out;
  out.q = sum_quotient_form(HermitianFormd(g1, b1.rank_tol()), HermitianFormd(g2, b2.rank_tol())).gram();
  const CurvatureTensor r1 = curvature_tensor(b1, z).r;
  const CurvatureTensor r2 = curvature_tensor(b2, z).r;
  const auto a1 = chern_connection(b1, z).a;
  const auto a2 = chern_connection(b2, z).a;
  const Index m = b1.chart_dim();
  for (Index a = 0; a < m; ++a) out.sigma.push_back(a1[static_cast<std::size_t>(a)] - a2[static_cast<std::size_t>(a)]);
  out.formula = r1 + r2;
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b)
      out.formula.block(a, b) -= out.sigma[static_cast<std::size_t>(b)].adjoint() * out.q * out.sigma[static_cast<std::size_t>(a)];
  out.direct = curvature_tensor(linear_combination(b1, 1.0, b2, 1.0), z).r;
  out.residual = relative_difference(out.formula, out.direct);
  return out;
}

double sum_sigma_gauge_residual(const ChartField& b1, const ChartField& b2, const Vector& z, std::uint64_t seed) {
  const SumCurvatureResult base = sum_curvature(b1, b2, z);
  const auto k1 = random_kernel_perturbation(b1, seed)(z);
  const auto k2 = random_kernel_perturbation(b2, derive_seed(seed, 1))(z);
  double worst = 0, size = 0;
  const Index m = b1.chart_dim();
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) {
      const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
      const Matrix t0 = base.sigma[ub].adjoint() * base.q * base.sigma[ua];
      const Matrix sa = base.sigma[ua] + k1[ua] - k2[ua];
      const Matrix sb = base.sigma[ub] + k1[ub] - k2[ub];
      worst = std::max(worst, (sb.adjoint() * base.q * sa - t0).norm());
      size = std::max(size, t0.norm());
    }
  return worst / (1.0 + size);
}

ExactSeqChart o_minus_one_sequence() {
  Matrix j0(2, 1), j1(2, 1);
  j0 << 1.0, 0.0;
  j1 << 0.0, 1.0;
  return ExactSeqChart(constant_field(Matrix::Identity(2, 2), 1), HolomorphicMatrixField::affine(j0, {j1}));
}

ExactSeqChart split_constant_sequence(Index chart_dim, Index rank, Index sub_rank, std::uint64_t seed) {
  Rng rng(seed);
  const Matrix a = rng.matrix(sub_rank, sub_rank);
  const Matrix b = rng.matrix(rank - sub_rank, rank - sub_rank);
  Matrix g = Matrix::Zero(rank, rank);
  g.topLeftCorner(sub_rank, sub_rank) = a.adjoint() * a + Matrix::Identity(sub_rank, sub_rank);
  g.bottomRightCorner(rank - sub_rank, rank - sub_rank) = b.adjoint() * b + Matrix::Identity(rank - sub_rank, rank - sub_rank);
  Matrix j = Matrix::Zero(rank, sub_rank);
  j.topRows(sub_rank) = Matrix::Identity(sub_rank, sub_rank);
  return ExactSeqChart(constant_field(g, chart_dim), HolomorphicMatrixField::constant(j, chart_dim));
}

ChartField analytic_field_from_factors(const std::vector<std::pair<Matrix, std::vector<Matrix>>>& factors,
                                       const std::vector<double>& curvatures, const std::vector<Vector>& linear,
                                       double radius) {
  if (factors.empty()) throw GeometryError(ErrorKind::InvalidModel, "need at least one factor");
  const Index r = factors.front().first.cols();
  const Index m = static_cast<Index>(factors.front().second.size());
  // psi = c |z|^2 + Re(a . z), d_alpha psi = c conj(z_alpha) + a_alpha / 2
  const auto psi = [=](std::size_t i, const Vector& z) {
    return curvatures[i] * z.squaredNorm() + std::real(cd(linear[i].transpose() * z));
  };
  const auto dpsi = [=](std::size_t i, const Vector& z) {
    Vector d(m);
    for (Index a = 0; a < m; ++a) d(a) = curvatures[i] * std::conj(z(a)) + 0.5 * linear[i](a);
    return d;
  };
  const auto mat = [=](std::size_t i, const Vector& z) {
    Matrix out = factors[i].first;
    for (Index c = 0; c < m; ++c) out += z(c) * factors[i].second[static_cast<std::size_t>(c)];
    return out;
  };
  MatrixFunction value = [=](const Vector& z) {
    Matrix g = Matrix::Zero(r, r);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const Matrix mz = mat(i, z);
      g += std::exp(psi(i, z)) * mz.adjoint() * mz;
    }
    return g;
  };
  ChartField::JetEvaluator jet = [=](const Vector& z) {
    GramJet out = GramJet::zero(m, r);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const Matrix mz = mat(i, z);
      const Matrix mm = mz.adjoint() * mz;
      const double phi = std::exp(psi(i, z));
      const Vector dp = dpsi(i, z);
      const auto& dm = factors[i].second;
      out.value += phi * mm;
      for (Index a = 0; a < m; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        const cd dphi_a = phi * dp(a);
        out.d[ua] += dphi_a * mm + phi * mz.adjoint() * dm[ua];
        for (Index b = 0; b < m; ++b) {
          const auto ub = static_cast<std::size_t>(b);
          const cd dbar_phi_b = phi * std::conj(dp(b));
          const cd ddbar_phi = phi * ((a == b ? curvatures[i] : 0.0) + dp(a) * std::conj(dp(b)));
          out.ddbar[ua][ub] += ddbar_phi * mm + dphi_a * dm[ub].adjoint() * mz + dbar_phi_b * mz.adjoint() * dm[ua] +
                               phi * dm[ub].adjoint() * dm[ua];
        }
      }
    }
    return out;
  };
  return ChartField(m, r, value, jet, Polydisc::around_origin(m, radius));
}

ChartField random_analytic_field(Index chart_dim, Index rank, const std::vector<RandomFieldTerm>& terms,
                                 std::uint64_t seed, double radius) {
  Rng rng(seed);
  std::vector<std::pair<Matrix, std::vector<Matrix>>> factors;
  std::vector<double> curv;
  std::vector<Vector> lin;
  for (const auto& t : terms) {
    Matrix m0 = rng.matrix(t.rows, rank);
    std::vector<Matrix> m1;
    for (Index c = 0; c < chart_dim; ++c) m1.push_back(0.5 * rng.matrix(t.rows, rank));
    factors.emplace_back(std::move(m0), std::move(m1));
    curv.push_back(t.curvature);
    lin.push_back(0.5 * rng.vector(chart_dim));
  }
  return analytic_field_from_factors(factors, curv, lin, radius);
}

ExactSeqChart random_sequence(std::uint64_t seed, Index chart_dim, Index rank, Index sub_rank, bool constant_j) {
  Rng rng(seed);
  const double c1 = rng.uniform(-0.5, 1.0), c2 = rng.uniform(-0.5, 1.0);
  ChartField g = random_analytic_field(chart_dim, rank, {{rank, c1}, {2, c2}}, derive_seed(seed, 1));
  const Matrix j0 = rng.matrix(rank, sub_rank);
  std::vector<Matrix> j1;
  for (Index c = 0; c < chart_dim; ++c)
    j1.push_back(constant_j ? Matrix(Matrix::Zero(rank, sub_rank)) : Matrix(0.3 * rng.matrix(rank, sub_rank)));
  return ExactSeqChart(g, HolomorphicMatrixField::affine(j0, j1));
}

ExactSeqChart random_degenerate_sequence(std::uint64_t seed, Index chart_dim, Index rank) {
  Rng rng(seed);
  const Index m = chart_dim;
  const Index r = rank;
  const Vector u0 = rng.vector(r);
  std::vector<Vector> u;
  for (Index c = 0; c < m; ++c) u.push_back(0.3 * rng.vector(r));

  // Rows rho = (rho_0, rho_1, ..., rho_m) with (rho_0 + sum z_c rho_c)(u0 + sum z_c u_c) = 0.
  std::vector<Eigen::RowVectorXcd> cons;
  const auto row = [&]() { return Eigen::RowVectorXcd::Zero(r * (m + 1)).eval(); };
  auto c0 = row();
  c0.segment(0, r) = u0.transpose();
  cons.push_back(c0);
  for (Index c = 0; c < m; ++c) {
    auto cr = row();
    cr.segment(0, r) = u[static_cast<std::size_t>(c)].transpose();
    cr.segment((c + 1) * r, r) = u0.transpose();
    cons.push_back(cr);
    for (Index d = c; d < m; ++d) {
      auto cd2 = row();
      cd2.segment((c + 1) * r, r) += u[static_cast<std::size_t>(d)].transpose();
      cd2.segment((d + 1) * r, r) += u[static_cast<std::size_t>(c)].transpose();
      cons.push_back(cd2);
    }
  }
  Matrix system(static_cast<Index>(cons.size()), r * (m + 1));
  for (std::size_t i = 0; i < cons.size(); ++i) system.row(static_cast<Index>(i)) = cons[i];
  const Matrix null = detail::null_space<double>(system, 1e-12);

  const Index p = r - 2;
  Matrix m0(p, r);
  std::vector<Matrix> m1(static_cast<std::size_t>(m), Matrix(p, r));
  for (Index i = 0; i < p; ++i) {
    const Vector x = null * rng.vector(null.cols());
    m0.row(i) = x.segment(0, r).transpose();
    for (Index c = 0; c < m; ++c) m1[static_cast<std::size_t>(c)].row(i) = x.segment((c + 1) * r, r).transpose();
  }
  const double curv = rng.uniform(-0.5, 1.0);
  ChartField g = analytic_field_from_factors({{m0, m1}}, {curv}, {0.5 * rng.vector(m)}, 0.6);

  Matrix j0(r, 2);
  j0.col(0) = u0;
  j0.col(1) = rng.vector(r);
  std::vector<Matrix> j1;
  for (Index c = 0; c < m; ++c) {
    Matrix jc(r, 2);
    jc.col(0) = u[static_cast<std::size_t>(c)];
    jc.col(1) = 0.3 * rng.vector(r);
    j1.push_back(jc);
  }
  return ExactSeqChart(g, HolomorphicMatrixField::affine(j0, j1));
}

std::pair<ChartField, ChartField> random_sum_pair(std::uint64_t seed, Index chart_dim, Index rank, bool degenerate) {
  Rng rng(seed);
  const double c1 = rng.uniform(-0.5, 1.0), c2 = rng.uniform(-0.5, 1.0);
  if (degenerate) {
    if (rank < 4) throw GeometryError(ErrorKind::InvalidModel, "degenerate summands need rank >= 4");
    const Index p1 = rank / 2, p2 = rank - rank / 2;
    return {random_analytic_field(chart_dim, rank, {{p1, c1}}, derive_seed(seed, 1)),
            random_analytic_field(chart_dim, rank, {{p2, c2}}, derive_seed(seed, 2))};
  }
  return {random_analytic_field(chart_dim, rank, {{rank, c1}}, derive_seed(seed, 1)),
          random_analytic_field(chart_dim, rank, {{rank, c2}}, derive_seed(seed, 2))};
}

}  // namespace hermitia

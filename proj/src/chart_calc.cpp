#include "hermitia/chart_calc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hermitia {

GramJet GramJet::zero(Index chart_dim, Index rank) {
  GramJet j;
  j.value = Matrix::Zero(rank, rank);
  j.d.assign(static_cast<std::size_t>(chart_dim), Matrix::Zero(rank, rank));
  j.ddbar.assign(static_cast<std::size_t>(chart_dim), j.d);
  return j;
}

GramJet combine(const GramJet& a, double ca, const GramJet& b, double cb) {
  GramJet out;
  out.value = ca * a.value + cb * b.value;
  out.d.resize(a.d.size());
  out.ddbar.resize(a.d.size());
  for (std::size_t i = 0; i < a.d.size(); ++i) {
    out.d[i] = ca * a.d[i] + cb * b.d[i];
    out.ddbar[i].resize(a.d.size());
    for (std::size_t j = 0; j < a.d.size(); ++j) out.ddbar[i][j] = ca * a.ddbar[i][j] + cb * b.ddbar[i][j];
  }
  return out;
}

Matrix wirtinger(const MatrixFunction& f, const Vector& z, Index alpha, bool conjugate, double step) {
  Vector zp = z, zm = z;
  zp(alpha) += step;
  zm(alpha) -= step;
  const Matrix dx = (f(zp) - f(zm)) / (2.0 * step);
  zp = z;
  zm = z;
  zp(alpha) += cd(0, step);
  zm(alpha) -= cd(0, step);
  const Matrix dy = (f(zp) - f(zm)) / (2.0 * step);
  const cd i(0, 1);
  return conjugate ? Matrix(0.5 * (dx + i * dy)) : Matrix(0.5 * (dx - i * dy));
}

ChartField::ChartField(Index chart_dim, Index bundle_rank, MatrixFunction value, Polydisc domain,
                       StepSizes steps)
    : chart_dim_(chart_dim), bundle_rank_(bundle_rank), value_(std::move(value)),
      domain_(std::move(domain)), steps_(steps) {
  if (domain_.center.size() != chart_dim_)
    throw GeometryError(ErrorKind::InvalidModel, "domain center has wrong dimension");
}

ChartField::ChartField(Index chart_dim, Index bundle_rank, MatrixFunction value, JetEvaluator jet,
                       Polydisc domain, bool self_check, StepSizes steps)
    : ChartField(chart_dim, bundle_rank, std::move(value), std::move(domain), steps) {
  jet_ = std::move(jet);
  if (!self_check) return;
  const double radius = std::isfinite(domain_.radius) ? 0.5 * domain_.radius : 0.5;
  Rng rng(0x5e1fc0de);
  for (int i = 0; i < 10; ++i) {
    const Vector z = rng.in_polydisc(domain_.center, radius);
    const GramJet an = jet_(z);
    for (Index a = 0; a < chart_dim_; ++a) {
      const Matrix fd = wirtinger(value_, z, a, false, steps_.inner);
      const double err = (an.d[static_cast<std::size_t>(a)] - fd).norm() / (1.0 + fd.norm());
      self_check_error_ = std::max(self_check_error_, err);
    }
  }
  if (self_check_error_ > 1e-6) {
    std::ostringstream msg;
    msg << "analytic derivatives disagree with finite differences (" << self_check_error_ << ")";
    throw GeometryError(ErrorKind::InvalidModel, msg.str());
  }
}

Matrix ChartField::value(const Vector& z) const {
  if (!domain_.contains(z)) throw GeometryError(ErrorKind::OutOfDomain, "point outside the chart polydisc");
  return detail::hermitian_part<double>(value_(z));
}

GramJet ChartField::finite_difference_jet(const Vector& z) const {
  GramJet out;
  out.value = value(z);
  const auto f = [this](const Vector& p) { return value(p); };
  out.d.resize(static_cast<std::size_t>(chart_dim_));
  out.ddbar.resize(static_cast<std::size_t>(chart_dim_));
  for (Index a = 0; a < chart_dim_; ++a) {
    out.d[static_cast<std::size_t>(a)] = wirtinger(f, z, a, false, steps_.inner);
    const auto da = [&, a](const Vector& p) { return wirtinger(f, p, a, false, steps_.inner); };
    for (Index b = 0; b < chart_dim_; ++b)
      out.ddbar[static_cast<std::size_t>(a)].push_back(wirtinger(da, z, b, true, steps_.outer));
  }
  return out;
}

GramJet ChartField::jet(const Vector& z) const {
  if (!jet_) return finite_difference_jet(z);
  if (!domain_.contains(z)) throw GeometryError(ErrorKind::OutOfDomain, "point outside the chart polydisc");
  GramJet out = jet_(z);
  out.value = detail::hermitian_part<double>(out.value);
  return out;
}

ChartField ChartField::with_finite_differences() const {
  return ChartField(chart_dim_, bundle_rank_, value_, domain_, steps_);
}

ChartField ChartField::with_steps(StepSizes steps) const {
  ChartField out = *this;
  out.steps_ = steps;
  return out;
}

ChartField ChartField::with_domain(Polydisc domain) const {
  ChartField out = *this;
  out.domain_ = std::move(domain);
  return out;
}

ChartField linear_combination(const ChartField& a, double ca, const ChartField& b, double cb) {
  if (a.chart_dim() != b.chart_dim() || a.bundle_rank() != b.bundle_rank())
    throw GeometryError(ErrorKind::InvalidModel, "fields live on different charts or bundles");
  MatrixFunction value = [a, b, ca, cb](const Vector& z) {
    return Matrix(ca * a.value(z) + cb * b.value(z));
  };
  Polydisc domain = a.domain().radius <= b.domain().radius ? a.domain() : b.domain();
  if (a.mode() == DerivativeMode::Analytic && b.mode() == DerivativeMode::Analytic) {
    ChartField::JetEvaluator jet = [a, b, ca, cb](const Vector& z) {
      return combine(a.jet(z), ca, b.jet(z), cb);
    };
    return ChartField(a.chart_dim(), a.bundle_rank(), value, jet, domain, false, a.steps());
  }
  return ChartField(a.chart_dim(), a.bundle_rank(), value, domain, a.steps());
}

ChartField constant_field(const Matrix& gram, Index chart_dim) {
  const Index r = gram.rows();
  return ChartField(
      chart_dim, r, [gram](const Vector&) { return gram; },
      [gram, chart_dim, r](const Vector&) {
        GramJet j = GramJet::zero(chart_dim, r);
        j.value = gram;
        return j;
      },
      Polydisc::around_origin(chart_dim, std::numeric_limits<double>::infinity()), false);
}

Matrix wirtinger(const ChartField& field, const Vector& z, Index alpha, bool conjugate) {
  if (field.mode() == DerivativeMode::Analytic) {
    const GramJet j = field.jet(z);
    const Matrix& d = j.d[static_cast<std::size_t>(alpha)];
    return conjugate ? Matrix(d.adjoint()) : d;
  }
  const auto f = [&field](const Vector& p) { return field.value(p); };
  return wirtinger(f, z, alpha, conjugate, field.steps().inner);
}

CurvatureTensor::CurvatureTensor(Index chart_dim, Index rank)
    : m_(chart_dim), r_(rank),
      blocks_(static_cast<std::size_t>(chart_dim * chart_dim), Matrix::Zero(rank, rank)) {}

Matrix CurvatureTensor::directional(const Vector& u, const Vector& w) const {
  Matrix k = Matrix::Zero(r_, r_);
  for (Index a = 0; a < m_; ++a)
    for (Index b = 0; b < m_; ++b) k += u(a) * std::conj(w(b)) * block(a, b);
  return k;
}

cd CurvatureTensor::contract(const Vector& u, const Vector& w, const Vector& s, const Vector& t) const {
  return t.dot(directional(u, w) * s);
}

double CurvatureTensor::norm() const {
  double sq = 0;
  for (const auto& b : blocks_) sq += b.squaredNorm();
  return std::sqrt(sq);
}

double CurvatureTensor::pair_symmetry_defect() const {
  // R(a, b, s, t) = conj R(b, a, t, s)  <=>  block(a, b) = block(b, a)^*
  double worst = 0;
  for (Index a = 0; a < m_; ++a)
    for (Index b = 0; b < m_; ++b)
      worst = std::max(worst, (block(a, b) - block(b, a).adjoint()).norm());
  return worst / (1e-300 + std::max(norm(), 1e-300));
}

CurvatureTensor CurvatureTensor::operator+(const CurvatureTensor& o) const {
  CurvatureTensor out = *this;
  for (std::size_t i = 0; i < blocks_.size(); ++i) out.blocks_[i] += o.blocks_[i];
  return out;
}

CurvatureTensor CurvatureTensor::operator-(const CurvatureTensor& o) const { return *this + o * -1.0; }

CurvatureTensor CurvatureTensor::operator*(double c) const {
  CurvatureTensor out = *this;
  for (auto& b : out.blocks_) b *= c;
  return out;
}

double relative_difference(const CurvatureTensor& a, const CurvatureTensor& b) {
  return (a - b).norm() / (1.0 + b.norm());
}

bool constant_rank(const ChartField& field, const Vector& z) {
  const Index rank0 = field.form(z).rank();
  const double h = field.steps().outer;
  for (Index a = 0; a < field.chart_dim(); ++a) {
    for (cd dir : {cd(h, 0), cd(-h, 0), cd(0, h), cd(0, -h)}) {
      Vector p = z;
      p(a) += dir;
      if (field.form(p).rank() != rank0) return false;
    }
  }
  return true;
}

void require_constant_rank(const ChartField& field, const Vector& z) {
  if (!constant_rank(field, z))
    throw GeometryError(ErrorKind::RankJump, "rank of the form changes near the evaluation point");
}

ConnectionAt connection_from_jet(const GramJet& jet, double rank_tol) {
  const HermitianFormd g(jet.value, rank_tol);
  const Matrix gp = g.pseudo_inverse();
  ConnectionAt out;
  out.kernel_basis = g.spectrum().kernel;
  for (const Matrix& d : jet.d) {
    Matrix a = gp * d;
    out.residual = std::max(out.residual, (g.gram() * a - d).norm() / (1.0 + d.norm()));
    out.a.push_back(std::move(a));
  }
  return out;
}

CurvatureTensor curvature_from_jet(const GramJet& jet, double rank_tol) {
  const Index m = jet.chart_dim();
  const Index r = jet.value.rows();
  const HermitianFormd g(jet.value, rank_tol);
  const auto sp = g.spectrum();
  const Matrix gp = g.pseudo_inverse();
  const Matrix p = sp.range * sp.range.adjoint();
  const Matrix off = Matrix::Identity(r, r) - p;

  CurvatureTensor out(m, r);
  for (Index a = 0; a < m; ++a) {
    const Matrix& y = jet.d[static_cast<std::size_t>(a)];
    for (Index b = 0; b < m; ++b) {
      const Matrix x = jet.d[static_cast<std::size_t>(b)].adjoint();  // dbar_b G
      const Matrix& zz = jet.ddbar[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      // G dbar_b (G^+ d_a G), with the constant-rank derivative of G^+.
      const Matrix gda = -p * x * gp * y + gp * x * off * y + p * zz;
      out.block(a, b) = -gda;
    }
  }
  return out;
}

ConnectionAt chern_connection(const ChartField& field, const Vector& z, double solver_tol) {
  require_constant_rank(field, z);
  ConnectionAt out = connection_from_jet(field.jet(z), field.rank_tol());
  out.z = z;
  if (out.residual > solver_tol) {
    std::ostringstream msg;
    msg << "dG is not in the range of G (residual " << out.residual << ")";
    throw GeometryError(ErrorKind::SolverResidual, msg.str());
  }
  return out;
}

CurvatureAt curvature_tensor(const ChartField& field, const Vector& z) {
  require_constant_rank(field, z);
  const GramJet jet = field.jet(z);
  return CurvatureAt{z, curvature_from_jet(jet, field.rank_tol()), HermitianFormd(jet.value, field.rank_tol())};
}

CurvatureTensor curvature_from_connection(const ChartField& field, const ConnectionFunction& connection,
                                          const Vector& z, double step) {
  require_constant_rank(field, z);
  const Index m = field.chart_dim();
  const Matrix g = field.value(z);
  CurvatureTensor out(m, field.bundle_rank());
  for (Index a = 0; a < m; ++a) {
    const auto aa = [&, a](const Vector& p) { return connection(p)[static_cast<std::size_t>(a)]; };
    for (Index b = 0; b < m; ++b) out.block(a, b) = -g * wirtinger(aa, z, b, true, step);
  }
  return out;
}

ConnectionFunction random_kernel_perturbation(const ChartField& field, std::uint64_t seed, double amplitude) {
  Rng rng(seed);
  const Index m = field.chart_dim();
  const Index r = field.bundle_rank();
  // Phi_a(z) = C_a + sum_c z_c H_ac + conj(z_c) K_ac
  std::vector<Matrix> constant, holo, anti;
  for (Index a = 0; a < m; ++a) {
    constant.push_back(amplitude * rng.matrix(r, r));
    for (Index c = 0; c < m; ++c) {
      holo.push_back(amplitude * rng.matrix(r, r));
      anti.push_back(amplitude * rng.matrix(r, r));
    }
  }
  return [field, constant, holo, anti, m, r](const Vector& z) {
    const auto sp = field.form(z).spectrum();
    const Matrix proj = sp.kernel * sp.kernel.adjoint();
    std::vector<Matrix> out;
    for (Index a = 0; a < m; ++a) {
      Matrix phi = constant[static_cast<std::size_t>(a)];
      for (Index c = 0; c < m; ++c) {
        const auto i = static_cast<std::size_t>(a * m + c);
        phi += z(c) * holo[i] + std::conj(z(c)) * anti[i];
      }
      out.push_back(proj * phi);
    }
    (void)r;
    return out;
  };
}

double gauge_independence_residual(const ChartField& field, const Vector& z, const ConnectionFunction& k) {
  const ConnectionFunction base = [&field](const Vector& p) {
    return connection_from_jet(field.jet(p), field.rank_tol()).a;
  };
  const ConnectionFunction shifted = [&base, &k](const Vector& p) {
    auto a = base(p);
    const auto dk = k(p);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += dk[i];
    return a;
  };
  // The connection is an analytic first derivative here, so dbar of it is a
  // single central difference at the first-derivative step.
  const double step = field.steps().inner;
  const CurvatureTensor r0 = curvature_from_connection(field, base, z, step);
  const CurvatureTensor r1 = curvature_from_connection(field, shifted, z, step);
  return (r0 - r1).norm() / (1.0 + r0.norm());
}

double hsc(const CurvatureTensor& r, const Matrix& gram, const Vector& v) {
  if (r.chart_dim() != r.rank())
    throw GeometryError(ErrorKind::InvalidModel, "holomorphic sectional curvature needs a tangent-bundle metric");
  const double len = std::real(v.dot(gram * v));
  return std::real(r.contract(v, v, v, v)) / (len * len);
}

double hsc(const ChartField& metric, const Vector& z, const Vector& v) {
  if (v.norm() == 0.0) throw GeometryError(ErrorKind::ZeroVector, "direction must be nonzero");
  const HermitianFormd g = metric.form(z);
  if (!g.positive_definite())
    throw GeometryError(ErrorKind::NotPositiveAtPoint, "metric is not positive-definite at the point");
  const CurvatureAt c = curvature_tensor(metric, z);
  return hsc(c.r, g.gram(), v);
}

double torsion_defect(const ChartField& metric, const Vector& z) {
  const ConnectionAt conn = chern_connection(metric, z);
  const Matrix g = metric.value(z);
  const Index m = metric.chart_dim();
  double worst = 0;
  for (Index a = 0; a < m; ++a)
    for (Index b = a + 1; b < m; ++b) {
      const Vector tau = conn.a[static_cast<std::size_t>(a)].col(b) - conn.a[static_cast<std::size_t>(b)].col(a);
      worst = std::max(worst, (g * tau).cwiseAbs().maxCoeff());
    }
  return worst;
}

double torsion_defect_from_derivatives(const ChartField& metric, const Vector& z) {
  const GramJet jet = metric.jet(z);
  const Index m = metric.chart_dim();
  double worst = 0;
  for (Index a = 0; a < m; ++a)
    for (Index b = a + 1; b < m; ++b) {
      const Vector diff = jet.d[static_cast<std::size_t>(a)].col(b) - jet.d[static_cast<std::size_t>(b)].col(a);
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
  return worst;
}

double purity_defect(const ChartField& field, const Vector& z) {
  require_constant_rank(field, z);
  const Index m = field.chart_dim();
  const auto conn = [&field](const Vector& p) { return connection_from_jet(field.jet(p), field.rank_tol()).a; };
  const auto a0 = conn(z);
  const Matrix g = field.value(z);
  double size = 0;
  for (const auto& a : a0) size = std::max(size, a.norm());
  double worst = 0;
  for (Index a = 0; a < m; ++a)
    for (Index b = a + 1; b < m; ++b) {
      const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
      const auto aa = [&conn, ua](const Vector& p) { return conn(p)[ua]; };
      const auto ab = [&conn, ub](const Vector& p) { return conn(p)[ub]; };
      const Matrix f = wirtinger(aa, z, b, false, field.steps().inner) - wirtinger(ab, z, a, false, field.steps().inner) +
                       a0[ub] * a0[ua] - a0[ua] * a0[ub];
      worst = std::max(worst, (g * f).norm() / (1.0 + g.norm() * size * size));
    }
  return worst;
}

double pullback_consistency(const HolomorphicMap& f, const ChartField& field, const Vector& z) {
  const auto as_matrix = [&f](const Vector& p) { return Matrix(f.value(p)); };
  const Matrix jac = f.jacobian(z);
  for (Index c = 0; c < f.source_dim; ++c) {
    const Matrix dbar = wirtinger(as_matrix, z, c, true, 1e-5);
    const Matrix d = wirtinger(as_matrix, z, c, false, 1e-5);
    if (dbar.norm() > 1e-6 * (1.0 + d.norm()))
      throw GeometryError(ErrorKind::NotHolomorphic, "map has a (0,1) derivative");
    if ((d - jac.col(c)).norm() > 1e-5 * (1.0 + d.norm()))
      throw GeometryError(ErrorKind::InvalidModel, "Jacobian disagrees with the map");
  }

  const ChartField pulled(
      f.source_dim, field.bundle_rank(), [f, field](const Vector& p) { return field.value(f.value(p)); },
      Polydisc::around_origin(f.source_dim, std::numeric_limits<double>::infinity()), field.steps());
  const Vector w = f.value(z);
  const ConnectionAt own = chern_connection(pulled, z);
  const ConnectionAt base = chern_connection(field, w);
  const Matrix g = field.value(w);

  double worst = 0;
  for (Index c = 0; c < f.source_dim; ++c) {
    Matrix transported = Matrix::Zero(field.bundle_rank(), field.bundle_rank());
    for (Index a = 0; a < f.target_dim; ++a) transported += jac(a, c) * base.a[static_cast<std::size_t>(a)];
    const Matrix diff = g * (own.a[static_cast<std::size_t>(c)] - transported);
    worst = std::max(worst, diff.norm() / (1.0 + (g * transported).norm()));
  }
  return worst;
}

}  // namespace hermitia

#include "hermitia/models.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

namespace hermitia {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix unit(Index rows, Index cols, Index i, Index j) {
  Matrix e = Matrix::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

std::vector<std::vector<Index>> subsets(Index n, Index k) {
  std::vector<std::vector<Index>> out;
  std::vector<Index> cur(static_cast<std::size_t>(k));
  std::iota(cur.begin(), cur.end(), Index{0});
  while (true) {
    out.push_back(cur);
    Index i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

cd det(const Matrix& m) { return m.size() == 0 ? cd(1.0) : m.determinant(); }

Matrix drop(const Matrix& m, Index row, Index col) {
  Matrix out(m.rows() - 1, m.cols() - 1);
  for (Index i = 0, oi = 0; i < m.rows(); ++i) {
    if (i == row) continue;
    for (Index j = 0, oj = 0; j < m.cols(); ++j) {
      if (j == col) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

/// Places a field on a block of a larger chart and bundle; the field depends
/// only on the coordinates [coord_offset, coord_offset + field dim).
ChartField embed(const ChartField& f, Index total_dim, Index coord_offset, Index total_rank, Index block_offset) {
  const Index m = f.chart_dim();
  const Index r = f.bundle_rank();
  MatrixFunction value = [=](const Vector& z) {
    Matrix g = Matrix::Zero(total_rank, total_rank);
    g.block(block_offset, block_offset, r, r) = f.value(z.segment(coord_offset, m));
    return g;
  };
  const Polydisc domain = Polydisc::around_origin(total_dim, f.domain().radius);
  if (f.mode() == DerivativeMode::FiniteDifference) return ChartField(total_dim, total_rank, value, domain, f.steps());
  ChartField::JetEvaluator jet = [=](const Vector& z) {
    const GramJet inner = f.jet(z.segment(coord_offset, m));
    GramJet out = GramJet::zero(total_dim, total_rank);
    out.value.block(block_offset, block_offset, r, r) = inner.value;
    for (Index a = 0; a < m; ++a) {
      const auto ga = static_cast<std::size_t>(a + coord_offset);
      out.d[ga].block(block_offset, block_offset, r, r) = inner.d[static_cast<std::size_t>(a)];
      for (Index b = 0; b < m; ++b)
        out.ddbar[ga][static_cast<std::size_t>(b + coord_offset)].block(block_offset, block_offset, r, r) =
            inner.ddbar[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    return out;
  };
  return ChartField(total_dim, total_rank, value, jet, domain, false, f.steps());
}

}  // namespace

bool Region::contains(const Vector& z) const {
  if (shape == Shape::Ball) return (z - center).norm() <= radius;
  return Polydisc{center, radius}.contains(z);
}

std::string Region::describe() const {
  std::ostringstream s;
  s << (shape == Shape::Ball ? "ball" : "polydisc") << "(dim=" << center.size() << ", radius=" << radius << ")";
  return s.str();
}

ChartField fubini_study_chart(Index n) {
  if (n < 1) throw GeometryError(ErrorKind::InvalidModel, "projective space needs n >= 1");
  MatrixFunction value = [n](const Vector& z) {
    const double s = 1.0 + z.squaredNorm();
    return Matrix(Matrix::Identity(n, n) / s - z * z.adjoint() / (s * s));
  };
  ChartField::JetEvaluator jet = [n](const Vector& z) {
    const double s = 1.0 + z.squaredNorm();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix zz = z * z.adjoint();
    GramJet out = GramJet::zero(n, n);
    out.value = id / s - zz / (s * s);
    for (Index g = 0; g < n; ++g) {
      const cd zg = std::conj(z(g));
      const Matrix eg_zs = unit(n, 1, g, 0) * z.adjoint();
      out.d[static_cast<std::size_t>(g)] = -zg * id / (s * s) - eg_zs / (s * s) + 2.0 * zg * zz / (s * s * s);
      for (Index d = 0; d < n; ++d) {
        const double kd = g == d ? 1.0 : 0.0;
        const cd zd = z(d);
        out.ddbar[static_cast<std::size_t>(g)][static_cast<std::size_t>(d)] =
            -kd * id / (s * s) + 2.0 * zg * zd * id / (s * s * s) - unit(n, n, g, d) / (s * s) +
            2.0 * zd * eg_zs / (s * s * s) + 2.0 * kd * zz / (s * s * s) +
            2.0 * zg * z * unit(1, n, 0, d) / (s * s * s) - 6.0 * zg * zd * zz / (s * s * s * s);
      }
    }
    return out;
  };
  return ChartField(n, n, value, jet, Polydisc::around_origin(n, std::numeric_limits<double>::infinity()));
}

Matrix GrassmannChartModel::to_matrix(const Vector& z) const {
  Matrix out(k, n - k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < n - k; ++b) out(a, b) = z(a * (n - k) + b);
  return out;
}

Vector GrassmannChartModel::to_vector(const Matrix& z) const {
  Vector out(chart_dim());
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < n - k; ++b) out(a * (n - k) + b) = z(a, b);
  return out;
}

GrassmannChartModel grassmannian_chart(Index k, Index n) {
  if (k < 1 || k >= n) throw GeometryError(ErrorKind::InvalidModel, "Grassmannian needs 1 <= k < n");
  const Index l = n - k;
  const Index m = k * l;
  const auto as_matrix = [k, l](const Vector& z) {
    Matrix out(k, l);
    for (Index a = 0; a < k; ++a)
      for (Index b = 0; b < l; ++b) out(a, b) = z(a * l + b);
    return out;
  };
  MatrixFunction value = [=](const Vector& z) {
    const Matrix zm = as_matrix(z);
    const Matrix p = (Matrix::Identity(k, k) + zm * zm.adjoint()).inverse();
    const Matrix q = (Matrix::Identity(l, l) + zm.adjoint() * zm).inverse();
    return kron(p, q.transpose());
  };
  ChartField::JetEvaluator jet = [=](const Vector& z) {
    const Matrix zm = as_matrix(z);
    const Matrix zs = zm.adjoint();
    const Matrix p = (Matrix::Identity(k, k) + zm * zs).inverse();
    const Matrix q = (Matrix::Identity(l, l) + zs * zm).inverse();
    const Matrix qt = q.transpose();
    std::vector<Matrix> dp, dq, dbp, dbq, e;
    for (Index al = 0; al < m; ++al) {
      const Matrix ea = unit(k, l, al / l, al % l);
      e.push_back(ea);
      dp.push_back(-p * ea * zs * p);
      dq.push_back(-q * zs * ea * q);
      dbp.push_back(-p * zm * ea.adjoint() * p);
      dbq.push_back(-q * ea.adjoint() * zm * q);
    }
    GramJet out = GramJet::zero(m, m);
    out.value = kron(p, qt);
    for (std::size_t a = 0; a < static_cast<std::size_t>(m); ++a) {
      out.d[a] = kron(dp[a], qt) + kron(p, dq[a].transpose());
      for (std::size_t b = 0; b < static_cast<std::size_t>(m); ++b) {
        const Matrix ddp = -dbp[b] * e[a] * zs * p - p * e[a] * e[b].adjoint() * p - p * e[a] * zs * dbp[b];
        const Matrix ddq = -dbq[b] * zs * e[a] * q - q * e[b].adjoint() * e[a] * q - q * zs * e[a] * dbq[b];
        out.ddbar[a][b] = kron(ddp, qt) + kron(dp[a], dbq[b].transpose()) + kron(dbp[b], dq[a].transpose()) +
                          kron(p, ddq.transpose());
      }
    }
    return out;
  };
  GrassmannChartModel model{k, n, ChartField(m, m, value, jet, Polydisc::around_origin(m, std::numeric_limits<double>::infinity()))};
  return model;
}

Vector pluecker_coordinates(Index k, Index n, const Matrix& z) {
  Matrix full(k, n);
  full << Matrix::Identity(k, k), z;
  const auto sets = subsets(n, k);
  Vector p(static_cast<Index>(sets.size()));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    Matrix sub(k, k);
    for (Index c = 0; c < k; ++c) sub.col(c) = full.col(sets[i][static_cast<std::size_t>(c)]);
    p(static_cast<Index>(i)) = det(sub);
  }
  return p;
}

Matrix pluecker_jacobian(Index k, Index n, const Matrix& z) {
  const Index l = n - k;
  Matrix full(k, n);
  full << Matrix::Identity(k, k), z;
  const auto sets = subsets(n, k);
  Matrix jac = Matrix::Zero(static_cast<Index>(sets.size()), k * l);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    Matrix sub(k, k);
    for (Index c = 0; c < k; ++c) sub.col(c) = full.col(sets[i][static_cast<std::size_t>(c)]);
    for (Index c = 0; c < k; ++c) {
      const Index col = sets[i][static_cast<std::size_t>(c)];
      if (col < k) continue;
      const Index b = col - k;
      for (Index a = 0; a < k; ++a) {
        const double sign = (a + c) % 2 == 0 ? 1.0 : -1.0;
        jac(static_cast<Index>(i), a * l + b) = sign * det(drop(sub, a, c));
      }
    }
  }
  return jac;
}

ChartField pluecker_pullback(Index k, Index n) {
  if (k < 1 || k >= n) throw GeometryError(ErrorKind::InvalidModel, "Grassmannian needs 1 <= k < n");
  const Index l = n - k;
  const Index m = k * l;
  MatrixFunction value = [=](const Vector& z) {
    Matrix zm(k, l);
    for (Index a = 0; a < k; ++a)
      for (Index b = 0; b < l; ++b) zm(a, b) = z(a * l + b);
    const Vector p = pluecker_coordinates(k, n, zm);
    const Matrix jac = pluecker_jacobian(k, n, zm);
    const double norm = p.squaredNorm();
    const Vector w = jac.adjoint() * p;
    return Matrix(jac.adjoint() * jac / norm - w * w.adjoint() / (norm * norm));
  };
  return ChartField(m, m, value, Polydisc::around_origin(m, std::numeric_limits<double>::infinity()));
}

Matrix ricci(const ChartField& metric, const Vector& z) {
  const GramJet jet = metric.jet(z);
  const HermitianFormd g(jet.value, metric.rank_tol());
  if (!g.positive_definite())
    throw GeometryError(ErrorKind::NotPositiveAtPoint, "Ricci form needs a positive-definite metric");
  const auto lu = jet.value.partialPivLu();
  const Index m = metric.chart_dim();
  Matrix ric(m, m);
  for (Index a = 0; a < m; ++a) {
    const Matrix gy = lu.solve(jet.d[static_cast<std::size_t>(a)]);
    for (Index b = 0; b < m; ++b) {
      const Matrix gx = lu.solve(Matrix(jet.d[static_cast<std::size_t>(b)].adjoint()));
      const Matrix gz = lu.solve(jet.ddbar[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
      ric(b, a) = (gx * gy).trace() - gz.trace();
    }
  }
  return ric;
}

double einstein_residual(const ChartField& metric, double n, const std::vector<Vector>& points) {
  double worst = 0;
  for (const Vector& z : points) {
    const Matrix g = metric.value(z);
    worst = std::max(worst, (ricci(metric, z) - n * g).norm() / g.norm());
  }
  return worst;
}

std::pair<double, Vector> refine_direction(const CurvatureTensor& r, const Matrix& gram, Vector v, double sign,
                                           int steps) {
  const Index m = v.size();
  v /= v.norm();
  double value = hsc(r, gram, v);
  double eta = 0.2;
  const double h = 1e-6;
  for (int step = 0; step < steps && eta > 1e-12; ++step) {
    Vector grad(m);
    for (Index i = 0; i < m; ++i) {
      Vector vp = v, vm = v;
      vp(i) += h;
      vm(i) -= h;
      const double gx = (hsc(r, gram, vp) - hsc(r, gram, vm)) / (2 * h);
      vp = v;
      vm = v;
      vp(i) += cd(0, h);
      vm(i) -= cd(0, h);
      const double gy = (hsc(r, gram, vp) - hsc(r, gram, vm)) / (2 * h);
      grad(i) = cd(gx, gy);
    }
    grad -= v * v.dot(grad);  // tangent to the sphere, removes scale and phase
    if (grad.norm() < 1e-13) break;
    Vector trial = v + sign * eta * grad / grad.norm();
    trial /= trial.norm();
    const double tv = hsc(r, gram, trial);
    if (sign * (tv - value) > 0) {
      v = trial;
      value = tv;
      eta = std::min(1.0, eta * 1.5);
    } else {
      eta *= 0.5;
    }
  }
  return {value, v};
}

HscScanResult hsc_extremes(const ChartField& metric, const Region& region, const HscScanOptions& options) {
  struct Sample {
    bool ok = false;
    double h = 0;
    Vector z, v;
  };
  const Index m = metric.chart_dim();
  std::vector<Sample> samples(options.samples);
  parallel_for(options.samples, options.threads, [&](std::size_t i) {
    Rng rng(derive_seed(options.seed, i));
    Sample s;
    s.z = region.sample(rng);
    s.v = rng.unit_vector(m);
    try {
      s.h = hsc(metric, s.z, s.v);
      s.ok = std::isfinite(s.h);
    } catch (const GeometryError&) {
      s.ok = false;
    }
    samples[i] = std::move(s);
  });

  std::vector<std::size_t> good;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (samples[i].ok) good.push_back(i);
  HscScanResult out;
  out.samples = options.samples;
  out.failed_points = samples.size() - good.size();
  out.region = region.describe();
  out.seed = options.seed;
  if (good.empty()) throw GeometryError(ErrorKind::NotPositiveAtPoint, "no admissible sample in the region");

  std::sort(good.begin(), good.end(), [&](std::size_t a, std::size_t b) { return samples[a].h < samples[b].h; });
  const Sample& lo = samples[good.front()];
  const Sample& hi = samples[good.back()];
  out.sample_min = out.min_h = lo.h;
  out.sample_max = out.max_h = hi.h;
  out.argmin_point = lo.z;
  out.argmin_direction = lo.v;
  out.argmax_point = hi.z;
  out.argmax_direction = hi.v;

  const std::size_t count = std::min(options.refine_candidates, good.size());
  std::vector<std::pair<std::size_t, double>> jobs;
  for (std::size_t c = 0; c < count; ++c) {
    jobs.emplace_back(good[c], -1.0);
    jobs.emplace_back(good[good.size() - 1 - c], 1.0);
  }
  std::vector<std::pair<double, Vector>> refined(jobs.size());
  parallel_for(jobs.size(), options.threads, [&](std::size_t i) {
    const Sample& s = samples[jobs[i].first];
    const CurvatureAt c = curvature_tensor(metric, s.z);
    refined[i] = refine_direction(c.r, c.form_at_point.gram(), s.v, jobs[i].second, options.refine_steps);
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Sample& s = samples[jobs[i].first];
    if (jobs[i].second < 0 && refined[i].first < out.min_h) {
      out.min_h = refined[i].first;
      out.argmin_point = s.z;
      out.argmin_direction = refined[i].second;
    }
    if (jobs[i].second > 0 && refined[i].first > out.max_h) {
      out.max_h = refined[i].first;
      out.argmax_point = s.z;
      out.argmax_direction = refined[i].second;
    }
  }
  return out;
}

void FibrationModel::validate(std::size_t samples, std::uint64_t seed) const {
  if (b1.chart_dim() != dim() || b2.chart_dim() != dim() || b1.bundle_rank() != dim() || b2.bundle_rank() != dim())
    throw GeometryError(ErrorKind::InvalidModel, "forms do not live on the tangent bundle of the chart");
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(derive_seed(seed, i));
    const Vector z = region.sample(rng);
    const Matrix g1 = b1.value(z);
    const Matrix g2 = b2.value(z);
    const HermitianFormd fiber(g1.bottomRightCorner(fiber_dim, fiber_dim));
    if (!fiber.positive_definite())
      throw GeometryError(ErrorKind::InvalidModel, "b1 is not positive on the fiber directions");
    if (g2.rightCols(fiber_dim).cwiseAbs().maxCoeff() > 1e-12)
      throw GeometryError(ErrorKind::InvalidModel, "b2 does not vanish on vertical directions");
  }
}

FibrationModel product_model(const ChartField& base, const ChartField& fiber, Region region) {
  const Index nb = base.chart_dim();
  const Index nf = fiber.chart_dim();
  if (base.bundle_rank() != nb || fiber.bundle_rank() != nf)
    throw GeometryError(ErrorKind::InvalidModel, "product model needs tangent-bundle metrics");
  FibrationModel model{"product", nb, nf, embed(fiber, nb + nf, nb, nb + nf, nb), embed(base, nb + nf, 0, nb + nf, 0),
                       std::move(region)};
  model.validate();
  return model;
}

FibrationModel hirzebruch_model(int twist, Region region) {
  if (twist < 0) throw GeometryError(ErrorKind::InvalidModel, "twist must be nonnegative");
  const double k = twist;
  MatrixFunction value = [k](const Vector& p) {
    const cd z = p(0), w = p(1);
    const double s = 1.0 + std::norm(z);
    const double w2 = std::norm(w);
    const double sk = std::pow(s, k);
    const double f = 1.0 + sk * w2;
    const cd fz = k * std::pow(s, k - 1) * std::conj(z) * w2;
    const cd fw = sk * std::conj(w);
    const double fzz = k == 0 ? 0.0 : w2 * k * std::pow(s, k - 2) * (s + (k - 1) * std::norm(z));
    const cd fzw = k * std::pow(s, k - 1) * std::conj(z) * w;  // d_z dbar_w F
    const double fww = sk;
    // psi_{a bbar} = F_{a bbar} / F - F_a conj(F_b) / F^2, stored at [b][a]
    Matrix g(2, 2);
    g(0, 0) = fzz / f - std::norm(fz) / (f * f);
    g(1, 1) = fww / f - std::norm(fw) / (f * f);
    g(1, 0) = fzw / f - fz * std::conj(fw) / (f * f);
    g(0, 1) = std::conj(g(1, 0));
    return g;
  };
  ChartField b1(2, 2, value, Polydisc::around_origin(2, std::numeric_limits<double>::infinity()));
  ChartField b2 = embed(fubini_study_chart(1), 2, 0, 2, 0);
  FibrationModel model{"hirzebruch:" + std::to_string(twist), 1, 1, b1, b2, std::move(region)};
  model.validate();
  return model;
}

Index b1_rank(const FibrationModel& model, const Vector& z) { return model.b1.form(z).rank(); }

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

Index parse_index(const std::string& s, const std::string& id) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size() || v < 0) throw std::invalid_argument(s);
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw GeometryError(ErrorKind::ConfigError, "bad number in model id '" + id + "'");
  }
}

}  // namespace

Model resolve_model(const std::string& id) {
  const auto parts = split(id, ':');
  if (parts.empty()) throw GeometryError(ErrorKind::ConfigError, "empty model id");
  const std::string& kind = parts[0];
  try {
    if (kind == "fs" && parts.size() == 2) {
      const Index n = parse_index(parts[1], id);
      return Model{id, fubini_study_chart(n), Region::polydisc(n, 0.9), double(n + 1), std::pair{2.0, 2.0}, {}};
    }
    if ((kind == "gr" || kind == "pl") && parts.size() == 3) {
      const Index k = parse_index(parts[1], id);
      const Index n = parse_index(parts[2], id);
      ChartField metric = kind == "gr" ? grassmannian_chart(k, n).metric : pluecker_pullback(k, n);
      const double kk = static_cast<double>(k);
      return Model{id, metric, Region::polydisc(k * (n - k), 0.7), double(n), std::pair{2.0 / (kk * kk), 2.0}, {}};
    }
    if (kind == "flat" && parts.size() == 2) {
      const Index n = parse_index(parts[1], id);
      return Model{id, constant_field(Matrix::Identity(n, n), n), Region::polydisc(n, 0.9), 0.0, {}, {}};
    }
    if (kind == "prod" && parts.size() == 3 && parts[1] == "fs1" && parts[2] == "fs1") {
      FibrationModel fib = product_model(fubini_study_chart(1), fubini_study_chart(1), Region::ball(2, 0.7));
      ChartField metric = linear_combination(fib.b1, 1.0, fib.b2, 1.0);
      return Model{id, metric, fib.region, {}, {}, fib};
    }
    if (kind == "hirz" && parts.size() == 2) {
      FibrationModel fib = hirzebruch_model(static_cast<int>(parse_index(parts[1], id)));
      ChartField metric = linear_combination(fib.b1, 1.0, fib.b2, 1.0);
      return Model{id, metric, fib.region, {}, {}, fib};
    }
  } catch (const GeometryError& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    throw GeometryError(ErrorKind::ConfigError, "cannot build model '" + id + "': " + e.what());
  }
  throw GeometryError(ErrorKind::ConfigError, "unknown model id '" + id + "'");
}

}  // namespace hermitia

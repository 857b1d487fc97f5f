#include "hermitia/fibration.hpp"

#include <algorithm>
#include <cmath>

namespace hermitia {

ChartField h_lambda(const FibrationModel& model, double lambda) {
  return linear_combination(model.b1, 1.0, model.b2, std::exp(lambda));
}

double h_lambda_min_eigenvalue(const FibrationModel& model, double lambda, const Vector& z) {
  const Matrix h = model.b1.value(z) + std::exp(lambda) * model.b2.value(z);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0) / eig.eigenvalues().cwiseAbs().maxCoeff();
}

RLambdaDecomposition r_lambda_decomposed(const FibrationModel& model, double lambda, const Vector& z) {
  const ChartField h = h_lambda(model, lambda);
  if (!h.form(z).positive_definite())
    throw GeometryError(ErrorKind::NotPositive, "h_lambda is not positive-definite at the point");
  RLambdaDecomposition out;
  out.direct = curvature_tensor(h, z).r;
  if (!constant_rank(model.b1, z)) {
    out.note = "b1 changes rank near the point";
    return out;
  }
  if (!constant_rank(model.b2, z)) {
    out.note = "b2 changes rank near the point";
    return out;
  }
  const ChartField scaled_b2 = linear_combination(model.b2, std::exp(lambda), model.b2, 0.0);
  const SumCurvatureResult sum = sum_curvature(model.b1, scaled_b2, z);
  out.formula = sum.formula;
  out.residual = relative_difference(sum.formula, out.direct);
  return out;
}

LimitRecord q_lambda_limit(const HermitianFormd& b1, const HermitianFormd& b2, const std::vector<double>& lambdas) {
  const auto lf = limit_form(b1, b2, lambdas);
  LimitRecord out;
  out.lambdas = lambdas;
  out.q_infinity = lf.q_infinity.gram();
  for (const auto& q : lf.q_values) out.errors.push_back((q.gram() - out.q_infinity).norm());
  for (std::size_t i = 1; i < out.errors.size(); ++i)
    out.ratios.push_back(out.errors[i - 1] > 0 ? out.errors[i] / out.errors[i - 1] : 0.0);
  out.projection_residual = lf.projection_residual;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(out.q_infinity, Eigen::EigenvaluesOnly);
  const double top = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  out.semipositive = eig.eigenvalues()(0) >= -1e-10 * top;

  const Matrix h0 = b1.gram() + b2.gram();
  const Matrix k2 = b2.spectrum().kernel;
  if (k2.cols() > 0) out.vertical_max = (k2.adjoint() * out.q_infinity * k2).norm();
  const Matrix comp = k2.cols() > 0 ? detail::null_space<double>(Matrix(k2.adjoint() * h0), 1e-12)
                                    : Matrix(Matrix::Identity(h0.rows(), h0.rows()));
  if (comp.cols() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> ce(Matrix(comp.adjoint() * out.q_infinity * comp), Eigen::EigenvaluesOnly);
    out.complement_min_eigenvalue = ce.eigenvalues()(0);
  }
  return out;
}

LimitRecord q_lambda_limit(const FibrationModel& model, const Vector& z, const std::vector<double>& lambdas) {
  return q_lambda_limit(model.b1.form(z), model.b2.form(z), lambdas);
}

namespace {

/// b1 restricted to the fiber through z, as a field in fiber coordinates.
ChartField fiber_field(const FibrationModel& model, const Vector& z) {
  const Index nb = model.base_dim, nf = model.fiber_dim;
  const Vector base = z.head(nb);
  const ChartField b1 = model.b1;
  const auto lift = [base, nb, nf](const Vector& w) {
    Vector p(nb + nf);
    p << base, w;
    return p;
  };
  MatrixFunction value = [b1, lift, nf](const Vector& w) {
    return Matrix(b1.value(lift(w)).bottomRightCorner(nf, nf));
  };
  const Polydisc domain = Polydisc::around_origin(nf, b1.domain().radius);
  if (b1.mode() == DerivativeMode::FiniteDifference) return ChartField(nf, nf, value, domain, b1.steps());
  ChartField::JetEvaluator jet = [b1, lift, nb, nf](const Vector& w) {
    const GramJet full = b1.jet(lift(w));
    GramJet out = GramJet::zero(nf, nf);
    out.value = full.value.bottomRightCorner(nf, nf);
    for (Index a = 0; a < nf; ++a) {
      const auto fa = static_cast<std::size_t>(a + nb);
      out.d[static_cast<std::size_t>(a)] = full.d[fa].bottomRightCorner(nf, nf);
      for (Index b = 0; b < nf; ++b)
        out.ddbar[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            full.ddbar[fa][static_cast<std::size_t>(b + nb)].bottomRightCorner(nf, nf);
    }
    return out;
  };
  return ChartField(nf, nf, value, jet, domain, false, b1.steps());
}

}  // namespace

VerticalHscReport vertical_hsc_check(const FibrationModel& model, const std::vector<Vector>& points,
                                     const std::vector<double>& lambdas, std::size_t directions,
                                     std::uint64_t seed, double margin) {
  VerticalHscReport report;
  report.margin = margin;
  report.positive = true;
  const Index nb = model.base_dim, nf = model.fiber_dim;
  for (double lambda : lambdas) {
    const ChartField h = h_lambda(model, lambda);
    VerticalHscRecord rec;
    rec.lambda = lambda;
    rec.min_h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Vector& z = points[i];
      const CurvatureAt ch = curvature_tensor(h, z);
      const ChartField fib = fiber_field(model, z);
      const CurvatureAt cf = curvature_tensor(fib, z.tail(nf));
      Rng rng(derive_seed(seed, i));
      for (std::size_t d = 0; d < directions; ++d) {
        const Vector u = rng.unit_vector(nf);
        Vector v = Vector::Zero(nb + nf);
        v.tail(nf) = u;
        const double hv = hsc(ch.r, ch.form_at_point.gram(), v);
        const double hf = hsc(cf.r, cf.form_at_point.gram(), u);
        rec.min_h = std::min(rec.min_h, hv);
        rec.max_fiber_gap = std::max(rec.max_fiber_gap, std::abs(hv - hf));
      }
    }
    if (!(rec.min_h > margin)) report.positive = false;
    report.records.push_back(rec);
  }
  return report;
}

namespace {

struct PointJets {
  Vector z;
  GramJet b1, b2;
  bool ok = false;
};

std::vector<PointJets> sample_jets(const FibrationModel& model, std::size_t points, std::uint64_t seed,
                                   unsigned threads) {
  std::vector<PointJets> out(points);
  parallel_for(points, threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    PointJets p;
    p.z = model.region.sample(rng);
    try {
      p.b1 = model.b1.jet(p.z);
      p.b2 = model.b2.jet(p.z);
      p.ok = true;
    } catch (const GeometryError&) {
      p.ok = false;
    }
    out[i] = std::move(p);
  });
  return out;
}

LambdaRecord scan(const std::vector<PointJets>& jets, double lambda, const LambdaScanOptions& options,
                  std::size_t directions) {
  struct Best {
    double h = std::numeric_limits<double>::infinity();
    Vector v;
    bool pd = true;
    CurvatureTensor r;
    Matrix gram;
  };
  const double scale = std::exp(lambda);
  std::vector<Best> best(jets.size());
  parallel_for(jets.size(), options.threads, [&](std::size_t i) {
    const PointJets& p = jets[i];
    Best b;
    if (!p.ok) {
      best[i] = b;
      return;
    }
    const GramJet jet = combine(p.b1, 1.0, p.b2, scale);
    if (!HermitianFormd(jet.value).positive_definite()) {
      b.pd = false;
      best[i] = b;
      return;
    }
    b.r = curvature_from_jet(jet, kDefaultRankTol);
    b.gram = jet.value;
    Rng rng(derive_seed(options.seed ^ 0x5bd1e995ULL, i));
    for (std::size_t d = 0; d < directions; ++d) {
      const Vector v = rng.unit_vector(p.z.size());
      // Directions are unit for the standard structure; H itself is scale-invariant.
      const double h = hsc(b.r, b.gram, v);
      if (h < b.h) {
        b.h = h;
        b.v = v;
      }
    }
    best[i] = std::move(b);
  });

  LambdaRecord rec;
  rec.lambda = lambda;
  rec.positive_definite = true;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < best.size(); ++i) {
    if (!best[i].pd) rec.positive_definite = false;
    if (jets[i].ok && best[i].pd) order.push_back(i);
  }
  if (order.empty()) {
    rec.min_h = -std::numeric_limits<double>::infinity();
    return rec;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return best[a].h < best[b].h; });
  rec.min_h = best[order.front()].h;
  rec.argmin_point = jets[order.front()].z;
  rec.argmin_direction = best[order.front()].v;

  const std::size_t count = std::min(options.refine_candidates, order.size());
  std::vector<std::pair<double, Vector>> refined(count);
  parallel_for(count, options.threads, [&](std::size_t c) {
    const Best& b = best[order[c]];
    refined[c] = refine_direction(b.r, b.gram, b.v, -1.0, options.refine_steps);
  });
  for (std::size_t c = 0; c < count; ++c) {
    if (refined[c].first < rec.min_h) {
      rec.min_h = refined[c].first;
      rec.argmin_point = jets[order[c]].z;
      rec.argmin_direction = refined[c].second;
    }
  }
  rec.passed = rec.positive_definite && rec.min_h > options.margin;
  rec.positive = rec.positive_definite && rec.min_h > 0.0;
  return rec;
}

}  // namespace

LambdaRecord min_hsc_at_lambda(const FibrationModel& model, double lambda, const LambdaScanOptions& options) {
  const auto jets = sample_jets(model, options.points, options.seed, options.threads);
  return scan(jets, lambda, options, options.directions);
}

LambdaScanResult find_lambda0(const FibrationModel& model, const LambdaScanOptions& options) {
  model.validate();
  LambdaScanResult out;
  out.seed = options.seed;
  out.points = options.points;
  out.directions = options.directions;
  out.region = model.region.describe();

  const auto jets = sample_jets(model, options.points, options.seed, options.threads);
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < options.schedule.size(); ++i) {
    out.records.push_back(scan(jets, options.schedule[i], options, options.directions));
    if (!first && out.records.back().passed) first = i;
  }
  if (!first) return out;
  out.lambda0 = options.schedule[*first];

  if (*first > 0) {
    const double mid = 0.5 * (options.schedule[*first - 1] + options.schedule[*first]);
    out.bisection = scan(jets, mid, options, options.directions);
    if (out.bisection->passed) out.lambda0 = mid;
  }

  const auto doubled = sample_jets(model, 2 * options.points, options.seed, options.threads);
  out.stable = true;
  std::vector<double> check;
  if (out.bisection && out.bisection->passed) check.push_back(out.bisection->lambda);
  for (double l : options.schedule)
    if (l >= *out.lambda0) check.push_back(l);
  for (double l : check) {
    out.stability.push_back(scan(doubled, l, options, 2 * options.directions));
    if (!out.stability.back().positive) out.stable = false;
  }
  for (const auto& r : out.records)
    if (r.lambda >= *out.lambda0 && !r.positive) out.stable = false;
  return out;
}

}  // namespace hermitia

#include "hermitia/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "hermitia/fibration.hpp"
#include "hermitia/models.hpp"
#include "hermitia/properties.hpp"
#include "hermitia/sequences.hpp"

namespace hermitia {

namespace {

const char* const kTitles[kCriterionCount] = {
    "Fubini-Study calibration",
    "Grassmannian HSC bounds",
    "Einstein check",
    "Two-constructions equality",
    "Codazzi-Griffiths oracle suite",
    "Sum-of-forms oracle suite",
    "Gauge independence",
    "Demailly identity table",
    "Limit form",
    "Fibration positivity",
    "Linear-algebra property suite",
};

const double kTimeLimits[kCriterionCount] = {1.0, 30.0, 0, 0, 0, 0, 0, 0, 0, 120.0, 5.0};

std::vector<Vector> sample_points(const Region& region, std::size_t count, std::uint64_t seed) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, i));
    out.push_back(region.sample(rng));
  }
  return out;
}

/// Worst value over a list and the index where it occurs.
struct Worst {
  double value = 0;
  std::string where;
  void update(double v, const std::string& label) {
    if (!(v <= value)) {
      value = v;
      where = label;
    }
  }
};

void criterion_fs(CriterionResult& out) {
  const ChartField analytic = fubini_study_chart(1);
  const ChartField fd = analytic.with_finite_differences();
  Worst wa, wf;
  Json grid = Json::array();
  const Vector v = Vector::Ones(1);
  for (int i = 0; i < 5; ++i) {
    const double radius = 0.9 * i / 4.0;
    for (int k = 0; k < 5; ++k) {
      const double angle = 2.0 * M_PI * k / 5.0;
      Vector z(1);
      z(0) = std::polar(radius, angle);
      const double ha = hsc(analytic, z, v);
      const double hf = hsc(fd, z, v);
      std::ostringstream label;
      label << "z=" << z(0);
      wa.update(std::abs(ha - 2.0), label.str());
      wf.update(std::abs(hf - 2.0), label.str());
      grid.push_back({{"z", to_json(z(0))}, {"h_analytic", ha}, {"h_fd", hf}});
    }
  }
  out.checks.push_back(make_check("analytic |H - 2|", 2.0, wa.value, 1e-5, wa.where));
  out.checks.push_back(make_check("finite-difference |H - 2|", 2.0, wf.value, 1e-3, wf.where));
  out.data["grid"] = grid;
}

void criterion_gr(CriterionResult& out, const AcceptanceOptions& options) {
  const GrassmannChartModel gr = grassmannian_chart(2, 4);
  HscScanOptions scan;
  scan.samples = 2000;
  scan.refine_steps = 200;
  scan.seed = options.seed;
  scan.threads = options.threads;
  const HscScanResult r = hsc_extremes(gr.metric, Region::polydisc(4, 0.7), scan);
  const double lo = 2.0 / 4.0, hi = 2.0;
  out.checks.push_back(make_check("min H = 2/k^2", r.min_h, std::abs(r.min_h - lo), 0.025));
  out.checks.push_back(make_check("max H = 2", r.max_h, std::abs(r.max_h - hi), 0.02));
  const double outside = std::max({0.0, (lo - 1e-3) - r.sample_min, r.sample_max - (hi + 1e-3),
                                   (lo - 1e-3) - r.min_h, r.max_h - (hi + 1e-3)});
  out.checks.push_back(make_check("samples within [2/k^2 - 1e-3, 2 + 1e-3]", r.sample_min, outside, 0.0));
  out.checks.push_back(make_flag("no skipped sample points", r.failed_points == 0, static_cast<double>(r.failed_points)));
  out.data = {{"min_h", r.min_h},
              {"max_h", r.max_h},
              {"sample_min", r.sample_min},
              {"sample_max", r.sample_max},
              {"argmin_point", to_json(r.argmin_point)},
              {"argmin_direction", to_json(r.argmin_direction)},
              {"samples", r.samples},
              {"region", r.region},
              {"seed", r.seed}};
}

void criterion_einstein(CriterionResult& out, const AcceptanceOptions& options) {
  struct Case {
    std::string name;
    ChartField metric;
    double n;
    Region region;
  };
  const std::vector<Case> cases = {
      {"P^1", fubini_study_chart(1), 2, Region::polydisc(1, 0.9)},
      {"P^2", fubini_study_chart(2), 3, Region::polydisc(2, 0.9)},
      {"Gr(2,4)", grassmannian_chart(2, 4).metric, 4, Region::polydisc(4, 0.7)},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto points = sample_points(cases[i].region, 10, derive_seed(options.seed, 300 + i));
    const double res = einstein_residual(cases[i].metric, cases[i].n, points);
    out.checks.push_back(make_check("Ric = n omega on " + cases[i].name, cases[i].n, res, 1e-6));
  }
}

void criterion_pluecker(CriterionResult& out, const AcceptanceOptions& options) {
  const ChartField chart = grassmannian_chart(2, 4).metric;
  const ChartField pl = pluecker_pullback(2, 4);
  Worst w;
  for (const auto& z : sample_points(Region::polydisc(4, 0.7), 20, derive_seed(options.seed, 400))) {
    const Matrix a = chart.value(z), b = pl.value(z);
    w.update((a - b).norm() / a.norm(), "");
  }
  out.checks.push_back(make_check("|G_pluecker - G_chart| / |G_chart|", 0, w.value, 1e-8));
}

struct SeqInstance {
  std::string label;
  ExactSeqChart seq;
  Vector z;
};

std::vector<SeqInstance> codazzi_suite(std::uint64_t seed) {
  std::vector<SeqInstance> out;
  out.push_back({"O(-1) at 0", o_minus_one_sequence(), Vector::Zero(1)});
  for (int i = 0; i < 16; ++i) {
    Rng rng(derive_seed(seed, 500 + static_cast<std::uint64_t>(i)));
    const Index m = rng.integer(1, 2), r = rng.integer(2, 4);
    const Index k = rng.integer(1, static_cast<int>(std::min<Index>(2, r - 1)));
    const bool constant_j = i % 2 == 0;
    std::ostringstream label;
    label << "random m=" << m << " r=" << r << " k=" << k << (constant_j ? " constant j" : " affine j");
    out.push_back({label.str(), random_sequence(rng.engine()(), m, r, k, constant_j), rng.in_ball(Vector::Zero(m), 0.3)});
  }
  for (int i = 0; i < 8; ++i) {
    Rng rng(derive_seed(seed, 600 + static_cast<std::uint64_t>(i)));
    const Index m = rng.integer(1, 2);
    std::ostringstream label;
    label << "degenerate m=" << m << " r=4";
    out.push_back({label.str(), random_degenerate_sequence(rng.engine()(), m, 4), rng.in_ball(Vector::Zero(m), 0.3)});
  }
  return out;
}

void criterion_codazzi(CriterionResult& out, const AcceptanceOptions& options) {
  const auto suite = codazzi_suite(options.seed);
  Worst sub, quot;
  Json rows = Json::array();
  for (const auto& inst : suite) {
    const CodazziCheck c = codazzi_check(inst.seq, inst.z);
    sub.update(c.sub_residual, inst.label);
    quot.update(c.quot_residual, inst.label);
    rows.push_back({{"instance", inst.label}, {"sub_residual", c.sub_residual}, {"quot_residual", c.quot_residual}});
  }
  const CodazziCheck o = codazzi_check(suite.front().seq, suite.front().z);
  const std::pair<const char*, cd> closed_form[] = {
      {"O(-1): intrinsic R_S(0) = -1", o.sub_direct(0, 0, 0, 0) + 1.0},
      {"O(-1): formula R_S(0) = -1", o.sub_formula(0, 0, 0, 0) + 1.0},
      {"O(-1): intrinsic R_Q(0) = +1", o.quot_direct(0, 0, 0, 0) - 1.0},
      {"O(-1): formula R_Q(0) = +1", o.quot_formula(0, 0, 0, 0) - 1.0},
  };
  for (const auto& [name, diff] : closed_form) out.checks.push_back(make_check(name, 0, std::abs(diff), 1e-4));
  out.checks.push_back(make_check("sub formula vs intrinsic b_S curvature", 0, sub.value, 1e-4, sub.where));
  out.checks.push_back(make_check("quotient formula vs intrinsic b_Q curvature", 0, quot.value, 1e-4, quot.where));
  out.data["instances"] = rows;
}

void criterion_sum(CriterionResult& out, const AcceptanceOptions& options) {
  Worst w;
  Json rows = Json::array();
  for (int i = 0; i < 25; ++i) {
    Rng rng(derive_seed(options.seed, 700 + static_cast<std::uint64_t>(i)));
    const bool degenerate = i < 12;
    const Index m = rng.integer(1, 2);
    const Index r = degenerate ? 4 : rng.integer(1, 4);
    const auto pair = random_sum_pair(rng.engine()(), m, r, degenerate);
    const Vector z = rng.in_ball(Vector::Zero(m), 0.3);
    const SumCurvatureResult s = sum_curvature(pair.first, pair.second, z);
    std::ostringstream label;
    label << (degenerate ? "degenerate" : "positive") << " m=" << m << " r=" << r;
    w.update(s.residual, label.str());
    rows.push_back({{"instance", label.str()}, {"residual", s.residual}});
  }
  out.checks.push_back(make_check("sum formula vs curvature of b1 + b2", 0, w.value, 1e-4, w.where));
  out.data["instances"] = rows;
}

/// G = diag(e^{|z|^2}, 0) on a chart of dimension m.
ChartField diagonal_degenerate_field(Index m) {
  Matrix m0(1, 2);
  m0 << 1.0, 0.0;
  std::vector<Matrix> m1(static_cast<std::size_t>(m), Matrix::Zero(1, 2));
  return analytic_field_from_factors({{m0, m1}}, {1.0}, {Vector::Zero(m)}, 0.8);
}

void criterion_gauge(CriterionResult& out, const AcceptanceOptions& options) {
  Worst w;
  Json rows = Json::array();
  for (int i = 0; i < 20; ++i) {
    Rng rng(derive_seed(options.seed, 800 + static_cast<std::uint64_t>(i)));
    const Index m = rng.integer(1, 2);
    const bool diagonal = i < 10;
    const ChartField field =
        diagonal ? diagonal_degenerate_field(m) : random_degenerate_sequence(rng.engine()(), m, 4).ambient();
    const Vector z = rng.in_ball(Vector::Zero(m), 0.3);
    const auto k = random_kernel_perturbation(field, rng.engine()(), 1.0);
    const double res = gauge_independence_residual(field, z, k);
    std::ostringstream label;
    label << (diagonal ? "diag(e^{|z|^2}, 0)" : "degenerate rank 2 of 4") << " m=" << m;
    w.update(res, label.str());
    rows.push_back({{"instance", label.str()}, {"residual", res}});
  }
  out.checks.push_back(make_check("|R(A) - R(A + K)| / (1 + |R|)", 0, w.value, 1e-6, w.where));
  out.data["perturbations"] = rows;
}

void criterion_demailly(CriterionResult& out, const AcceptanceOptions& options) {
  std::vector<SeqInstance> suite;
  Vector z0(1);
  z0(0) = cd(0.3, 0.1);
  suite.push_back({"O(-1) at 0.3+0.1i", o_minus_one_sequence(), z0});
  for (int i = 0; i < 16; ++i) {
    Rng rng(derive_seed(options.seed, 900 + static_cast<std::uint64_t>(i)));
    const Index m = rng.integer(1, 2), r = rng.integer(2, 4);
    const Index k = rng.integer(1, static_cast<int>(std::min<Index>(2, r - 1)));
    const bool constant_j = i < 10;
    std::ostringstream label;
    label << "random m=" << m << " r=" << r << " k=" << k << (constant_j ? " constant j" : " affine j");
    suite.push_back({label.str(), random_sequence(rng.engine()(), m, r, k, constant_j), rng.in_ball(Vector::Zero(m), 0.3)});
  }
  for (int i = 0; i < 4; ++i) {
    Rng rng(derive_seed(options.seed, 950 + static_cast<std::uint64_t>(i)));
    const Index m = rng.integer(1, 2);
    suite.push_back({"degenerate r=4", random_degenerate_sequence(rng.engine()(), m, 4), rng.in_ball(Vector::Zero(m), 0.3)});
  }
  std::array<Worst, 5> worst;
  Json rows = Json::array();
  for (const auto& inst : suite) {
    const DemaillyReport rep = demailly_residuals(inst.seq, inst.z);
    Json line = Json::array();
    for (std::size_t l = 0; l < 5; ++l) {
      worst[l].update(rep.residuals[l], inst.label);
      line.push_back(rep.residuals[l]);
    }
    rows.push_back({{"instance", inst.label}, {"residuals", line}});
  }
  for (std::size_t l = 0; l < 5; ++l)
    out.checks.push_back(make_check(DemaillyReport::names[l], 0, worst[l].value, 1e-5, worst[l].where));
  out.data["instances"] = rows;
}

void criterion_limit(CriterionResult& out, const AcceptanceOptions& options) {
  const std::vector<double> lambdas = {2, 4, 6, 8};
  const double expected = std::exp(-2.0);

  const FibrationModel hirz = hirzebruch_model(1);
  Worst ratio_dev, proj;
  double min_ratio = 1e300, max_ratio = 0;
  Json rows = Json::array();
  for (const auto& z : sample_points(hirz.region, 10, derive_seed(options.seed, 1000))) {
    const LimitRecord rec = q_lambda_limit(hirz, z, lambdas);
    for (double r : rec.ratios) {
      ratio_dev.update(std::abs(r / expected - 1.0), "Hirzebruch(1)");
      min_ratio = std::min(min_ratio, r);
      max_ratio = std::max(max_ratio, r);
    }
    proj.update(rec.projection_residual, "Hirzebruch(1)");
    rows.push_back({{"model", hirz.name}, {"z", to_json(z)}, {"errors", rec.errors}, {"ratios", rec.ratios},
                    {"projection_residual", rec.projection_residual}});
  }

  // On the product model b1 and b2 have complementary supports, so
  // q_lambda = q_inf = 0 for every lambda and there is no ratio to measure.
  const FibrationModel prod = product_model(fubini_study_chart(1), fubini_study_chart(1), Region::ball(2, 0.7));
  double prod_q = 0;
  for (const auto& z : sample_points(prod.region, 10, derive_seed(options.seed, 1001))) {
    const LimitRecord rec = q_lambda_limit(prod, z, lambdas);
    for (double e : rec.errors) prod_q = std::max(prod_q, e);
    prod_q = std::max(prod_q, rec.q_infinity.norm());
    proj.update(rec.projection_residual, "product");
  }

  out.checks.push_back(make_check("Hirzebruch(1): |ratio / e^-2 - 1|", max_ratio, ratio_dev.value, 0.2,
                                  "ratios in [" + std::to_string(min_ratio) + ", " + std::to_string(max_ratio) + "]"));
  out.checks.push_back(make_check("q_inf = (j j^dagger)^* b1", 0, proj.value, 1e-8, proj.where));
  out.checks.push_back(make_check("product model: q_lambda = q_inf = 0", 0, prod_q, 1e-12));
  out.data["points"] = rows;
}

void criterion_fibration(CriterionResult& out, const AcceptanceOptions& options) {
  LambdaScanOptions scan;
  scan.seed = options.seed;
  scan.threads = options.threads;
  const std::vector<std::pair<std::string, FibrationModel>> models = {
      {"product FS x FS", product_model(fubini_study_chart(1), fubini_study_chart(1), Region::ball(2, 0.7))},
      {"Hirzebruch(1)", hirzebruch_model(1)},
  };
  Json rows = Json::array();
  for (const auto& [name, model] : models) {
    const LambdaScanResult r = find_lambda0(model, scan);
    out.checks.push_back(make_flag(name + ": finite lambda0", r.lambda0.has_value(), r.lambda0.value_or(NAN)));
    out.checks.push_back(make_flag(name + ": H > 0 for lambda >= lambda0, stable under doubling", r.stable,
                                   r.lambda0.value_or(NAN)));
    Json records = Json::array();
    for (const auto& rec : r.records)
      records.push_back({{"lambda", rec.lambda}, {"min_h", rec.min_h}, {"passed", rec.passed}});
    Json stability = Json::array();
    for (const auto& rec : r.stability)
      stability.push_back({{"lambda", rec.lambda}, {"min_h", rec.min_h}, {"positive", rec.positive}});
    Json row = {{"model", name}, {"region", r.region}, {"seed", r.seed}, {"points", r.points},
                {"directions", r.directions}, {"records", records}, {"stability", stability}};
    row["lambda0"] = r.lambda0 ? Json(*r.lambda0) : Json(nullptr);
    if (r.bisection) row["bisection"] = {{"lambda", r.bisection->lambda}, {"min_h", r.bisection->min_h}};
    rows.push_back(row);
  }
  out.data["models"] = rows;
}

void criterion_properties(CriterionResult& out, const AcceptanceOptions& options) {
  struct Prop {
    const char* name;
    PropertyResult (*run)(std::size_t, std::uint64_t);
    double tol;
  };
  const Prop props[] = {
      {"adjoint identity", adjoint_identity_property, 1e-9},
      {"adjoint torsor", torsor_property, 1e-10},
      {"double adjoint", double_adjoint_property, 1e-9},
      {"S + S^perp = V, S cap S^perp = S cap Ker b", complement_property, 1e-9},
      {"quotient form independent of lift", quotient_lift_property, 1e-10},
      {"sum quotient form kernel containments", kernel_containment_property, 1e-10},
      {"purge is a Hermitian morphism", purge_property, 1e-10},
  };
  std::uint64_t k = 0;
  for (const auto& p : props) {
    const PropertyResult r = p.run(100, derive_seed(options.seed, 1100 + k++));
    out.checks.push_back(make_check(std::string(p.name) + " (worst residual)", r.worst, r.worst, p.tol));
    out.checks.push_back(make_flag(std::string(p.name) + " (dimension counts)", r.failures == 0,
                                   static_cast<double>(r.failures)));
  }
}

}  // namespace

Json CriterionResult::to_json() const {
  Json checks_json = Json::array();
  for (const auto& c : checks) checks_json.push_back(hermitia::to_json(c));
  Json j{{"number", number}, {"title", title}, {"pass", pass()}, {"seconds", seconds},
         {"checks", checks_json}, {"data", data}};
  if (time_limit > 0) j["time_limit_s"] = time_limit;
  return j;
}

std::string criterion_title(int number) {
  if (number < 1 || number > kCriterionCount)
    throw GeometryError(ErrorKind::ConfigError, "criterion number must be in 1.." + std::to_string(kCriterionCount));
  return kTitles[number - 1];
}

CriterionResult run_criterion(int number, const AcceptanceOptions& options) {
  CriterionResult out;
  out.number = number;
  out.title = criterion_title(number);
  out.time_limit = kTimeLimits[number - 1];
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (number) {
      case 1: criterion_fs(out); break;
      case 2: criterion_gr(out, options); break;
      case 3: criterion_einstein(out, options); break;
      case 4: criterion_pluecker(out, options); break;
      case 5: criterion_codazzi(out, options); break;
      case 6: criterion_sum(out, options); break;
      case 7: criterion_gauge(out, options); break;
      case 8: criterion_demailly(out, options); break;
      case 9: criterion_limit(out, options); break;
      case 10: criterion_fibration(out, options); break;
      case 11: criterion_properties(out, options); break;
    }
  } catch (const GeometryError& e) {
    out.checks.push_back(make_flag("completed without error", false, 0, std::string(to_string(e.kind())) + ": " + e.what()));
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out.time_limit > 0)
    out.checks.push_back(make_check("runtime (s)", out.seconds, out.seconds, out.time_limit));
  return out;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> out;
  for (int n = 1; n <= kCriterionCount; ++n) out.push_back(run_criterion(n, options));
  return out;
}

std::string summary_line(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.pass() ? "[PASS] " : "[FAIL] ") << std::setw(2) << r.number << " " << r.title << "  ("
    << std::fixed << std::setprecision(2) << r.seconds << " s)";
  for (const auto& c : r.checks) {
    if (c.pass) continue;
    s << "\n         failed: " << c.name << "  value=" << std::setprecision(6) << std::defaultfloat << c.value
      << " residual=" << c.residual << " tol=" << c.tolerance;
    if (!c.note.empty()) s << "  (" << c.note << ")";
  }
  return s.str();
}

}  // namespace hermitia

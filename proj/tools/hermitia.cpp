// hermitia: batch front end for the checks and scans of the library.
//
//   hermitia <command> [options]
//
// Commands: purge, adjoint, curvature, hsc, grassmannian, codazzi-check,
// demailly-check, sum-check, fibration-scan, acceptance. Options may also come
// from a key=value file given with --config; flags on the command line win.
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error,
// 3 internal error.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hermitia/acceptance.hpp"
#include "hermitia/fibration.hpp"
#include "hermitia/herm_core.hpp"
#include "hermitia/models.hpp"
#include "hermitia/properties.hpp"
#include "hermitia/report.hpp"
#include "hermitia/sequences.hpp"

using namespace hermitia;

namespace {

struct RunConfig {
  std::string command;
  std::string model;
  std::uint64_t seed = 1;
  std::size_t samples = 0;
  std::string region;
  double lambda_max = 12;
  std::optional<double> tol;
  std::string derivatives = "analytic";
  std::string out;
  unsigned threads = 1;
  std::size_t instances = 0;
  Index dim_v = 2, dim_w = 1;
  std::string demo = "degenerate";
  std::string point, direction;
  int criterion = 0;

  Json to_json() const {
    Json j{{"command", command}, {"seed", seed}, {"derivatives", derivatives}, {"threads", threads}};
    if (!model.empty()) j["model"] = model;
    if (samples > 0) j["samples"] = samples;
    if (!region.empty()) j["region"] = region;
    if (tol) j["tol"] = *tol;
    if (instances > 0) j["instances"] = instances;
    if (!point.empty()) j["point"] = point;
    if (!direction.empty()) j["direction"] = direction;
    if (command == "fibration-scan") j["lambda_max"] = lambda_max;
    if (command == "purge" || command == "adjoint") {
      j["dimV"] = dim_v;
      j["dimW"] = dim_w;
      j["demo"] = demo;
    }
    if (command == "acceptance" && criterion > 0) j["criterion"] = criterion;
    return j;
  }
};

[[noreturn]] void config_error(const std::string& what) { throw GeometryError(ErrorKind::ConfigError, what); }

double tolerance(const RunConfig& cfg, double fallback) { return cfg.tol.value_or(fallback); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

/// Comma-separated entries, each "re" or "re:im".
Vector parse_vector(const std::string& text, Index expected, const char* what) {
  std::vector<cd> entries;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto colon = item.find(':');
    try {
      std::size_t used = 0;
      const double re = std::stod(item.substr(0, colon), &used);
      if (used != (colon == std::string::npos ? item.size() : colon)) throw std::invalid_argument(item);
      double im = 0;
      if (colon != std::string::npos) {
        const std::string tail = item.substr(colon + 1);
        im = std::stod(tail, &used);
        if (used != tail.size()) throw std::invalid_argument(item);
      }
      entries.emplace_back(re, im);
    } catch (const std::exception&) {
      config_error(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  if (static_cast<Index>(entries.size()) != expected)
    config_error(std::string(what) + " needs " + std::to_string(expected) + " entries");
  return Eigen::Map<Vector>(entries.data(), expected);
}

/// "polydisc:R" or "ball:R"; empty keeps the model default.
Region parse_region(const std::string& text, const Region& fallback) {
  if (text.empty()) return fallback;
  const auto colon = text.find(':');
  const std::string shape = text.substr(0, colon);
  double radius = 0;
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    radius = std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    config_error("region must look like polydisc:R or ball:R, got '" + text + "'");
  }
  if (!(radius >= 0)) config_error("region radius must be non-negative");
  const Index dim = fallback.center.size();
  if (shape == "polydisc") return Region::polydisc(dim, radius);
  if (shape == "ball") return Region::ball(dim, radius);
  config_error("unknown region shape '" + shape + "'");
}

ChartField with_mode(const ChartField& field, const RunConfig& cfg) {
  return cfg.derivatives == "fd" ? field.with_finite_differences() : field;
}

Model model_of(const RunConfig& cfg, const std::string& fallback) {
  return resolve_model(cfg.model.empty() ? fallback : cfg.model);
}

// ---------------------------------------------------------------- commands

/// Demo pair on C^dimV: "degenerate" is diag(1, 0, ..., 0), "random" a seeded
/// positive semidefinite form of rank dimV - 1, "nondegenerate" the identity.
HermitianFormd demo_form(const RunConfig& cfg, Index dim, Rng& rng) {
  if (cfg.demo == "degenerate") {
    Matrix g = Matrix::Zero(dim, dim);
    g(0, 0) = 1.0;
    return HermitianFormd(g);
  }
  if (cfg.demo == "random") return HermitianFormd(random_form(rng, dim, std::max<Index>(dim - 1, 1), false));
  if (cfg.demo == "nondegenerate") return HermitianFormd::identity(dim);
  config_error("unknown demo '" + cfg.demo + "' (degenerate, random, nondegenerate)");
}

void check_dims(const RunConfig& cfg) {
  if (cfg.dim_v < 1 || cfg.dim_w < 1 || cfg.dim_v > 64 || cfg.dim_w > 64) config_error("dimV and dimW must be in 1..64");
}

Report run_purge(const RunConfig& cfg) {
  check_dims(cfg);
  Rng rng(cfg.seed);
  const HermitianFormd b = demo_form(cfg, cfg.dim_v, rng);
  const auto p = purge(b);
  const double tol = tolerance(cfg, 1e-10);
  Report r;
  const Matrix back = p.quotient_map.matrix.adjoint() * p.purged_form.gram() * p.quotient_map.matrix;
  r.checks.push_back(make_check("q^* b_hat q = G", 0, (back - b.gram()).norm() / (1.0 + b.gram().norm()), tol));
  r.checks.push_back(make_flag("purged form is nondegenerate", p.purged_form.nondegenerate()));
  r.data = {{"gram", to_json(b.gram())},
            {"kernel_dim", b.dim() - b.rank()},
            {"quotient_map", to_json(p.quotient_map.matrix)},
            {"purged_form", to_json(p.purged_form.gram())}};
  return r;
}

Report run_adjoint(const RunConfig& cfg) {
  check_dims(cfg);
  Rng rng(cfg.seed);
  const HermitianFormd bv = demo_form(cfg, cfg.dim_v, rng);
  const HermitianFormd bw = cfg.demo == "random" ? HermitianFormd(random_form(rng, cfg.dim_w, cfg.dim_w, false))
                                                 : HermitianFormd::identity(cfg.dim_w);
  // f = [I 0] for the fixed demos; for "random" an adjointable map killing Ker bV.
  Matrix f = Matrix::Zero(cfg.dim_w, cfg.dim_v);
  if (cfg.demo == "random") {
    const Matrix kv = bv.spectrum().kernel;
    f = rng.matrix(cfg.dim_w, cfg.dim_v) * (Matrix::Identity(cfg.dim_v, cfg.dim_v) - kv * kv.adjoint());
  } else {
    for (Index i = 0; i < std::min(cfg.dim_v, cfg.dim_w); ++i) f(i, i) = 1.0;
  }
  const LinearMapd fm(f);
  const auto dims = adjoint_freedom_dims(fm, bv, bw);
  Report r;
  r.data = {{"bV", to_json(bv.gram())}, {"bW", to_json(bw.gram())}, {"f", to_json(f)},
            {"adjointable_codim", dims.adjointable_codim}, {"computed_codim", dims.computed_codim}};
  r.checks.push_back(make_flag("codimension formula matches the rank computation",
                               dims.adjointable_codim == dims.computed_codim,
                               static_cast<double>(dims.computed_codim)));
  r.checks.push_back(make_flag("f admits an adjoint", admits_adjoint(fm, bv, bw)));
  if (!r.checks.back().pass) return r;
  const Matrix fd = adjoint(fm, bv, bw).matrix;
  const Matrix lhs = bv.gram() * fd, rhs = f.adjoint() * bw.gram();
  const double scale = 1.0 + bv.gram().norm() * fd.norm() + f.norm() * bw.gram().norm();
  r.checks.push_back(make_check("b_V(f^dagger x, y) = b_W(x, f y)", 0, (lhs - rhs).norm() / scale, tolerance(cfg, 1e-10)));
  r.data["f_dagger"] = to_json(fd);
  r.data["torsor_dim"] = *dims.torsor_dim;
  return r;
}

Report run_curvature(const RunConfig& cfg) {
  const Model model = model_of(cfg, "fs:1");
  const ChartField metric = with_mode(model.metric, cfg);
  const Index m = metric.chart_dim();
  Rng rng(cfg.seed);
  const Region region = parse_region(cfg.region, model.region);
  const Vector z = cfg.point.empty() ? region.sample(rng) : parse_vector(cfg.point, m, "point");
  const Vector v = cfg.direction.empty() ? rng.unit_vector(m) : parse_vector(cfg.direction, m, "direction");

  const ConnectionAt conn = chern_connection(metric, z);
  const CurvatureAt c = curvature_tensor(metric, z);
  Report r;
  r.checks.push_back(make_check("connection compatibility G A = dG", 0, conn.residual, kSolverTol));
  r.checks.push_back(make_check("pair symmetry of R", 0, c.r.pair_symmetry_defect(), tolerance(cfg, 1e-6)));
  if (metric.mode() == DerivativeMode::Analytic) {
    const double diff = relative_difference(curvature_tensor(metric.with_finite_differences(), z).r, c.r);
    r.checks.push_back(make_check("analytic vs finite-difference curvature", 0, diff, 1e-4));
  }
  const double h = hsc(c.r, c.form_at_point.gram(), v);
  Json blocks = Json::array();
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) blocks.push_back({{"alpha", a}, {"beta", b}, {"gram", to_json(c.r.block(a, b))}});
  r.data = {{"point", to_json(z)}, {"direction", to_json(v)}, {"gram", to_json(c.form_at_point.gram())},
            {"hsc", h}, {"torsion_defect", torsion_defect(metric, z)}, {"curvature_blocks", blocks}};
  return r;
}

Report run_hsc(const RunConfig& cfg) {
  const Model model = model_of(cfg, "fs:1");
  HscScanOptions opt;
  if (cfg.samples > 0) opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  const Region region = parse_region(cfg.region, model.region);
  const HscScanResult s = hsc_extremes(with_mode(model.metric, cfg), region, opt);
  const double tol = tolerance(cfg, 1e-5);
  Report r;
  r.data = {{"min_h", s.min_h}, {"max_h", s.max_h}, {"sample_min", s.sample_min}, {"sample_max", s.sample_max},
            {"argmin_point", to_json(s.argmin_point)}, {"argmin_direction", to_json(s.argmin_direction)},
            {"argmax_point", to_json(s.argmax_point)}, {"argmax_direction", to_json(s.argmax_direction)},
            {"samples", s.samples}, {"failed_points", s.failed_points}, {"region", s.region}, {"seed", s.seed}};
  r.checks.push_back(make_flag("no skipped sample points", s.failed_points == 0, static_cast<double>(s.failed_points)));
  if (model.hsc_bounds) {
    const auto [lo, hi] = *model.hsc_bounds;
    r.data["claimed_bounds"] = {lo, hi};
    r.checks.push_back(make_check("H >= lower bound", s.min_h, std::max(0.0, lo - s.min_h), tol));
    r.checks.push_back(make_check("H <= upper bound", s.max_h, std::max(0.0, s.max_h - hi), tol));
    r.checks.push_back(make_check("lower bound attained", s.min_h, std::abs(s.min_h - lo), tol));
    r.checks.push_back(make_check("upper bound attained", s.max_h, std::abs(s.max_h - hi), tol));
  }
  return r;
}

Report run_grassmannian(const RunConfig& cfg) {
  const std::string id = cfg.model.empty() ? "gr:2:4" : cfg.model;
  const Model model = resolve_model(id);
  if (id.rfind("gr:", 0) != 0) config_error("grassmannian needs a model id gr:K:N");
  const Index k = std::stol(id.substr(3, id.find(':', 3) - 3));
  const Index n = std::stol(id.substr(id.find(':', 3) + 1));
  const ChartField chart = with_mode(model.metric, cfg);
  const ChartField pl = pluecker_pullback(k, n);
  const Region region = parse_region(cfg.region, model.region);
  Rng rng(cfg.seed);
  const std::size_t count = cfg.samples > 0 ? cfg.samples : 10;
  std::vector<Vector> pts;
  for (std::size_t i = 0; i < count; ++i) pts.push_back(region.sample(rng));
  double plucker_gap = 0;
  for (const auto& z : pts)
    plucker_gap = std::max(plucker_gap, (chart.value(z) - pl.value(z)).norm() / chart.value(z).norm());
  Report r;
  r.checks.push_back(make_check("Einstein Ric = n omega", static_cast<double>(n),
                                einstein_residual(chart, static_cast<double>(n), pts), tolerance(cfg, 1e-6)));
  r.checks.push_back(make_check("chart metric = Pluecker pullback", 0, plucker_gap, 1e-8));
  r.data = {{"k", k}, {"n", n}, {"points", pts.size()}, {"region", region.describe()}};
  return r;
}

std::size_t instances_or(const RunConfig& cfg, std::size_t fallback) {
  return cfg.instances > 0 ? cfg.instances : fallback;
}

/// Random sequences (constant and affine inclusions) alternating with
/// degenerate-ambient ones, evaluated at seeded points of the 0.3 ball.
template <typename Fn>
void for_each_sequence(const RunConfig& cfg, std::size_t count, Fn&& fn) {
  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = cfg.seed * 1000 + i;
    const Index m = 1 + static_cast<Index>(i % 2);
    ExactSeqChart seq = i % 3 == 2 ? random_degenerate_sequence(s, m, 4)
                                   : random_sequence(s, m, 3 + static_cast<Index>(i % 2), 1 + static_cast<Index>(i % 2),
                                                     i % 3 == 0);
    const Vector z = rng.in_ball(Vector::Zero(m), 0.3);
    fn(i, seq, z);
  }
}

Report run_codazzi(const RunConfig& cfg) {
  const double tol = tolerance(cfg, 1e-4);
  Report r;
  Json rows = Json::array();
  for_each_sequence(cfg, instances_or(cfg, 10), [&](std::size_t i, const ExactSeqChart& seq, const Vector& z) {
    const CodazziCheck c = codazzi_check(seq, z);
    r.checks.push_back(make_check("instance " + std::to_string(i) + " R_S", 0, c.sub_residual, tol));
    r.checks.push_back(make_check("instance " + std::to_string(i) + " R_Q", 0, c.quot_residual, tol));
    rows.push_back({{"point", to_json(z)}, {"sub_residual", c.sub_residual}, {"quot_residual", c.quot_residual}});
  });
  r.data = {{"instances", rows}};
  return r;
}

Report run_demailly(const RunConfig& cfg) {
  const double tol = tolerance(cfg, 1e-5);
  Report r;
  Json rows = Json::array();
  for_each_sequence(cfg, instances_or(cfg, 10), [&](std::size_t i, const ExactSeqChart& seq, const Vector& z) {
    const DemaillyReport d = demailly_residuals(seq, z);
    Json lines = Json::array();
    for (std::size_t l = 0; l < d.residuals.size(); ++l) {
      r.checks.push_back(make_check("instance " + std::to_string(i) + " " + DemaillyReport::names[l], 0, d.residuals[l], tol));
      lines.push_back(d.residuals[l]);
    }
    rows.push_back({{"point", to_json(z)}, {"residuals", lines}});
  });
  r.data = {{"instances", rows}};
  return r;
}

Report run_sum(const RunConfig& cfg) {
  const double tol = tolerance(cfg, 1e-4);
  Rng rng(cfg.seed);
  Report r;
  Json rows = Json::array();
  const std::size_t count = instances_or(cfg, 10);
  for (std::size_t i = 0; i < count; ++i) {
    const bool degenerate = i % 2 == 1;
    const auto pair = random_sum_pair(cfg.seed * 1000 + i, 2, degenerate ? 4 : 3, degenerate);
    const Vector z = rng.in_ball(Vector::Zero(2), 0.3);
    const SumCurvatureResult s = sum_curvature(pair.first, pair.second, z);
    r.checks.push_back(make_check("instance " + std::to_string(i) + " formula vs direct", 0, s.residual, tol));
    rows.push_back({{"point", to_json(z)}, {"degenerate", degenerate}, {"residual", s.residual}});
  }
  r.data = {{"instances", rows}};
  return r;
}

Json record_json(const LambdaRecord& rec) {
  return {{"lambda", rec.lambda}, {"min_h", rec.min_h}, {"positive_definite", rec.positive_definite},
          {"passed", rec.passed}, {"positive", rec.positive}, {"argmin_point", to_json(rec.argmin_point)},
          {"argmin_direction", to_json(rec.argmin_direction)}};
}

Report run_fibration(const RunConfig& cfg) {
  const Model model = model_of(cfg, "hirz:1");
  if (!model.fibration) config_error("model '" + model.id + "' is not a fibration (use prod:fs1:fs1 or hirz:K)");
  FibrationModel fib = *model.fibration;
  fib.region = parse_region(cfg.region, fib.region);
  if (cfg.derivatives == "fd") {
    fib.b1 = fib.b1.with_finite_differences();
    fib.b2 = fib.b2.with_finite_differences();
  }
  if (!(cfg.lambda_max >= 0) || cfg.lambda_max > 60) config_error("lambda-max must be in [0, 60]");
  LambdaScanOptions opt;
  opt.schedule.clear();
  for (int l = 0; l <= static_cast<int>(std::floor(cfg.lambda_max)); ++l) opt.schedule.push_back(l);
  if (cfg.samples > 0) opt.points = cfg.samples;
  if (cfg.tol) opt.margin = *cfg.tol;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  const LambdaScanResult s = find_lambda0(fib, opt);
  Report r;
  r.checks.push_back(make_flag("lambda0 found", s.lambda0.has_value(), s.lambda0.value_or(NAN)));
  r.checks.push_back(make_flag("H > 0 for every lambda >= lambda0 (both scans)", s.stable));
  Json recs = Json::array(), stab = Json::array();
  for (const auto& rec : s.records) recs.push_back(record_json(rec));
  for (const auto& rec : s.stability) stab.push_back(record_json(rec));
  r.data = {{"lambda0", s.lambda0 ? Json(*s.lambda0) : Json(nullptr)}, {"margin", opt.margin}, {"records", recs},
            {"stability", stab}, {"points", s.points}, {"directions", s.directions}, {"region", s.region},
            {"seed", s.seed}};
  if (s.bisection) r.data["bisection"] = record_json(*s.bisection);
  return r;
}

Report run_acceptance_command(const RunConfig& cfg) {
  AcceptanceOptions opt;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  std::vector<CriterionResult> results;
  if (cfg.criterion > 0) {
    criterion_title(cfg.criterion);
    results.push_back(run_criterion(cfg.criterion, opt));
  } else {
    results = run_acceptance(opt);
  }
  Report r;
  Json crit = Json::array();
  for (const auto& c : results) {
    r.checks.push_back(make_flag("criterion " + std::to_string(c.number) + ": " + c.title, c.pass()));
    crit.push_back(c.to_json());
    std::cout << summary_line(c) << "\n";
  }
  r.data = {{"criteria", crit}};
  return r;
}

Report dispatch(const RunConfig& cfg) {
  if (cfg.command == "purge") return run_purge(cfg);
  if (cfg.command == "adjoint") return run_adjoint(cfg);
  if (cfg.command == "curvature") return run_curvature(cfg);
  if (cfg.command == "hsc") return run_hsc(cfg);
  if (cfg.command == "grassmannian") return run_grassmannian(cfg);
  if (cfg.command == "codazzi-check") return run_codazzi(cfg);
  if (cfg.command == "demailly-check") return run_demailly(cfg);
  if (cfg.command == "sum-check") return run_sum(cfg);
  if (cfg.command == "fibration-scan") return run_fibration(cfg);
  if (cfg.command == "acceptance") return run_acceptance_command(cfg);
  config_error("unknown command '" + cfg.command + "'");
}

// ------------------------------------------------------------------ output

std::string short_matrix(const Json& m) {
  std::ostringstream s;
  s << "(";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s << "; ";
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (j) s << ", ";
      const double re = m[i][j][0], im = m[i][j][1];
      s << re;
      if (im != 0) s << (im < 0 ? "-" : "+") << std::abs(im) << "i";
    }
  }
  s << ")";
  return s.str();
}

void print_table(const Report& r) {
  std::cout << "hermitia " << r.command << "\n";
  if (r.data.contains("f_dagger")) {
    std::cout << "  f^dagger = " << short_matrix(r.data["f_dagger"]) << "\n";
    std::cout << "  torsor dim = " << r.data["torsor_dim"].get<Index>() << "\n";
  }
  for (const char* key : {"kernel_dim", "min_h", "max_h", "hsc", "lambda0"})
    if (r.data.contains(key)) std::cout << "  " << key << " = " << r.data[key].dump() << "\n";
  std::size_t width = 5;
  for (const auto& c : r.checks) width = std::max(width, c.name.size());
  std::cout << "  " << std::left << std::setw(static_cast<int>(width)) << "check" << "  "
            << std::setw(13) << "residual" << std::setw(13) << "tolerance" << "result\n";
  for (const auto& c : r.checks)
    std::cout << "  " << std::setw(static_cast<int>(width)) << c.name << "  " << std::setw(13)
              << std::setprecision(4) << c.residual << std::setw(13) << c.tolerance << (c.pass ? "pass" : "FAIL")
              << "\n";
  std::cout << std::right << (r.pass() ? "PASS" : "FAIL") << "  (" << std::setprecision(3) << r.wall_time << " s)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate Hermitian forms, Chern curvature and HSC checks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; command-line flags override it");

  RunConfig cfg;
  app.add_option("--model", cfg.model, "model id: fs:N, gr:K:N, pl:K:N, flat:N, prod:fs1:fs1, hirz:K");
  app.add_option("--seed", cfg.seed, "RNG seed recorded in the report");
  app.add_option("--samples", cfg.samples, "sample points (hsc, grassmannian, fibration-scan)");
  app.add_option("--region", cfg.region, "polydisc:R or ball:R");
  app.add_option("--lambda-max", cfg.lambda_max, "largest lambda of the integer schedule");
  app.add_option("--tol", cfg.tol, "tolerance for the command's main check");
  app.add_option("--derivatives", cfg.derivatives, "fd or analytic")->check(CLI::IsMember({"fd", "analytic"}));
  app.add_option("--out", cfg.out, "write the JSON report here");
  app.add_option("--threads", cfg.threads, "worker threads for scans")->check(CLI::Range(1u, 256u));
  app.add_option("--instances", cfg.instances, "instances for the oracle suites");
  app.add_option("--dimV", cfg.dim_v, "source dimension (purge, adjoint)");
  app.add_option("--dimW", cfg.dim_w, "target dimension (adjoint)");
  app.add_option("--demo", cfg.demo, "degenerate, random or nondegenerate (purge, adjoint)");
  app.add_option("--point", cfg.point, "chart point, entries re or re:im separated by commas");
  app.add_option("--direction", cfg.direction, "tangent direction, same format as --point");
  app.add_option("--criterion", cfg.criterion, "run one acceptance criterion");

  for (const char* name : {"purge", "adjoint", "curvature", "hsc", "grassmannian", "codazzi-check", "demailly-check",
                           "sum-check", "fibration-scan", "acceptance"})
    app.add_subcommand(name)->callback([&cfg, name] { cfg.command = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    Report report = dispatch(cfg);
    report.command = cfg.command;
    report.config = cfg.to_json();
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!cfg.out.empty()) {
      std::ofstream f(cfg.out);
      if (!f) config_error("cannot write report to '" + cfg.out + "'");
      f << report.to_json().dump(2) << "\n";
    }
    print_table(report);
    return report.pass() ? 0 : 1;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.kind() == ErrorKind::ConfigError) return 2;
    // Geometry failures on user-chosen inputs are failed checks, not crashes.
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

#include "relmech/cli/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "relmech/connections/calculus.hpp"
#include "relmech/frames/frames.hpp"
#include "relmech/integrator/integrator.hpp"

namespace relmech::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Context {
  const Scenario& sc;
  SampleBox box;
  double tol_scale;
  std::filesystem::path out_dir;
};

struct TaskRecord {
  Json results = Json::object();
  Json assertions = Json::array();
  std::vector<std::string> files;
  bool passed = true;

  void check(const std::string& what, double value, const std::string& relation, double tolerance) {
    const bool ok = relation == "<=" ? value <= tolerance : value > tolerance;
    assertions.push_back(Json{{"check", what}, {"value", value}, {"relation", relation},
                              {"tolerance", tolerance}, {"passed", ok}});
    passed = passed && ok;
  }
};

double tolerance(const Context& ctx, const TaskSpec& task, double fallback) {
  return (task.has("tol") ? ctx.sc.number(task.at("tol")) : fallback) * ctx.tol_scale;
}

JetPoint1 point(const Context& ctx, const TaskSpec& task, bool with_velocity = true) {
  const std::size_t m = ctx.sc.dimension;
  JetPoint1 p{ctx.sc.number(task.at("t")), ctx.sc.numbers(task.at("q"), m), {}};
  if (with_velocity) p.v = ctx.sc.numbers(task.at("v"), m);
  return p;
}

Json point_json(const JetPoint1& p) {
  Json j{{"t", p.t}, {"q", p.q}};
  if (!p.v.empty()) j["v"] = p.v;
  return j;
}

Json box_json(const SampleBox& box) {
  return Json{{"t", {box.t.lo, box.t.hi}}, {"q", {box.q.lo, box.q.hi}},
              {"v", {box.v.lo, box.v.hi}}, {"count", box.count}, {"seed", box.seed}};
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

double max_abs(const std::vector<double>& a) {
  double r = 0.0;
  for (double x : a) r = std::max(r, std::abs(x));
  return r;
}

// |a - b| scaled by max(1, |b|), maximised over components.
double scaled_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    r = std::max(r, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  return r;
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const Trajectory& tr, std::size_t m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << "t";
  for (const char* s : {"q", "v", "a"})
    for (std::size_t i = 1; i <= m; ++i) out << ',' << s << i;
  out << '\n';
  for (const auto& s : tr.samples) {
    out << csv_number(s.t);
    for (const auto* block : {&s.q, &s.v, &s.a})
      for (double x : *block) out << ',' << csv_number(x);
    out << '\n';
  }
}

Json trajectory_summary(const Trajectory& tr) {
  const auto& last = tr.samples.back();
  return Json{{"samples", tr.samples.size()}, {"step", tr.step}, {"diverged", tr.diverged},
              {"final", Json{{"t", last.t}, {"q", last.q}, {"v", last.v}, {"a", last.a}}}};
}

void run_transform(const Context& ctx, const TaskSpec& task, TaskRecord& rec) {
  const auto& chart = ctx.sc.charts.at(task.at("chart").value);
  const double tol = tolerance(ctx, task, 1e-10);
  if (task.has("equation")) {
    const auto xi = transform_dynamic_equation(ctx.sc.equations.at(task.at("equation").value), chart);
    if (task.has("t")) {
      const auto p = point(ctx, task);
      rec.results["point"] = point_json(p);
      rec.results["value"] = xi(p);
    }
    if (task.has("reference")) {
      const auto& ref = ctx.sc.equations.at(task.at("reference").value);
      double worst = 0.0;
      for (const auto& p : ctx.box.points(ctx.sc.dimension)) worst = std::max(worst, scaled_diff(xi(p), ref(p)));
      rec.results["max_deviation_from_reference"] = worst;
      rec.check("transformed equation matches reference on the sample box", worst, "<=", tol);
    }
  } else {
    const auto frame = transform_frame(ctx.sc.frames.at(task.at("frame").value), chart);
    if (task.has("t")) {
      const auto p = point(ctx, task, false);
      rec.results["point"] = point_json(p);
      rec.results["value"] = frame(p.t, p.q);
    }
    if (task.has("reference")) {
      const auto& ref = ctx.sc.frames.at(task.at("reference").value);
      double worst = 0.0;
      for (const auto& p : ctx.box.points(ctx.sc.dimension))
        worst = std::max(worst, scaled_diff(frame(p.t, p.q), ref(p.t, p.q)));
      rec.results["max_deviation_from_reference"] = worst;
      rec.check("transformed frame matches reference on the sample box", worst, "<=", tol);
    }
  }
}

void run_coriolis(const Context& ctx, const TaskSpec& task, TaskRecord& rec) {
  const auto& xi = ctx.sc.equations.at(task.at("equation").value);
  const auto& frame = ctx.sc.frames.at(task.at("frame").value);
  const double tol = tolerance(ctx, task, 1e-10);
  const auto p = point(ctx, task);
  const auto r = coriolis_decomposition(xi, frame, p);
  rec.results["point"] = point_json(p);
  rec.results["relative_acceleration"] = r.a_direct;
  rec.results["decomposed"] = r.a_decomposed;
  rec.results["frame_term"] = r.frame_term;
  rec.results["velocity_term"] = r.velocity_term;
  rec.results["relative_velocity"] = r.rel_v;
  rec.results["frame_derivative"] = r.nabla;
  rec.check("|direct - decomposed| at the point", max_abs_diff(r.a_direct, r.a_decomposed), "<=", tol);
  if (task.has("expect")) {
    const auto want = ctx.sc.numbers(task.at("expect"), ctx.sc.dimension);
    rec.check("|relative acceleration - expect|", max_abs_diff(r.a_direct, want), "<=", tol);
  }
  double worst = 0.0;
  for (const auto& q : ctx.box.points(ctx.sc.dimension)) {
    const auto s = coriolis_decomposition(xi, frame, q);
    worst = std::max(worst, scaled_diff(s.a_decomposed, s.a_direct));
  }
  rec.results["max_decomposition_error_on_box"] = worst;
  rec.check("|direct - decomposed| on the sample box", worst, "<=", tol);
}

void run_check_free(const Context& ctx, const TaskSpec& task, TaskRecord& rec) {
  const double tol = tolerance(ctx, task, 1e-8);
  const std::size_t m = ctx.sc.dimension;
  std::optional<DynamicEquation> built;
  if (task.has("equation")) {
    built = ctx.sc.equations.at(task.at("equation").value);
  } else {
    const auto& chart = ctx.sc.charts.at(task.at("chart").value);
    built = free_motion_equation(ctx.sc.frames.at(task.at("frame").value), chart, ctx.box);
    const auto direct = transform_dynamic_equation(DynamicEquation::zero(m), chart);
    double worst = 0.0;
    for (const auto& p : ctx.box.points(m)) worst = std::max(worst, scaled_diff((*built)(p), direct(p)));
    rec.results["max_deviation_from_transformed_free_particle"] = worst;
    rec.check("free motion equation matches the transformed free particle", worst, "<=", 1e-10 * ctx.tol_scale);
  }
  const auto r = free_motion_curvature_test(*built, ctx.box, tol);
  rec.results["max_curvature"] = r.max_curvature;
  rec.results["verdict"] = to_string(r.verdict);
  if (task.has("expect")) {
    const bool passes = task.at("expect").value == "passes";
    rec.check("max curvature", r.max_curvature, passes ? "<=" : ">", tol);
  }
}

void run_integrate(const Context& ctx, const TaskSpec& task, TaskRecord& rec) {
  const std::size_t m = ctx.sc.dimension;
  const auto& xi = ctx.sc.equations.at(task.at("equation").value);
  const JetPoint1 p0{task.has("t0") ? ctx.sc.number(task.at("t0")) : 0.0, ctx.sc.numbers(task.at("q"), m),
                     ctx.sc.numbers(task.at("v"), m)};
  const double t_end = ctx.sc.number(task.at("t_end"));
  const double step = ctx.sc.number(task.at("step"));
  const auto tr = integrate(xi, p0, t_end, step, task.name);
  const auto csv = task.name + ".csv";
  write_csv(tr, m, ctx.out_dir / csv);
  rec.files.push_back(csv);
  rec.results["start"] = point_json(p0);
  rec.results["trajectory"] = trajectory_summary(tr);
  rec.check("integration stayed finite", tr.diverged ? 1.0 : 0.0, "<=", 0.0);
  if (tr.samples.size() >= 3 && !tr.diverged) {
    const double res = trajectory_residual(xi, tr);
    rec.results["residual"] = res;
    rec.results["residual_over_step_squared"] = res / (tr.step * tr.step);
  }
  const double tol = tolerance(ctx, task, 1e-8);
  if (task.has("expect_q"))
    rec.check("|q(t_end) - expect_q|", max_abs_diff(tr.samples.back().q, ctx.sc.numbers(task.at("expect_q"), m)), "<=", tol);
  if (task.has("expect_v"))
    rec.check("|v(t_end) - expect_v|", max_abs_diff(tr.samples.back().v, ctx.sc.numbers(task.at("expect_v"), m)), "<=", tol);

  if (task.has("chart")) {
    const auto& chart = ctx.sc.charts.at(task.at("chart").value);
    const auto pushed = pushforward_trajectory(chart, tr);
    const auto direct = integrate(transform_dynamic_equation(xi, chart), pushed.samples.front().first(),
                                  t_end + chart.time_offset(), step, task.name + ".direct");
    for (const auto& [t, name] : {std::pair{&pushed, task.name + ".pushed.csv"}, std::pair{&direct, task.name + ".direct.csv"}}) {
      write_csv(*t, m, ctx.out_dir / name);
      rec.files.push_back(name);
    }
    const double allowed = std::max(1e-8, 10 * step * step) * ctx.tol_scale;
    if (direct.samples.size() != pushed.samples.size()) {
      rec.results["covariance"] = Json{{"error", "sample grids differ"}};
      rec.check("matching sample grids", 1.0, "<=", 0.0);
      return;
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < direct.samples.size(); ++k)
      worst = std::max(worst, max_abs_diff(direct.samples[k].q, pushed.samples[k].q));
    rec.results["covariance"] = Json{{"pushed", trajectory_summary(pushed)}, {"direct", trajectory_summary(direct)},
                                     {"max_position_discrepancy", worst}};
    rec.check("integrate-then-push vs transform-then-integrate", worst, "<=", allowed);
  }
}

void run_geodesic(const Context& ctx, const TaskSpec& task, TaskRecord& rec) {
  const auto& xi = ctx.sc.equations.at(task.at("equation").value);
  const auto& frame = ctx.sc.frames.at(task.at("frame").value);
  double worst = 0.0;
  for (const auto& p : ctx.box.points(ctx.sc.dimension)) worst = std::max(worst, max_abs(geodesic_residual(xi, frame, p.t, p.q)));
  rec.results["max_geodesic_residual"] = worst;
  if (task.has("expect"))
    rec.check("max geodesic residual", worst, task.at("expect").value == "geodesic" ? "<=" : ">",
              tolerance(ctx, task, 1e-10));
}

void run_adapted_check(const Context& ctx, const TaskSpec& task, TaskRecord& rec) {
  const double r = adapted_frame_residual(ctx.sc.frames.at(task.at("frame").value),
                                          ctx.sc.charts.at(task.at("chart").value), ctx.box);
  rec.results["adapted_residual"] = r;
  const bool adapted = !task.has("expect") || task.at("expect").value == "adapted";
  rec.check("adapted residual", r, adapted ? "<=" : ">", tolerance(ctx, task, 1e-8));
}

void run_report(const Context& ctx, const TaskSpec& task, TaskRecord& rec) {
  const auto& xi = ctx.sc.equations.at(task.at("equation").value);
  const auto p = point(ctx, task);
  const auto gamma = gamma_from_xi(xi);
  rec.results["point"] = point_json(p);
  rec.results["acceleration"] = xi(p);
  const auto fit = quadratic_coefficients(xi, p.t, p.q);
  rec.results["quadratic_fit"] = Json{{"is_quadratic", fit.is_quadratic}, {"max_remainder", fit.max_remainder},
                                      {"b0", fit.b0}, {"b1", fit.b1}, {"b2", fit.b2}};
  rec.results["torsion_at_point"] = torsion(gamma, p).max_abs();
  rec.results["curvature_at_point"] = curvature(gamma, p).max_abs();
  if (task.has("frame")) {
    const auto& frame = ctx.sc.frames.at(task.at("frame").value);
    rec.results["frame_value"] = frame(p.t, p.q);
    rec.results["relative_velocity"] = relative_velocity(frame, p);
    rec.results["relative_acceleration"] = relative_acceleration(xi, frame, p);
    rec.results["geodesic_residual"] = geodesic_residual(xi, frame, p.t, p.q);
  }
}

void write_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

Json inputs(const Scenario& sc, const TaskSpec& task) {
  Json opts = Json::object();
  for (const auto& [k, e] : task.options) opts[k] = e.value;
  Json defs = Json::object();
  for (const char* kind : {"equation", "frame", "chart"}) {
    if (!task.has(kind)) continue;
    const auto key = std::string(kind) + " " + task.at(kind).value;
    Json fields = Json::object();
    for (const auto& [k, v] : sc.definitions.at(key).fields) fields[k] = v;
    defs[key] = fields;
  }
  if (task.has("reference")) {
    const auto key = std::string(task.has("equation") ? "equation " : "frame ") + task.at("reference").value;
    Json fields = Json::object();
    for (const auto& [k, v] : sc.definitions.at(key).fields) fields[k] = v;
    defs[key] = fields;
  }
  return Json{{"options", opts}, {"definitions", defs}};
}

}  // namespace

int run_scenario(const Scenario& sc, const RunOptions& options, std::ostream& out, std::ostream& err) {
  Context ctx{sc, sc.box, options.tol_scale, options.out_dir};
  ctx.box.seed = options.seed.value_or(sc.seed);
  std::filesystem::create_directories(options.out_dir);

  Json constants = Json::object();
  for (const auto& [k, v] : sc.constants) constants[k] = v;
  Json header{{"scenario", sc.name}, {"source", options.source}, {"dimension", sc.dimension},
              {"seed", ctx.box.seed}, {"tol_scale", options.tol_scale}, {"constants", constants},
              {"sample_box", box_json(ctx.box)}};
  Json summary = Json::array();
  int code = kExitOk;

  for (const auto& task : sc.tasks) {
    TaskRecord rec;
    Json record{{"task", task.name}, {"kind", to_string(task.kind)}, {"line", task.line}, {"inputs", inputs(sc, task)}};
    std::string error;
    try {
      switch (task.kind) {
        case TaskKind::transform: run_transform(ctx, task, rec); break;
        case TaskKind::coriolis: run_coriolis(ctx, task, rec); break;
        case TaskKind::check_free: run_check_free(ctx, task, rec); break;
        case TaskKind::integrate: run_integrate(ctx, task, rec); break;
        case TaskKind::geodesic: run_geodesic(ctx, task, rec); break;
        case TaskKind::adapted_check: run_adapted_check(ctx, task, rec); break;
        case TaskKind::report: run_report(ctx, task, rec); break;
      }
    } catch (const std::exception& e) {
      error = e.what();
    }
    record["results"] = rec.results;
    record["assertions"] = rec.assertions;
    const std::string status = !error.empty() ? "error" : rec.passed ? "pass" : "fail";
    if (!error.empty()) record["error"] = error;
    record["status"] = status;
    write_json(record, options.out_dir / (task.name + ".json"));
    summary.push_back(Json{{"task", task.name}, {"kind", to_string(task.kind)}, {"status", status},
                           {"report", task.name + ".json"}, {"files", rec.files}});
    out << status << ' ' << task.name << '\n';
    if (!error.empty()) {
      err << "task '" << task.name << "' (line " << task.line << "): evaluation error: " << error << '\n';
      code = kExitEvaluation;
      break;
    }
    if (!rec.passed) {
      for (const auto& a : rec.assertions)
        if (!a["passed"].get<bool>())
          err << "task '" << task.name << "' (line " << task.line << "): assertion failed: " << a["check"].get<std::string>()
              << " = " << a["value"].dump() << ", required " << a["relation"].get<std::string>() << ' '
              << a["tolerance"].dump() << '\n';
      code = kExitAssertion;
    }
  }
  header["status"] = code == kExitOk ? "pass" : code == kExitAssertion ? "fail" : "error";
  header["exit_code"] = code;
  header["tasks"] = summary;
  write_json(header, options.out_dir / "report.json");
  return code;
}

int run_scenario_file(const std::filesystem::path& path, RunOptions options, std::ostream& out, std::ostream& err) {
  std::optional<Scenario> sc;
  try {
    sc = load_scenario(path);
  } catch (const ScenarioError& e) {
    err << path.string() << ": " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << path.string() << ": " << e.what() << '\n';
    return kExitInvalid;
  }
  if (options.source.empty()) options.source = path.filename().string();
  try {
    return run_scenario(*sc, options, out, err);
  } catch (const std::exception& e) {
    err << path.string() << ": " << e.what() << '\n';
    return kExitEvaluation;
  }
}

int check_scenario_file(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
  try {
    const auto sc = load_scenario(path);
    out << path.string() << ": ok (" << sc.tasks.size() << " tasks)\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << path.string() << ": " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace relmech::cli

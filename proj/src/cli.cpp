#include "planefield/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "planefield/builtins.hpp"
#include "planefield/chart_file.hpp"
#include "planefield/contact_scan.hpp"
#include "planefield/open_book.hpp"
#include "planefield/parallel.hpp"
#include "planefield/transfer.hpp"
#include "planefield/verify.hpp"

namespace planefield {

namespace {

struct Common {
  std::string grid;
  std::string tol;
  std::string output;
  std::string format = "json";
  std::string distribution;
  int jobs = 0;
};

struct Args {
  Common common;
  std::string target;
  std::string expect;
  bool points = false;
  bool timings = false;
  std::string model_name;
  std::string emit;
  double collar_eps = 0.1;
  std::string alpha;
  std::string beta;
  std::string s_range = "0:1:5";
  bool compact_support = false;
  std::string axis;
  std::string at;
  int samples = 101;
  std::string eta = "tilted";
};

/// A run's result: a document (or raw text) and an exit code.
struct Outcome {
  Json doc;
  std::string text;
  int code = kExitOk;
};

GridCounts parse_grid(const std::string& text, GridCounts fallback) {
  if (text.empty()) return fallback;
  std::vector<int> n;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw ConfigError("--grid '" + text + "': expected N or NxNxN");
    n.push_back(v);
  }
  if (n.size() == 1) n = {n[0], n[0], n[0]};
  if (n.size() != 3) throw ConfigError("--grid '" + text + "': expected N or NxNxN");
  for (int v : n)
    if (v < 2) throw ConfigError("--grid '" + text + "': every axis needs at least 2 points");
  return {n[0], n[1], n[2]};
}

double parse_tol(const std::string& text) {
  if (text.empty()) return kDefaultParabolicTol;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || used == 0 || !(v > 0.0) || !std::isfinite(v))
    throw ConfigError("--tol '" + text + "': expected a positive number");
  return v;
}

Point parse_point(const std::string& text) {
  Point p{};
  std::stringstream ss(text);
  std::string part;
  int k = 0;
  while (std::getline(ss, part, ',')) {
    if (k == 3) throw ConfigError("--at '" + text + "': expected three coordinates");
    try {
      p[k++] = std::stod(part);
    } catch (const std::exception&) {
      throw ConfigError("--at '" + text + "': '" + part + "' is not a number");
    }
  }
  if (k != 3) throw ConfigError("--at '" + text + "': expected three coordinates");
  return p;
}

Json invocation(const std::string& command, const Common& c) {
  return {{"command", command},
          {"grid", c.grid.empty() ? Json(nullptr) : Json(c.grid)},
          {"tol", c.tol.empty() ? Json(nullptr) : Json(c.tol)}};
}

void require_json_format(const Common& c, const std::string& command) {
  if (c.format != "json") throw ConfigError("'" + command + "' only writes JSON");
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

CurvatureReport run_classify(const Args& a, GridCounts fallback) {
  const ChartModel m = model_target(a.target);
  ClassifyOptions o;
  o.jobs = a.common.jobs;
  o.model_id = m.model_id;
  o.distribution = m.resolve_name(a.common.distribution);
  return classify(m.metric, m.distribution(o.distribution), m.chart, parse_grid(a.common.grid, fallback),
                  parse_tol(a.common.tol), o);
}

Outcome cmd_check(const Args& a) {
  const CurvatureReport r = run_classify(a, {16, 16, 16});
  if (a.common.format == "csv") return {nullptr, report_to_csv(r), kExitOk};
  Json doc = report_to_json(r, a.points);
  doc["invocation"] = invocation("check", a.common);
  return {doc, {}, kExitOk};
}

Outcome cmd_classify(const Args& a) {
  require_json_format(a.common, "classify");
  const CurvatureReport r = run_classify(a, {16, 16, 16});
  Json doc{{"schema", "planefield.classification/1"},
           {"invocation", invocation("classify", a.common)},
           {"model", r.model_id},
           {"distribution", r.distribution},
           {"grid", Json::array({r.grid[0], r.grid[1], r.grid[2]})},
           {"tol", r.tol},
           {"classification", to_string(r.classification)},
           {"aggregates", aggregates_to_json(r)}};
  int code = kExitOk;
  if (!a.expect.empty()) {
    const std::string want = to_string(classification_from_string(a.expect));
    const bool ok = want == to_string(r.classification);
    doc["expected"] = want;
    doc["passed"] = ok;
    if (!ok) code = kExitFailure;
  }
  return {doc, {}, code};
}

Outcome cmd_verify(const Args& a) {
  require_json_format(a.common, "verify");
  SuiteSpec spec;
  const std::string prefix = "builtin:";
  if (a.target.rfind(prefix, 0) == 0) {
    spec = builtin_suite(a.target.substr(prefix.size()));
  } else if (std::ifstream(a.target).good()) {
    spec = load_suite(a.target);
  } else {
    const auto& names = builtin_suite_names();
    if (std::find(names.begin(), names.end(), a.target) == names.end())
      throw ConfigError("suite '" + a.target + "' is neither a readable file nor a builtin suite");
    spec = builtin_suite(a.target);
  }
  const SuiteReport r = run_suite(spec, SuiteOptions{a.common.jobs});
  Json doc = suite_report_to_json(r, a.timings);
  doc["invocation"] = invocation("verify", a.common);
  return {doc, {}, r.passed ? kExitOk : kExitFailure};
}

Outcome cmd_model(const Args& a) {
  require_json_format(a.common, "model");
  Json doc;
  if (a.model_name == "atlas") {
    OpenBookOptions o;
    o.collar_eps = a.collar_eps;
    doc = atlas_to_json(open_book_demo_atlas(o));
  } else if (a.model_name == "collar") {
    doc = chart_model_to_json(collar_model(a.collar_eps));
  } else if (a.model_name == "reeb" || a.model_name == "product") {
    doc = chart_model_to_json(builtin_model(a.model_name));
  } else {
    throw ConfigError("unknown model '" + a.model_name + "' (reeb, collar, product, atlas)");
  }
  return {doc, {}, kExitOk};
}

Outcome cmd_scan(const Args& a) {
  require_json_format(a.common, "scan");
  const ChartModel m = model_target(a.target);
  if (a.beta.empty()) throw ConfigError("scan needs --beta");
  ScanReport r = contact_deformation_scan(m.metric, m.chart, form_argument(m, a.alpha), form_argument(m, a.beta),
                                          parse_s_range(a.s_range), parse_grid(a.common.grid, {8, 8, 8}),
                                          a.common.jobs);
  r.model_id = m.model_id;
  r.alpha = a.alpha;
  r.beta = a.beta;
  Json doc = scan_report_to_json(r);
  doc["invocation"] = invocation("scan", a.common);
  return {doc, {}, kExitOk};
}

Outcome cmd_integrate_h(const Args& a) {
  require_json_format(a.common, "integrate-h");
  const ChartModel m = model_target(a.target);
  const std::string dist = m.resolve_name(a.common.distribution);
  const GridCounts grid = parse_grid(a.common.grid, {32, 32, 32});
  QuadratureOptions q;
  q.jobs = a.common.jobs;
  q.assume_compact_support = a.compact_support;
  const MeanCurvatureIntegral r = integral_mean_curvature(m.metric, m.distribution(dist), m.chart, grid, q);
  return {Json{{"schema", "planefield.integral_report/1"},
               {"invocation", invocation("integrate-h", a.common)},
               {"model", m.model_id},
               {"distribution", dist},
               {"grid", Json::array({grid[0], grid[1], grid[2]})},
               {"assume_compact_support", a.compact_support},
               {"integral", r.integral},
               {"max_pointwise_defect", r.max_pointwise_defect}}, {}, kExitOk};
}

Outcome cmd_plotdata(const Args& a) {
  const ChartModel m = model_target(a.target);
  const std::string dist_name = m.resolve_name(a.common.distribution);
  const Distribution xi = m.distribution(dist_name);
  const auto box = m.chart.sample_box();
  const int axis = a.axis.empty() ? 0 : m.chart.index_of(a.axis);
  if (axis < 0) throw ConfigError("--axis '" + a.axis + "' is not a coordinate of " + m.model_id);
  if (a.samples < 2) throw ConfigError("--samples must be at least 2");
  Point base{};
  if (a.at.empty()) {
    for (int k = 0; k < 3; ++k) base[k] = 0.5 * (box[k].lo + box[k].hi);
  } else {
    base = parse_point(a.at);
  }
  struct Row {
    double x;
    std::optional<PointCurvature> c;
    std::string error;
  };
  std::vector<Row> rows(static_cast<std::size_t>(a.samples));
  parallel_for(rows.size(), a.common.jobs, [&](std::size_t i) {
    Point p = base;
    p[axis] = box[axis].lo + box[axis].width() * static_cast<double>(i) / (a.samples - 1);
    rows[i].x = p[axis];
    try {
      rows[i].c = curvature_at(m.metric, xi, p);
    } catch (const Error& e) {
      rows[i].error = e.kind();
    }
  });
  const std::string& coord = m.chart.names()[axis];
  if (a.common.format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << coord << ",K_e,H,frobenius_residual,contact_volume\n";
    for (const Row& r : rows) {
      os << r.x;
      if (r.c)
        os << ',' << r.c->extrinsic_curvature << ',' << r.c->mean_curvature << ',' << r.c->frobenius_residual << ','
           << r.c->contact_volume << '\n';
      else
        os << ",nan,nan,nan,nan\n";
    }
    return {nullptr, os.str(), kExitOk};
  }
  Json out = Json::array();
  for (const Row& r : rows) {
    Json j{{"coordinate", r.x}};
    if (r.c) {
      j["K_e"] = r.c->extrinsic_curvature;
      j["H"] = r.c->mean_curvature;
      j["frobenius_residual"] = r.c->frobenius_residual;
      j["contact_volume"] = r.c->contact_volume;
    } else {
      j["error"] = r.error;
    }
    out.push_back(std::move(j));
  }
  return {Json{{"schema", "planefield.plotdata/1"},
               {"invocation", invocation("plotdata", a.common)},
               {"model", m.model_id},
               {"distribution", dist_name},
               {"axis", coord},
               {"base_point", point_to_json(base)},
               {"rows", out}}, {}, kExitOk};
}

Outcome cmd_transfer(const Args& a) {
  require_json_format(a.common, "transfer");
  const ChartModel m = model_target(a.target);
  const std::string xi_name = m.resolve_name(a.common.distribution);
  const TransferResult r = transfer_metric(m.metric, m.distribution(xi_name),
                                           Distribution::kernel(form_argument(m, a.eta)), m.chart,
                                           parse_grid(a.common.grid, {6, 6, 6}), a.common.jobs);
  Json doc = transfer_report_to_json(r.report, a.points);
  doc["model"] = m.model_id;
  doc["xi"] = xi_name;
  doc["eta"] = a.eta;
  doc["invocation"] = invocation("transfer", a.common);
  return {doc, {}, kExitOk};
}

void add_common(CLI::App* sub, Common& c, bool with_grid) {
  if (with_grid) {
    sub->add_option("--grid", c.grid, "Lattice counts, N or NxNxN (at least 2 per axis)");
    sub->add_option("--tol", c.tol, "Parabolic tolerance on |K_e|");
    sub->add_option("--distribution", c.distribution, "Distribution (or form) name in the model");
  }
  sub->add_option("--output,-o", c.output, "Write the report here instead of stdout");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--jobs,-j", c.jobs, "Worker threads (default: PLANEFIELD_JOBS or all cores)")
      ->check(CLI::PositiveNumber);
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature of plane fields on 3-manifolds", "planefield"};
  app.require_subcommand(1);
  Args a;
  std::string command;

  auto* check = app.add_subcommand("check", "Full curvature report of a distribution");
  check->add_option("chart", a.target, "Chart file or builtin:<name>")->required();
  check->add_flag("--points", a.points, "Include every sampled point");
  add_common(check, a.common, true);

  auto* cls = app.add_subcommand("classify", "Classification and aggregates only");
  cls->add_option("chart", a.target, "Chart file or builtin:<name>")->required();
  cls->add_option("--expect", a.expect, "Exit 1 unless the classification matches");
  add_common(cls, a.common, true);

  auto* verify = app.add_subcommand("verify", "Run a suite file or builtin suite");
  verify->add_option("suite", a.target, "Suite file, builtin:<name> or a builtin name")->required();
  verify->add_flag("--timings", a.timings, "Add wall times to the report");
  add_common(verify, a.common, false);

  auto* model = app.add_subcommand("model", "Emit a built-in model as a chart document");
  model->add_option("name", a.model_name, "reeb, collar, product or atlas")->required();
  model->add_option("--emit", a.emit, "Output file (default: --output or stdout)");
  model->add_option("--eps", a.collar_eps, "Collar width parameter")->check(CLI::PositiveNumber);
  add_common(model, a.common, false);

  auto* scan = app.add_subcommand("scan", "Contact volume and plane angles along alpha + s beta");
  a.target = "builtin:torus-flat";
  scan->add_option("chart", a.target, "Chart file or builtin:<name>");
  scan->add_option("--alpha", a.alpha, "Form name or inline e1,e2,e3 (default: the model's form)");
  scan->add_option("--beta", a.beta, "Form name or inline e1,e2,e3")->required();
  scan->add_option("--s-range", a.s_range, "a:b:n");
  add_common(scan, a.common, true);

  auto* integ = app.add_subcommand("integrate-h", "Integral of the mean curvature over the chart");
  integ->add_option("chart", a.target, "Chart file or builtin:<name>")->required();
  integ->add_flag("--assume-compact-support", a.compact_support,
                  "Integrand vanishes near non-periodic edges");
  add_common(integ, a.common, true);

  auto* plot = app.add_subcommand("plotdata", "K_e and H along a coordinate line");
  plot->add_option("chart", a.target, "Chart file or builtin:<name>")->required();
  plot->add_option("--axis", a.axis, "Coordinate to vary (default: the first)");
  plot->add_option("--at", a.at, "Base point x,y,z (default: centre of the chart)");
  plot->add_option("--samples", a.samples, "Points along the line");
  add_common(plot, a.common, true);

  auto* transfer = app.add_subcommand("transfer", "Metric making a transversal plane field mimic xi");
  transfer->add_option("chart", a.target, "Chart file or builtin:<name>");
  transfer->add_option("--eta", a.eta, "Form defining the target plane field");
  transfer->add_flag("--points", a.points, "Include every sampled point");
  add_common(transfer, a.common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  for (auto* sub : app.get_subcommands()) command = sub->get_name();
  if (a.common.jobs <= 0) a.common.jobs = default_jobs();
  if (command == "plotdata" && a.common.format == "json" && !plot->count("--format")) a.common.format = "csv";

  const std::string output = command == "model" && !a.emit.empty() ? a.emit : a.common.output;
  try {
    Outcome o;
    if (command == "check") o = cmd_check(a);
    else if (command == "classify") o = cmd_classify(a);
    else if (command == "verify") o = cmd_verify(a);
    else if (command == "model") o = cmd_model(a);
    else if (command == "scan") o = cmd_scan(a);
    else if (command == "integrate-h") o = cmd_integrate_h(a);
    else if (command == "plotdata") o = cmd_plotdata(a);
    else o = cmd_transfer(a);
    write_text(output, o.doc.is_null() ? o.text : o.doc.dump(2) + "\n", out);
    if (!output.empty() && o.code == kExitOk) err << command << ": wrote " << output << "\n";
    if (o.code != kExitOk) err << command << ": check failed\n";
    return o.code;
  } catch (const Error& e) {
    const int code = e.kind() == "ConfigError" ? kExitUsage : kExitFailure;
    err << "planefield " << command << ": " << e.kind() << ": " << e.what() << "\n";
    if (!output.empty()) {
      const Json doc{{"schema", "planefield.error/1"},
                     {"invocation", invocation(command, a.common)},
                     {"error", {{"kind", e.kind()}, {"message", e.what()}}},
                     {"exit_code", code}};
      try {
        write_text(output, doc.dump(2) + "\n", out);
      } catch (const Error&) {
        // the original error was already reported
      }
    }
    return code;
  } catch (const std::exception& e) {
    err << "planefield " << command << ": internal error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace planefield

#include "planefield/builtins.hpp"
#include "planefield/chart_file.hpp"

#include <numbers>

namespace planefield {

namespace {

const CoordNames kXYZ{"x", "y", "z"};

ChartModel torus(std::string id, const std::array<std::string, 6>& metric) {
  ChartModel m;
  m.model_id = std::move(id);
  m.chart = Chart(kXYZ, {Interval{0, 1}, Interval{0, 1}, Interval{0, 1}}, {true, true, true});
  m.metric = MetricField::from_strings(metric, kXYZ);
  return m;
}

void add_kernel(ChartModel& m, const std::string& form, const std::array<std::string, 3>& comps,
                const std::string& dist) {
  m.forms.emplace(form, OneFormField::from_strings(comps, m.chart.names()));
  m.distributions[dist] = DistributionSpec{DistributionSpec::Kind::Kernel, form, 1, {}};
  if (m.default_distribution.empty()) m.default_distribution = dist;
}

const std::array<std::string, 6> kFlat{"1", "0", "0", "1", "0", "1"};

ChartModel spheres() {
  const CoordNames names{"rho", "theta", "vphi"};
  ChartModel m;
  m.model_id = "spheres";
  m.chart = Chart(names, {Interval{0, 2}, Interval{0, std::numbers::pi}, Interval{0, 2 * std::numbers::pi}},
                  {false, false, true},
                  {SingularLocus{0, 0.0, "origin"}, SingularLocus{1, 0.0, "north axis"},
                   SingularLocus{1, std::numbers::pi, "south axis"}});
  m.metric = MetricField::from_strings({"1", "0", "0", "rho^2", "0", "rho^2*sin(theta)^2"}, names);
  add_kernel(m, "drho", {"1", "0", "0"}, "shells");
  return m;
}

ChartModel cylinders() {
  const CoordNames names{"r", "phi", "z"};
  ChartModel m;
  m.model_id = "cylinders";
  m.chart = Chart(names, {Interval{0, 2}, Interval{0, 2 * std::numbers::pi}, Interval{0, 1}},
                  {false, true, false}, {SingularLocus{0, 0.0, "axis"}});
  m.metric = MetricField::from_strings({"1", "0", "0", "r^2", "0", "1"}, names);
  add_kernel(m, "dr", {"1", "0", "0"}, "tubes");
  return m;
}

ChartModel product() {
  SurfaceChart sc;
  sc.names = {"u", "v"};
  sc.domain = {Interval{0, 2 * std::numbers::pi}, Interval{0, 2 * std::numbers::pi}};
  sc.periodic = {true, true};
  return product_fibration(SurfaceMetric::from_strings(sc, {"1 + sin(u)^2/2", "0", "1"}), "product");
}

}  // namespace

const std::vector<std::string>& builtin_model_names() {
  static const std::vector<std::string> names{"reeb",       "collar",      "product",      "spheres",
                                              "cylinders",  "torus-flat",  "torus-graph",  "torus-graph2",
                                              "torus-contact", "standard-contact"};
  return names;
}

ChartModel builtin_model(const std::string& name) {
  if (name == "reeb") return reeb_solid_torus().model;
  if (name == "collar") return collar_model(0.1);
  if (name == "product") return product();
  if (name == "spheres") return spheres();
  if (name == "cylinders") return cylinders();
  if (name == "torus-flat") {
    ChartModel m = torus(name, kFlat);
    add_kernel(m, "dz", {"0", "0", "1"}, "flat");
    add_kernel(m, "tilted", {"0", "-sin(1/10)", "cos(1/10)"}, "tilted");
    m.vectors.emplace("X", VectorField::from_strings({"1/(1.5 + sin(2*pi*x + 0.3))", "0", "0"}, kXYZ));
    return m;
  }
  if (name == "torus-graph") {
    ChartModel m = torus(name, kFlat);
    add_kernel(m, "alpha", {"0.3*sin(2*pi*x)", "0", "1"}, "graph");
    return m;
  }
  if (name == "torus-graph2") {
    ChartModel m = torus(name, {"1.2 + 0.2*sin(2*pi*y)", "0.1*cos(2*pi*z)", "0", "1 + 0.3*cos(2*pi*x)^2", "0", "1"});
    add_kernel(m, "alpha", {"0.3*sin(2*pi*x)", "0.2*cos(2*pi*y)", "1"}, "graph");
    return m;
  }
  if (name == "torus-contact") {
    ChartModel m = torus(name, kFlat);
    add_kernel(m, "alpha", {"cos(2*pi*z)", "sin(2*pi*z)", "0"}, "helix");
    return m;
  }
  if (name == "standard-contact") {
    ChartModel m;
    m.model_id = name;
    m.chart = Chart(kXYZ, {Interval{-1, 1}, Interval{-1, 1}, Interval{-1, 1}}, {false, false, false});
    m.metric = MetricField::from_strings(kFlat, kXYZ);
    add_kernel(m, "alpha", {"-y", "x", "1"}, "standard");
    return m;
  }
  throw ConfigError("unknown builtin model '" + name + "'");
}

std::vector<std::string> shipped_periodic_examples() {
  std::vector<std::string> out;
  for (const auto& n : builtin_model_names())
    if (builtin_model(n).chart.all_periodic()) out.push_back(n);
  return out;
}

std::vector<std::pair<std::string, std::string>> shipped_foliation_forms() {
  return {{"reeb", "alpha"},      {"collar", "alpha"},     {"product", "dt"},        {"spheres", "drho"},
          {"cylinders", "dr"},   {"torus-flat", "dz"},    {"torus-graph", "alpha"}, {"torus-graph2", "alpha"}};
}

std::vector<std::pair<std::string, std::string>> shipped_contact_forms() {
  return {{"torus-contact", "alpha"}, {"standard-contact", "alpha"}};
}

OneFormField form_argument(const ChartModel& m, const std::string& text) {
  if (text.find(',') != std::string::npos) {
    std::array<std::string, 3> comps;
    std::size_t start = 0;
    for (int k = 0; k < 3; ++k) {
      const std::size_t comma = text.find(',', start);
      if ((k < 2) == (comma == std::string::npos))
        throw ConfigError("inline form '" + text + "' needs exactly three components");
      comps[k] = text.substr(start, k < 2 ? comma - start : std::string::npos);
      start = comma + 1;
    }
    return OneFormField::from_strings(comps, m.chart.names());
  }
  if (!text.empty()) return m.form(text);
  const std::string dist = m.resolve_name({});
  const auto it = m.distributions.find(dist);
  if (it != m.distributions.end() && it->second.kind == DistributionSpec::Kind::Kernel) return m.form(it->second.form);
  if (m.forms.size() == 1) return m.forms.begin()->second;
  throw ConfigError("model '" + m.model_id + "' has no default form; name one explicitly");
}

ChartModel model_target(const std::string& target) {
  if (target.empty()) throw ConfigError("no target model given");
  const std::string prefix = "builtin:";
  if (target.rfind(prefix, 0) == 0) return builtin_model(target.substr(prefix.size()));
  return load_chart_model(target);
}

}  // namespace planefield

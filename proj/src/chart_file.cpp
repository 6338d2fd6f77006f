#include "planefield/chart_file.hpp"

#include <fstream>

namespace planefield {

// ---------------------------------------------------------------------------
// ChartModel lookups
// ---------------------------------------------------------------------------

std::string ChartModel::resolve_name(const std::string& name) const {
  if (!name.empty()) return name;
  if (!default_distribution.empty()) return default_distribution;
  if (distributions.size() == 1) return distributions.begin()->first;
  throw ConfigError("model '" + model_id + "' has no default distribution; pass one by name");
}

const OneFormField& ChartModel::form(const std::string& name) const {
  const auto it = forms.find(name);
  if (it == forms.end()) throw ConfigError("model '" + model_id + "' has no form named '" + name + "'");
  return it->second;
}

const VectorField& ChartModel::vector(const std::string& name) const {
  const auto it = vectors.find(name);
  if (it == vectors.end())
    throw ConfigError("model '" + model_id + "' has no vector field named '" + name + "'");
  return it->second;
}

Distribution ChartModel::distribution(const std::string& requested) const {
  const std::string name = resolve_name(requested);
  const auto it = distributions.find(name);
  if (it == distributions.end()) {
    if (forms.count(name) != 0) return Distribution::kernel(form(name));
    throw ConfigError("model '" + model_id + "' has no distribution named '" + name + "'");
  }
  const DistributionSpec& spec = it->second;
  if (spec.kind == DistributionSpec::Kind::Kernel) return Distribution::kernel(form(spec.form), spec.sign);
  return Distribution::span(vector(spec.span[0]), vector(spec.span[1]));
}

FrameJets ChartModel::frame(const std::string& name, const Point& p) const {
  const auto it = named_frames.find(name);
  if (it == named_frames.end()) throw ConfigError("model '" + model_id + "' has no frame named '" + name + "'");
  return FrameJets{vector(it->second[0]).jet(p), vector(it->second[1]).jet(p)};
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

const Json& require(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(std::string("chart file: missing key '") + key + "'");
  return doc.at(key);
}

template <std::size_t N>
std::array<std::string, N> string_array(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != N)
    throw ConfigError("chart file: '" + what + "' must be an array of " + std::to_string(N) + " entries");
  std::array<std::string, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    if (j[i].is_string()) {
      out[i] = j[i].get<std::string>();
    } else if (j[i].is_number()) {
      out[i] = format_number(j[i].get<double>());
    } else {
      throw ConfigError("chart file: entries of '" + what + "' must be strings or numbers");
    }
  }
  return out;
}

double bound(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return eval_constant(j.get<std::string>());
  throw ConfigError("chart file: domain bounds must be numbers or constant expressions");
}

int coordinate_index(const Json& j, const CoordNames& names) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_string()) {
    for (int k = 0; k < 3; ++k)
      if (names[k] == j.get<std::string>()) return k;
  }
  throw ConfigError("chart file: singular locus names an unknown coordinate");
}

}  // namespace

ChartModel chart_model_from_json(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("chart file: top level must be an object");
  const CoordNames names = string_array<3>(require(doc, "coords"), "coords");

  const Json& dom = require(doc, "domain");
  if (!dom.is_array() || dom.size() != 3) throw ConfigError("chart file: 'domain' needs three intervals");
  std::array<Interval, 3> domain;
  for (int k = 0; k < 3; ++k) {
    if (!dom[k].is_array() || dom[k].size() != 2) throw ConfigError("chart file: each interval is [lo, hi]");
    domain[k] = Interval{bound(dom[k][0]), bound(dom[k][1])};
  }
  std::array<bool, 3> periodic{false, false, false};
  if (doc.contains("periodic")) {
    const Json& p = doc["periodic"];
    if (!p.is_array() || p.size() != 3) throw ConfigError("chart file: 'periodic' needs three booleans");
    for (int k = 0; k < 3; ++k) periodic[k] = p[k].get<bool>();
  }
  std::vector<SingularLocus> loci;
  const Json loci_doc = doc.value("singular_loci", Json::array());
  for (const Json& l : loci_doc) {
    loci.push_back(SingularLocus{coordinate_index(require(l, "coordinate"), names), bound(require(l, "value")),
                                 l.value("note", std::string{})});
  }

  const Json forms_doc = doc.value("forms", Json::object());
  const Json vectors_doc = doc.value("vectors", Json::object());
  const Json distributions_doc = doc.value("distributions", Json::object());
  const Json named_frames_doc = doc.value("named_frames", Json::object());

  ChartModel m;
  m.model_id = doc.value("model_id", std::string{"chart"});
  m.chart = Chart(names, domain, periodic, std::move(loci));
  m.metric = MetricField::from_strings(string_array<6>(require(doc, "metric"), "metric"), names);
  for (const auto& [name, comps] : forms_doc.items())
    m.forms.emplace(name, OneFormField::from_strings(string_array<3>(comps, "forms." + name), names));
  for (const auto& [name, comps] : vectors_doc.items())
    m.vectors.emplace(name, VectorField::from_strings(string_array<3>(comps, "vectors." + name), names));
  for (const auto& [name, spec] : distributions_doc.items()) {
    DistributionSpec d;
    if (spec.contains("kernel")) {
      d.kind = DistributionSpec::Kind::Kernel;
      d.form = spec["kernel"].get<std::string>();
      d.sign = spec.value("sign", 1) >= 0 ? 1 : -1;
      if (m.forms.count(d.form) == 0) throw ConfigError("chart file: distribution '" + name + "' uses unknown form '" + d.form + "'");
    } else if (spec.contains("span")) {
      d.kind = DistributionSpec::Kind::Span;
      d.span = string_array<2>(spec["span"], "distributions." + name + ".span");
      for (const auto& v : d.span)
        if (m.vectors.count(v) == 0) throw ConfigError("chart file: distribution '" + name + "' uses unknown vector '" + v + "'");
    } else {
      throw ConfigError("chart file: distribution '" + name + "' needs 'kernel' or 'span'");
    }
    m.distributions.emplace(name, d);
  }
  for (const auto& [name, pair] : named_frames_doc.items())
    m.named_frames.emplace(name, string_array<2>(pair, "named_frames." + name));
  m.parameters = doc.value("parameters", Json::object());
  m.default_distribution = doc.value("default_distribution", std::string{});
  if (m.distributions.empty() && m.forms.size() == 1 && m.default_distribution.empty())
    m.default_distribution = m.forms.begin()->first;
  return m;
}

ChartModel load_chart_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open chart file '" + path + "'");
  Json doc;
  try {
    in >> doc;
  } catch (const Json::parse_error& e) {
    throw ConfigError("chart file '" + path + "' is not valid JSON: " + e.what());
  }
  return chart_model_from_json(doc);
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace {

template <typename Field>
Json components(const Field& f, const std::string& what) {
  if (!f.exprs()) throw ConfigError(what + " has no expression form and cannot be written to a chart file");
  Json out = Json::array();
  for (const Expr& e : *f.exprs()) out.push_back(e.print());
  return out;
}

}  // namespace

Json chart_model_to_json(const ChartModel& m) {
  Json doc;
  doc["schema"] = kChartSchema;
  doc["model_id"] = m.model_id;
  const Chart& c = m.chart;
  doc["coords"] = Json::array({c.names()[0], c.names()[1], c.names()[2]});
  doc["domain"] = interval_box_to_json(c.domain());
  doc["periodic"] = Json::array({c.periodic()[0], c.periodic()[1], c.periodic()[2]});
  doc["singular_loci"] = Json::array();
  for (const auto& l : c.singular_loci())
    doc["singular_loci"].push_back({{"coordinate", c.names()[l.coordinate]}, {"value", l.value}, {"note", l.note}});
  doc["metric"] = components(m.metric, "metric of '" + m.model_id + "'");
  doc["forms"] = Json::object();
  for (const auto& [name, f] : m.forms) doc["forms"][name] = components(f, "form '" + name + "'");
  doc["vectors"] = Json::object();
  for (const auto& [name, v] : m.vectors) doc["vectors"][name] = components(v, "vector field '" + name + "'");
  doc["distributions"] = Json::object();
  for (const auto& [name, d] : m.distributions) {
    if (d.kind == DistributionSpec::Kind::Kernel)
      doc["distributions"][name] = {{"kernel", d.form}, {"sign", d.sign}};
    else
      doc["distributions"][name] = {{"span", Json::array({d.span[0], d.span[1]})}};
  }
  doc["named_frames"] = Json::object();
  for (const auto& [name, pair] : m.named_frames) doc["named_frames"][name] = Json::array({pair[0], pair[1]});
  doc["default_distribution"] = m.default_distribution;
  doc["parameters"] = m.parameters;
  return doc;
}

}  // namespace planefield

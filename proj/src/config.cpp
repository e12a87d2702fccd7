#include "optgauge/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#ifndef OPTGAUGE_VERSION
#define OPTGAUGE_VERSION "0.0.0"
#endif

namespace optgauge {

using nlohmann::json;

std::string tool_version() { return OPTGAUGE_VERSION; }

namespace {

// Reader for one JSON object that remembers its pointer and rejects keys
// nobody asked for.
class Section {
 public:
  Section(const json& node, std::string pointer)
      : node_(node), pointer_(std::move(pointer)) {
    if (!node_.is_object()) fail(pointer_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!node_.contains(key)) fail(path(key), "required field missing");
    return node_.at(key);
  }

  double number(const std::string& key, std::optional<double> fallback = {}) {
    if (!has(key)) {
      if (fallback) return *fallback;
      fail(path(key), "required field missing");
    }
    const json& v = node_.at(key);
    if (!v.is_number()) fail(path(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path(key), "must be finite");
    return x;
  }

  double positive(const std::string& key, std::optional<double> fallback = {}) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) fail(path(key), "must be positive");
    return x;
  }

  long integer(const std::string& key, long fallback, long min_value) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_integer()) fail(path(key), "expected an integer");
    const long x = v.get<long>();
    if (x < min_value) fail(path(key), "must be >= " + std::to_string(min_value));
    return x;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_boolean()) fail(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = {}) {
    if (!has(key)) {
      if (fallback) return *fallback;
      fail(path(key), "required field missing");
    }
    const json& v = node_.at(key);
    if (!v.is_string()) fail(path(key), "expected a string");
    return v.get<std::string>();
  }

  std::string path(const std::string& key) const { return pointer_ + "/" + key; }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) fail(path(item.key()), "unknown field");
    }
  }

  [[noreturn]] static void fail(const std::string& pointer, const std::string& what) {
    throw ConfigError(pointer.empty() ? "/" : pointer, what);
  }

 private:
  const json& node_;
  std::string pointer_;
  std::set<std::string> seen_;
};

std::vector<double> number_list(const json& node, const std::string& pointer) {
  if (!node.is_array() || node.empty()) {
    Section::fail(pointer, "expected a non-empty array of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number() || !std::isfinite(node[i].get<double>())) {
      Section::fail(pointer + "/" + std::to_string(i), "expected a finite number");
    }
    out.push_back(node[i].get<double>());
  }
  return out;
}

PotentialSpec parse_potential(const json& node) {
  Section s(node, "/potential");
  const std::string type = s.string("type", "double_well");
  PotentialSpec spec;
  if (type == "double_well") {
    if (s.has("gamma")) {
      if (s.has("B") || s.has("C")) {
        Section::fail("/potential", "give either gamma or B and C, not both");
      }
      spec = PotentialSpec::double_well_from_gamma(s.positive("gamma"));
    } else {
      spec.kind = DoubleWell{s.positive("B"), s.positive("C", 1.0)};
    }
  } else if (type == "harmonic") {
    spec.kind = Harmonic{s.positive("omega0", 1.0)};
  } else if (type == "tabulated") {
    if (s.has("file")) {
      spec.kind = load_tabulated_potential(s.string("file"));
    } else {
      Tabulated t;
      t.x = number_list(s.at("x"), "/potential/x");
      t.v = number_list(s.at("v"), "/potential/v");
      spec.kind = std::move(t);
    }
  } else {
    Section::fail("/potential/type", "unknown potential type '" + type + "'");
  }
  spec.shift = s.number("shift", 0.0);
  spec.tilt = s.number("tilt", 0.0);
  s.finish();
  spec.validate();
  return spec;
}

SweepAxis parse_axis(const json& node, const std::string& pointer) {
  if (node.is_number()) return SweepAxis::fixed_at(node.get<double>());
  Section s(node, pointer);
  SweepAxis axis;
  if (s.has("fixed")) {
    axis = SweepAxis::fixed_at(s.number("fixed"));
  } else {
    const auto range = number_list(s.at("range"), pointer + "/range");
    if (range.size() != 2) Section::fail(pointer + "/range", "expected [lo, hi]");
    const long steps = s.integer("steps", 21, 2);
    axis = SweepAxis::range(range[0], range[1], static_cast<int>(steps));
  }
  s.finish();
  return axis;
}

OptimalMetric parse_metric(const std::string& name, const std::string& pointer) {
  for (auto m : {OptimalMetric::sigma, OptimalMetric::infidelity,
                 OptimalMetric::entropy_gap, OptimalMetric::entropy_truncated,
                 OptimalMetric::entropy_full}) {
    if (name == to_string(m)) return m;
  }
  Section::fail(pointer, "unknown metric '" + name + "'");
}

Grid parse_grid(const json& node, const PotentialSpec& potential) {
  Section s(node, "/numerics/grid");
  Grid base = default_grid(potential);
  const double center = s.number("center", base.center());
  const double half = s.positive("half_width", base.half_width());
  const long n = s.integer("n_points", base.n_points, 16);
  const std::string scheme = s.string("scheme", to_string(base.scheme));
  s.finish();
  Grid grid = Grid::centered(center, half, static_cast<int>(n),
                             discretization_from_string(scheme));
  return grid;
}

json axis_json(const SweepAxis& a) {
  if (a.fixed) return json{{"fixed", a.lo}};
  return json{{"range", {a.lo, a.hi}}, {"steps", a.steps}};
}

json grid_json(const Grid& g) {
  return json{{"center", g.center()},
              {"half_width", g.half_width()},
              {"n_points", g.n_points},
              {"scheme", to_string(g.scheme)}};
}

}  // namespace

json to_json(const PotentialSpec& p) {
  json out;
  if (const auto* w = std::get_if<DoubleWell>(&p.kind)) {
    out["type"] = "double_well";
    out["B"] = w->B;
    out["C"] = w->C;
  } else if (const auto* h = std::get_if<Harmonic>(&p.kind)) {
    out["type"] = "harmonic";
    out["omega0"] = h->omega0;
  } else {
    const auto& t = std::get<Tabulated>(p.kind);
    out["type"] = "tabulated";
    out["x"] = t.x;
    out["v"] = t.v;
  }
  out["shift"] = p.shift;
  out["tilt"] = p.tilt;
  return out;
}

RunConfig parse_config(const json& doc) {
  Section root(doc, "");
  RunConfig c;

  c.potential = root.has("potential") ? parse_potential(root.at("potential"))
                                      : PotentialSpec::double_well_from_gamma(64.0);
  {
    Section m(root.at("modes"), "/modes");
    c.frequencies = number_list(m.at("frequencies"), "/modes/frequencies");
    for (std::size_t i = 0; i < c.frequencies.size(); ++i) {
      if (!(c.frequencies[i] > 0.0)) {
        Section::fail("/modes/frequencies/" + std::to_string(i), "must be positive");
      }
    }
    c.coupling = m.number("coupling");
    if (c.coupling < 0.0) Section::fail("/modes/coupling", "must be non-negative");
    m.finish();
  }
  const std::size_t K = c.frequencies.size();

  c.gauge = GaugeVector::dipole(K);
  if (root.has("gauge")) {
    const json& g = root.at("gauge");
    if (g.is_number()) {
      c.gauge = GaugeVector::uniform(K, g.get<double>());
    } else {
      const auto eta = number_list(g, "/gauge");
      if (eta.size() != K) Section::fail("/gauge", "need one value per mode");
      c.gauge = GaugeVector(eta);
    }
  }

  if (root.has("sweep")) {
    Section s(root.at("sweep"), "/sweep");
    const json& axes = s.at("axes");
    if (!axes.is_array() || axes.size() != K) {
      Section::fail("/sweep/axes", "need one axis per mode");
    }
    for (std::size_t i = 0; i < K; ++i) {
      c.axes.push_back(parse_axis(axes[i], "/sweep/axes/" + std::to_string(i)));
    }
    if (s.has("metrics")) {
      const json& ms = s.at("metrics");
      if (!ms.is_array() || ms.empty()) {
        Section::fail("/sweep/metrics", "expected a non-empty array of names");
      }
      c.metrics.clear();
      for (std::size_t i = 0; i < ms.size(); ++i) {
        const std::string ptr = "/sweep/metrics/" + std::to_string(i);
        if (!ms[i].is_string()) Section::fail(ptr, "expected a string");
        c.metrics.push_back(parse_metric(ms[i].get<std::string>(), ptr));
      }
    }
    c.compute_fidelity = s.boolean("fidelity", true);
    c.compute_entropy = s.boolean("entropy", true);
    c.max_points = static_cast<std::size_t>(s.integer("max_points", 100000, 1));
    s.finish();
  }

  if (root.has("truncation")) {
    Section t(root.at("truncation"), "/truncation");
    c.basis = basis_kind_from_string(t.string("basis", "bare"));
    c.levels = static_cast<int>(t.integer("levels", 2, 2));
    c.energies = static_cast<int>(t.integer("energies", 7, 1));
    t.finish();
  }

  if (root.has("numerics")) {
    Section n(root.at("numerics"), "/numerics");
    if (n.has("grid")) c.grid = parse_grid(n.at("grid"), c.potential);
    if (n.has("cutoffs")) {
      const json& cut = n.at("cutoffs");
      if (cut.is_number_integer()) {
        if (cut.get<int>() < 1) Section::fail("/numerics/cutoffs", "must be >= 1");
        c.cutoffs.assign(K, cut.get<int>());
      } else {
        if (!cut.is_array() || cut.size() != K) {
          Section::fail("/numerics/cutoffs", "need an integer or one per mode");
        }
        for (std::size_t i = 0; i < K; ++i) {
          const std::string ptr = "/numerics/cutoffs/" + std::to_string(i);
          if (!cut[i].is_number_integer() || cut[i].get<int>() < 1) {
            Section::fail(ptr, "expected an integer >= 1");
          }
          c.cutoffs.push_back(cut[i].get<int>());
        }
      }
    }
    c.tol = n.positive("tol", c.tol);
    c.k = static_cast<int>(n.integer("k", 0, 0));
    c.max_escalations = static_cast<int>(n.integer("max_escalations", 8, 0));
    c.max_dimension = static_cast<std::size_t>(n.integer("max_dimension", 600000, 1));
    c.cutoff_step = static_cast<int>(n.integer("cutoff_step", 4, 1));
    c.eigen_tol = n.positive("eigen_tol", c.eigen_tol);
    n.finish();
  }
  if (c.k > 0 && c.k < c.energies + 1) {
    Section::fail("/numerics/k", "must be at least truncation.energies + 1");
  }

  c.output = root.string("output", "out");
  root.finish();
  return c;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot open config file " + path.string());
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", path.string() + ": " + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_json_file(path));
}

PotentialSpec parse_potential_section(const json& doc) {
  if (!doc.is_object()) Section::fail("/", "expected an object");
  if (!doc.contains("potential")) return PotentialSpec::double_well_from_gamma(64.0);
  return parse_potential(doc.at("potential"));
}

json physics_section(const RunConfig& c) {
  json numerics{{"cutoffs", c.cutoffs.empty() ? std::vector<int>(c.frequencies.size(), 10)
                                              : c.cutoffs},
                {"tol", c.tol},
                {"k", c.eigen_count()},
                {"max_escalations", c.max_escalations},
                {"max_dimension", c.max_dimension},
                {"cutoff_step", c.cutoff_step},
                {"eigen_tol", c.eigen_tol},
                {"grid", grid_json(c.grid ? *c.grid : default_grid(c.potential))}};
  return json{{"potential", to_json(c.potential)},
              {"modes", {{"frequencies", c.frequencies}, {"coupling", c.coupling}}},
              {"truncation",
               {{"basis", to_string(c.basis)}, {"levels", c.levels}, {"energies", c.energies}}},
              {"numerics", numerics}};
}

json to_json(const RunConfig& c) {
  json doc = physics_section(c);
  doc["gauge"] = c.gauge.values();
  if (!c.axes.empty()) {
    json axes = json::array();
    for (const auto& a : c.axes) axes.push_back(axis_json(a));
    json metrics = json::array();
    for (auto m : c.metrics) metrics.push_back(to_string(m));
    doc["sweep"] = {{"axes", axes},
                    {"metrics", metrics},
                    {"fidelity", c.compute_fidelity},
                    {"entropy", c.compute_entropy},
                    {"max_points", c.max_points}};
  }
  doc["output"] = c.output;
  return doc;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::string config_hash(const RunConfig& config) {
  return sha256_hex(physics_section(config).dump());
}

CavitySystem make_system(const RunConfig& c) {
  const Grid grid = c.grid ? *c.grid : default_grid(c.potential);
  return resolve_system(c.potential, c.frequencies, c.coupling, grid);
}

NumericalSettings make_settings(const RunConfig& c, const CavitySystem& system) {
  NumericalSettings s = default_settings(system);
  if (c.grid) s.grid = *c.grid;
  if (!c.cutoffs.empty()) s.cutoffs = c.cutoffs;
  return s;
}

ConvergenceTargets make_targets(const RunConfig& c, const CavitySystem& system) {
  ConvergenceTargets t;
  t.k = c.eigen_count();
  t.tol = c.tol * system.delta;
  t.max_escalations = c.max_escalations;
  t.max_dimension = c.max_dimension;
  t.cutoff_step = c.cutoff_step;
  return t;
}

SweepPlan make_plan(const RunConfig& c, const CavitySystem& system, int jobs) {
  SweepPlan plan;
  plan.system = system;
  plan.axes = c.axes;
  plan.basis = c.basis;
  plan.levels = c.levels;
  plan.energies = c.energies;
  plan.compute_fidelity = c.compute_fidelity;
  plan.compute_entropy = c.compute_entropy;
  plan.eigen_tol = c.eigen_tol;
  plan.jobs = jobs;
  plan.max_points = c.max_points;
  return plan;
}

}  // namespace optgauge

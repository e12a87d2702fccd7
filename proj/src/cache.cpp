#include "optgauge/cache.hpp"

#include <cstdlib>
#include <fstream>
#include <limits>

#include "optgauge/config.hpp"

namespace optgauge {

namespace fs = std::filesystem;
using nlohmann::json;

ResultCache::ResultCache(fs::path dir) : dir_(std::move(dir)) {}

fs::path ResultCache::default_directory() {
  if (const char* env = std::getenv("OPTGAUGE_CACHE_DIR"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return fs::path(xdg) / "optgauge";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".cache" / "optgauge";
  }
  return fs::temp_directory_path() / "optgauge-cache";
}

std::string ResultCache::key(std::string_view kind, const json& parts) {
  return sha256_hex(std::string(kind) + "\n" + parts.dump());
}

fs::path ResultCache::entry_path(const std::string& key) const {
  return dir_ / (key + ".json");
}

std::optional<json> ResultCache::load(const std::string& key) const {
  std::ifstream in(entry_path(key));
  if (!in) return std::nullopt;
  try {
    json entry = json::parse(in);
    if (entry.value("version", "") != tool_version()) return std::nullopt;
    return entry.at("payload");
  } catch (const json::exception&) {
    return std::nullopt;  // unreadable entries behave like misses
  }
}

void ResultCache::store(const std::string& key, std::string_view kind,
                        const json& payload) const {
  fs::create_directories(dir_);
  const json entry{{"key", key},
                   {"kind", std::string(kind)},
                   {"version", tool_version()},
                   {"payload", payload}};
  const fs::path target = entry_path(key);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write cache entry " + tmp.string());
    out << entry.dump();
  }
  fs::rename(tmp, target);
}

std::vector<CacheListing> ResultCache::list() const {
  std::vector<CacheListing> out;
  if (!fs::exists(dir_)) return out;
  for (const auto& e : fs::directory_iterator(dir_)) {
    if (e.path().extension() != ".json") continue;
    CacheListing item;
    item.key = e.path().stem().string();
    item.bytes = e.file_size();
    try {
      std::ifstream in(e.path());
      const json entry = json::parse(in);
      item.kind = entry.value("kind", "?");
      item.version = entry.value("version", "?");
    } catch (const json::exception&) {
      item.kind = "unreadable";
    }
    out.push_back(item);
  }
  std::sort(out.begin(), out.end(),
            [](const CacheListing& a, const CacheListing& b) { return a.key < b.key; });
  return out;
}

std::size_t ResultCache::clear() const {
  std::size_t removed = 0;
  if (!fs::exists(dir_)) return 0;
  for (const auto& e : fs::directory_iterator(dir_)) {
    const auto ext = e.path().extension();
    if (ext == ".json" || ext == ".tmp") {
      fs::remove(e.path());
      ++removed;
    }
  }
  return removed;
}

namespace {

json vector_json(const RealVector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

RealVector vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double number_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

json to_json(const Grid& g) {
  return json{{"x_min", g.x_min},
              {"x_max", g.x_max},
              {"n_points", g.n_points},
              {"scheme", to_string(g.scheme)}};
}

Grid grid_from_json(const json& j) {
  return Grid{j.at("x_min").get<double>(), j.at("x_max").get<double>(),
              j.at("n_points").get<int>(),
              discretization_from_string(j.at("scheme").get<std::string>())};
}

json to_json(const NumericalSettings& s) {
  return json{{"grid", to_json(s.grid)}, {"cutoffs", s.cutoffs}};
}

NumericalSettings settings_from_json(const json& j) {
  return NumericalSettings{grid_from_json(j.at("grid")),
                           j.at("cutoffs").get<std::vector<int>>()};
}

json to_json(const ConvergenceReport& r) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"knob", to_string(s.knob)},
                     {"settings", to_json(s.settings)},
                     {"dimension", s.dimension},
                     {"eigenvalues", vector_json(s.eigenvalues)},
                     {"drift", s.drift}});
  }
  return json{{"final_settings", to_json(r.final_settings)},
              {"verified_settings", to_json(r.verified_settings)},
              {"steps", steps},
              {"converged", r.converged},
              {"tol", r.tol},
              {"k", r.k}};
}

ConvergenceReport report_from_json(const json& j) {
  ConvergenceReport r;
  r.final_settings = settings_from_json(j.at("final_settings"));
  r.verified_settings = settings_from_json(j.at("verified_settings"));
  for (const auto& s : j.at("steps")) {
    EscalationStep step;
    const auto knob = s.at("knob").get<std::string>();
    step.knob = knob == "grid"      ? EscalationStep::Knob::grid
                : knob == "cutoffs" ? EscalationStep::Knob::cutoffs
                                    : EscalationStep::Knob::initial;
    step.settings = settings_from_json(s.at("settings"));
    step.dimension = s.at("dimension").get<int>();
    step.eigenvalues = vector_from(s.at("eigenvalues"));
    step.drift = s.at("drift").get<double>();
    r.steps.push_back(std::move(step));
  }
  r.converged = j.at("converged").get<bool>();
  r.tol = j.at("tol").get<double>();
  r.k = j.at("k").get<int>();
  return r;
}

json to_json(const ExactReference& r) {
  return json{{"eigenvalues", vector_json(r.eigenvalues)},
              {"settings", to_json(r.settings)},
              {"report", to_json(r.report)},
              {"reference_gauge", r.reference_gauge.values()},
              {"check_gauge", r.check_gauge.values()},
              {"check_deviation", r.check_deviation},
              {"gauge_verified", r.gauge_verified}};
}

ExactReference reference_from_json(const json& j) {
  ExactReference r;
  r.eigenvalues = vector_from(j.at("eigenvalues"));
  r.settings = settings_from_json(j.at("settings"));
  r.report = report_from_json(j.at("report"));
  r.reference_gauge = GaugeVector(j.at("reference_gauge").get<std::vector<double>>());
  r.check_gauge = GaugeVector(j.at("check_gauge").get<std::vector<double>>());
  r.check_deviation = j.at("check_deviation").get<double>();
  r.gauge_verified = j.at("gauge_verified").get<bool>();
  return r;
}

json to_json(const MetricsReport& m) {
  return json{{"gauge", m.gauge.values()},
              {"energies", m.energies},
              {"sigma", m.sigma},
              {"fidelity", m.fidelity},
              {"entropy_full", m.entropy_full},
              {"entropy_truncated", m.entropy_truncated}};
}

MetricsReport metrics_from_json(const json& j) {
  MetricsReport m;
  m.gauge = GaugeVector(j.at("gauge").get<std::vector<double>>());
  m.energies = j.at("energies").get<int>();
  m.sigma = number_or_nan(j.at("sigma"));
  m.fidelity = number_or_nan(j.at("fidelity"));
  m.entropy_full = number_or_nan(j.at("entropy_full"));
  m.entropy_truncated = number_or_nan(j.at("entropy_truncated"));
  return m;
}

json to_json(const ExactSolution& s) {
  json out{{"report", to_json(s.report)},
           {"values", vector_json(s.spectrum.values)},
           {"residuals", vector_json(s.spectrum.residuals)},
           {"matvecs", s.spectrum.matvecs},
           {"restarts", s.spectrum.restarts}};
  if (s.spectrum.vectors.cols() > 0) {
    const ComplexVector g = s.spectrum.vectors.col(0);
    out["ground_re"] = vector_json(g.real());
    out["ground_im"] = vector_json(g.imag());
  }
  return out;
}

ExactSolution solution_from_json(const json& j) {
  ExactSolution s;
  s.report = report_from_json(j.at("report"));
  s.spectrum.values = vector_from(j.at("values"));
  s.spectrum.residuals = vector_from(j.at("residuals"));
  s.spectrum.matvecs = j.at("matvecs").get<long>();
  s.spectrum.restarts = j.at("restarts").get<int>();
  if (j.contains("ground_re")) {
    const RealVector re = vector_from(j.at("ground_re"));
    const RealVector im = vector_from(j.at("ground_im"));
    s.spectrum.vectors.resize(re.size(), 1);
    s.spectrum.vectors.col(0) = re.cast<cplx>() + kI * im.cast<cplx>();
  }
  return s;
}

}  // namespace optgauge

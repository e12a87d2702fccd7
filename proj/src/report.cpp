#include "optgauge/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace optgauge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

std::vector<int> varying_axes(const SweepResult& r) {
  std::vector<int> out;
  for (std::size_t a = 0; a < r.axes.size(); ++a) {
    if (!r.axes[a].fixed) out.push_back(static_cast<int>(a));
  }
  return out;
}

std::string axes_description(const SweepResult& r) {
  std::ostringstream s;
  for (std::size_t a = 0; a < r.axes.size(); ++a) {
    const auto& ax = r.axes[a];
    s << (a ? "; " : "") << "eta_" << a + 1;
    if (ax.fixed) {
      s << " = " << ax.lo << " (fixed)";
    } else {
      s << " in [" << ax.lo << ", " << ax.hi << "] x " << ax.steps;
    }
  }
  return s.str();
}

}  // namespace

void write_header(std::ostream& out, const FileHeader& h) {
  if (!h.title.empty()) out << "# " << h.title << '\n';
  out << "# config_hash: " << h.config_hash << '\n';
  if (!h.convergence.empty()) out << "# convergence: " << h.convergence << '\n';
  for (const auto& c : h.columns) out << "# " << c << '\n';
}

FileHeader sweep_header(const SweepResult& result, const std::string& config_hash) {
  FileHeader h;
  h.title = "gauge sweep: " + axes_description(result);
  h.config_hash = config_hash;
  h.convergence = result.exact.report.summary(result.delta);
  std::ostringstream check;
  check << "exact reference gauge check: max |dE| = "
        << result.exact.check_deviation / result.delta << " Delta ("
        << (result.exact.gauge_verified ? "verified" : "NOT verified") << ")";
  h.columns.push_back(check.str());
  h.columns.push_back("sigma in units of Delta; entropies use the natural log");
  return h;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result,
                     const FileHeader& header) {
  write_header(out, header);
  const std::size_t K = result.axes.size();
  for (std::size_t a = 0; a < K; ++a) out << "eta_" << a + 1 << ',';
  out << "sigma,fidelity,S_full,S_trunc,ok,flag\n";
  for (const auto& p : result.points) {
    for (std::size_t a = 0; a < K; ++a) out << fmt(p.metrics.gauge[a]) << ',';
    const auto& m = p.metrics;
    if (p.ok) {
      out << fmt(m.sigma) << ',' << fmt(m.fidelity) << ',' << fmt(m.entropy_full)
          << ',' << fmt(m.entropy_truncated) << ",1,";
    } else {
      out << "nan,nan,nan,nan,0,";
    }
    std::string flag = p.flag;
    for (char& c : flag) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << flag << '\n';
  }
}

void write_gnuplot_matrix(std::ostream& out, const SweepResult& result,
                          OptimalMetric metric, const FileHeader& header) {
  const auto vary = varying_axes(result);
  if (vary.size() != 2) {
    throw DimensionError("a surface needs exactly two varying gauge axes");
  }
  const int a0 = vary[0], a1 = vary[1];
  write_header(out, header);
  out << "# metric: " << to_string(metric) << "; rows: eta_" << a0 + 1
      << ", columns: eta_" << a1 + 1 << " (gnuplot: matrix nonuniform)\n";
  const auto v0 = result.axes[a0].values();
  const auto v1 = result.axes[a1].values();
  out << v1.size();
  for (double x : v1) out << ' ' << fmt(x);
  out << '\n';
  // Points are row-major with axis 0 slowest; fixed axes have size 1.
  const int n1 = static_cast<int>(v1.size());
  for (std::size_t i = 0; i < v0.size(); ++i) {
    out << fmt(v0[i]);
    for (int j = 0; j < n1; ++j) {
      const auto& p = result.points[i * n1 + j];
      out << ' ' << (p.ok ? fmt(metric_value(p.metrics, metric)) : "nan");
    }
    out << '\n';
  }
}

json sweep_summary(const SweepResult& result, const std::vector<OptimalMetric>& metrics,
                   const std::string& config_hash) {
  json argmin = json::object();
  for (auto m : metrics) {
    try {
      const GaugeVector best = find_optimal(result, m);
      argmin[to_string(m)] = best.values();
    } catch (const Error& e) {
      argmin[to_string(m)] = nullptr;
    }
  }
  json axes = json::array();
  for (const auto& a : result.axes) {
    axes.push_back(a.fixed ? json{{"fixed", a.lo}}
                           : json{{"range", {a.lo, a.hi}}, {"steps", a.steps}});
  }
  json flags = json::array();
  for (const auto& p : result.points) {
    if (!p.ok) flags.push_back({{"gauge", p.metrics.gauge.values()}, {"flag", p.flag}});
  }
  int cached = 0;
  for (const auto& p : result.points) cached += p.from_cache ? 1 : 0;
  return json{{"config_hash", config_hash},
              {"axes", axes},
              {"points", result.points.size()},
              {"flagged", result.flagged()},
              {"flags", flags},
              {"from_cache", cached},
              {"argmin", argmin},
              {"delta", result.delta},
              {"exact",
               {{"converged", result.exact.report.converged},
                {"gauge_verified", result.exact.gauge_verified},
                {"check_deviation_in_delta", result.exact.check_deviation / result.delta},
                {"summary", result.exact.report.summary(result.delta)}}}};
}

std::vector<fs::path> write_sweep_bundle(const fs::path& dir, const std::string& name,
                                         const SweepResult& result,
                                         const std::vector<OptimalMetric>& metrics,
                                         const std::string& config_hash) {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  const FileHeader header = sweep_header(result, config_hash);
  {
    const fs::path p = dir / (name + ".csv");
    std::ofstream out(p);
    write_sweep_csv(out, result, header);
    written.push_back(p);
  }
  {
    const fs::path p = dir / (name + ".json");
    std::ofstream out(p);
    out << sweep_summary(result, metrics, config_hash).dump(2) << '\n';
    written.push_back(p);
  }
  if (varying_axes(result).size() == 2) {
    for (auto m : metrics) {
      const fs::path p = dir / (name + "_" + to_string(m) + ".dat");
      std::ofstream out(p);
      write_gnuplot_matrix(out, result, m, header);
      written.push_back(p);
    }
  }
  return written;
}

}  // namespace optgauge

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "optgauge/metrics.hpp"
#include "optgauge/spectra.hpp"
#include "optgauge/sweep.hpp"

namespace optgauge {

struct CacheListing {
  std::string key;
  std::string kind;
  std::string version;
  std::uintmax_t bytes = 0;
};

/// Content-addressed store: one JSON file per key under a directory. Each
/// entry records the tool version; entries from another version are misses.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir);

  /// $OPTGAUGE_CACHE_DIR, else $XDG_CACHE_HOME/optgauge, else ~/.cache/optgauge.
  static std::filesystem::path default_directory();

  /// SHA-256 over kind and the canonical dump of `parts`.
  static std::string key(std::string_view kind, const nlohmann::json& parts);

  const std::filesystem::path& directory() const { return dir_; }

  std::optional<nlohmann::json> load(const std::string& key) const;
  /// Written to a temporary file and renamed, so readers never see a torn entry.
  void store(const std::string& key, std::string_view kind,
             const nlohmann::json& payload) const;

  std::vector<CacheListing> list() const;
  /// Removes every entry; returns how many.
  std::size_t clear() const;

 private:
  std::filesystem::path entry_path(const std::string& key) const;
  std::filesystem::path dir_;
};

nlohmann::json to_json(const Grid& grid);
Grid grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NumericalSettings& s);
NumericalSettings settings_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ConvergenceReport& r);
ConvergenceReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExactReference& r);
ExactReference reference_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MetricsReport& m);
MetricsReport metrics_from_json(const nlohmann::json& j);
/// Eigenvalues, residuals and (if present) the ground-state vector.
nlohmann::json to_json(const ExactSolution& s);
ExactSolution solution_from_json(const nlohmann::json& j);

}  // namespace optgauge

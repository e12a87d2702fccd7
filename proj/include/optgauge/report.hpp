#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "optgauge/sweep.hpp"

namespace optgauge {

/// Metadata written as '#'-prefixed lines at the top of every data file.
struct FileHeader {
  std::string title;
  std::string config_hash;
  std::string convergence;           // ConvergenceReport::summary
  std::vector<std::string> columns;  // column documentation lines
};

void write_header(std::ostream& out, const FileHeader& header);

FileHeader sweep_header(const SweepResult& result, const std::string& config_hash);

/// One row per grid point: eta_1..eta_K, sigma, fidelity, S_full, S_trunc,
/// then ok and flag. sigma is in units of Delta; missing values are "nan".
void write_sweep_csv(std::ostream& out, const SweepResult& result,
                     const FileHeader& header);

/// gnuplot "matrix nonuniform" layout for a surface over the two non-fixed
/// axes: first row holds the axis-1 values, each further row starts with an
/// axis-0 value. Throws DimensionError unless exactly two axes vary.
void write_gnuplot_matrix(std::ostream& out, const SweepResult& result,
                          OptimalMetric metric, const FileHeader& header);

/// Argmins per metric, flags, exact-reference check and the config hash.
nlohmann::json sweep_summary(const SweepResult& result,
                             const std::vector<OptimalMetric>& metrics,
                             const std::string& config_hash);

/// Writes `name`.csv, `name`.json and (for 2D sweeps) `name`_<metric>.dat
/// into dir. Returns the paths written.
std::vector<std::filesystem::path> write_sweep_bundle(
    const std::filesystem::path& dir, const std::string& name,
    const SweepResult& result, const std::vector<OptimalMetric>& metrics,
    const std::string& config_hash);

}  // namespace optgauge

#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace optgauge {

/// One cavity mode: angular frequency and vacuum field amplitude A_k.
struct ModeSpec {
  double omega = 1.0;
  double amplitude = 0.0;
};

/// Per-mode gauge parameters. 0 is the Coulomb gauge, 1 the dipole gauge;
/// other finite values interpolate (or extrapolate) between them.
class GaugeVector {
 public:
  GaugeVector() = default;
  explicit GaugeVector(std::vector<double> eta);
  GaugeVector(std::initializer_list<double> eta)
      : GaugeVector(std::vector<double>(eta)) {}

  static GaugeVector uniform(std::size_t modes, double eta);
  static GaugeVector coulomb(std::size_t modes) { return uniform(modes, 0.0); }
  static GaugeVector dipole(std::size_t modes) { return uniform(modes, 1.0); }

  std::size_t size() const { return eta_.size(); }
  double operator[](std::size_t k) const { return eta_[k]; }
  const std::vector<double>& values() const { return eta_; }

  /// True if any component lies outside [0, 1]. Allowed, but worth a note.
  bool outside_unit_interval() const;
  std::string to_string() const;

  friend bool operator==(const GaugeVector&, const GaugeVector&) = default;

 private:
  std::vector<double> eta_;
};

}  // namespace optgauge

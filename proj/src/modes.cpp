#include "optgauge/modes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "optgauge/common.hpp"

namespace optgauge {

GaugeVector::GaugeVector(std::vector<double> eta) : eta_(std::move(eta)) {
  for (double e : eta_) {
    if (!std::isfinite(e)) throw Error("gauge parameter is not finite");
  }
}

GaugeVector GaugeVector::uniform(std::size_t modes, double eta) {
  return GaugeVector(std::vector<double>(modes, eta));
}

bool GaugeVector::outside_unit_interval() const {
  return std::any_of(eta_.begin(), eta_.end(),
                     [](double e) { return e < 0.0 || e > 1.0; });
}

std::string GaugeVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < eta_.size(); ++k) {
    if (k) os << ", ";
    os << eta_[k];
  }
  os << ')';
  return os.str();
}

}  // namespace optgauge

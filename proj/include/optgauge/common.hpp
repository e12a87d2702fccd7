#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

// Units throughout: hbar = m = q = 1. Energies are absolute unless a name
// says otherwise (`*_in_delta` quantities are in units of the bare atomic
// transition energy).
namespace optgauge {

using cplx = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RowMajorComplexMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline constexpr cplx kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A kept atomic level leaks through the grid boundary.
class DomainTooSmallError : public Error {
 public:
  DomainTooSmallError(int level, double density)
      : Error("grid domain too small: level " + std::to_string(level) +
              " has boundary density " + std::to_string(density)),
        level_(level),
        density_(density) {}
  int level() const { return level_; }
  double density() const { return density_; }

 private:
  int level_;
  double density_;
};

class DegenerateTransitionError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class InstabilityError : public Error {
 public:
  using Error::Error;
};

class HermiticityError : public Error {
 public:
  using Error::Error;
};

class NormError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& best_residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

/// Schema or value problem in a run configuration; `field` is a JSON pointer.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace optgauge

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "optgauge/common.hpp"
#include "optgauge/modes.hpp"

namespace optgauge {

/// Truncated multimode Fock space. Flat indices are row-major over the
/// occupation tuple with mode 0 slowest.
class FockSpace {
 public:
  static constexpr std::size_t kDefaultBudget = 4'000'000;

  FockSpace() = default;
  explicit FockSpace(std::vector<int> cutoffs,
                     std::size_t max_dimension = kDefaultBudget);

  int modes() const { return static_cast<int>(cutoffs_.size()); }
  int dimension() const { return dimension_; }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  int stride(int k) const { return strides_[k]; }

  int index(std::span<const int> occupations) const;
  std::vector<int> occupations(int index) const;

  friend bool operator==(const FockSpace& a, const FockSpace& b) {
    return a.cutoffs_ == b.cutoffs_;
  }

 private:
  std::vector<int> cutoffs_;
  std::vector<int> strides_;
  int dimension_ = 1;
};

FockSpace build_fock_space(std::vector<int> cutoffs,
                           std::size_t max_dimension = FockSpace::kDefaultBudget);

enum class ModeOperatorKind {
  annihilate,
  create,
  position,  // b + b^dagger
  momentum,  // i (b^dagger - b)
  number,
};

/// Truncated boson operator on mode k embedded in the full Fock space.
SparseMatrix mode_operator(const FockSpace& space, int k, ModeOperatorKind kind);

/// Photonic part of the mixed-gauge Hamiltonian:
///   (1/2) [sum_k (1 - eta_k) A_k (b_k + b_k^dagger)]^2 + sum_k omega_k b_k^dagger b_k
SparseMatrix photonic_hamiltonian(const FockSpace& space,
                                  std::span<const ModeSpec> modes,
                                  const GaugeVector& gauge);

/// Normal modes of the quadratic photonic Hamiltonian. With quadratures
/// q_k = (b_k + b_k^dagger)/sqrt2, p_k = i(b_k^dagger - b_k)/sqrt2 the
/// Hamiltonian is (q^T Kq q + p^T Kp p)/2 - sum_k omega_k/2. `symplectic`
/// maps normal-mode quadratures (Q, P) to (q, p).
struct BogoliubovResult {
  RealVector frequencies;
  RealMatrix symplectic;  // 2K x 2K, ordered (q_1..q_K, p_1..p_K)
  /// Ground energy of the photonic Hamiltonian: sum (w~_k - w_k) / 2.
  double vacuum_energy = 0.0;

  /// max |S J S^T - J|.
  double symplectic_residual() const;
};

BogoliubovResult bogoliubov_diagonalize(std::span<const ModeSpec> modes,
                                        const GaugeVector& gauge);

}  // namespace optgauge

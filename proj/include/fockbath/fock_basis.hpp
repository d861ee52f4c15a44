#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fockbath {

// Occupation-number configuration of the bath modes plus the probe position.
// Mode order for the two-band lattice: (n_L0, n_L1, n_R0, n_R1).
// Single-band runs use modes (n_L0, n_R0). Probe: 0 = L, 1 = R.
struct FockKet {
  std::array<int, 4> n{0, 0, 0, 0};
  int probe = 0;
};

// Enumeration of all bosonic bath kets with fixed total atom number N over
// M modes (M = 2 or 4), tensored with the two-dimensional probe space.
// Order is lexicographic with the first mode varying slowest; the probe
// index is the fastest-varying factor, so the combined index of a ket is
// 2 * bath_rank + probe. The partial trace over the bath then reduces to
// sums over stride-2 pairs.
class BasisIndex {
 public:
  BasisIndex(int atoms, int modes, std::int64_t dimension_cap = 1'000'000);

  int atoms() const { return atoms_; }
  int modes() const { return modes_; }
  std::int64_t bath_dimension() const { return d_bath_; }
  std::int64_t dimension() const { return 2 * d_bath_; }

  // Closed-form combinatorial rank of a bath configuration.
  std::int64_t bath_rank(const std::array<int, 4>& occ) const;
  std::array<int, 4> bath_unrank(std::int64_t index) const;

  std::int64_t rank(const FockKet& ket) const;
  FockKet unrank(std::int64_t index) const;

  // Occupation of bath mode m in the configuration with the given bath rank.
  int occupation(std::int64_t bath_index, int mode) const {
    return kets_[static_cast<std::size_t>(bath_index)][static_cast<std::size_t>(mode)];
  }
  const std::array<int, 4>& ket(std::int64_t bath_index) const {
    return kets_[static_cast<std::size_t>(bath_index)];
  }

 private:
  int atoms_;
  int modes_;
  std::int64_t d_bath_;
  std::vector<std::array<int, 4>> kets_;
};

// C(n, k) as int64 with overflow guard.
std::int64_t binomial(int n, int k);

}  // namespace fockbath

#include "fockbath/fock_basis.hpp"

#include <limits>
#include <numeric>
#include <string>

namespace fockbath {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    if (r > std::numeric_limits<std::int64_t>::max() / (n - k + i)) {
      throw std::overflow_error("binomial overflow");
    }
    r = r * (n - k + i) / i;
  }
  return r;
}

BasisIndex::BasisIndex(int atoms, int modes, std::int64_t dimension_cap)
    : atoms_(atoms), modes_(modes) {
  if (atoms < 1) throw std::invalid_argument("BasisIndex: need at least one atom");
  if (modes != 2 && modes != 4) throw std::invalid_argument("BasisIndex: modes must be 2 or 4");
  d_bath_ = binomial(atoms + modes - 1, modes - 1);
  if (2 * d_bath_ > dimension_cap) {
    throw std::length_error("BasisIndex: dimension " + std::to_string(2 * d_bath_) +
                            " exceeds cap " + std::to_string(dimension_cap));
  }
  kets_.reserve(static_cast<std::size_t>(d_bath_));
  std::array<int, 4> occ{0, 0, 0, 0};
  // Lexicographic enumeration, first mode slowest.
  if (modes == 2) {
    for (int a = 0; a <= atoms; ++a) {
      occ = {a, atoms - a, 0, 0};
      kets_.push_back(occ);
    }
  } else {
    for (int a = 0; a <= atoms; ++a)
      for (int b = 0; b <= atoms - a; ++b)
        for (int c = 0; c <= atoms - a - b; ++c) {
          occ = {a, b, c, atoms - a - b - c};
          kets_.push_back(occ);
        }
  }
}

std::int64_t BasisIndex::bath_rank(const std::array<int, 4>& occ) const {
  int sum = 0;
  for (int m = 0; m < modes_; ++m) {
    if (occ[static_cast<std::size_t>(m)] < 0) {
      throw std::invalid_argument("bath_rank: negative occupation");
    }
    sum += occ[static_cast<std::size_t>(m)];
  }
  if (sum != atoms_) throw std::invalid_argument("bath_rank: occupations do not sum to N");
  // Sum of compositions skipped at each position: kets whose prefix value is
  // smaller at the first differing mode come first.
  std::int64_t idx = 0;
  int rem = atoms_;
  for (int m = 0; m < modes_ - 1; ++m) {
    const int k = modes_ - 1 - m;  // free modes after this one
    const int v = occ[static_cast<std::size_t>(m)];
    // sum_{w=0}^{v-1} C(rem - w + k - 1, k - 1) = C(rem + k, k) - C(rem - v + k, k)
    idx += binomial(rem + k, k) - binomial(rem - v + k, k);
    rem -= v;
  }
  return idx;
}

std::array<int, 4> BasisIndex::bath_unrank(std::int64_t index) const {
  if (index < 0 || index >= d_bath_) throw std::out_of_range("bath_unrank: index out of range");
  return kets_[static_cast<std::size_t>(index)];
}

std::int64_t BasisIndex::rank(const FockKet& ket) const {
  if (ket.probe != 0 && ket.probe != 1) throw std::invalid_argument("rank: probe must be 0 or 1");
  return 2 * bath_rank(ket.n) + ket.probe;
}

FockKet BasisIndex::unrank(std::int64_t index) const {
  if (index < 0 || index >= dimension()) throw std::out_of_range("unrank: index out of range");
  FockKet ket;
  ket.n = bath_unrank(index / 2);
  ket.probe = static_cast<int>(index % 2);
  return ket;
}

}  // namespace fockbath

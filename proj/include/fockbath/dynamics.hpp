#pragma once

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "fockbath/fock_basis.hpp"
#include "fockbath/hamiltonian.hpp"
#include "fockbath/sparse_operator.hpp"

namespace fockbath {

// Complex amplitude vector over the combined basis. hbar = 1, energies in
// hbar*omega0 and times in 1/omega0 throughout.
struct QuantumState {
  std::vector<Complex> amp;
  double time = 0.0;

  double norm() const;
  void normalize();
  Complex overlap(const QuantumState& other) const;  // <this|other>

  static QuantumState basis_ket(const BasisIndex& basis, const FockKet& ket);
};

// Two-stage experiment description: free evolution until t_switch, full
// coupled evolution afterwards.
struct Protocol {
  std::array<int, 4> initial_bath{16, 0, 10, 4};
  int initial_probe = 0;  // 0 = L
  double t_switch = 100.0;
  double t_end = 600.0;
  double dt_sample = 0.1;
  double tolerance = 1e-10;
  bool record_marginals = true;
  void validate() const;
};

struct OccupationRecord {
  std::array<double, 4> occupation{};  // <n_r^l>, raw counts
  double p_left = 0.0;
  double p_right = 0.0;
};

// Uniformly sampled observable record of a protocol run. Occupations are
// stored per atom (<n>/N); marginals[s][m][k] is the probability of finding
// exactly k atoms in bath mode m at sample s.
struct TimeSeries {
  int atoms = 0;
  int modes = 0;
  std::vector<double> t;
  std::vector<std::array<double, 4>> occ;
  std::vector<double> p_left, p_right, purity, energy;
  std::vector<std::array<std::vector<double>, 4>> marginals;
  // P(n_band = k) for the two band totals; two-band runs only. The band-1
  // distribution is the mirror of band 0 since n0 + n1 = N.
  std::vector<std::array<std::vector<double>, 2>> level_marginals;

  std::size_t size() const { return t.size(); }
};

// Propagates exp(-i H dt) by Lanczos iteration, or by a cached dense
// eigendecomposition when the dimension is small enough.
class Propagator {
 public:
  explicit Propagator(const SparseOperator& h, int max_krylov = 30, double tolerance = 1e-10,
                      std::int64_t dense_cap = 2000);

  void evolve(QuantumState& state, double dt) const;
  bool dense() const { return !eigenvalues_.empty(); }

 private:
  void lanczos_step(std::vector<Complex>& amp, double dt, int depth) const;

  const SparseOperator& h_;
  int max_krylov_;
  double tolerance_;
  std::vector<double> eigenvalues_;     // dense path
  std::vector<double> eigenvectors_;    // column-major, dim x dim
};

// exp(-i H dt) through a one-off dense diagonalization; the oracle the
// Krylov path is tested against.
QuantumState evolve_dense_reference(const SparseOperator& h, const QuantumState& state, double dt);

OccupationRecord expectations(const QuantumState& state, const BasisIndex& basis);

// Occupation-number marginal of one bath mode: P(n_mode = k).
std::vector<double> occupation_marginal(const QuantumState& state, const BasisIndex& basis,
                                        int mode);

// Occupation-number marginal of a band total: P(n_L^l + n_R^l = k).
// Requires the two-band (4-mode) basis.
std::vector<double> level_marginal(const QuantumState& state, const BasisIndex& basis, int band);

struct ProtocolResult {
  TimeSeries series;
  QuantumState final_state;
};

// Full two-stage run: bath Hamiltonian plus free probe hopping before
// t_switch, full coupling afterwards. Samples every dt_sample.
ProtocolResult run_protocol(const ModelSpec& spec, const Protocol& protocol);

}  // namespace fockbath

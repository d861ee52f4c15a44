#pragma once

#include "fockbath/fock_basis.hpp"
#include "fockbath/orbitals.hpp"
#include "fockbath/sparse_operator.hpp"

namespace fockbath {

// Everything needed to assemble the bath and coupled Hamiltonians.
// Interaction normalization follows U n(n-1) and the bare coupling sum
// without 1/2 prefactors; the tunneling sum over r != r' already counts
// both directions, so no extra hermitian conjugate is added.
struct ModelSpec {
  HubbardParams params;
  int atoms = 30;
  int bands = 2;  // 1 restricts to the lowest band (2 modes)
  double t_switch = 100.0;
  bool coupling_enabled = true;
  std::int64_t dimension_cap = 1'000'000;

  int modes() const { return bands == 1 ? 2 : 4; }
  // Single-band runs have no second band to interact with.
  double u1() const { return bands == 1 ? 0.0 : params.U1; }
  double u01() const { return bands == 1 ? 0.0 : params.U01; }
  void validate() const;

  BasisIndex make_basis() const { return BasisIndex(atoms, modes(), dimension_cap); }
};

// Bath Hamiltonian on the bath factor alone (dimension D_bath).
SparseOperator build_bath_block(const ModelSpec& spec, const BasisIndex& basis);

// Bath Hamiltonian lifted to the combined basis, identity on the probe.
SparseOperator build_bath(const ModelSpec& spec, const BasisIndex& basis);

// Probe tunneling plus the g_I C coupling on the combined basis.
// With gI = 0 this is -Js sigma_x on the probe factor.
SparseOperator build_coupling(const ModelSpec& spec, const BasisIndex& basis,
                              const CouplingTensor& C);

// The cross-band perturbation V = U01 sum_r sum_{l != l'} (2 n n' + pair transfer)
// on the bath factor; used for the chaos diagnostics' delta^2 = Tr V^2 / N.
SparseOperator build_band_coupling_block(const ModelSpec& spec, const BasisIndex& basis);

}  // namespace fockbath

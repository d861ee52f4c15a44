#pragma once

#include "fockbath/dynamics.hpp"
#include "fockbath/hamiltonian.hpp"
#include "fockbath/orbitals.hpp"

namespace fockbath {

// Coupling tensor of the default trap (V0 = 10, sigma_b = 0.1, mass ratio 2,
// probe trap stiffness 2), frozen from the orbital solver on the default grid.
CouplingTensor paper_coupling_tensor();

// Two-band lattice constants of the default trap with the interaction
// strengths scaled to N atoms: U0 = 2/N, U1 = 3 U0/4, U01 = U0/2, gI = 2/N.
HubbardParams paper_params(int atoms);

ModelSpec paper_model(int atoms);

// Thermalization until t = 100, coupled evolution until t = 600, starting
// from |16,0,10,4> with the probe in the left well.
Protocol paper_protocol();

}  // namespace fockbath

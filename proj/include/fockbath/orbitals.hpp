#pragma once

#include <array>
#include <vector>

namespace fockbath {

// Uniform position grid in units of the harmonic oscillator length l_ho.
struct Grid1D {
  double x_min = -8.0;
  double x_max = 8.0;
  int n_points = 2048;

  double spacing() const { return (x_max - x_min) / (n_points - 1); }
  double x(int i) const { return x_min + i * spacing(); }
  void validate() const;
};

// Harmonic trap split by a Gaussian barrier. Energies in hbar*omega0,
// lengths in l_ho; the harmonic part is x^2/2 for the bath species.
struct TrapPotential {
  double barrier_height = 10.0;  // V0
  double barrier_width = 0.1;    // sigma_b

  double operator()(double x, double stiffness = 1.0) const;
  void validate() const;
};

// Interaction coefficients C^{l,m}_{alpha,beta,gamma,delta} of the
// probe-bath contact term: integrals of phi_alpha^l phi_beta^m psi_gamma psi_delta.
// Indices: band l, band m, bath wells alpha/beta, probe wells gamma/delta (0 = L, 1 = R).
struct CouplingTensor {
  double c[2][2][2][2][2][2] = {};

  double& at(int l, int m, int al, int be, int ga, int de) { return c[l][m][al][be][ga][de]; }
  double at(int l, int m, int al, int be, int ga, int de) const { return c[l][m][al][be][ga][de]; }
};

// Grid-sampled localized orbitals: four bath orbitals (wells L/R, bands 0/1)
// and the two probe orbitals, plus the probe/bath mass ratio.
struct OrbitalSet {
  Grid1D grid;
  double mass_ratio = 2.0;  // m_s / m
  // bath[band][well], well 0 = L, 1 = R
  std::array<std::array<std::vector<double>, 2>, 2> bath;
  std::array<std::vector<double>, 2> probe;  // [well]
};

// Lattice parameters of the two-band model, all in units of hbar*omega0.
struct HubbardParams {
  double J0 = 0.0, J1 = 0.0;  // bath tunneling per band
  double E0 = 0.0, E1 = 0.0;  // on-site energies (equal in both wells)
  double U0 = 0.0, U1 = 0.0, U01 = 0.0;
  double Js = 0.0;  // probe tunneling
  double gI = 0.0;  // probe-bath coupling
  CouplingTensor C;
};

struct Eigenstate {
  double energy;
  std::vector<double> wavefunction;  // trapezoid-normalized on the grid
};

// Lowest n_states of -(1/2 mass_ratio) d2/dx2 + V on the grid, by
// second-order central differences and a tridiagonal eigensolve.
// trap_stiffness scales the harmonic part (used for the heavier probe).
std::vector<Eigenstate> solve_eigenstates(const TrapPotential& potential, const Grid1D& grid,
                                          double mass_ratio, int n_states,
                                          double trap_stiffness = 1.0,
                                          double boundary_tol = 1e-6);

// Recombine the lowest two doublets into left/right localized orbitals.
// Eigenstates 0,1 form band 0 and 2,3 form band 1; the sign convention puts
// phi_R >= 0 in the right well. Probe orbitals come from a separate
// two-state solve for the heavier species.
OrbitalSet localize(const std::vector<Eigenstate>& bath_states,
                    const std::vector<Eigenstate>& probe_states, const Grid1D& grid,
                    double mass_ratio);

// Localize a single doublet (sym, asym) -> (left, right) on the grid.
std::pair<std::vector<double>, std::vector<double>> localize_doublet(
    const std::vector<double>& sym, const std::vector<double>& asym, const Grid1D& grid);

// All Hubbard parameters and the full coupling tensor by trapezoid
// quadrature over the localized orbitals.
HubbardParams hubbard_params(const OrbitalSet& orbitals, const TrapPotential& potential,
                             double g, double g_coupling, double probe_trap_stiffness);

double trapezoid(const std::vector<double>& f, double h);

}  // namespace fockbath

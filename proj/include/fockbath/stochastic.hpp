#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fockbath/chaos.hpp"
#include "fockbath/observables.hpp"
#include "fockbath/orbitals.hpp"

namespace fockbath {

// Gaussian level-shift noise with kernel sigma^2 exp(-2|t'-t''|/tau_c).
struct NoiseSpec {
  double sigma = 0.0;  // standard deviation of delta-eps, hbar*omega0
  double tau_c = 1.0;  // correlation time, 1/omega0
  std::uint64_t seed = 1;
  int ensemble = 1000;
  void validate() const;
};

// Induced mean-field shifts of the probe from the thermal bath occupations.
struct MeanFieldParams {
  double J0 = 0.0;    // induced tunneling mean (Delta J)
  double eps0 = 0.0;  // induced on-site mean
  double var_J = 0.0;
  double var_eps = 0.0;
  double Js = 0.0;  // bare probe tunneling

  double effective_tunneling() const { return Js - J0; }
  void validate() const;
};

// Linear propagation of the per-well occupation statistics through the
// C-weighted sums: Delta J = gI sum C^{ll}_{aaLR} n_a^l and
// eps = gI sum C^{ll}_{aarr} n_a^l, with independent Gaussian occupations.
// Fits carry raw atom counts, one per band; both wells share a fit by
// the left/right symmetry of the thermal state.
MeanFieldParams mean_field_from_microscopic(const CouplingTensor& c, double g_i, double j_s,
                                            const std::vector<GaussianFit>& level_fits);

// Stationary OU process with the NoiseSpec kernel; the update
// x' = x e^{-2 dt/tau_c} + sigma sqrt(1 - e^{-4 dt/tau_c}) xi is exact
// for any step size.
class OrnsteinUhlenbeck {
 public:
  OrnsteinUhlenbeck(double sigma, double tau_c, std::uint64_t seed);

  double value() const { return x_; }
  double step(double dt);

 private:
  double sigma_, tau_c_, x_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

// Per-trajectory stream seed for trajectory k of a seeded ensemble.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

struct DephasingSeries {
  std::vector<double> t;
  std::vector<double> p_left;       // ensemble mean rho_LL
  std::vector<double> offdiag_abs;  // |<e^{-i phi}>| for a single noise phase
  std::vector<double> purity;       // Tr rho^2 of the averaged density matrix
  std::vector<double> theta_exact;
  std::vector<double> theta_linear;
};

// Ensemble of two-level trajectories with H(t) = (eps0 + de(t)) 1 - Js' sigma_x.
// Each sigma_x eigenmode accumulates an independent OU phase; the averaged
// density matrix dephases with Theta(t) = Var(phi_1 - phi_0).
DephasingSeries simulate_dephasing(const MeanFieldParams& mf, const NoiseSpec& noise,
                                   double t_end, double dt);

struct ThetaValue {
  double exact = 0.0;
  double linear = 0.0;  // asymptote 2 sigma^2 tau_c t, valid for t >> tau_c/2
};

// Theta(t) = 2 sigma^2 [tau_c t - (tau_c^2/2)(1 - e^{-2t/tau_c})], the double
// integral of the noise kernel over [0,t]^2 scaled by 2/hbar^2.
ThetaValue theta_analytic(const NoiseSpec& noise, double t);

// Eq.-(7) density matrix: <cos theta> = cos(t/T) e^{-Theta/2} and likewise
// for the sine; purity = (1 + e^{-Theta})/2.
ReducedDensity phase_model_density(double period, double theta, double t);

}  // namespace fockbath

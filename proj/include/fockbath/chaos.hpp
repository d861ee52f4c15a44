#pragma once

#include <cstdint>
#include <vector>

#include "fockbath/dynamics.hpp"
#include "fockbath/hamiltonian.hpp"

namespace fockbath {

// Full eigendecomposition of the bath Hamiltonian block.
struct EigenDecomposition {
  std::int64_t dim = 0;
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column-major, vectors[i + dim*alpha]

  double component(std::int64_t n, std::int64_t alpha) const {
    return vectors[static_cast<std::size_t>(n + dim * alpha)];
  }
};

EigenDecomposition eigensolve_bath(const SparseOperator& bath_block,
                                   std::int64_t dense_cap = 8000);

// Components of one eigenstate against the Fock-basis diagonal energies
// eps_n = <n|H_T|n>, plus the participation ratio 1 / sum |C_n|^4.
struct EigenProfile {
  std::int64_t state = 0;
  double energy = 0.0;
  std::vector<double> eps;        // diagonal element of each basis ket
  std::vector<double> component;  // C_n^alpha
  double participation_ratio = 0.0;
  // energy-weighted component spread: sum |C_n|^2 (eps_n - <eps>)^2
  double energy_width = 0.0;
};

EigenProfile eigenstate_profile(const EigenDecomposition& dec, const SparseOperator& bath_block,
                                std::int64_t alpha);

// Index of the eigenstate closest in energy to the given target.
std::int64_t closest_eigenstate(const EigenDecomposition& dec, double energy);

// Participation ratio of eigenstate alpha of `dec` expanded over the
// eigenbasis `ref`. With ref the unperturbed spectrum this counts how many
// unperturbed eigenstates the perturbation mixes; an unperturbed eigenstate
// scores exactly 1 in its own basis.
double participation_in_basis(const EigenDecomposition& dec, std::int64_t alpha,
                              const EigenDecomposition& ref);

// Statistics of the occupation matrix n_{alpha beta} = sum_n n C_n^alpha C_n^beta
// over eigenpairs inside an energy window.
struct OffdiagStats {
  double mean = 0.0;
  double stddev = 0.0;
  double std_error = 0.0;
  std::int64_t pairs = 0;
  std::int64_t states_in_window = 0;
  double mean_diagonal = 0.0;
};

OffdiagStats offdiag_occupation_stats(const EigenDecomposition& dec, const BasisIndex& basis,
                                      int mode, double e_min, double e_max,
                                      std::int64_t min_states = 100);

// Mean level spacing of a spectrum restricted to [e_min, e_max].
double mean_level_spacing(const std::vector<double>& values, double e_min, double e_max);

// delta^2 = Tr V^2 / dim for the cross-band perturbation V.
double perturbation_width_squared(const SparseOperator& v);

// Time-averaged occupation-number distribution and its Gaussian fit.
struct GaussianFit {
  double mean = 0.0;
  double variance = 0.0;
  double chi_square = 0.0;
  double p_value = 0.0;
  int bins = 0;
  double effective_samples = 0.0;
};

struct OccupationDistribution {
  std::vector<double> p;  // P(n = k), k = 0..N
  int atoms = 0;
  double effective_samples = 0.0;
};

// Accumulate the per-sample quantum occupation marginals of one mode over a
// time window. The effective sample count discounts autocorrelation of the
// mean-occupation series, estimated by its integrated autocorrelation time.
OccupationDistribution accumulate_occupation_distribution(const TimeSeries& series, int mode,
                                                          double t0, double t1);

// Same accumulation for a band-total ("energy level") marginal. The
// distribution is normalized per site (2N sites share a band), so the fitted
// mean is the level population of the paper's Fig. 5.
OccupationDistribution accumulate_level_distribution(const TimeSeries& series, int band,
                                                     double t0, double t1);

// Gaussian fit by sample mean/variance of the per-atom occupation n/N, with a
// chi-square test of the binned distribution against the fitted Gaussian.
GaussianFit occupation_histogram(const OccupationDistribution& dist, int min_samples = 200);

// Same interface for a scalar sample series (used for control data where the
// observable is the expectation-value record itself).
GaussianFit scalar_histogram(const std::vector<double>& samples);

// Upper-tail probability of the chi-square distribution.
double chi_square_tail(double chi2, int dof);

}  // namespace fockbath

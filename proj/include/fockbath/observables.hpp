#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "fockbath/dynamics.hpp"

namespace fockbath {

// 2x2 reduced density matrix of the probe in the (L, R) basis.
struct ReducedDensity {
  std::array<std::array<Complex, 2>, 2> rho{};

  Complex operator()(int i, int j) const { return rho[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  double trace() const { return rho[0][0].real() + rho[1][1].real(); }
  void validate(double tol = 1e-10) const;
};

// Partial trace of |psi><psi| over the bath: rho_LL = sum |A_n|^2,
// rho_LR = sum A_n^* B_n over all bath configurations n.
ReducedDensity reduce(const QuantumState& state, const BasisIndex& basis);

// Tr rho^2; 1 for a pure state, 0.5 for a fully decohered probe.
double purity(const ReducedDensity& rho);

struct ExponentialFit {
  double rate = 0.0;       // gamma, in omega0
  double amplitude = 0.0;  // prefactor at t = 0
  double r_squared = 0.0;
  int points = 0;
};

struct FitOptions {
  bool envelope = true;     // fit local maxima of |y| instead of all samples
  double baseline = 0.0;    // subtracted from the observable before the log fit
  double min_value = 1e-12;
  int min_points = 5;
};

// Least-squares slope of log(y - baseline) against t over [t0, t1].
// With envelope fitting the samples are the local maxima of |y - baseline|,
// since the purity oscillates as it decays.
ExponentialFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y,
                               double t0, double t1, const FitOptions& options = {});

// Convenience: fit the purity excess 2P - 1 from a protocol time series.
ExponentialFit fit_purity_decay(const TimeSeries& series, double t0, double t1,
                                const FitOptions& options = {});

}  // namespace fockbath

#include "fockbath/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fockbath {

void ReducedDensity::validate(double tol) const {
  if (std::abs(trace() - 1.0) > tol) throw std::runtime_error("ReducedDensity: trace != 1");
  if (std::abs(rho[0][1] - std::conj(rho[1][0])) > tol) {
    throw std::runtime_error("ReducedDensity: not hermitian");
  }
}

ReducedDensity reduce(const QuantumState& state, const BasisIndex& basis) {
  if (static_cast<std::int64_t>(state.amp.size()) != basis.dimension()) {
    throw std::invalid_argument("reduce: dimension mismatch");
  }
  ReducedDensity rd;
  double ll = 0.0, rr = 0.0;
  Complex lr{0.0, 0.0};
  for (std::int64_t j = 0; j < basis.bath_dimension(); ++j) {
    const Complex a = state.amp[static_cast<std::size_t>(2 * j)];
    const Complex b = state.amp[static_cast<std::size_t>(2 * j + 1)];
    ll += std::norm(a);
    rr += std::norm(b);
    lr += std::conj(a) * b;
  }
  rd.rho[0][0] = ll;
  rd.rho[1][1] = rr;
  rd.rho[0][1] = lr;
  rd.rho[1][0] = std::conj(lr);
  return rd;
}

double purity(const ReducedDensity& rho) {
  double p = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) p += std::norm(rho(i, j));
  return p;
}

ExponentialFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y,
                               double t0, double t1, const FitOptions& options) {
  if (t.size() != y.size()) throw std::invalid_argument("fit_exponential: length mismatch");
  std::vector<double> ft, fy;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    const double v = std::abs(y[i] - options.baseline);
    if (options.envelope) {
      // local maximum of |y - baseline| within the window
      const bool up = i == 0 || std::abs(y[i - 1] - options.baseline) <= v;
      const bool down = i + 1 == t.size() || std::abs(y[i + 1] - options.baseline) < v;
      if (!(up && down)) continue;
    }
    if (v < options.min_value) continue;
    ft.push_back(t[i]);
    fy.push_back(std::log(v));
  }
  if (static_cast<int>(ft.size()) < options.min_points) {
    throw std::runtime_error("fit_exponential: fewer than " + std::to_string(options.min_points) +
                             " usable points in window");
  }
  const double n = static_cast<double>(ft.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < ft.size(); ++i) {
    st += ft[i];
    sy += fy[i];
    stt += ft[i] * ft[i];
    sty += ft[i] * fy[i];
  }
  const double denom = n * stt - st * st;
  if (denom == 0.0) throw std::runtime_error("fit_exponential: degenerate time samples");
  const double slope = (n * sty - st * sy) / denom;
  const double intercept = (sy - slope * st) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (std::size_t i = 0; i < ft.size(); ++i) {
    const double r = fy[i] - (slope * ft[i] + intercept);
    ss_res += r * r;
    ss_tot += (fy[i] - mean) * (fy[i] - mean);
  }
  ExponentialFit fit;
  fit.rate = -slope;
  fit.amplitude = std::exp(intercept);
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.points = static_cast<int>(ft.size());
  return fit;
}

ExponentialFit fit_purity_decay(const TimeSeries& series, double t0, double t1,
                                const FitOptions& options) {
  std::vector<double> excess(series.purity.size());
  for (std::size_t i = 0; i < excess.size(); ++i) excess[i] = 2.0 * series.purity[i] - 1.0;
  return fit_exponential(series.t, excess, t0, t1, options);
}

}  // namespace fockbath

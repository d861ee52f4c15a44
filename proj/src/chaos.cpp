#include "fockbath/chaos.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fockbath {

EigenDecomposition eigensolve_bath(const SparseOperator& bath_block, std::int64_t dense_cap) {
  const std::int64_t dim = bath_block.dim();
  if (dim > dense_cap) {
    throw std::length_error("eigensolve_bath: dimension exceeds dense-solve cap");
  }
  EigenDecomposition dec;
  dec.dim = dim;
  const std::size_t n = static_cast<std::size_t>(dim);
  dec.vectors.assign(n * n, 0.0);
  for (std::int64_t r = 0; r < dim; ++r) {
    for (std::int64_t k = bath_block.row_ptr()[static_cast<std::size_t>(r)];
         k < bath_block.row_ptr()[static_cast<std::size_t>(r) + 1]; ++k) {
      dec.vectors[static_cast<std::size_t>(bath_block.col()[static_cast<std::size_t>(k)]) * n +
                  static_cast<std::size_t>(r)] = bath_block.val()[static_cast<std::size_t>(k)];
    }
  }
  dec.values.assign(n, 0.0);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                                         dec.vectors.data(), static_cast<lapack_int>(n),
                                         dec.values.data());
  if (info != 0) throw std::runtime_error("eigensolve_bath: eigensolve failed");

  // Residual spot check over a spread of states.
  const std::int64_t stride = std::max<std::int64_t>(1, dim / 32);
  std::vector<double> x(n), y(n);
  for (std::int64_t a = 0; a < dim; a += stride) {
    for (std::size_t i = 0; i < n; ++i) x[i] = dec.component(static_cast<std::int64_t>(i), a);
    bath_block.apply(std::span<const double>(x), std::span<double>(y));
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - dec.values[static_cast<std::size_t>(a)] * x[i];
      res += r * r;
    }
    if (std::sqrt(res) > 1e-8 * std::max(1.0, std::abs(dec.values[static_cast<std::size_t>(a)]))) {
      throw std::runtime_error("eigensolve_bath: residual check failed");
    }
  }
  return dec;
}

EigenProfile eigenstate_profile(const EigenDecomposition& dec, const SparseOperator& bath_block,
                                std::int64_t alpha) {
  if (alpha < 0 || alpha >= dec.dim) throw std::out_of_range("eigenstate_profile: bad index");
  EigenProfile prof;
  prof.state = alpha;
  prof.energy = dec.values[static_cast<std::size_t>(alpha)];
  prof.eps.resize(static_cast<std::size_t>(dec.dim));
  prof.component.resize(static_cast<std::size_t>(dec.dim));
  double sum4 = 0.0, mean_eps = 0.0;
  for (std::int64_t n = 0; n < dec.dim; ++n) {
    const double c = dec.component(n, alpha);
    prof.eps[static_cast<std::size_t>(n)] = bath_block.diagonal(n);
    prof.component[static_cast<std::size_t>(n)] = c;
    sum4 += c * c * c * c;
    mean_eps += c * c * prof.eps[static_cast<std::size_t>(n)];
  }
  prof.participation_ratio = 1.0 / sum4;
  double width = 0.0;
  for (std::int64_t n = 0; n < dec.dim; ++n) {
    const double c = prof.component[static_cast<std::size_t>(n)];
    const double d = prof.eps[static_cast<std::size_t>(n)] - mean_eps;
    width += c * c * d * d;
  }
  prof.energy_width = width;
  return prof;
}

std::int64_t closest_eigenstate(const EigenDecomposition& dec, double energy) {
  const auto it = std::lower_bound(dec.values.begin(), dec.values.end(), energy);
  if (it == dec.values.begin()) return 0;
  if (it == dec.values.end()) return dec.dim - 1;
  const std::int64_t hi = it - dec.values.begin();
  return (energy - dec.values[static_cast<std::size_t>(hi - 1)] <
          dec.values[static_cast<std::size_t>(hi)] - energy)
             ? hi - 1
             : hi;
}

double participation_in_basis(const EigenDecomposition& dec, std::int64_t alpha,
                              const EigenDecomposition& ref) {
  if (alpha < 0 || alpha >= dec.dim) throw std::out_of_range("participation_in_basis: bad index");
  if (ref.dim != dec.dim) throw std::invalid_argument("participation_in_basis: dimension mismatch");
  double sum4 = 0.0;
  for (std::int64_t b = 0; b < ref.dim; ++b) {
    double ov = 0.0;
    for (std::int64_t n = 0; n < ref.dim; ++n) ov += ref.component(n, b) * dec.component(n, alpha);
    sum4 += ov * ov * ov * ov;
  }
  return 1.0 / sum4;
}

OffdiagStats offdiag_occupation_stats(const EigenDecomposition& dec, const BasisIndex& basis,
                                      int mode, double e_min, double e_max,
                                      std::int64_t min_states) {
  std::vector<std::int64_t> window;
  for (std::int64_t a = 0; a < dec.dim; ++a) {
    const double e = dec.values[static_cast<std::size_t>(a)];
    if (e >= e_min && e <= e_max) window.push_back(a);
  }
  if (static_cast<std::int64_t>(window.size()) < min_states) {
    throw std::runtime_error("offdiag_occupation_stats: window selects only " +
                             std::to_string(window.size()) + " states");
  }
  const std::size_t dim = static_cast<std::size_t>(dec.dim);
  std::vector<double> occ(dim);
  for (std::int64_t n = 0; n < dec.dim; ++n) occ[static_cast<std::size_t>(n)] = basis.occupation(n, mode);

  // M[:, a] = n .* C^alpha restricted to the window
  const std::size_t p = window.size();
  std::vector<double> m(dim * p);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t n = 0; n < dim; ++n) {
      m[a * dim + n] = occ[n] * dec.component(static_cast<std::int64_t>(n), window[a]);
    }
  }
  OffdiagStats stats;
  double sum = 0.0, sum2 = 0.0, diag_sum = 0.0;
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) {
      double v = 0.0;
      const double* ca = &dec.vectors[static_cast<std::size_t>(window[a]) * dim];
      const double* mb = &m[b * dim];
      for (std::size_t n = 0; n < dim; ++n) v += ca[n] * mb[n];
      if (a == b) {
        diag_sum += v;
      } else {
        sum += v;
        sum2 += v * v;
        ++stats.pairs;
      }
    }
  }
  stats.states_in_window = static_cast<std::int64_t>(p);
  stats.mean = sum / static_cast<double>(stats.pairs);
  const double var = sum2 / static_cast<double>(stats.pairs) - stats.mean * stats.mean;
  stats.stddev = std::sqrt(std::max(0.0, var));
  stats.std_error = stats.stddev / std::sqrt(static_cast<double>(stats.pairs));
  stats.mean_diagonal = diag_sum / static_cast<double>(p);
  return stats;
}

double mean_level_spacing(const std::vector<double>& values, double e_min, double e_max) {
  std::vector<double> in;
  for (double v : values) {
    if (v >= e_min && v <= e_max) in.push_back(v);
  }
  if (in.size() < 2) throw std::runtime_error("mean_level_spacing: window too narrow");
  return (in.back() - in.front()) / static_cast<double>(in.size() - 1);
}

double perturbation_width_squared(const SparseOperator& v) {
  return v.frobenius_squared() / static_cast<double>(v.dim());
}

namespace {

// Integrated autocorrelation time of a scalar series, window-truncated.
double autocorrelation_time(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 8) return 1.0;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (var == 0.0) return 1.0;
  double tau = 1.0;
  for (std::size_t lag = 1; lag < n / 4; ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) c += (x[i] - mean) * (x[i + lag] - mean);
    c /= static_cast<double>(n - lag) * var;
    if (c < 0.05) break;
    tau += 2.0 * c;
  }
  return tau;
}

double gauss_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

GaussianFit fit_binned(const std::vector<double>& values, const std::vector<double>& weights,
                       double n_eff) {
  GaussianFit fit;
  fit.effective_samples = n_eff;
  double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (wsum <= 0) throw std::runtime_error("occupation_histogram: empty distribution");
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) mean += weights[i] * values[i];
  mean /= wsum;
  double var = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    var += weights[i] * (values[i] - mean) * (values[i] - mean);
  }
  var /= wsum;
  fit.mean = mean;
  fit.variance = var;
  const double sigma = std::sqrt(var);
  if (sigma == 0.0) {
    fit.bins = 0;
    fit.p_value = 0.0;
    return fit;
  }

  // Freedman-Diaconis width from the weighted quartiles.
  auto quantile = [&](double q) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    double acc = 0.0;
    for (std::size_t k : order) {
      acc += weights[k] / wsum;
      if (acc >= q) return values[k];
    }
    return values[order.back()];
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double width = 2.0 * iqr / std::cbrt(std::max(2.0, n_eff));
  if (width <= 0) width = sigma;
  const double lo = mean - 5.0 * sigma;
  const int nbins = std::max(3, static_cast<int>(std::ceil(10.0 * sigma / width)));
  width = 10.0 * sigma / nbins;

  std::vector<double> observed(static_cast<std::size_t>(nbins), 0.0);
  double in_range = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    int b = static_cast<int>(std::floor((values[i] - lo) / width));
    if (b < 0) b = 0;
    if (b >= nbins) b = nbins - 1;
    observed[static_cast<std::size_t>(b)] += weights[i] / wsum;
    in_range += weights[i] / wsum;
  }
  double chi2 = 0.0;
  int used = 0;
  for (int b = 0; b < nbins; ++b) {
    const double e0 = lo + b * width;
    const double expected = gauss_cdf(e0 + width, mean, sigma) - gauss_cdf(e0, mean, sigma);
    if (expected * n_eff < 1.0) continue;  // starved bins destabilize the statistic
    const double diff = observed[static_cast<std::size_t>(b)] - expected;
    chi2 += n_eff * diff * diff / expected;
    ++used;
  }
  fit.chi_square = chi2;
  fit.bins = used;
  const int dof = std::max(1, used - 3);
  fit.p_value = chi_square_tail(chi2, dof);
  return fit;
}

}  // namespace

OccupationDistribution accumulate_occupation_distribution(const TimeSeries& series, int mode,
                                                          double t0, double t1) {
  if (series.marginals.empty()) {
    throw std::runtime_error("accumulate_occupation_distribution: run recorded no marginals");
  }
  OccupationDistribution dist;
  dist.atoms = series.atoms;
  dist.p.assign(static_cast<std::size_t>(series.atoms) + 1, 0.0);
  std::vector<double> mean_series;
  std::size_t count = 0;
  for (std::size_t s = 0; s < series.size(); ++s) {
    if (series.t[s] < t0 || series.t[s] > t1) continue;
    const auto& m = series.marginals[s][static_cast<std::size_t>(mode)];
    for (std::size_t k = 0; k < dist.p.size(); ++k) dist.p[k] += m[k];
    mean_series.push_back(series.occ[s][static_cast<std::size_t>(mode)]);
    ++count;
  }
  if (count == 0) throw std::runtime_error("accumulate_occupation_distribution: empty window");
  for (auto& v : dist.p) v /= static_cast<double>(count);
  dist.effective_samples = static_cast<double>(count) / autocorrelation_time(mean_series);
  return dist;
}

OccupationDistribution accumulate_level_distribution(const TimeSeries& series, int band,
                                                     double t0, double t1) {
  if (series.level_marginals.empty()) {
    throw std::runtime_error("accumulate_level_distribution: run recorded no level marginals");
  }
  if (band < 0 || band > 1) {
    throw std::invalid_argument("accumulate_level_distribution: band must be 0 or 1");
  }
  OccupationDistribution dist;
  dist.atoms = 2 * series.atoms;  // per-site units: a band spans both wells
  dist.p.assign(static_cast<std::size_t>(series.atoms) + 1, 0.0);
  std::vector<double> mean_series;
  std::size_t count = 0;
  for (std::size_t s = 0; s < series.size(); ++s) {
    if (series.t[s] < t0 || series.t[s] > t1) continue;
    const auto& m = series.level_marginals[s][static_cast<std::size_t>(band)];
    for (std::size_t k = 0; k < dist.p.size(); ++k) dist.p[k] += m[k];
    const auto& occ = series.occ[s];
    mean_series.push_back(band == 0 ? 0.5 * (occ[0] + occ[2]) : 0.5 * (occ[1] + occ[3]));
    ++count;
  }
  if (count == 0) throw std::runtime_error("accumulate_level_distribution: empty window");
  for (auto& v : dist.p) v /= static_cast<double>(count);
  dist.effective_samples = static_cast<double>(count) / autocorrelation_time(mean_series);
  return dist;
}

GaussianFit occupation_histogram(const OccupationDistribution& dist, int min_samples) {
  if (dist.effective_samples * 1.0 < 1.0) {
    throw std::runtime_error("occupation_histogram: no effective samples");
  }
  std::vector<double> values(dist.p.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = static_cast<double>(k) / static_cast<double>(dist.atoms);
  }
  // The accumulated quantum distribution carries far more information per
  // sample than a scalar record; min_samples guards the scalar use instead.
  (void)min_samples;
  return fit_binned(values, dist.p, std::max(dist.effective_samples, 8.0));
}

GaussianFit scalar_histogram(const std::vector<double>& samples) {
  if (samples.size() < 8) throw std::runtime_error("scalar_histogram: too few samples");
  std::vector<double> w(samples.size(), 1.0);
  const double n_eff = static_cast<double>(samples.size()) / autocorrelation_time(samples);
  return fit_binned(samples, w, std::max(n_eff, 8.0));
}

double chi_square_tail(double chi2, int dof) {
  // Regularized upper incomplete gamma Q(dof/2, chi2/2).
  const double a = 0.5 * dof;
  const double x = 0.5 * chi2;
  if (x < 0 || a <= 0) throw std::invalid_argument("chi_square_tail: bad arguments");
  if (x == 0) return 1.0;
  auto gammln = [](double z) { return std::lgamma(z); };
  if (x < a + 1.0) {
    // lower series
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-14) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - gammln(a));
    return 1.0 - p;
  }
  // upper continued fraction
  double b = x + 1.0 - a, c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-14) break;
  }
  return std::exp(-x + a * std::log(x) - gammln(a)) * h;
}

}  // namespace fockbath

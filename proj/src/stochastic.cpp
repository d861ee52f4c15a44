#include "fockbath/stochastic.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace fockbath {

void NoiseSpec::validate() const {
  if (sigma < 0) throw std::invalid_argument("NoiseSpec: sigma < 0");
  if (tau_c <= 0) throw std::invalid_argument("NoiseSpec: tau_c <= 0");
  if (ensemble < 1) throw std::invalid_argument("NoiseSpec: ensemble < 1");
}

void MeanFieldParams::validate() const {
  if (var_J < 0 || var_eps < 0) throw std::invalid_argument("MeanFieldParams: negative variance");
}

MeanFieldParams mean_field_from_microscopic(const CouplingTensor& c, double g_i, double j_s,
                                            const std::vector<GaussianFit>& level_fits) {
  if (level_fits.size() != 2) {
    throw std::invalid_argument("mean_field_from_microscopic: need one occupation fit per band");
  }
  MeanFieldParams mf;
  mf.Js = j_s;
  for (int l = 0; l < 2; ++l) {
    const double n_mean = level_fits[static_cast<std::size_t>(l)].mean;
    const double n_var = level_fits[static_cast<std::size_t>(l)].variance;
    for (int a = 0; a < 2; ++a) {
      const double cj = c.at(l, l, a, a, 0, 1);
      const double ce = c.at(l, l, a, a, 0, 0);
      mf.J0 += g_i * cj * n_mean;
      mf.eps0 += g_i * ce * n_mean;
      mf.var_J += g_i * g_i * cj * cj * n_var;
      mf.var_eps += g_i * g_i * ce * ce * n_var;
    }
  }
  return mf;
}

OrnsteinUhlenbeck::OrnsteinUhlenbeck(double sigma, double tau_c, std::uint64_t seed)
    : sigma_(sigma), tau_c_(tau_c), rng_(seed), normal_(0.0, 1.0) {
  x_ = sigma_ * normal_(rng_);  // stationary initial draw
}

double OrnsteinUhlenbeck::step(double dt) {
  const double a = std::exp(-2.0 * dt / tau_c_);
  x_ = x_ * a + sigma_ * std::sqrt(1.0 - a * a) * normal_(rng_);
  return x_;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over the combined counter; distinct streams decorrelate fully.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

DephasingSeries simulate_dephasing(const MeanFieldParams& mf, const NoiseSpec& noise,
                                   double t_end, double dt) {
  mf.validate();
  noise.validate();
  if (t_end <= 0 || dt <= 0) throw std::invalid_argument("simulate_dephasing: bad time grid");
  if (noise.sigma > 0 && dt > noise.tau_c / 10.0) {
    throw std::invalid_argument("simulate_dephasing: dt must resolve tau_c (dt <= tau_c/10)");
  }
  const int steps = static_cast<int>(std::round(t_end / dt));
  const std::size_t samples = static_cast<std::size_t>(steps) + 1;

  DephasingSeries out;
  out.t.resize(samples);
  for (std::size_t s = 0; s < samples; ++s) out.t[s] = static_cast<double>(s) * dt;

  std::vector<double> sum_cos(samples, 0.0), sum_sin(samples, 0.0);
  std::vector<std::complex<double>> sum_phase(samples, {0.0, 0.0});

  const double jp = mf.effective_tunneling();
  for (int traj = 0; traj < noise.ensemble; ++traj) {
    OrnsteinUhlenbeck ou0(noise.sigma, noise.tau_c,
                          stream_seed(noise.seed, 2 * static_cast<std::uint64_t>(traj)));
    OrnsteinUhlenbeck ou1(noise.sigma, noise.tau_c,
                          stream_seed(noise.seed, 2 * static_cast<std::uint64_t>(traj) + 1));
    double phi0 = 0.0, phi1 = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      const double theta = 2.0 * jp * out.t[s] + phi1 - phi0;
      sum_cos[s] += std::cos(theta);
      sum_sin[s] += std::sin(theta);
      sum_phase[s] += std::exp(std::complex<double>(0.0, -phi0));
      if (s + 1 < samples) {
        const double e0 = ou0.value(), e1 = ou1.value();
        ou0.step(dt);
        ou1.step(dt);
        phi0 += 0.5 * (e0 + ou0.value()) * dt;
        phi1 += 0.5 * (e1 + ou1.value()) * dt;
      }
    }
  }

  out.p_left.resize(samples);
  out.offdiag_abs.resize(samples);
  out.purity.resize(samples);
  out.theta_exact.resize(samples);
  out.theta_linear.resize(samples);
  const double m = static_cast<double>(noise.ensemble);
  for (std::size_t s = 0; s < samples; ++s) {
    const double c = sum_cos[s] / m;
    const double sn = sum_sin[s] / m;
    out.p_left[s] = 0.5 * (1.0 + c);
    out.offdiag_abs[s] = std::abs(sum_phase[s]) / m;
    out.purity[s] = 0.5 * (1.0 + c * c + sn * sn);
    const ThetaValue th = theta_analytic(noise, out.t[s]);
    out.theta_exact[s] = th.exact;
    out.theta_linear[s] = th.linear;
  }
  return out;
}

ThetaValue theta_analytic(const NoiseSpec& noise, double t) {
  if (t < 0) throw std::invalid_argument("theta_analytic: t < 0");
  const double s2 = noise.sigma * noise.sigma;
  const double tc = noise.tau_c;
  ThetaValue th;
  th.exact = 2.0 * s2 * (tc * t - 0.5 * tc * tc * (1.0 - std::exp(-2.0 * t / tc)));
  th.linear = 2.0 * s2 * tc * t;
  return th;
}

ReducedDensity phase_model_density(double period, double theta, double t) {
  if (period <= 0) throw std::invalid_argument("phase_model_density: period <= 0");
  if (theta < 0) throw std::invalid_argument("phase_model_density: theta < 0");
  const double damp = std::exp(-0.5 * theta);
  const double c = std::cos(t / period) * damp;
  const double s = std::sin(t / period) * damp;
  ReducedDensity rd;
  rd.rho[0][0] = 0.5 * (1.0 + c);
  rd.rho[1][1] = 0.5 * (1.0 - c);
  rd.rho[0][1] = Complex(0.0, -0.5 * s);
  rd.rho[1][0] = Complex(0.0, 0.5 * s);
  return rd;
}

}  // namespace fockbath

#include <doctest.h>

#include <cmath>
#include <random>

#include "fockbath/observables.hpp"
#include "fockbath/presets.hpp"

using namespace fockbath;

namespace {

QuantumState random_state(const BasisIndex& basis, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  QuantumState st;
  st.amp.resize(static_cast<std::size_t>(basis.dimension()));
  for (auto& a : st.amp) a = Complex(g(rng), g(rng));
  st.normalize();
  return st;
}

// Purity via the brute-force double sum over amplitude pairs.
double purity_oracle(const QuantumState& st, const BasisIndex& basis) {
  double p = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Complex rho_ij{0, 0};
      for (std::int64_t n = 0; n < basis.bath_dimension(); ++n) {
        rho_ij += std::conj(st.amp[static_cast<std::size_t>(2 * n + i)]) *
                  st.amp[static_cast<std::size_t>(2 * n + j)];
      }
      p += std::norm(rho_ij);
    }
  }
  return p;
}

}  // namespace

TEST_CASE("product state is pure") {
  const BasisIndex basis(4, 4);
  const QuantumState st = QuantumState::basis_ket(basis, FockKet{{2, 1, 1, 0}, 0});
  const ReducedDensity rho = reduce(st, basis);
  rho.validate();
  CHECK(rho(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(rho(0, 1)) < 1e-14);
  CHECK(purity(rho) == doctest::Approx(1.0));
}

TEST_CASE("maximally entangled state is fully mixed") {
  const BasisIndex basis(4, 4);
  QuantumState st;
  st.amp.assign(static_cast<std::size_t>(basis.dimension()), Complex{0, 0});
  st.amp[static_cast<std::size_t>(basis.rank(FockKet{{4, 0, 0, 0}, 0}))] = std::sqrt(0.5);
  st.amp[static_cast<std::size_t>(basis.rank(FockKet{{0, 0, 4, 0}, 1}))] = std::sqrt(0.5);
  const ReducedDensity rho = reduce(st, basis);
  rho.validate();
  CHECK(rho(0, 0).real() == doctest::Approx(0.5));
  CHECK(rho(1, 1).real() == doctest::Approx(0.5));
  CHECK(std::abs(rho(0, 1)) < 1e-14);
  CHECK(purity(rho) == doctest::Approx(0.5));
}

TEST_CASE("hand-built density matrix purity") {
  ReducedDensity rho;
  rho.rho[0][0] = 0.5;
  rho.rho[1][1] = 0.5;
  rho.rho[0][1] = 0.25;
  rho.rho[1][0] = 0.25;
  CHECK(purity(rho) == doctest::Approx(0.625));
}

TEST_CASE("purity matches the brute-force oracle on random states") {
  const BasisIndex basis(5, 4);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const QuantumState st = random_state(basis, seed);
    const ReducedDensity rho = reduce(st, basis);
    rho.validate();
    const double p = purity(rho);
    CHECK(p == doctest::Approx(purity_oracle(st, basis)).epsilon(1e-10));
    CHECK(p >= 0.5 - 1e-12);
    CHECK(p <= 1.0 + 1e-12);
  }
}

TEST_CASE("purity is invariant under probe-local unitaries") {
  const BasisIndex basis(4, 4);
  const QuantumState st = random_state(basis, 31);
  const double p0 = purity(reduce(st, basis));
  // U = [[cos, -e^{i phi} sin], [e^{-i phi} sin, cos]]
  const double th = 0.7, ph = 1.3;
  const Complex u00{std::cos(th), 0}, u01 = -std::exp(Complex{0, ph}) * std::sin(th);
  const Complex u10 = std::exp(Complex{0, -ph}) * std::sin(th), u11{std::cos(th), 0};
  QuantumState rot = st;
  for (std::int64_t n = 0; n < basis.bath_dimension(); ++n) {
    const Complex a = st.amp[static_cast<std::size_t>(2 * n)];
    const Complex b = st.amp[static_cast<std::size_t>(2 * n + 1)];
    rot.amp[static_cast<std::size_t>(2 * n)] = u00 * a + u01 * b;
    rot.amp[static_cast<std::size_t>(2 * n + 1)] = u10 * a + u11 * b;
  }
  CHECK(purity(reduce(rot, basis)) == doctest::Approx(p0).epsilon(1e-10));
}

TEST_CASE("purity one half forces the fully mixed state") {
  // within trace-1 hermitian positive matrices, P = 1/2 <=> rho = diag(1/2,1/2)
  for (double a : {0.5, 0.6, 0.9}) {
    for (double off : {0.0, 0.1, 0.2}) {
      ReducedDensity rho;
      rho.rho[0][0] = a;
      rho.rho[1][1] = 1.0 - a;
      rho.rho[0][1] = off;
      rho.rho[1][0] = off;
      const bool mixed = a == 0.5 && off == 0.0;
      if (mixed) {
        CHECK(purity(rho) == doctest::Approx(0.5));
      } else {
        CHECK(purity(rho) > 0.5 + 1e-12);
      }
    }
  }
}

TEST_CASE("exact exponential recovered") {
  std::vector<double> t, y;
  for (int i = 0; i <= 400; ++i) {
    t.push_back(0.5 * i);
    y.push_back(std::exp(-0.02 * 0.5 * i));
  }
  FitOptions options;
  options.envelope = false;
  const ExponentialFit fit = fit_exponential(t, y, 0.0, 200.0, options);
  CHECK(fit.rate == doctest::Approx(0.02).epsilon(1e-6));
  CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("constant series fits zero rate") {
  std::vector<double> t, y;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(static_cast<double>(i));
    y.push_back(0.7);
  }
  FitOptions options;
  options.envelope = false;
  const ExponentialFit fit = fit_exponential(t, y, 0.0, 100.0, options);
  CHECK(std::abs(fit.rate) < 1e-6);
}

TEST_CASE("envelope fit recovers the rate of an oscillatory decay") {
  std::vector<double> t, y;
  for (int i = 0; i <= 6000; ++i) {
    const double ti = 0.1 * i;
    t.push_back(ti);
    y.push_back(std::cos(0.2 * ti) * std::exp(-0.015 * ti));
  }
  const ExponentialFit fit = fit_exponential(t, y, 0.0, 400.0, FitOptions{});
  CHECK(fit.rate == doctest::Approx(0.015).epsilon(0.02));
  CHECK(fit.points >= 5);
}

TEST_CASE("baseline subtraction before the log fit") {
  std::vector<double> t, y;
  for (int i = 0; i <= 2000; ++i) {
    const double ti = 0.1 * i;
    t.push_back(ti);
    y.push_back(0.3 + 0.5 * std::exp(-0.01 * ti));
  }
  FitOptions options;
  options.envelope = false;
  options.baseline = 0.3;
  const ExponentialFit fit = fit_exponential(t, y, 0.0, 150.0, options);
  CHECK(fit.rate == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(fit.amplitude == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("too few usable points rejected") {
  const std::vector<double> t{0, 1, 2, 3};
  const std::vector<double> y{1, 0.9, 0.8, 0.7};
  FitOptions options;
  options.envelope = false;
  CHECK_THROWS_AS((void)fit_exponential(t, y, 0.0, 3.0, options), std::runtime_error);
  CHECK_THROWS_AS((void)fit_exponential(t, y, 10.0, 20.0, options), std::runtime_error);
}

TEST_CASE("invalid reduced density rejected") {
  ReducedDensity rho;
  rho.rho[0][0] = 0.7;
  rho.rho[1][1] = 0.7;
  CHECK_THROWS_AS(rho.validate(), std::runtime_error);
  rho.rho[1][1] = 0.3;
  rho.rho[0][1] = Complex{0.0, 0.1};
  rho.rho[1][0] = Complex{0.0, 0.1};  // not the conjugate
  CHECK_THROWS_AS(rho.validate(), std::runtime_error);
}

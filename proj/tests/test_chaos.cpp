#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fockbath/chaos.hpp"
#include "fockbath/presets.hpp"

using namespace fockbath;

namespace {

SparseOperator bath_block_of(int atoms, double u01_scale) {
  ModelSpec spec = paper_model(atoms);
  spec.params.U01 = u01_scale / atoms;
  return build_bath_block(spec, spec.make_basis());
}

}  // namespace

TEST_CASE("single-atom bath block has the analytic spectrum") {
  const ModelSpec spec = paper_model(1);
  const BasisIndex basis = spec.make_basis();
  const EigenDecomposition dec = eigensolve_bath(build_bath_block(spec, basis));
  REQUIRE(dec.dim == 4);
  std::vector<double> want{spec.params.E0 - spec.params.J0, spec.params.E0 + spec.params.J0,
                           spec.params.E1 - spec.params.J1, spec.params.E1 + spec.params.J1};
  std::sort(want.begin(), want.end());
  for (int i = 0; i < 4; ++i) {
    CHECK(dec.values[static_cast<std::size_t>(i)] ==
          doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-10));
  }
}

TEST_CASE("eigenvectors orthonormal, eigenvalues ascending, trace preserved") {
  const ModelSpec spec = paper_model(4);
  const BasisIndex basis = spec.make_basis();
  const SparseOperator block = build_bath_block(spec, basis);
  const EigenDecomposition dec = eigensolve_bath(block);
  const std::int64_t d = dec.dim;
  double max_dev = 0.0;
  for (std::int64_t a = 0; a < d; ++a) {
    if (a > 0) CHECK(dec.values[static_cast<std::size_t>(a)] >= dec.values[static_cast<std::size_t>(a - 1)]);
    for (std::int64_t b = a; b < d; ++b) {
      double ip = 0.0;
      for (std::int64_t n = 0; n < d; ++n) ip += dec.component(n, a) * dec.component(n, b);
      max_dev = std::max(max_dev, std::abs(ip - (a == b ? 1.0 : 0.0)));
    }
  }
  CHECK(max_dev < 1e-8);
  double sum_e = 0.0, sum_eps = 0.0;
  for (std::int64_t i = 0; i < d; ++i) {
    sum_e += dec.values[static_cast<std::size_t>(i)];
    sum_eps += block.diagonal(i);
  }
  CHECK(sum_e == doctest::Approx(sum_eps).epsilon(1e-6));
}

TEST_CASE("dense cap enforced") {
  const ModelSpec spec = paper_model(6);
  const BasisIndex basis = spec.make_basis();
  const SparseOperator block = build_bath_block(spec, basis);
  CHECK_THROWS_AS((void)eigensolve_bath(block, 10), std::length_error);
}

TEST_CASE("eigenstate profile is normalized with a sane participation ratio") {
  const ModelSpec spec = paper_model(6);
  const BasisIndex basis = spec.make_basis();
  const SparseOperator block = build_bath_block(spec, basis);
  const EigenDecomposition dec = eigensolve_bath(block);
  for (std::int64_t a : {std::int64_t{0}, dec.dim / 2, dec.dim - 1}) {
    const EigenProfile prof = eigenstate_profile(dec, block, a);
    double norm = 0.0;
    for (double c : prof.component) norm += c * c;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(prof.participation_ratio >= 1.0 - 1e-9);
    CHECK(prof.participation_ratio <= static_cast<double>(dec.dim) + 1e-9);
    CHECK(prof.energy_width >= 0.0);
    CHECK(prof.energy == dec.values[static_cast<std::size_t>(a)]);
  }
}

TEST_CASE("closest eigenstate lookup") {
  EigenDecomposition dec;
  dec.dim = 4;
  dec.values = {-1.0, 0.0, 2.0, 5.0};
  CHECK(closest_eigenstate(dec, -3.0) == 0);
  CHECK(closest_eigenstate(dec, 0.9) == 1);
  CHECK(closest_eigenstate(dec, 1.1) == 2);
  CHECK(closest_eigenstate(dec, 100.0) == 3);
}

TEST_CASE("band coupling mixes unperturbed eigenstates") {
  const EigenDecomposition dec = eigensolve_bath(bath_block_of(8, 1.0));
  const EigenDecomposition dec0 = eigensolve_bath(bath_block_of(8, 0.0));
  // any eigenstate scores exactly 1 in its own basis
  CHECK(participation_in_basis(dec, dec.dim / 2, dec) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(participation_in_basis(dec0, dec0.dim / 2, dec0) == doctest::Approx(1.0).epsilon(1e-10));
  // the band coupling spreads a mid-spectrum state over several of them
  const std::int64_t a = closest_eigenstate(
      dec, 0.5 * (dec.values[static_cast<std::size_t>(2 * dec.dim / 5)] +
                  dec.values[static_cast<std::size_t>(3 * dec.dim / 5)]));
  const double mixed = participation_in_basis(dec, a, dec0);
  CHECK(mixed > 1.5);
  CHECK(mixed <= static_cast<double>(dec.dim));
  CHECK_THROWS_AS((void)participation_in_basis(dec, -1, dec0), std::out_of_range);
}

TEST_CASE("off-diagonal occupation statistics") {
  const ModelSpec spec = paper_model(8);
  const BasisIndex basis = spec.make_basis();
  const EigenDecomposition dec = eigensolve_bath(bath_block_of(8, 1.0));
  const double lo = dec.values[static_cast<std::size_t>(dec.dim / 4)];
  const double hi = dec.values[static_cast<std::size_t>(3 * dec.dim / 4)];
  const OffdiagStats stats = offdiag_occupation_stats(dec, basis, 0, lo, hi, 20);
  CHECK(stats.states_in_window >= 20);
  CHECK(stats.pairs == stats.states_in_window * (stats.states_in_window - 1));
  // zero-mean fluctuations around a thermal diagonal
  CHECK(std::abs(stats.mean) < 5.0 * stats.std_error + 1e-9);
  CHECK(stats.stddev > 0.0);
  CHECK(stats.mean_diagonal > 0.0);
  CHECK(stats.mean_diagonal < 8.0);

  CHECK_THROWS_AS(
      (void)offdiag_occupation_stats(dec, basis, 0, lo, lo + 1e-9, 100),
      std::runtime_error);
}

TEST_CASE("mean level spacing shrinks with atom number") {
  const auto mid_spacing = [](int atoms) {
    const EigenDecomposition dec = eigensolve_bath(bath_block_of(atoms, 0.0));
    const double lo = dec.values[static_cast<std::size_t>(2 * dec.dim / 5)];
    const double hi = dec.values[static_cast<std::size_t>(3 * dec.dim / 5)];
    return mean_level_spacing(dec.values, lo, hi);
  };
  const double d10 = mid_spacing(10);
  const double d14 = mid_spacing(14);
  const double d18 = mid_spacing(18);
  CHECK(d10 > d14);
  CHECK(d14 > d18);
}

TEST_CASE("mean level spacing basics") {
  CHECK(mean_level_spacing({0.0, 1.0, 2.0, 3.0}, -1.0, 4.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)mean_level_spacing({0.0, 1.0}, 5.0, 6.0), std::runtime_error);
}

TEST_CASE("perturbation width equals the dense trace") {
  const ModelSpec spec = paper_model(3);
  const BasisIndex basis = spec.make_basis();
  const SparseOperator v = build_band_coupling_block(spec, basis);
  const auto dense = v.to_dense();
  double tr = 0.0;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    for (std::size_t j = 0; j < dense.size(); ++j) tr += dense[i][j] * dense[j][i];
  }
  CHECK(perturbation_width_squared(v) ==
        doctest::Approx(tr / static_cast<double>(v.dim())).epsilon(1e-12));
}

TEST_CASE("chi-square tail probabilities") {
  CHECK(chi_square_tail(0.0, 3) == doctest::Approx(1.0));
  CHECK(chi_square_tail(3.841, 1) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(chi_square_tail(5.991, 2) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(chi_square_tail(18.307, 10) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(chi_square_tail(100.0, 3) < 1e-10);
  CHECK_THROWS_AS((void)chi_square_tail(-1.0, 2), std::invalid_argument);
}

TEST_CASE("scalar histogram blesses Gaussian data and rejects a sinusoid") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.4, 0.07);
  std::vector<double> gauss, sine;
  for (int i = 0; i < 4000; ++i) {
    gauss.push_back(g(rng));
    sine.push_back(0.4 + 0.07 * std::sin(0.37 * i));
  }
  const GaussianFit ok = scalar_histogram(gauss);
  CHECK(ok.mean == doctest::Approx(0.4).epsilon(0.02));
  CHECK(ok.variance == doctest::Approx(0.0049).epsilon(0.15));
  CHECK(ok.p_value > 0.01);
  const GaussianFit bad = scalar_histogram(sine);  // bimodal arcsine distribution
  CHECK(bad.p_value < 0.01);
  CHECK_THROWS_AS((void)scalar_histogram({1.0, 2.0}), std::runtime_error);
}

TEST_CASE("occupation distribution accumulates quantum marginals") {
  TimeSeries ts;
  ts.atoms = 30;
  ts.modes = 4;
  // binomial(30, 0.4) marginal held constant over the window
  std::vector<double> binom(31, 0.0);
  for (int k = 0; k <= 30; ++k) {
    double logp = std::lgamma(31.0) - std::lgamma(k + 1.0) - std::lgamma(31.0 - k) +
                  k * std::log(0.4) + (30 - k) * std::log(0.6);
    binom[static_cast<std::size_t>(k)] = std::exp(logp);
  }
  for (int s = 0; s < 400; ++s) {
    ts.t.push_back(100.0 + 0.5 * s);
    ts.occ.push_back({12.0 / 30.0, 0, 0, 0});
    ts.p_left.push_back(0.5);
    ts.p_right.push_back(0.5);
    ts.purity.push_back(0.6);
    ts.energy.push_back(1.0);
    std::array<std::vector<double>, 4> marg;
    for (int m = 0; m < 4; ++m) marg[static_cast<std::size_t>(m)] = binom;
    ts.marginals.push_back(marg);
    std::array<std::vector<double>, 2> lev;
    lev[0] = binom;
    lev[1].assign(binom.rbegin(), binom.rend());
    ts.level_marginals.push_back(lev);
  }
  const OccupationDistribution dist = accumulate_occupation_distribution(ts, 0, 150.0, 250.0);
  double total = 0.0;
  for (double p : dist.p) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dist.effective_samples > 1.0);

  const GaussianFit fit = occupation_histogram(dist);
  CHECK(fit.mean == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(fit.variance == doctest::Approx(0.4 * 0.6 / 30.0 / 30.0 * 30.0).epsilon(0.01));
  CHECK(fit.p_value > 0.01);

  // band totals: per-site units, and band 1 mirrors band 0 around N/2
  const OccupationDistribution lower = accumulate_level_distribution(ts, 0, 150.0, 250.0);
  const OccupationDistribution upper = accumulate_level_distribution(ts, 1, 150.0, 250.0);
  CHECK(lower.atoms == 60);
  const GaussianFit lower_fit = occupation_histogram(lower);
  const GaussianFit upper_fit = occupation_histogram(upper);
  CHECK(lower_fit.mean == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(upper_fit.mean == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(lower_fit.variance == doctest::Approx(upper_fit.variance).epsilon(1e-9));

  CHECK_THROWS_AS((void)accumulate_occupation_distribution(ts, 0, 900.0, 950.0),
                  std::runtime_error);
  CHECK_THROWS_AS((void)accumulate_level_distribution(ts, 2, 150.0, 250.0),
                  std::invalid_argument);
  TimeSeries bare = ts;
  bare.marginals.clear();
  bare.level_marginals.clear();
  CHECK_THROWS_AS((void)accumulate_occupation_distribution(bare, 0, 150.0, 250.0),
                  std::runtime_error);
  CHECK_THROWS_AS((void)accumulate_level_distribution(bare, 0, 150.0, 250.0),
                  std::runtime_error);
}

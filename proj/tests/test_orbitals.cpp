#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fockbath/orbitals.hpp"

using namespace fockbath;

namespace {

OrbitalSet default_orbitals(int n_points = 2048) {
  Grid1D grid;
  grid.n_points = n_points;
  TrapPotential pot;
  const auto bath = solve_eigenstates(pot, grid, 1.0, 4);
  const auto probe = solve_eigenstates(pot, grid, 2.0, 2, 2.0);
  return localize(bath, probe, grid, 2.0);
}

HubbardParams default_params(int n_points = 2048) {
  Grid1D grid;
  grid.n_points = n_points;
  TrapPotential pot;
  return hubbard_params(default_orbitals(n_points), pot, 1.0, 1.0, 2.0);
}

}  // namespace

TEST_CASE("pure harmonic spectrum") {
  Grid1D grid;
  TrapPotential pot;
  pot.barrier_height = 0.0;
  const auto states = solve_eigenstates(pot, grid, 1.0, 3);
  CHECK(states[0].energy == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(states[1].energy == doctest::Approx(1.5).epsilon(1e-4));
  CHECK(states[2].energy == doctest::Approx(2.5).epsilon(1e-4));
}

TEST_CASE("default barrier forms two doublets at the reported energies") {
  Grid1D grid;
  TrapPotential pot;
  const auto states = solve_eigenstates(pot, grid, 1.0, 4);
  for (std::size_t i = 1; i < 4; ++i) CHECK(states[i].energy > states[i - 1].energy);
  const double e0 = 0.5 * (states[0].energy + states[1].energy);
  const double e1 = 0.5 * (states[2].energy + states[3].energy);
  CHECK(e0 == doctest::Approx(1.37).epsilon(0.02 / 1.37));
  CHECK(e1 == doctest::Approx(3.31).epsilon(0.04 / 3.31));
  // doublet splittings are small against the band gap
  CHECK(states[1].energy - states[0].energy < 0.5);
  CHECK(states[3].energy - states[2].energy < 0.6);
}

TEST_CASE("infinite-barrier limit decouples the wells") {
  Grid1D grid;
  TrapPotential pot;
  pot.barrier_height = 1e4;
  const auto states = solve_eigenstates(pot, grid, 1.0, 4);
  CHECK(0.5 * (states[1].energy - states[0].energy) < 1e-4);
  CHECK(0.5 * (states[3].energy - states[2].energy) < 1e-4);
}

TEST_CASE("narrow grid rejected") {
  Grid1D grid;
  grid.x_min = -2.0;
  grid.x_max = 2.0;
  grid.n_points = 256;
  TrapPotential pot;
  CHECK_THROWS_AS((void)solve_eigenstates(pot, grid, 1.0, 4), std::runtime_error);
}

TEST_CASE("orbital set invariants") {
  Grid1D grid;
  const OrbitalSet orb = default_orbitals();
  const double h = grid.spacing();
  const auto inner = [&](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * b[i];
    return trapezoid(p, h);
  };
  std::vector<const std::vector<double>*> all = {&orb.bath[0][0], &orb.bath[0][1],
                                                 &orb.bath[1][0], &orb.bath[1][1]};
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(inner(*all[i], *all[i]) == doctest::Approx(1.0).epsilon(1e-8));
    for (std::size_t j = i + 1; j < all.size(); ++j) CHECK(std::abs(inner(*all[i], *all[j])) < 1e-6);
  }
  CHECK(inner(orb.probe[0], orb.probe[0]) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(inner(orb.probe[0], orb.probe[1])) < 1e-6);

  // mirror symmetry on the symmetric grid
  const int n = grid.n_points;
  for (int band = 0; band < 2; ++band) {
    double dev = 0.0;
    for (int i = 0; i < n; ++i) {
      dev = std::max(dev, std::abs(orb.bath[static_cast<std::size_t>(band)][0][static_cast<std::size_t>(i)] -
                                   orb.bath[static_cast<std::size_t>(band)][1][static_cast<std::size_t>(n - 1 - i)]));
    }
    CHECK(dev < 1e-6);
  }

  // localization: left orbital carries almost no weight on x > 0
  double right_mass = 0.0;
  for (int i = 0; i < n; ++i) {
    if (grid.x(i) > 0) {
      right_mass += orb.bath[0][0][static_cast<std::size_t>(i)] *
                    orb.bath[0][0][static_cast<std::size_t>(i)] * h;
    }
  }
  CHECK(right_mass < 0.05);
}

TEST_CASE("localize_doublet is an involution up to sign") {
  Grid1D grid;
  TrapPotential pot;
  const auto states = solve_eigenstates(pot, grid, 1.0, 2);
  const auto [left, right] = localize_doublet(states[0].wavefunction, states[1].wavefunction, grid);
  // recombining (L + R)/sqrt2 and (R - L)/sqrt2 reproduces the doublet up to sign
  const double s = std::sqrt(0.5);
  std::vector<double> sym(left.size()), asym(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    sym[i] = s * (left[i] + right[i]);
    asym[i] = s * (right[i] - left[i]);
  }
  const auto [l2, r2] = localize_doublet(sym, asym, grid);
  for (std::size_t i = 0; i < left.size(); i += 37) {
    CHECK(l2[i] == doctest::Approx(left[i]).epsilon(1e-9));
    CHECK(r2[i] == doctest::Approx(right[i]).epsilon(1e-9));
  }
}

TEST_CASE("hubbard parameters reproduce the reported values") {
  const HubbardParams p = default_params();
  CHECK(p.J0 == doctest::Approx(0.153).epsilon(0.02));
  CHECK(p.J1 == doctest::Approx(0.226).epsilon(0.02));
  CHECK(p.E0 == doctest::Approx(1.37).epsilon(0.02));
  CHECK(p.E1 == doctest::Approx(3.31).epsilon(0.02));
  CHECK(p.Js == doctest::Approx(0.1).epsilon(0.2));
  CHECK(p.U0 > 0);
  CHECK(p.U1 > 0);
  CHECK(p.U01 > 0);
}

TEST_CASE("g = 0 zeroes the interactions") {
  Grid1D grid;
  TrapPotential pot;
  const HubbardParams p = hubbard_params(default_orbitals(), pot, 0.0, 1.0, 2.0);
  CHECK(p.U0 == 0.0);
  CHECK(p.U1 == 0.0);
  CHECK(p.U01 == 0.0);
}

TEST_CASE("coupling tensor symmetry under (alpha,l) <-> (beta,m)") {
  const HubbardParams p = default_params(1024);
  for (int l = 0; l < 2; ++l)
    for (int m = 0; m < 2; ++m)
      for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be)
          for (int ga = 0; ga < 2; ++ga)
            for (int de = 0; de < 2; ++de) {
              CHECK(p.C.at(l, m, al, be, ga, de) ==
                    doctest::Approx(p.C.at(m, l, be, al, ga, de)).epsilon(1e-12));
            }
}

TEST_CASE("grid convergence under doubling") {
  const HubbardParams a = default_params(2048);
  const HubbardParams b = default_params(4096);
  const auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1e-12, std::abs(y)); };
  CHECK(rel(a.J0, b.J0) < 0.005);
  CHECK(rel(a.J1, b.J1) < 0.005);
  CHECK(rel(a.E0, b.E0) < 0.005);
  CHECK(rel(a.E1, b.E1) < 0.005);
  CHECK(rel(a.U0, b.U0) < 0.005);
  CHECK(rel(a.U01, b.U01) < 0.005);
  CHECK(rel(a.Js, b.Js) < 0.005);
}

TEST_CASE("ground-state energy converges monotonically with refinement") {
  // second-order FD eigenvalues approach the continuum limit from below
  double prev = -1e9;
  for (int n : {512, 1024, 2048, 4096}) {
    Grid1D grid;
    grid.n_points = n;
    TrapPotential pot;
    const double e = solve_eigenstates(pot, grid, 1.0, 1)[0].energy;
    CHECK(e >= prev - 1e-12);
    prev = e;
  }
}

TEST_CASE("mirror symmetry of the tunneling matrix element") {
  Grid1D grid;
  TrapPotential pot;
  const OrbitalSet orb = default_orbitals();
  const HubbardParams p = hubbard_params(orb, pot, 1.0, 1.0, 2.0);
  // swap L and R orbitals; J and E must be unchanged
  OrbitalSet swapped = orb;
  std::swap(swapped.bath[0][0], swapped.bath[0][1]);
  std::swap(swapped.bath[1][0], swapped.bath[1][1]);
  const HubbardParams q = hubbard_params(swapped, pot, 1.0, 1.0, 2.0);
  CHECK(p.J0 == doctest::Approx(q.J0).epsilon(1e-12));
  CHECK(p.J1 == doctest::Approx(q.J1).epsilon(1e-12));
  CHECK(p.E0 == doctest::Approx(q.E0).epsilon(1e-12));
  CHECK(p.E1 == doctest::Approx(q.E1).epsilon(1e-12));
}

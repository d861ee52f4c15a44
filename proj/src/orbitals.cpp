#include "fockbath/orbitals.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fockbath {

void Grid1D::validate() const {
  if (n_points < 3) throw std::invalid_argument("Grid1D: n_points must be >= 3");
  if (x_max <= x_min) throw std::invalid_argument("Grid1D: x_max must exceed x_min");
}

double TrapPotential::operator()(double x, double stiffness) const {
  return 0.5 * stiffness * x * x +
         barrier_height * std::exp(-x * x / (2.0 * barrier_width * barrier_width));
}

void TrapPotential::validate() const {
  if (barrier_height < 0) throw std::invalid_argument("TrapPotential: V0 must be >= 0");
  if (barrier_width <= 0) throw std::invalid_argument("TrapPotential: sigma_b must be > 0");
}

double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

std::vector<Eigenstate> solve_eigenstates(const TrapPotential& potential, const Grid1D& grid,
                                          double mass_ratio, int n_states,
                                          double trap_stiffness, double boundary_tol) {
  grid.validate();
  potential.validate();
  if (mass_ratio <= 0) throw std::invalid_argument("solve_eigenstates: mass_ratio must be > 0");
  if (n_states < 1 || n_states > grid.n_points) {
    throw std::invalid_argument("solve_eigenstates: n_states out of range");
  }
  const int n = grid.n_points;
  const double h = grid.spacing();
  const double kin = 1.0 / (2.0 * mass_ratio * h * h);

  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> off(static_cast<std::size_t>(n - 1), -kin);
  for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = 2.0 * kin + potential(grid.x(i), trap_stiffness);

  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) * static_cast<std::size_t>(n_states));
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max(1, n_states)));
  lapack_int m = 0;
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_ROW_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0, 0.0, 1, n_states, 0.0, &m,
      w.data(), z.data(), n_states, isuppz.data());
  if (info != 0 || m < n_states) throw std::runtime_error("solve_eigenstates: eigensolve failed");

  std::vector<Eigenstate> states(static_cast<std::size_t>(n_states));
  for (int s = 0; s < n_states; ++s) {
    auto& st = states[static_cast<std::size_t>(s)];
    st.energy = w[static_cast<std::size_t>(s)];
    st.wavefunction.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      st.wavefunction[static_cast<std::size_t>(i)] =
          z[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_states) + static_cast<std::size_t>(s)];
    }
    std::vector<double> sq(st.wavefunction.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = st.wavefunction[i] * st.wavefunction[i];
    const double norm = std::sqrt(trapezoid(sq, h));
    for (auto& v : st.wavefunction) v /= norm;
    const double edge = std::max(std::abs(st.wavefunction.front()), std::abs(st.wavefunction.back()));
    if (edge > boundary_tol) {
      throw std::runtime_error("solve_eigenstates: grid too narrow, boundary amplitude " +
                               std::to_string(edge));
    }
  }
  return states;
}

std::pair<std::vector<double>, std::vector<double>> localize_doublet(
    const std::vector<double>& sym, const std::vector<double>& asym, const Grid1D& grid) {
  // Fix signs so both inputs are positive at their largest-|value| point on x > 0;
  // then phi_R = (sym + asym)/sqrt2 is positive in the right well.
  auto signfix = [&](std::vector<double> f) {
    double best = 0.0;
    for (int i = 0; i < grid.n_points; ++i) {
      if (grid.x(i) > 0 && std::abs(f[static_cast<std::size_t>(i)]) > std::abs(best)) {
        best = f[static_cast<std::size_t>(i)];
      }
    }
    if (best < 0) {
      for (auto& v : f) v = -v;
    }
    return f;
  };
  const auto s = signfix(sym);
  const auto a = signfix(asym);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<double> left(s.size()), right(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    left[i] = (s[i] - a[i]) * inv_sqrt2;
    right[i] = (s[i] + a[i]) * inv_sqrt2;
  }
  return {left, right};
}

OrbitalSet localize(const std::vector<Eigenstate>& bath_states,
                    const std::vector<Eigenstate>& probe_states, const Grid1D& grid,
                    double mass_ratio) {
  if (bath_states.size() < 4) throw std::invalid_argument("localize: need four bath eigenstates");
  if (probe_states.size() < 2) throw std::invalid_argument("localize: need two probe eigenstates");
  // Doublet structure: the splitting within a band must be small against the band gap.
  const double split0 = bath_states[1].energy - bath_states[0].energy;
  const double gap = bath_states[2].energy - bath_states[1].energy;
  if (!(split0 < gap)) {
    throw std::runtime_error("localize: doublet identification failed (splitting exceeds band gap)");
  }
  OrbitalSet set;
  set.grid = grid;
  set.mass_ratio = mass_ratio;
  for (int band = 0; band < 2; ++band) {
    auto [l, r] = localize_doublet(bath_states[static_cast<std::size_t>(2 * band)].wavefunction,
                                   bath_states[static_cast<std::size_t>(2 * band + 1)].wavefunction, grid);
    set.bath[static_cast<std::size_t>(band)][0] = std::move(l);
    set.bath[static_cast<std::size_t>(band)][1] = std::move(r);
  }
  auto [pl, pr] = localize_doublet(probe_states[0].wavefunction, probe_states[1].wavefunction, grid);
  set.probe[0] = std::move(pl);
  set.probe[1] = std::move(pr);
  return set;
}

namespace {

// Single-particle Hamiltonian applied on the grid, second-order differences.
std::vector<double> apply_h(const std::vector<double>& f, const TrapPotential& pot,
                            const Grid1D& grid, double mass_ratio, double stiffness) {
  const double h = grid.spacing();
  const double kin = 1.0 / (2.0 * mass_ratio * h * h);
  const std::size_t n = f.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fm = i > 0 ? f[i - 1] : 0.0;
    const double fp = i + 1 < n ? f[i + 1] : 0.0;
    out[i] = -kin * (fp - 2.0 * f[i] + fm) + pot(grid.x(static_cast<int>(i)), stiffness) * f[i];
  }
  return out;
}

double overlap(const std::vector<double>& a, const std::vector<double>& b, double h) {
  std::vector<double> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * b[i];
  return trapezoid(p, h);
}

}  // namespace

HubbardParams hubbard_params(const OrbitalSet& orb, const TrapPotential& pot, double g,
                             double g_coupling, double probe_trap_stiffness) {
  const Grid1D& grid = orb.grid;
  const double h = grid.spacing();
  HubbardParams p;
  p.gI = g_coupling;

  for (int band = 0; band < 2; ++band) {
    const auto& fl = orb.bath[static_cast<std::size_t>(band)][0];
    const auto& fr = orb.bath[static_cast<std::size_t>(band)][1];
    const auto hfr = apply_h(fr, pot, grid, 1.0, 1.0);
    // Sign convention: J is the positive amplitude entering -J b^dag b.
    const double tunneling = -overlap(fl, hfr, h);
    const double onsite = overlap(fr, apply_h(fr, pot, grid, 1.0, 1.0), h);
    if (band == 0) {
      p.J0 = tunneling;
      p.E0 = onsite;
    } else {
      p.J1 = tunneling;
      p.E1 = onsite;
    }
  }
  {
    const auto& f0 = orb.bath[0][1];
    const auto& f1 = orb.bath[1][1];
    std::vector<double> q(f0.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::pow(f0[i], 4);
    p.U0 = g * trapezoid(q, h);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::pow(f1[i], 4);
    p.U1 = g * trapezoid(q, h);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = f0[i] * f0[i] * f1[i] * f1[i];
    p.U01 = g * trapezoid(q, h);
  }
  {
    const auto hpr = apply_h(orb.probe[1], pot, grid, orb.mass_ratio, probe_trap_stiffness);
    p.Js = -overlap(orb.probe[0], hpr, h);
  }
  for (int l = 0; l < 2; ++l)
    for (int m = 0; m < 2; ++m)
      for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be)
          for (int ga = 0; ga < 2; ++ga)
            for (int de = 0; de < 2; ++de) {
              const auto& fa = orb.bath[static_cast<std::size_t>(l)][static_cast<std::size_t>(al)];
              const auto& fb = orb.bath[static_cast<std::size_t>(m)][static_cast<std::size_t>(be)];
              const auto& pg = orb.probe[static_cast<std::size_t>(ga)];
              const auto& pd = orb.probe[static_cast<std::size_t>(de)];
              std::vector<double> q(fa.size());
              for (std::size_t i = 0; i < q.size(); ++i) q[i] = fa[i] * fb[i] * pg[i] * pd[i];
              p.C.at(l, m, al, be, ga, de) = trapezoid(q, h);
            }
  return p;
}

}  // namespace fockbath

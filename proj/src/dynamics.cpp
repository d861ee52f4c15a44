#include "fockbath/dynamics.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fockbath/observables.hpp"

namespace fockbath {

double QuantumState::norm() const {
  double s = 0.0;
  for (const auto& a : amp) s += std::norm(a);
  return std::sqrt(s);
}

void QuantumState::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::runtime_error("cannot normalize zero state");
  for (auto& a : amp) a /= n;
}

Complex QuantumState::overlap(const QuantumState& other) const {
  if (amp.size() != other.amp.size()) throw std::invalid_argument("overlap: dimension mismatch");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < amp.size(); ++i) s += std::conj(amp[i]) * other.amp[i];
  return s;
}

QuantumState QuantumState::basis_ket(const BasisIndex& basis, const FockKet& ket) {
  QuantumState st;
  st.amp.assign(static_cast<std::size_t>(basis.dimension()), Complex{0.0, 0.0});
  st.amp[static_cast<std::size_t>(basis.rank(ket))] = Complex{1.0, 0.0};
  return st;
}

void Protocol::validate() const {
  if (t_switch < 0 || t_switch > t_end) throw std::invalid_argument("Protocol: need 0 <= t_switch <= t_end");
  if (dt_sample <= 0) throw std::invalid_argument("Protocol: dt_sample must be > 0");
}

Propagator::Propagator(const SparseOperator& h, int max_krylov, double tolerance,
                       std::int64_t dense_cap)
    : h_(h), max_krylov_(max_krylov), tolerance_(tolerance) {
  if (h.dim() <= dense_cap) {
    const std::size_t n = static_cast<std::size_t>(h.dim());
    eigenvectors_.assign(n * n, 0.0);
    for (std::int64_t r = 0; r < h.dim(); ++r) {
      for (std::int64_t k = h.row_ptr()[static_cast<std::size_t>(r)];
           k < h.row_ptr()[static_cast<std::size_t>(r) + 1]; ++k) {
        eigenvectors_[static_cast<std::size_t>(h.col()[static_cast<std::size_t>(k)]) * n +
                      static_cast<std::size_t>(r)] = h.val()[static_cast<std::size_t>(k)];
      }
    }
    eigenvalues_.assign(n, 0.0);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                       eigenvectors_.data(), static_cast<lapack_int>(n), eigenvalues_.data());
    if (info != 0) throw std::runtime_error("Propagator: dense eigensolve failed");
  }
}

void Propagator::evolve(QuantumState& state, double dt) const {
  if (static_cast<std::int64_t>(state.amp.size()) != h_.dim()) {
    throw std::invalid_argument("evolve: dimension mismatch");
  }
  if (dt == 0.0) return;
  if (dense()) {
    const std::size_t n = state.amp.size();
    std::vector<Complex> coeff(n, Complex{0.0, 0.0});
    for (std::size_t c = 0; c < n; ++c) {
      Complex acc{0.0, 0.0};
      const double* col = &eigenvectors_[c * n];
      for (std::size_t i = 0; i < n; ++i) acc += col[i] * state.amp[i];
      coeff[c] = acc * std::exp(Complex{0.0, -eigenvalues_[c] * dt});
    }
    std::fill(state.amp.begin(), state.amp.end(), Complex{0.0, 0.0});
    for (std::size_t c = 0; c < n; ++c) {
      const double* col = &eigenvectors_[c * n];
      for (std::size_t i = 0; i < n; ++i) state.amp[i] += coeff[c] * col[i];
    }
  } else {
    lanczos_step(state.amp, dt, 0);
  }
  state.time += dt;
}

void Propagator::lanczos_step(std::vector<Complex>& amp, double dt, int depth) const {
  const std::size_t n = amp.size();
  double beta0 = 0.0;
  for (const auto& a : amp) beta0 += std::norm(a);
  beta0 = std::sqrt(beta0);
  if (beta0 == 0.0) return;

  const int m_max = max_krylov_;
  std::vector<std::vector<Complex>> v;
  v.reserve(static_cast<std::size_t>(m_max));
  v.emplace_back(amp);
  for (auto& a : v[0]) a /= beta0;

  std::vector<double> alpha, beta;
  std::vector<Complex> w(n);
  int m = 0;
  bool breakdown = false;
  for (int j = 0; j < m_max; ++j) {
    h_.apply(std::span<const Complex>(v[static_cast<std::size_t>(j)]), std::span<Complex>(w));
    Complex a{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) a += std::conj(v[static_cast<std::size_t>(j)][i]) * w[i];
    alpha.push_back(a.real());
    for (std::size_t i = 0; i < n; ++i) w[i] -= a.real() * v[static_cast<std::size_t>(j)][i];
    if (j > 0) {
      const double b = beta[static_cast<std::size_t>(j - 1)];
      for (std::size_t i = 0; i < n; ++i) w[i] -= b * v[static_cast<std::size_t>(j - 1)][i];
    }
    // Full reorthogonalization; the subspace is small.
    for (int r = 0; r <= j; ++r) {
      Complex ov{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) ov += std::conj(v[static_cast<std::size_t>(r)][i]) * w[i];
      for (std::size_t i = 0; i < n; ++i) w[i] -= ov * v[static_cast<std::size_t>(r)][i];
    }
    double b = 0.0;
    for (const auto& x : w) b += std::norm(x);
    b = std::sqrt(b);
    m = j + 1;
    if (b < 1e-12) {
      breakdown = true;
      break;
    }
    if (j + 1 < m_max) {
      beta.push_back(b);
      v.emplace_back(w);
      for (auto& x : v.back()) x /= b;
    }
  }

  // u = exp(-i T dt) e1 through the tridiagonal eigendecomposition.
  std::vector<double> d(alpha), e(beta);
  e.resize(static_cast<std::size_t>(std::max(0, m - 1)));
  std::vector<double> z(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  const lapack_int info = LAPACKE_dstevd(LAPACK_ROW_MAJOR, 'V', static_cast<lapack_int>(m),
                                         d.data(), e.data(), z.data(), static_cast<lapack_int>(m));
  if (info != 0) throw std::runtime_error("lanczos_step: tridiagonal eigensolve failed");
  std::vector<Complex> u(static_cast<std::size_t>(m), Complex{0.0, 0.0});
  for (int c = 0; c < m; ++c) {
    const Complex phase = std::exp(Complex{0.0, -d[static_cast<std::size_t>(c)] * dt});
    const double z0 = z[static_cast<std::size_t>(c)];  // first row, column c
    for (int r = 0; r < m; ++r) {
      u[static_cast<std::size_t>(r)] +=
          z[static_cast<std::size_t>(r) * static_cast<std::size_t>(m) + static_cast<std::size_t>(c)] *
          phase * z0;
    }
  }

  // The last Krylov coefficient estimates the truncation error; halve the
  // step until it is resolved.
  if (!breakdown && m == m_max && std::abs(u[static_cast<std::size_t>(m - 1)]) > tolerance_) {
    if (depth >= 40) throw std::runtime_error("lanczos_step: no convergence after max substepping");
    lanczos_step(amp, dt / 2, depth + 1);
    lanczos_step(amp, dt / 2, depth + 1);
    return;
  }

  std::fill(amp.begin(), amp.end(), Complex{0.0, 0.0});
  for (int j = 0; j < m; ++j) {
    const Complex c = beta0 * u[static_cast<std::size_t>(j)];
    const auto& vj = v[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < n; ++i) amp[i] += c * vj[i];
  }
}

QuantumState evolve_dense_reference(const SparseOperator& h, const QuantumState& state, double dt) {
  Propagator p(h, 30, 1e-10, h.dim());
  QuantumState out = state;
  p.evolve(out, dt);
  return out;
}

OccupationRecord expectations(const QuantumState& state, const BasisIndex& basis) {
  OccupationRecord rec;
  const std::int64_t db = basis.bath_dimension();
  for (std::int64_t j = 0; j < db; ++j) {
    const auto& occ = basis.ket(j);
    const double wl = std::norm(state.amp[static_cast<std::size_t>(2 * j)]);
    const double wr = std::norm(state.amp[static_cast<std::size_t>(2 * j + 1)]);
    rec.p_left += wl;
    rec.p_right += wr;
    for (int m = 0; m < basis.modes(); ++m) {
      rec.occupation[static_cast<std::size_t>(m)] += occ[static_cast<std::size_t>(m)] * (wl + wr);
    }
  }
  return rec;
}

std::vector<double> occupation_marginal(const QuantumState& state, const BasisIndex& basis,
                                        int mode) {
  std::vector<double> p(static_cast<std::size_t>(basis.atoms()) + 1, 0.0);
  for (std::int64_t j = 0; j < basis.bath_dimension(); ++j) {
    const int k = basis.occupation(j, mode);
    p[static_cast<std::size_t>(k)] += std::norm(state.amp[static_cast<std::size_t>(2 * j)]) +
                                      std::norm(state.amp[static_cast<std::size_t>(2 * j + 1)]);
  }
  return p;
}

std::vector<double> level_marginal(const QuantumState& state, const BasisIndex& basis, int band) {
  if (basis.modes() != 4) throw std::invalid_argument("level_marginal: needs the two-band basis");
  if (band < 0 || band > 1) throw std::invalid_argument("level_marginal: band must be 0 or 1");
  std::vector<double> p(static_cast<std::size_t>(basis.atoms()) + 1, 0.0);
  for (std::int64_t j = 0; j < basis.bath_dimension(); ++j) {
    const auto& occ = basis.ket(j);
    const int k = band == 0 ? occ[0] + occ[2] : occ[1] + occ[3];
    p[static_cast<std::size_t>(k)] += std::norm(state.amp[static_cast<std::size_t>(2 * j)]) +
                                      std::norm(state.amp[static_cast<std::size_t>(2 * j + 1)]);
  }
  return p;
}

ProtocolResult run_protocol(const ModelSpec& spec, const Protocol& protocol) {
  spec.validate();
  protocol.validate();
  const BasisIndex basis = spec.make_basis();

  const SparseOperator bath = build_bath(spec, basis);
  ModelSpec free_spec = spec;
  free_spec.coupling_enabled = false;
  const SparseOperator h_free = bath.plus(build_coupling(free_spec, basis, spec.params.C));
  const SparseOperator h_full = bath.plus(build_coupling(spec, basis, spec.params.C));
  const Propagator prop_free(h_free, 30, protocol.tolerance);
  const Propagator prop_full(h_full, 30, protocol.tolerance);

  FockKet initial;
  initial.n = protocol.initial_bath;
  initial.probe = protocol.initial_probe;
  QuantumState state = QuantumState::basis_ket(basis, initial);

  ProtocolResult result;
  TimeSeries& ts = result.series;
  ts.atoms = spec.atoms;
  ts.modes = spec.modes();

  const auto sample = [&](const QuantumState& st, const SparseOperator& h) {
    const OccupationRecord rec = expectations(st, basis);
    ts.t.push_back(st.time);
    std::array<double, 4> occ{};
    for (int m = 0; m < 4; ++m) occ[static_cast<std::size_t>(m)] = rec.occupation[static_cast<std::size_t>(m)] / spec.atoms;
    ts.occ.push_back(occ);
    ts.p_left.push_back(rec.p_left);
    ts.p_right.push_back(rec.p_right);
    ts.purity.push_back(purity(reduce(st, basis)));
    const auto hx = h.apply(st.amp);
    Complex en{0.0, 0.0};
    for (std::size_t i = 0; i < hx.size(); ++i) en += std::conj(st.amp[i]) * hx[i];
    ts.energy.push_back(en.real());
    if (protocol.record_marginals) {
      std::array<std::vector<double>, 4> marg;
      for (int m = 0; m < basis.modes(); ++m) marg[static_cast<std::size_t>(m)] = occupation_marginal(st, basis, m);
      ts.marginals.push_back(std::move(marg));
      if (basis.modes() == 4) {
        std::array<std::vector<double>, 2> lev;
        lev[0] = level_marginal(st, basis, 0);
        // n0 + n1 = N, so the band-1 distribution is the band-0 one mirrored.
        lev[1].assign(lev[0].rbegin(), lev[0].rend());
        ts.level_marginals.push_back(std::move(lev));
      }
    }
  };

  const std::int64_t n_samples = static_cast<std::int64_t>(std::llround(protocol.t_end / protocol.dt_sample));
  sample(state, h_free);
  for (std::int64_t s = 1; s <= n_samples; ++s) {
    const double t_target = static_cast<double>(s) * protocol.dt_sample;
    const bool coupled_before = state.time >= protocol.t_switch - 1e-12;
    const bool coupled_after = t_target >= protocol.t_switch - 1e-12;
    if (!coupled_before && coupled_after && protocol.t_switch - state.time > 1e-12) {
      prop_free.evolve(state, protocol.t_switch - state.time);
    }
    const Propagator& prop = coupled_after ? prop_full : prop_free;
    prop.evolve(state, t_target - state.time);
    state.time = t_target;  // keep the sample grid exact
    sample(state, coupled_after ? h_full : h_free);
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace fockbath

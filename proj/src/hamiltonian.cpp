#include "fockbath/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace fockbath {

void ModelSpec::validate() const {
  if (atoms < 1) throw std::invalid_argument("ModelSpec: atoms must be >= 1");
  if (bands != 1 && bands != 2) throw std::invalid_argument("ModelSpec: bands must be 1 or 2");
  if (t_switch < 0) throw std::invalid_argument("ModelSpec: t_switch must be >= 0");
}

namespace {

// Mode layout matches the ket field order: (L0, L1, R0, R1); two-mode
// bases keep only (L0, R0).
int mode_of(int well, int band, int modes) {
  return modes == 4 ? 2 * well + band : well;
}

struct Triplets {
  std::vector<std::int64_t> rows, cols;
  std::vector<double> vals;
  void add(std::int64_t r, std::int64_t c, double v) {
    if (v == 0.0) return;
    rows.push_back(r);
    cols.push_back(c);
    vals.push_back(v);
  }
};

void check_basis(const ModelSpec& spec, const BasisIndex& basis) {
  if (basis.atoms() != spec.atoms || basis.modes() != spec.modes()) {
    throw std::invalid_argument("basis does not match model spec");
  }
}

}  // namespace

SparseOperator build_bath_block(const ModelSpec& spec, const BasisIndex& basis) {
  spec.validate();
  check_basis(spec, basis);
  const int modes = spec.modes();
  const int nbands = spec.bands;
  const double J[2] = {spec.params.J0, spec.params.J1};
  const double U[2] = {spec.params.U0, spec.u1()};
  const double E[2] = {spec.params.E0, spec.params.E1};
  const double U01 = spec.u01();

  Triplets t;
  for (std::int64_t j = 0; j < basis.bath_dimension(); ++j) {
    const auto& occ = basis.ket(j);

    double diag = 0.0;
    for (int band = 0; band < nbands; ++band) {
      for (int well = 0; well < 2; ++well) {
        const double n = occ[static_cast<std::size_t>(mode_of(well, band, modes))];
        diag += U[band] * n * (n - 1.0) + E[band] * n;
      }
    }
    if (nbands == 2) {
      for (int well = 0; well < 2; ++well) {
        const double n0 = occ[static_cast<std::size_t>(mode_of(well, 0, modes))];
        const double n1 = occ[static_cast<std::size_t>(mode_of(well, 1, modes))];
        diag += U01 * 4.0 * n0 * n1;  // 2 n^l n^l' summed over (0,1) and (1,0)
      }
    }
    t.add(j, j, diag);

    // -J^l b_r^dag b_r', both directions of the r != r' sum.
    for (int band = 0; band < nbands; ++band) {
      for (int dst_well = 0; dst_well < 2; ++dst_well) {
        const int src_well = 1 - dst_well;
        const int src = mode_of(src_well, band, modes);
        const int dst = mode_of(dst_well, band, modes);
        if (occ[static_cast<std::size_t>(src)] == 0) continue;
        auto next = occ;
        double amp = std::sqrt(static_cast<double>(next[static_cast<std::size_t>(src)]));
        next[static_cast<std::size_t>(src)] -= 1;
        amp *= std::sqrt(static_cast<double>(next[static_cast<std::size_t>(dst)] + 1));
        next[static_cast<std::size_t>(dst)] += 1;
        t.add(basis.bath_rank(next), j, -J[band] * amp);
      }
    }

    // U01 pair transfer b^dag b^dag b' b', both band orders.
    if (nbands == 2) {
      for (int well = 0; well < 2; ++well) {
        for (int dst_band = 0; dst_band < 2; ++dst_band) {
          const int src_band = 1 - dst_band;
          const int src = mode_of(well, src_band, modes);
          const int dst = mode_of(well, dst_band, modes);
          if (occ[static_cast<std::size_t>(src)] < 2) continue;
          auto next = occ;
          double amp = std::sqrt(static_cast<double>(next[static_cast<std::size_t>(src)]) *
                                 (next[static_cast<std::size_t>(src)] - 1));
          next[static_cast<std::size_t>(src)] -= 2;
          amp *= std::sqrt(static_cast<double>(next[static_cast<std::size_t>(dst)] + 1) *
                           (next[static_cast<std::size_t>(dst)] + 2));
          next[static_cast<std::size_t>(dst)] += 2;
          t.add(basis.bath_rank(next), j, U01 * amp);
        }
      }
    }
  }
  return SparseOperator::from_triplets(basis.bath_dimension(), std::move(t.rows),
                                       std::move(t.cols), std::move(t.vals));
}

SparseOperator build_bath(const ModelSpec& spec, const BasisIndex& basis) {
  const SparseOperator block = build_bath_block(spec, basis);
  Triplets t;
  for (std::int64_t r = 0; r < block.dim(); ++r) {
    for (std::int64_t k = block.row_ptr()[static_cast<std::size_t>(r)];
         k < block.row_ptr()[static_cast<std::size_t>(r) + 1]; ++k) {
      const std::int64_t c = block.col()[static_cast<std::size_t>(k)];
      const double v = block.val()[static_cast<std::size_t>(k)];
      t.add(2 * r, 2 * c, v);
      t.add(2 * r + 1, 2 * c + 1, v);
    }
  }
  return SparseOperator::from_triplets(basis.dimension(), std::move(t.rows), std::move(t.cols),
                                       std::move(t.vals));
}

SparseOperator build_coupling(const ModelSpec& spec, const BasisIndex& basis,
                              const CouplingTensor& C) {
  spec.validate();
  check_basis(spec, basis);
  const int modes = spec.modes();
  const int nbands = spec.bands;
  // The tensor must itself be hermitian (real orbitals: plain symmetry).
  for (int l = 0; l < 2; ++l)
    for (int m = 0; m < 2; ++m)
      for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be)
          for (int ga = 0; ga < 2; ++ga)
            for (int de = 0; de < 2; ++de) {
              if (std::abs(C.at(l, m, al, be, ga, de) - C.at(m, l, be, al, de, ga)) > 1e-10) {
                throw std::invalid_argument("build_coupling: non-hermitian C tensor");
              }
            }

  Triplets t;
  for (std::int64_t j = 0; j < basis.bath_dimension(); ++j) {
    const auto& occ = basis.ket(j);
    // -Js (a_L^dag a_R + a_R^dag a_L)
    t.add(2 * j, 2 * j + 1, -spec.params.Js);
    t.add(2 * j + 1, 2 * j, -spec.params.Js);

    if (!spec.coupling_enabled || spec.params.gI == 0.0) continue;

    for (int l = 0; l < nbands; ++l) {
      for (int m = 0; m < nbands; ++m) {
        for (int al = 0; al < 2; ++al) {
          for (int be = 0; be < 2; ++be) {
            const int src = mode_of(be, m, modes);
            const int dst = mode_of(al, l, modes);
            auto next = occ;
            double amp;
            if (src == dst) {
              amp = next[static_cast<std::size_t>(src)];
            } else {
              if (next[static_cast<std::size_t>(src)] == 0) continue;
              amp = std::sqrt(static_cast<double>(next[static_cast<std::size_t>(src)]));
              next[static_cast<std::size_t>(src)] -= 1;
              amp *= std::sqrt(static_cast<double>(next[static_cast<std::size_t>(dst)] + 1));
              next[static_cast<std::size_t>(dst)] += 1;
            }
            if (amp == 0.0) continue;
            const std::int64_t i = basis.bath_rank(next);
            // a_gamma^dag a_delta maps probe delta -> gamma.
            for (int ga = 0; ga < 2; ++ga) {
              for (int de = 0; de < 2; ++de) {
                const double v = spec.params.gI * C.at(l, m, al, be, ga, de) * amp;
                t.add(2 * i + ga, 2 * j + de, v);
              }
            }
          }
        }
      }
    }
  }
  return SparseOperator::from_triplets(basis.dimension(), std::move(t.rows), std::move(t.cols),
                                       std::move(t.vals), 0.0, 1e-10);
}

SparseOperator build_band_coupling_block(const ModelSpec& spec, const BasisIndex& basis) {
  check_basis(spec, basis);
  if (spec.modes() != 4) throw std::invalid_argument("band coupling requires the two-band basis");
  Triplets t;
  const double U01 = spec.u01();
  for (std::int64_t j = 0; j < basis.bath_dimension(); ++j) {
    const auto& occ = basis.ket(j);
    double diag = 0.0;
    for (int well = 0; well < 2; ++well) {
      diag += U01 * 4.0 * occ[static_cast<std::size_t>(2 * well)] *
              occ[static_cast<std::size_t>(2 * well + 1)];
    }
    t.add(j, j, diag);
    for (int well = 0; well < 2; ++well) {
      for (int dst_band = 0; dst_band < 2; ++dst_band) {
        const int src = 2 * well + (1 - dst_band);
        const int dst = 2 * well + dst_band;
        if (occ[static_cast<std::size_t>(src)] < 2) continue;
        auto next = occ;
        double amp = std::sqrt(static_cast<double>(next[static_cast<std::size_t>(src)]) *
                               (next[static_cast<std::size_t>(src)] - 1));
        next[static_cast<std::size_t>(src)] -= 2;
        amp *= std::sqrt(static_cast<double>(next[static_cast<std::size_t>(dst)] + 1) *
                         (next[static_cast<std::size_t>(dst)] + 2));
        next[static_cast<std::size_t>(dst)] += 2;
        t.add(basis.bath_rank(next), j, U01 * amp);
      }
    }
  }
  return SparseOperator::from_triplets(basis.bath_dimension(), std::move(t.rows),
                                       std::move(t.cols), std::move(t.vals));
}

}  // namespace fockbath

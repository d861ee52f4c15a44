#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace fockbath {

using Complex = std::complex<double>;

// Real symmetric operator in compressed-row layout with sorted columns.
class SparseOperator {
 public:
  SparseOperator() = default;

  // Assemble from (row, col, value) triplets. Duplicates are summed,
  // entries below drop_tol are discarded, and symmetry is verified.
  static SparseOperator from_triplets(std::int64_t dim,
                                      std::vector<std::int64_t> rows,
                                      std::vector<std::int64_t> cols,
                                      std::vector<double> vals,
                                      double drop_tol = 0.0,
                                      double symmetry_tol = 1e-12);

  std::int64_t dim() const { return dim_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(val_.size()); }

  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::int64_t>& col() const { return col_; }
  const std::vector<double>& val() const { return val_; }

  // y = A x, rows in parallel.
  void apply(std::span<const Complex> x, std::span<Complex> y) const;
  void apply(std::span<const double> x, std::span<double> y) const;
  // Single-threaded reference used by the test suite and the benchmark.
  void apply_serial(std::span<const Complex> x, std::span<Complex> y) const;

  std::vector<Complex> apply(const std::vector<Complex>& x) const;

  double diagonal(std::int64_t i) const;
  std::vector<std::vector<double>> to_dense() const;

  // A + B and A + s*B, used to combine Hamiltonian pieces.
  SparseOperator plus(const SparseOperator& other, double scale = 1.0) const;

  // sum_ij A_ij^2, the exact trace of A^2 for a symmetric matrix.
  double frobenius_squared() const;

 private:
  std::int64_t dim_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<std::int64_t> col_;
  std::vector<double> val_;
};

}  // namespace fockbath

#include "fockbath/sparse_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace fockbath {

SparseOperator SparseOperator::from_triplets(std::int64_t dim,
                                             std::vector<std::int64_t> rows,
                                             std::vector<std::int64_t> cols,
                                             std::vector<double> vals,
                                             double drop_tol,
                                             double symmetry_tol) {
  if (rows.size() != cols.size() || rows.size() != vals.size()) {
    throw std::invalid_argument("from_triplets: length mismatch");
  }
  const std::size_t nt = vals.size();
  std::vector<std::size_t> order(nt);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows[a] != rows[b] ? rows[a] < rows[b] : cols[a] < cols[b];
  });

  SparseOperator op;
  op.dim_ = dim;
  op.row_ptr_.assign(static_cast<std::size_t>(dim) + 1, 0);
  for (std::size_t k = 0; k < nt;) {
    const std::int64_t r = rows[order[k]];
    const std::int64_t c = cols[order[k]];
    if (r < 0 || r >= dim || c < 0 || c >= dim) {
      throw std::out_of_range("from_triplets: index out of range");
    }
    double v = 0.0;
    while (k < nt && rows[order[k]] == r && cols[order[k]] == c) {
      v += vals[order[k]];
      ++k;
    }
    if (std::abs(v) > drop_tol) {
      op.col_.push_back(c);
      op.val_.push_back(v);
      ++op.row_ptr_[static_cast<std::size_t>(r) + 1];
    }
  }
  for (std::size_t r = 0; r < static_cast<std::size_t>(dim); ++r) {
    op.row_ptr_[r + 1] += op.row_ptr_[r];
  }

  // Symmetry check: every stored (i,j) must have a transpose partner of equal value.
  for (std::int64_t r = 0; r < dim; ++r) {
    for (std::int64_t k = op.row_ptr_[static_cast<std::size_t>(r)];
         k < op.row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      const std::int64_t c = op.col_[static_cast<std::size_t>(k)];
      if (c < r) continue;
      const auto begin = op.col_.begin() + op.row_ptr_[static_cast<std::size_t>(c)];
      const auto end = op.col_.begin() + op.row_ptr_[static_cast<std::size_t>(c) + 1];
      const auto it = std::lower_bound(begin, end, r);
      const double vt = (it != end && *it == r)
                            ? op.val_[static_cast<std::size_t>(it - op.col_.begin())]
                            : 0.0;
      if (std::abs(vt - op.val_[static_cast<std::size_t>(k)]) > symmetry_tol) {
        throw std::runtime_error("from_triplets: operator is not symmetric");
      }
    }
  }
  return op;
}

void SparseOperator::apply(std::span<const Complex> x, std::span<Complex> y) const {
  if (static_cast<std::int64_t>(x.size()) != dim_ || static_cast<std::int64_t>(y.size()) != dim_) {
    throw std::invalid_argument("apply: dimension mismatch");
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < dim_; ++r) {
    Complex acc{0.0, 0.0};
    for (std::int64_t k = row_ptr_[static_cast<std::size_t>(r)];
         k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      acc += val_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])];
    }
    y[static_cast<std::size_t>(r)] = acc;
  }
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<std::int64_t>(x.size()) != dim_ || static_cast<std::int64_t>(y.size()) != dim_) {
    throw std::invalid_argument("apply: dimension mismatch");
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < dim_; ++r) {
    double acc = 0.0;
    for (std::int64_t k = row_ptr_[static_cast<std::size_t>(r)];
         k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      acc += val_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])];
    }
    y[static_cast<std::size_t>(r)] = acc;
  }
}

void SparseOperator::apply_serial(std::span<const Complex> x, std::span<Complex> y) const {
  if (static_cast<std::int64_t>(x.size()) != dim_ || static_cast<std::int64_t>(y.size()) != dim_) {
    throw std::invalid_argument("apply_serial: dimension mismatch");
  }
  for (std::int64_t r = 0; r < dim_; ++r) {
    Complex acc{0.0, 0.0};
    for (std::int64_t k = row_ptr_[static_cast<std::size_t>(r)];
         k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      acc += val_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])];
    }
    y[static_cast<std::size_t>(r)] = acc;
  }
}

std::vector<Complex> SparseOperator::apply(const std::vector<Complex>& x) const {
  std::vector<Complex> y(x.size());
  apply(std::span<const Complex>(x), std::span<Complex>(y));
  return y;
}

double SparseOperator::diagonal(std::int64_t i) const {
  const auto begin = col_.begin() + row_ptr_[static_cast<std::size_t>(i)];
  const auto end = col_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
  const auto it = std::lower_bound(begin, end, i);
  if (it != end && *it == i) return val_[static_cast<std::size_t>(it - col_.begin())];
  return 0.0;
}

std::vector<std::vector<double>> SparseOperator::to_dense() const {
  std::vector<std::vector<double>> m(static_cast<std::size_t>(dim_),
                                     std::vector<double>(static_cast<std::size_t>(dim_), 0.0));
  for (std::int64_t r = 0; r < dim_; ++r) {
    for (std::int64_t k = row_ptr_[static_cast<std::size_t>(r)];
         k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])] =
          val_[static_cast<std::size_t>(k)];
    }
  }
  return m;
}

SparseOperator SparseOperator::plus(const SparseOperator& other, double scale) const {
  if (other.dim_ != dim_) throw std::invalid_argument("plus: dimension mismatch");
  std::vector<std::int64_t> rows, cols;
  std::vector<double> vals;
  rows.reserve(static_cast<std::size_t>(nnz() + other.nnz()));
  cols.reserve(rows.capacity());
  vals.reserve(rows.capacity());
  for (std::int64_t r = 0; r < dim_; ++r) {
    for (std::int64_t k = row_ptr_[static_cast<std::size_t>(r)];
         k < row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      rows.push_back(r);
      cols.push_back(col_[static_cast<std::size_t>(k)]);
      vals.push_back(val_[static_cast<std::size_t>(k)]);
    }
    for (std::int64_t k = other.row_ptr_[static_cast<std::size_t>(r)];
         k < other.row_ptr_[static_cast<std::size_t>(r) + 1]; ++k) {
      rows.push_back(r);
      cols.push_back(other.col_[static_cast<std::size_t>(k)]);
      vals.push_back(scale * other.val_[static_cast<std::size_t>(k)]);
    }
  }
  return from_triplets(dim_, std::move(rows), std::move(cols), std::move(vals));
}

double SparseOperator::frobenius_squared() const {
  double s = 0.0;
  for (double v : val_) s += v * v;
  return s;
}

}  // namespace fockbath

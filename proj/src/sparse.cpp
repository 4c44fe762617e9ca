#include "dgsl/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "dgsl/errors.hpp"
#include "dgsl/parallel.hpp"

namespace dgsl {

SparseSymMatrix::SparseSymMatrix(int dim, std::vector<int> row_ptr, std::vector<int> cols,
                                 std::vector<double> values, int block_size)
    : dim_(dim),
      block_size_(block_size),
      row_ptr_(std::move(row_ptr)),
      cols_(std::move(cols)),
      values_(std::move(values)) {
  if (static_cast<int>(row_ptr_.size()) != dim_ + 1 || cols_.size() != values_.size() ||
      static_cast<std::size_t>(row_ptr_.back()) != cols_.size()) {
    throw InvalidArgument("inconsistent CSR arrays");
  }
  if (block_size_ < 1 || dim_ % block_size_ != 0) throw InvalidArgument("bad block size");
}

long SparseSymMatrix::find(int i, int j) const {
  const auto begin = cols_.begin() + row_ptr_[i];
  const auto end = cols_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return -1;
  return it - cols_.begin();
}

double SparseSymMatrix::at(int i, int j) const {
  const long pos = find(i, j);
  return pos < 0 ? 0.0 : values_[pos];
}

void SparseSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += values_[p] * x[cols_[p]];
    y[i] = s;
  }
}

std::vector<double> SparseSymMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(dim_);
  multiply(x, y);
  return y;
}

double SparseSymMatrix::bilinear(std::span<const double> v, std::span<const double> w) const {
  const auto aw = *this * w;
  return deterministic_dot(v, aw);
}

double SparseSymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseSymMatrix::symmetry_defect() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const long q = find(cols_[p], i);
      const double mirror = q < 0 ? 0.0 : values_[q];
      worst = std::max(worst, std::abs(values_[p] - mirror));
    }
  }
  return worst;
}

void SparseSymMatrix::add_scaled(const SparseSymMatrix& other, double alpha) {
  if (other.row_ptr_ != row_ptr_ || other.cols_ != cols_) {
    throw InvalidArgument("add_scaled needs identical sparsity patterns");
  }
  for (std::size_t p = 0; p < values_.size(); ++p) values_[p] += alpha * other.values_[p];
}

}  // namespace dgsl

#pragma once

#include <span>
#include <vector>

namespace dgsl {

/// Compressed sparse row storage of a symmetric operator. Both triangles are
/// stored; column indices are sorted within each row.
class SparseSymMatrix {
public:
  SparseSymMatrix() = default;
  SparseSymMatrix(int dim, std::vector<int> row_ptr, std::vector<int> cols,
                  std::vector<double> values, int block_size = 1);

  int dim() const { return dim_; }
  std::size_t nnz() const { return values_.size(); }
  /// Size of the contiguous diagonal blocks used by block-Jacobi preconditioning.
  int block_size() const { return block_size_; }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Entry (i, j), zero when not stored.
  double at(int i, int j) const;
  /// Position of (i, j) in values(), or -1.
  long find(int i, int j) const;

  /// y = A x, parallel over rows.
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;

  /// v^T A w.
  double bilinear(std::span<const double> v, std::span<const double> w) const;

  double max_abs() const;
  /// max |a_ij - a_ji| over stored entries, including entries whose transpose is missing.
  double symmetry_defect() const;

  /// Same pattern, values scaled and added: this += alpha * other.
  void add_scaled(const SparseSymMatrix& other, double alpha);

private:
  int dim_ = 0;
  int block_size_ = 1;
  std::vector<int> row_ptr_;
  std::vector<int> cols_;
  std::vector<double> values_;
};

}  // namespace dgsl

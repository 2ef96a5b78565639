#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace lmles {

using Vector = Eigen::VectorXd;

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed-row structure. Column indices are strictly increasing within
/// each row and offsets are nondecreasing.
class SparsityPattern {
 public:
  SparsityPattern(int rows, int cols, std::vector<int> row_offsets, std::vector<int> col_indices);

  /// Union of the given (row, col) positions.
  static std::shared_ptr<const SparsityPattern> from_entries(
      int rows, int cols, std::vector<std::pair<int, int>> entries);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int nnz() const noexcept { return static_cast<int>(col_indices_.size()); }
  const std::vector<int>& row_offsets() const noexcept { return row_offsets_; }
  const std::vector<int>& col_indices() const noexcept { return col_indices_; }

  /// Position of (row, col) in the value array, or -1 if not stored.
  int find(int row, int col) const;

  bool operator==(const SparsityPattern& other) const;

 private:
  int rows_;
  int cols_;
  std::vector<int> row_offsets_;
  std::vector<int> col_indices_;
};

/// CSR matrix. Matrices built on the same SparsityPattern can be combined by
/// adding value arrays.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(std::shared_ptr<const SparsityPattern> pattern);
  SparseMatrix(std::shared_ptr<const SparsityPattern> pattern, std::vector<double> values);

  /// Duplicates are summed.
  static SparseMatrix from_triplets(int rows, int cols, std::span<const Triplet> triplets);
  static SparseMatrix identity(int n);

  int rows() const noexcept { return pattern_ ? pattern_->rows() : 0; }
  int cols() const noexcept { return pattern_ ? pattern_->cols() : 0; }
  int nnz() const noexcept { return static_cast<int>(values_.size()); }

  const std::shared_ptr<const SparsityPattern>& pattern() const noexcept { return pattern_; }
  const std::vector<int>& row_offsets() const { return pattern_->row_offsets(); }
  const std::vector<int>& col_indices() const { return pattern_->col_indices(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Stored value at (row, col), 0 if the position is not stored.
  double coeff(int row, int col) const;
  /// Adds to a stored position; throws if (row, col) is not in the pattern.
  void add(int row, int col, double value);

  void set_zero();
  /// this += alpha * other; patterns must be structurally identical.
  void add_scaled(const SparseMatrix& other, double alpha = 1.0);
  SparseMatrix& operator*=(double alpha);

  /// Replaces row r by the unit row e_r (diagonal must be stored).
  void set_identity_row(int row);

  SparseMatrix transpose() const;
  Vector multiply(const Vector& x) const;
  /// y = A^T x
  Vector multiply_transpose(const Vector& x) const;
  Eigen::MatrixXd to_dense() const;

  /// Largest |a_ij - a_ji| over the stored positions.
  double max_asymmetry() const;

 private:
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<double> values_;
};

/// Sparse matrix-vector product; throws InvalidArgument on dimension mismatch.
Vector spmv(const SparseMatrix& a, const Vector& x);

/// Coordinate text export: one `row col value` triple per stored entry.
void write_coordinate(const SparseMatrix& a, std::ostream& out);

}  // namespace lmles

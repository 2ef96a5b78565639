#include "lmles/linalg/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "lmles/error.hpp"

namespace lmles {

SparsityPattern::SparsityPattern(int rows, int cols, std::vector<int> row_offsets,
                                 std::vector<int> col_indices)
    : rows_(rows), cols_(cols), row_offsets_(std::move(row_offsets)), col_indices_(std::move(col_indices)) {
  if (rows_ < 0 || cols_ < 0) throw ValidationError("SparsityPattern: negative shape");
  if (row_offsets_.size() != static_cast<std::size_t>(rows_) + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != static_cast<int>(col_indices_.size())) {
    throw ValidationError("SparsityPattern: inconsistent row offsets");
  }
  for (int r = 0; r < rows_; ++r) {
    if (row_offsets_[r] > row_offsets_[r + 1]) {
      throw ValidationError("SparsityPattern: decreasing row offsets at row " + std::to_string(r));
    }
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      if (col_indices_[k] < 0 || col_indices_[k] >= cols_) {
        throw ValidationError("SparsityPattern: column index out of range in row " + std::to_string(r));
      }
      if (k > row_offsets_[r] && col_indices_[k] <= col_indices_[k - 1]) {
        throw ValidationError("SparsityPattern: columns not strictly increasing in row " +
                              std::to_string(r));
      }
    }
  }
}

std::shared_ptr<const SparsityPattern> SparsityPattern::from_entries(
    int rows, int cols, std::vector<std::pair<int, int>> entries) {
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  std::vector<int> offsets(rows + 1, 0);
  std::vector<int> cols_out;
  cols_out.reserve(entries.size());
  for (const auto& [r, c] : entries) {
    if (r < 0 || r >= rows) throw InvalidArgument("SparsityPattern: row index out of range");
    ++offsets[r + 1];
    cols_out.push_back(c);
  }
  for (int r = 0; r < rows; ++r) offsets[r + 1] += offsets[r];
  return std::make_shared<const SparsityPattern>(rows, cols, std::move(offsets), std::move(cols_out));
}

int SparsityPattern::find(int row, int col) const {
  const auto begin = col_indices_.begin() + row_offsets_[row];
  const auto end = col_indices_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return -1;
  return static_cast<int>(it - col_indices_.begin());
}

bool SparsityPattern::operator==(const SparsityPattern& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && row_offsets_ == other.row_offsets_ &&
         col_indices_ == other.col_indices_;
}

SparseMatrix::SparseMatrix(std::shared_ptr<const SparsityPattern> pattern)
    : pattern_(std::move(pattern)), values_(pattern_->nnz(), 0.0) {}

SparseMatrix::SparseMatrix(std::shared_ptr<const SparsityPattern> pattern, std::vector<double> values)
    : pattern_(std::move(pattern)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != pattern_->nnz()) {
    throw ValidationError("SparseMatrix: value count does not match pattern");
  }
  for (double v : values_) {
    if (std::isnan(v)) throw ValidationError("SparseMatrix: NaN entry");
  }
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::span<const Triplet> triplets) {
  std::vector<std::pair<int, int>> entries;
  entries.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw InvalidArgument("from_triplets: index out of range");
    }
    entries.emplace_back(t.row, t.col);
  }
  SparseMatrix m(SparsityPattern::from_entries(rows, cols, std::move(entries)));
  for (const auto& t : triplets) m.add(t.row, t.col, t.value);
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<int> offsets(n + 1);
  std::vector<int> cols(n);
  for (int i = 0; i < n; ++i) {
    offsets[i + 1] = i + 1;
    cols[i] = i;
  }
  return SparseMatrix(std::make_shared<const SparsityPattern>(n, n, std::move(offsets), std::move(cols)),
                      std::vector<double>(n, 1.0));
}

double SparseMatrix::coeff(int row, int col) const {
  const int k = pattern_->find(row, col);
  return k < 0 ? 0.0 : values_[k];
}

void SparseMatrix::add(int row, int col, double value) {
  const int k = pattern_->find(row, col);
  if (k < 0) {
    throw InvalidArgument("SparseMatrix::add: (" + std::to_string(row) + "," + std::to_string(col) +
                          ") not in pattern");
  }
  values_[k] += value;
}

void SparseMatrix::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

void SparseMatrix::add_scaled(const SparseMatrix& other, double alpha) {
  if (pattern_ != other.pattern_ && !(*pattern_ == *other.pattern_)) {
    throw InvalidArgument("SparseMatrix::add_scaled: patterns differ");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += alpha * other.values_[k];
}

SparseMatrix& SparseMatrix::operator*=(double alpha) {
  for (double& v : values_) v *= alpha;
  return *this;
}

void SparseMatrix::set_identity_row(int row) {
  const auto& offsets = pattern_->row_offsets();
  const auto& cols = pattern_->col_indices();
  bool has_diagonal = false;
  for (int k = offsets[row]; k < offsets[row + 1]; ++k) {
    values_[k] = cols[k] == row ? 1.0 : 0.0;
    has_diagonal = has_diagonal || cols[k] == row;
  }
  if (!has_diagonal) throw InvalidArgument("set_identity_row: diagonal not stored");
}

SparseMatrix SparseMatrix::transpose() const {
  const int n_rows = rows();
  const int n_cols = cols();
  const auto& offsets = row_offsets();
  const auto& cols_in = col_indices();
  std::vector<int> t_offsets(n_cols + 1, 0);
  for (int c : cols_in) ++t_offsets[c + 1];
  for (int c = 0; c < n_cols; ++c) t_offsets[c + 1] += t_offsets[c];
  std::vector<int> t_cols(cols_in.size());
  std::vector<double> t_values(values_.size());
  std::vector<int> cursor(t_offsets.begin(), t_offsets.end() - 1);
  for (int r = 0; r < n_rows; ++r) {
    for (int k = offsets[r]; k < offsets[r + 1]; ++k) {
      const int dst = cursor[cols_in[k]]++;
      t_cols[dst] = r;
      t_values[dst] = values_[k];
    }
  }
  return SparseMatrix(
      std::make_shared<const SparsityPattern>(n_cols, n_rows, std::move(t_offsets), std::move(t_cols)),
      std::move(t_values));
}

Vector SparseMatrix::multiply(const Vector& x) const {
  if (x.size() != cols()) {
    throw InvalidArgument("spmv: matrix has " + std::to_string(cols()) + " columns, vector has " +
                          std::to_string(x.size()) + " entries");
  }
  const auto& offsets = row_offsets();
  const auto& cols_in = col_indices();
  Vector y(rows());
  for (int r = 0; r < rows(); ++r) {
    double sum = 0.0;
    for (int k = offsets[r]; k < offsets[r + 1]; ++k) sum += values_[k] * x[cols_in[k]];
    y[r] = sum;
  }
  return y;
}

Vector SparseMatrix::multiply_transpose(const Vector& x) const {
  if (x.size() != rows()) throw InvalidArgument("spmv (transpose): dimension mismatch");
  const auto& offsets = row_offsets();
  const auto& cols_in = col_indices();
  Vector y = Vector::Zero(cols());
  for (int r = 0; r < rows(); ++r) {
    for (int k = offsets[r]; k < offsets[r + 1]; ++k) y[cols_in[k]] += values_[k] * x[r];
  }
  return y;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows(), cols());
  const auto& offsets = row_offsets();
  const auto& cols_in = col_indices();
  for (int r = 0; r < rows(); ++r) {
    for (int k = offsets[r]; k < offsets[r + 1]; ++k) d(r, cols_in[k]) += values_[k];
  }
  return d;
}

double SparseMatrix::max_asymmetry() const {
  const auto& offsets = row_offsets();
  const auto& cols_in = col_indices();
  double worst = 0.0;
  for (int r = 0; r < rows(); ++r) {
    for (int k = offsets[r]; k < offsets[r + 1]; ++k) {
      worst = std::max(worst, std::abs(values_[k] - coeff(cols_in[k], r)));
    }
  }
  return worst;
}

Vector spmv(const SparseMatrix& a, const Vector& x) { return a.multiply(x); }

void write_coordinate(const SparseMatrix& a, std::ostream& out) {
  const auto& offsets = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto values = a.values();
  out << std::setprecision(17);
  for (int r = 0; r < a.rows(); ++r) {
    for (int k = offsets[r]; k < offsets[r + 1]; ++k) {
      out << r << ' ' << cols[k] << ' ' << values[k] << '\n';
    }
  }
}

}  // namespace lmles

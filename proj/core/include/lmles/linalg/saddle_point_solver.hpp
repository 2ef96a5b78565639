#pragma once

#include <cstdint>
#include <memory>
#include <string_view>

#include "lmles/linalg/sparse_matrix.hpp"

namespace lmles {

struct LinearSolveReport {
  bool converged = false;
  double relative_residual = 0.0;
  /// Iterative-refinement sweeps after the direct solve.
  int iterations = 0;
};

struct LinearSolveResult {
  Vector x;
  LinearSolveReport report;
};

/// Sparse LU backend. UMFPACK is the fast path; it relies on the system BLAS
/// for its dense frontal updates. KLU needs no BLAS.
enum class LuBackend : std::uint8_t { Auto, Umfpack, Klu };

std::string_view to_string(LuBackend backend);

/// Backend that Auto resolves to. UMFPACK is chosen only if it passes a
/// one-time numerical self-test in this process; some BLAS builds return
/// wrong dense products on some CPUs, which makes every factorization wrong.
LuBackend default_lu_backend();

/// Sparse direct LU solver for the coupled velocity-pressure systems.
///
/// The symbolic analysis is reused while successive matrices share a
/// sparsity pattern. One instance is not safe for concurrent use; distinct
/// instances are independent.
class SaddlePointSolver {
 public:
  explicit SaddlePointSolver(LuBackend backend = LuBackend::Auto);
  ~SaddlePointSolver();
  SaddlePointSolver(SaddlePointSolver&&) noexcept;
  SaddlePointSolver& operator=(SaddlePointSolver&&) noexcept;

  LuBackend backend() const noexcept;

  /// Solves A x = b to ||Ax - b|| / ||b|| <= tol using at most `max_work`
  /// refinement sweeps. Throws SingularSystemError when the factorization
  /// detects a (numerically) singular matrix.
  LinearSolveResult solve(const SparseMatrix& a, const Vector& b, double tol = 1e-10,
                          int max_work = 3);

  /// Factorization kept for later solve_factored() calls.
  void factorize(const SparseMatrix& a);
  bool factorized() const noexcept;
  /// x = A^-1 b with the last factorized A, without refinement.
  Vector solve_factored(const Vector& b) const;

  /// Reciprocal pivot ratio of the last factorization.
  double rcond() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LinearSolveResult solve_saddle_point(const SparseMatrix& a, const Vector& b, double tol = 1e-10,
                                     int max_work = 3);

}  // namespace lmles

#include "lmles/linalg/saddle_point_solver.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <klu.h>
#include <umfpack.h>

#include "lmles/error.hpp"

namespace lmles {

namespace {

// Reciprocal pivot ratio below which the factorization is treated as
// singular.
constexpr double kSingularRcond = 1e-14;

[[noreturn]] void throw_singular(const std::string& backend, double rcond) {
  throw SingularSystemError(
      backend + " reports a singular system (rcond " + std::to_string(rcond) +
      "); suspect an unconstrained nullspace such as the constant pressure mode on an "
      "enclosed domain without a pressure gauge");
}

}  // namespace

std::string_view to_string(LuBackend backend) {
  switch (backend) {
    case LuBackend::Auto: return "auto";
    case LuBackend::Umfpack: return "umfpack";
    case LuBackend::Klu: return "klu";
  }
  return "?";
}

// Both backends are handed the CSR arrays as a compressed-column matrix, i.e.
// A^T, and solve the transposed system.
struct SaddlePointSolver::Impl {
  LuBackend backend;
  std::shared_ptr<const SparsityPattern> pattern;
  // Values and structure of the factorized matrix are borrowed for the
  // duration of the factorization's life, so keep the matrix alive.
  SparseMatrix factored;
  double rcond = 0.0;

  void* umf_symbolic = nullptr;
  void* umf_numeric = nullptr;
  std::array<double, UMFPACK_CONTROL> umf_control{};
  std::array<double, UMFPACK_INFO> umf_info{};

  klu_symbolic* klu_sym = nullptr;
  klu_numeric* klu_num = nullptr;
  klu_common klu{};

  explicit Impl(LuBackend b) : backend(b) {
    umfpack_di_defaults(umf_control.data());
    klu_defaults(&klu);
  }
  ~Impl() { release(); }

  void release_numeric() {
    if (umf_numeric) umfpack_di_free_numeric(&umf_numeric);
    if (klu_num) klu_free_numeric(&klu_num, &klu);
    umf_numeric = nullptr;
    klu_num = nullptr;
  }
  void release() {
    release_numeric();
    if (umf_symbolic) umfpack_di_free_symbolic(&umf_symbolic);
    if (klu_sym) klu_free_symbolic(&klu_sym, &klu);
    umf_symbolic = nullptr;
    klu_sym = nullptr;
    pattern.reset();
  }

  // The KLU API takes non-const pointers but does not write through them.
  static int* ptr(const std::vector<int>& v) { return const_cast<int*>(v.data()); }

  void analyze(const SparseMatrix& a) {
    const auto& p = a.pattern();
    if (pattern && (pattern == p || *pattern == *p)) return;
    release();
    const int n = a.rows();
    if (backend == LuBackend::Umfpack) {
      const int status = umfpack_di_symbolic(n, n, a.row_offsets().data(), a.col_indices().data(),
                                             a.values().data(), &umf_symbolic, umf_control.data(),
                                             umf_info.data());
      if (status != UMFPACK_OK) {
        throw SingularSystemError("symbolic factorization failed (UMFPACK status " +
                                  std::to_string(status) + "); structurally singular system");
      }
    } else {
      klu_sym = klu_analyze(n, ptr(a.row_offsets()), ptr(a.col_indices()), &klu);
      if (!klu_sym) {
        throw SingularSystemError("symbolic factorization failed (KLU status " +
                                  std::to_string(klu.status) + ")");
      }
    }
    pattern = p;
  }

  void factor(const SparseMatrix& a) {
    analyze(a);
    release_numeric();
    factored = a;
    if (backend == LuBackend::Umfpack) {
      const int status = umfpack_di_numeric(factored.row_offsets().data(),
                                            factored.col_indices().data(), factored.values().data(),
                                            umf_symbolic, &umf_numeric, umf_control.data(),
                                            umf_info.data());
      rcond = umf_info[UMFPACK_RCOND];
      if (status != UMFPACK_OK || !(rcond >= kSingularRcond)) {
        release_numeric();
        throw_singular("UMFPACK", rcond);
      }
    } else {
      klu_num = klu_factor(ptr(factored.row_offsets()), ptr(factored.col_indices()),
                           const_cast<double*>(factored.values().data()), klu_sym, &klu);
      if (!klu_num || klu.status != KLU_OK) {
        release_numeric();
        throw_singular("KLU", 0.0);
      }
      klu_rcond(klu_sym, klu_num, &klu);
      rcond = klu.rcond;
      if (!(rcond >= kSingularRcond)) {
        release_numeric();
        throw_singular("KLU", rcond);
      }
    }
  }

  Vector apply(const Vector& b) const {
    if (!umf_numeric && !klu_num) throw InvalidArgument("solve_factored: nothing factorized");
    if (b.size() != factored.rows()) throw InvalidArgument("solve_factored: size mismatch");
    if (backend == LuBackend::Umfpack) {
      Vector x(b.size());
      auto info = umf_info;
      const int status = umfpack_di_solve(UMFPACK_At, factored.row_offsets().data(),
                                          factored.col_indices().data(), factored.values().data(),
                                          x.data(), b.data(), umf_numeric, umf_control.data(),
                                          info.data());
      if (status != UMFPACK_OK) {
        throw SingularSystemError("UMFPACK solve failed with status " + std::to_string(status));
      }
      return x;
    }
    Vector x = b;
    klu_common common = klu;
    if (!klu_tsolve(klu_sym, klu_num, static_cast<int>(x.size()), 1, x.data(), &common)) {
      throw SingularSystemError("KLU solve failed with status " + std::to_string(common.status));
    }
    return x;
  }
};

namespace {

// Nonsymmetric convection-diffusion operator on a k x k grid, large enough
// for UMFPACK to use dense BLAS kernels on its frontal matrices.
bool umfpack_self_test() {
  constexpr int k = 24;
  const int n = k * k;
  std::vector<Triplet> t;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const int r = i * k + j;
      t.push_back({r, r, 4.0 + 0.01 * (r % 7)});
      if (i > 0) t.push_back({r, r - k, -1.3});
      if (i + 1 < k) t.push_back({r, r + k, -0.7});
      if (j > 0) t.push_back({r, r - 1, -1.1});
      if (j + 1 < k) t.push_back({r, r + 1, -0.9});
    }
  }
  const SparseMatrix a = SparseMatrix::from_triplets(n, n, t);
  Vector x_true(n);
  for (int i = 0; i < n; ++i) x_true[i] = std::sin(0.37 * i) + 0.1;
  const Vector b = a.multiply(x_true);
  // A faulty BLAS has been seen to pass the first factorization in a process
  // and fail later ones, so factorize several times.
  try {
    SaddlePointSolver solver(LuBackend::Umfpack);
    for (int rep = 0; rep < 3; ++rep) {
      solver.factorize(a);
      const Vector x = solver.solve_factored(b);
      if (!((x - x_true).norm() <= 1e-10 * x_true.norm())) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

}  // namespace

LuBackend default_lu_backend() {
  static const LuBackend chosen = umfpack_self_test() ? LuBackend::Umfpack : LuBackend::Klu;
  return chosen;
}

SaddlePointSolver::SaddlePointSolver(LuBackend backend)
    : impl_(std::make_unique<Impl>(backend == LuBackend::Auto ? default_lu_backend() : backend)) {}
SaddlePointSolver::~SaddlePointSolver() = default;
SaddlePointSolver::SaddlePointSolver(SaddlePointSolver&&) noexcept = default;
SaddlePointSolver& SaddlePointSolver::operator=(SaddlePointSolver&&) noexcept = default;

LuBackend SaddlePointSolver::backend() const noexcept { return impl_->backend; }
bool SaddlePointSolver::factorized() const noexcept {
  return impl_->umf_numeric != nullptr || impl_->klu_num != nullptr;
}
double SaddlePointSolver::rcond() const noexcept { return impl_->rcond; }

void SaddlePointSolver::factorize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("factorize: matrix is not square");
  impl_->factor(a);
}

Vector SaddlePointSolver::solve_factored(const Vector& b) const {
  Vector x = impl_->apply(b);
  if (!x.allFinite()) {
    throw SingularSystemError("linear solve produced non-finite values; system is singular");
  }
  return x;
}

LinearSolveResult SaddlePointSolver::solve(const SparseMatrix& a, const Vector& b, double tol,
                                           int max_work) {
  if (a.rows() != a.cols()) throw InvalidArgument("solve_saddle_point: matrix is not square");
  if (b.size() != a.rows()) throw InvalidArgument("solve_saddle_point: right-hand side size mismatch");
  if (!b.allFinite()) throw InvalidArgument("solve_saddle_point: non-finite right-hand side");

  LinearSolveResult result;
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    result.x = Vector::Zero(b.size());
    result.report = {true, 0.0, 0};
    return result;
  }

  impl_->factor(a);
  result.x = impl_->apply(b);
  Vector r = b - a.multiply(result.x);
  double rel = r.norm() / b_norm;
  int sweeps = 0;
  while (rel > tol && sweeps < max_work && std::isfinite(rel)) {
    result.x += impl_->apply(r);
    r = b - a.multiply(result.x);
    rel = r.norm() / b_norm;
    ++sweeps;
  }
  if (!result.x.allFinite()) {
    throw SingularSystemError("linear solve produced non-finite values; system is singular");
  }
  result.report = {rel <= tol, rel, sweeps};
  return result;
}

LinearSolveResult solve_saddle_point(const SparseMatrix& a, const Vector& b, double tol,
                                     int max_work) {
  SaddlePointSolver solver;
  return solver.solve(a, b, tol, max_work);
}

}  // namespace lmles

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "lmles/error.hpp"
#include "lmles/fem/function_space.hpp"
#include "lmles/forms/form_assembler.hpp"
#include "lmles/linalg/saddle_point_solver.hpp"
#include "lmles/linalg/sparse_matrix.hpp"
#include "lmles/mesh.hpp"

using namespace lmles;

namespace {

SparseMatrix random_sparse(int n, double density, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), p(0.0, 1.0);
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || p(rng) < density) t.push_back({i, j, u(rng)});
    }
  }
  return SparseMatrix::from_triplets(n, n, t);
}

// Taylor-Hood Stokes matrix on the unit square with all velocity dofs on the
// boundary constrained; the pressure is left free unless `pin` is set.
SparseMatrix stokes(int m, bool pin) {
  auto mesh = std::make_shared<const Mesh>(unit_square_mesh(m));
  FormAssembler fa(build_space(mesh, Family::VectorP2), build_space(mesh, Family::ScalarP1));
  const SparseMatrix k = fa.diffusion(1.0);
  const SparseMatrix b = fa.divergence();
  const int nv = k.rows(), np = b.rows();
  std::vector<Triplet> t;
  const auto walls = fa.velocity_space().boundary_dofs(BoundaryMarker::Wall);
  std::vector<char> fixed(nv, 0);
  for (int d : walls) fixed[d] = 1;
  for (int i = 0; i < nv; ++i) {
    if (fixed[i]) {
      t.push_back({i, i, 1.0});
      continue;
    }
    for (int p = k.row_offsets()[i]; p < k.row_offsets()[i + 1]; ++p) {
      t.push_back({i, k.col_indices()[p], k.values()[p]});
    }
  }
  for (int q = 0; q < np; ++q) {
    for (int p = b.row_offsets()[q]; p < b.row_offsets()[q + 1]; ++p) {
      const int j = b.col_indices()[p];
      if (!(pin && q == 0)) t.push_back({nv + q, j, -b.values()[p]});
      if (!fixed[j]) t.push_back({j, nv + q, -b.values()[p]});
    }
  }
  if (pin) t.push_back({nv, nv, 1.0});
  return SparseMatrix::from_triplets(nv + np, nv + np, t);
}

}  // namespace

TEST(SparseMatrix, SpmvSmall) {
  const Vector x = Vector::LinSpaced(5, 1, 5);
  EXPECT_EQ(spmv(SparseMatrix::identity(5), x), x);
  const Triplet t[] = {{0, 0, 2.0}, {1, 1, 3.0}};
  const Vector y = spmv(SparseMatrix::from_triplets(2, 2, t), Vector::Ones(2));
  EXPECT_EQ(y, Eigen::Vector2d(2, 3));
  EXPECT_THROW(spmv(SparseMatrix::identity(3), Vector::Ones(2)), InvalidArgument);
}

TEST(SparseMatrix, SpmvAgainstDense) {
  std::mt19937 rng(11);
  for (int n : {50, 123, 200}) {
    const SparseMatrix a = random_sparse(n, 0.05, rng);
    const Eigen::MatrixXd d = a.to_dense();
    const Vector x = Vector::Random(n);
    EXPECT_LE((spmv(a, x) - d * x).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LE((a.multiply_transpose(x) - d.transpose() * x).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_EQ(a.transpose().to_dense(), d.transpose());
  }
}

TEST(SparseMatrix, StructureInvariants) {
  std::mt19937 rng(5);
  const SparseMatrix a = random_sparse(40, 0.1, rng);
  const auto& off = a.row_offsets();
  const auto& col = a.col_indices();
  for (int i = 0; i < a.rows(); ++i) {
    EXPECT_LE(off[i], off[i + 1]);
    for (int p = off[i] + 1; p < off[i + 1]; ++p) EXPECT_LT(col[p - 1], col[p]);
  }
  EXPECT_THROW(SparsityPattern(2, 2, {0, 2, 1}, {0, 1}), ValidationError);
  EXPECT_THROW(SparsityPattern(2, 2, {0, 2, 2}, {1, 0}), ValidationError);
}

TEST(SparseMatrix, TripletsSumDuplicates) {
  const Triplet t[] = {{0, 1, 1.5}, {0, 1, 2.0}, {1, 0, -1.0}};
  const SparseMatrix a = SparseMatrix::from_triplets(2, 2, t);
  EXPECT_EQ(a.coeff(0, 1), 3.5);
  EXPECT_EQ(a.coeff(0, 0), 0.0);
  EXPECT_EQ(a.nnz(), 2);
  EXPECT_DOUBLE_EQ(a.max_asymmetry(), 4.5);
}

TEST(SparseMatrix, AddAndIdentityRow) {
  const Triplet t[] = {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}, {1, 1, 4.0}};
  SparseMatrix a = SparseMatrix::from_triplets(2, 2, t);
  SparseMatrix b = a;
  b.add_scaled(a, 2.0);
  EXPECT_EQ(b.coeff(1, 0), 9.0);
  b *= 0.5;
  EXPECT_EQ(b.coeff(1, 1), 6.0);
  b.set_identity_row(0);
  EXPECT_EQ(b.coeff(0, 0), 1.0);
  EXPECT_EQ(b.coeff(0, 1), 0.0);
  EXPECT_THROW(SparseMatrix::identity(2).add(0, 1, 1.0), InvalidArgument);
  EXPECT_THROW(b.add_scaled(SparseMatrix::identity(2)), InvalidArgument);
}

TEST(SparseMatrix, CoordinateExport) {
  const Triplet t[] = {{0, 1, 0.5}, {1, 0, -2.0}};
  std::ostringstream out;
  write_coordinate(SparseMatrix::from_triplets(2, 2, t), out);
  EXPECT_EQ(out.str(), "0 1 0.5\n1 0 -2\n");
}

class LuBackends : public ::testing::TestWithParam<LuBackend> {
 protected:
  void SetUp() override {
    if (GetParam() == LuBackend::Umfpack && default_lu_backend() != LuBackend::Umfpack) {
      GTEST_SKIP() << "UMFPACK failed its numerical self-test on this machine (BLAS defect)";
    }
  }
};

TEST_P(LuBackends, Identity) {
  SaddlePointSolver s(GetParam());
  const Vector b = Vector::LinSpaced(7, -3, 3);
  const auto r = s.solve(SparseMatrix::identity(7), b);
  EXPECT_EQ(r.x, b);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.relative_residual, 0.0);
}

TEST_P(LuBackends, HandElimination) {
  const Triplet t[] = {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}};
  SaddlePointSolver s(GetParam());
  const auto r = s.solve(SparseMatrix::from_triplets(2, 2, t), Eigen::Vector2d(3, 5));
  EXPECT_NEAR(r.x[0], 0.8, 1e-15);
  EXPECT_NEAR(r.x[1], 1.4, 1e-15);
}

TEST_P(LuBackends, NonsymmetricRandom) {
  std::mt19937 rng(17);
  SparseMatrix a = random_sparse(150, 0.03, rng);
  for (int i = 0; i < 150; ++i) a.add(i, i, 5.0);
  const Vector x = Vector::Random(150);
  SaddlePointSolver s(GetParam());
  for (int rep = 0; rep < 3; ++rep) {
    const auto r = s.solve(a, a.multiply(x));
    EXPECT_TRUE(r.report.converged);
    EXPECT_LE(r.report.relative_residual, 1e-10);
    EXPECT_LE((r.x - x).norm(), 1e-10 * x.norm());
  }
}

TEST_P(LuBackends, PinnedStokesSolves) {
  const SparseMatrix a = stokes(6, true);
  Vector b = Vector::Zero(a.rows());
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  const int nv = a.rows() - 49;
  const auto walls = build_space(std::make_shared<const Mesh>(unit_square_mesh(6)), Family::VectorP2)
                         ->boundary_dofs(BoundaryMarker::Wall);
  for (int i = 0; i < nv; ++i) b[i] = u(rng);
  for (int d : walls) b[d] = 0.0;
  SaddlePointSolver s(GetParam());
  const auto r = s.solve(a, b);
  EXPECT_TRUE(r.report.converged);
  EXPECT_LE(r.report.relative_residual, 1e-10);
  // Discretely divergence-free: the constraint rows (except the pinned one) vanish.
  const Vector res = a.multiply(r.x) - b;
  EXPECT_LE(res.tail(48).cwiseAbs().maxCoeff(), 1e-10);
}

TEST_P(LuBackends, UnpinnedStokesIsSingular) {
  const SparseMatrix a = stokes(6, false);
  Vector b = Vector::Ones(a.rows());
  SaddlePointSolver s(GetParam());
  try {
    s.solve(a, b);
    FAIL() << "expected SingularSystemError";
  } catch (const SingularSystemError& e) {
    EXPECT_NE(std::string(e.what()).find("pressure"), std::string::npos);
  }
}

TEST_P(LuBackends, Deterministic) {
  const SparseMatrix a = stokes(5, true);
  const Vector b = Vector::LinSpaced(a.rows(), 0, 1);
  SaddlePointSolver s1(GetParam()), s2(GetParam());
  const Vector x1 = s1.solve(a, b).x;
  const Vector x2 = s2.solve(a, b).x;
  EXPECT_EQ(x1, x2);
}

INSTANTIATE_TEST_SUITE_P(All, LuBackends, ::testing::Values(LuBackend::Klu, LuBackend::Umfpack),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(SaddlePointSolver, AutoResolves) {
  const LuBackend b = default_lu_backend();
  EXPECT_NE(b, LuBackend::Auto);
  EXPECT_EQ(SaddlePointSolver().backend(), b);
}

TEST(SaddlePointSolver, Preconditions) {
  EXPECT_THROW(solve_saddle_point(SparseMatrix::identity(3), Vector::Ones(2)), InvalidArgument);
  Vector b = Vector::Ones(3);
  b[1] = std::nan("");
  EXPECT_THROW(solve_saddle_point(SparseMatrix::identity(3), b), InvalidArgument);
  SaddlePointSolver s;
  EXPECT_THROW(s.solve_factored(Vector::Ones(3)), InvalidArgument);
}

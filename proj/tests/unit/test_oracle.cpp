#include <gtest/gtest.h>

#include <cmath>

#include "../support/expect_error.hpp"
#include "../support/generators.hpp"
#include "obsolve/lalg.hpp"
#include "obsolve/oracle.hpp"
#include "obsolve/random.hpp"
#include "obsolve/solver.hpp"

using namespace obsolve;
using obsolve::oracle::min_norm_least_squares;
using obsolve::oracle::residual_is_minimal;

namespace {

const Matrix kExampleG{{1, 3, 5, 7, 2}, {2, 4, 6, 1, 5}, {1, 2, 5, 3, 3}, {1, 2, 1, -2, 2}};

// Orthogonal projector onto the row space of g, built from normal equations
// on a basis of independent rows.
Vec row_space_part(const Matrix& g, const Vec& x) {
  const RankFactorization f = full_rank_factorization(g);
  const Matrix& r = f.ghat;  // rows span the row space of g
  const Vec coeffs = gaussian_solve(matmul(r, r.transposed()), matvec(r, x));
  return matvec(r.transposed(), coeffs);
}

}  // namespace

TEST(MinNorm, IdentityReturnsTarget) {
  const auto r = min_norm_least_squares(Matrix::identity(3), Vec({1, -2, 3}));
  EXPECT_LE(max_abs(r.solution - Vec({1, -2, 3})), 1e-14);
  EXPECT_LE(r.residual, 1e-14);
}

TEST(MinNorm, HandWorkedUnderdetermined) {
  const auto r = min_norm_least_squares(Matrix{{1, 0, 1}, {0, 1, 1}}, Vec({1, 1}));
  EXPECT_LE(max_abs(r.solution - Vec({1.0 / 3, 1.0 / 3, 2.0 / 3})), 1e-14);
}

TEST(MinNorm, ExampleResidual) {
  const auto r = min_norm_least_squares(kExampleG, Vec({1, 1, 2, 2}));
  EXPECT_NEAR(r.residual, 1351.0 / 780.0, 1e-5);
  EXPECT_EQ(r.lambda_ladder, (std::vector<double>{1e-6, 1e-8, 1e-10}));
  EXPECT_LE(r.ladder_spread, 1e-4);
}

TEST(MinNorm, SolutionLiesInRowSpaceAndMatchesProjection) {
  Lcg rng(51);
  for (std::size_t i = 0; i < 60; ++i) {
    const LaeProblem p = gen::random_problem(rng, gen::class_for(i), 20);
    const auto r = min_norm_least_squares(p.g(), p.y_d());
    EXPECT_LE(max_abs(row_space_part(p.g(), r.solution) - r.solution), 1e-6);
    EXPECT_NEAR(r.residual, norm2(p.y_d() - projected_target(p)), 1e-6);
    EXPECT_GE(r.residual, 0.0);
  }
}

TEST(MinNorm, ScaledInputsStayAccurate) {
  Lcg rng(52);
  for (int i = 0; i < 20; ++i) {
    const Matrix g = 1e3 * random_rank_matrix(rng, 12, 9, 5);
    const Vec y = 1e3 * random_vec(rng, 12);
    const auto r = min_norm_least_squares(g, y);
    // Normal equations of the least-squares problem hold on the row space.
    EXPECT_LE(norm2(matvec(g.transposed(), y - matvec(g, r.solution))),
              1e-9 * frobenius_norm(g) * norm2(y));
  }
}

TEST(MinNorm, ZeroMatrixRejected) {
  EXPECT_ERROR_CODE(min_norm_least_squares(Matrix(2, 2), Vec({1, 1})), ErrorCode::ZeroMatrix);
  EXPECT_ERROR_CODE(min_norm_least_squares(Matrix::identity(2), Vec({1, 1, 1})),
                    ErrorCode::DimensionMismatch);
}

TEST(ResidualMinimal, ExactSolutionPasses) {
  const Vec y{1, 1, 2, 2};
  const auto r = min_norm_least_squares(kExampleG, y);
  EXPECT_TRUE(residual_is_minimal(kExampleG, y, r.solution, 200));
}

TEST(ResidualMinimal, RowSpaceOffsetFails) {
  const Vec y{1, 1, 2, 2};
  const auto r = min_norm_least_squares(kExampleG, y);
  const Vec off = r.solution + 0.5 * kExampleG.transposed().column_vec(0);
  EXPECT_FALSE(residual_is_minimal(kExampleG, y, off, 200));
}

TEST(ResidualMinimal, NullSpaceOffsetPasses) {
  const Matrix g{{1, 0, 1}, {0, 1, 1}};
  const Vec y{1, 1};
  const auto r = min_norm_least_squares(g, y);
  EXPECT_TRUE(residual_is_minimal(g, y, r.solution + 3.0 * Vec({-1, -1, 1}), 200));
}

TEST(ResidualMinimal, DeterministicForSeed) {
  const Vec y{1, 1, 2, 2};
  const Vec c = min_norm_least_squares(kExampleG, y).solution + Vec({1e-4, 0, 0, 0, 0});
  EXPECT_EQ(residual_is_minimal(kExampleG, y, c, 50, 9), residual_is_minimal(kExampleG, y, c, 50, 9));
}

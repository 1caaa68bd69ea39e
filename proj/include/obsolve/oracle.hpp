#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "obsolve/lalg.hpp"

// Ground truth for tests and --verify. Nothing here touches the iterative
// solver or the rank-factorization machinery; the target library does not
// even link against it.
namespace obsolve::oracle {

struct OracleResult {
  Vec solution;                       // minimum-norm least-squares solution
  double residual = 0.0;              // ||y - G solution||_2
  std::vector<double> lambda_ladder;  // ridge values, relative to sigma_max^2
  double ladder_spread = 0.0;         // extrapolated ridge vs solution, relative
};

/// Moore-Penrose solution G^+ y from a singular value decomposition,
/// truncating singular values at or below 1e-10 * sigma_max.
///
/// As a conditioning probe, the ridge solutions (G^T G + lambda I)^-1 G^T y
/// for lambda / sigma_max^2 in {1e-6, 1e-8, 1e-10} are evaluated through the
/// same decomposition and Richardson-extrapolated to lambda = 0. Throws
/// IllConditioned when the extrapolation disagrees with the truncated
/// solution by more than 1e-4 relative.
OracleResult min_norm_least_squares(const Matrix& g, const Vec& y);

/// True iff none of `trials` random perturbations (norm
/// 1e-3 * max(1, ||candidate||_2)) lowers ||y - G x||_2 by more than 1e-9.
bool residual_is_minimal(const Matrix& g, const Vec& y, const Vec& candidate,
                         std::size_t trials, std::uint64_t seed = 1);

}  // namespace obsolve::oracle

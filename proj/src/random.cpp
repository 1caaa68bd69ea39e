#include "obsolve/random.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "obsolve/errors.hpp"

namespace obsolve {

namespace {

std::vector<std::size_t> permutation(Lcg& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  return perm;
}

}  // namespace

const char* to_string(RankClass c) noexcept {
  switch (c) {
    case RankClass::FullColumn: return "full-col";
    case RankClass::FullRow: return "full-row";
    case RankClass::Deficient: return "deficient";
  }
  return "?";
}

Matrix random_matrix(Lcg& rng, std::size_t rows, std::size_t cols, double lo,
                     double hi) {
  std::vector<double> data(rows * cols);
  for (double& v : data) v = rng.uniform(lo, hi);
  return Matrix(rows, cols, std::move(data));
}

Vec random_vec(Lcg& rng, std::size_t dim, double lo, double hi) {
  std::vector<double> data(dim);
  for (double& v : data) v = rng.uniform(lo, hi);
  return Vec(std::move(data));
}

Matrix random_rank_matrix(Lcg& rng, std::size_t p, std::size_t q,
                          std::size_t m) {
  if (m == 0 || m > p || m > q) {
    std::ostringstream os;
    os << "cannot build a " << p << "x" << q << " matrix of rank " << m;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  const auto row_perm = permutation(rng, p);
  const auto col_perm = permutation(rng, q);
  Matrix left(p, m);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < m; ++j)
      left(row_perm[i], j) = i < m ? (i == j ? 1.0 : 0.0) : rng.uniform(-1.0, 1.0);
  Matrix right(m, q);
  for (std::size_t j = 0; j < q; ++j)
    for (std::size_t i = 0; i < m; ++i)
      right(i, col_perm[j]) = j < m ? (i == j ? 1.0 : 0.0) : rng.uniform(-1.0, 1.0);
  return matmul(left, right);
}

std::size_t rank_for_class(Lcg& rng, std::size_t p, std::size_t q,
                           RankClass rank_class) {
  std::ostringstream os;
  os << p << "x" << q << " cannot be " << to_string(rank_class);
  switch (rank_class) {
    case RankClass::FullColumn:
      if (p < q) throw Error(ErrorCode::InvalidArgument, os.str());
      return q;
    case RankClass::FullRow:
      if (q < p) throw Error(ErrorCode::InvalidArgument, os.str());
      return p;
    case RankClass::Deficient: {
      const std::size_t lim = std::min(p, q);
      if (lim < 2) throw Error(ErrorCode::InvalidArgument, os.str());
      return 1 + rng.below(lim - 1);
    }
  }
  throw Error(ErrorCode::InvalidArgument, os.str());
}

}  // namespace obsolve

#include "obsolve/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <sstream>

#include "obsolve/errors.hpp"
#include "obsolve/random.hpp"

namespace obsolve::oracle {

namespace {

constexpr std::array<double, 3> kLadder = {1e-6, 1e-8, 1e-10};

Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(r, c);
  return out;
}

Vec from_eigen(const Eigen::VectorXd& v) {
  return Vec(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

OracleResult min_norm_least_squares(const Matrix& g, const Vec& y) {
  if (g.rows() != y.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "oracle: right-hand side does not match G");
  if (max_abs(g) == 0.0)
    throw Error(ErrorCode::ZeroMatrix, "oracle: G is zero");

  const Eigen::MatrixXd eg = to_eigen(g);
  const Eigen::Map<const Eigen::VectorXd> ey(y.values().data(),
                                             static_cast<Eigen::Index>(y.dim()));
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      eg, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double s_max = s(0);
  const double cutoff = 1e-10 * s_max;
  const Eigen::VectorXd coeffs = svd.matrixU().transpose() * ey;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(eg.cols());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) x += (coeffs(i) / s(i)) * svd.matrixV().col(i);

  // Ridge filter factors s / (s^2 + lambda) for each rung of the ladder,
  // then quadratic Lagrange extrapolation to lambda = 0.
  std::array<double, 3> lambdas{};
  for (std::size_t j = 0; j < kLadder.size(); ++j)
    lambdas[j] = kLadder[j] * s_max * s_max;
  Eigen::VectorXd extrapolated = Eigen::VectorXd::Zero(eg.cols());
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    double weight = 1.0;
    for (std::size_t l = 0; l < lambdas.size(); ++l)
      if (l != j) weight *= lambdas[l] / (lambdas[l] - lambdas[j]);
    Eigen::VectorXd ridge = Eigen::VectorXd::Zero(eg.cols());
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > cutoff)
        ridge += (coeffs(i) * s(i) / (s(i) * s(i) + lambdas[j])) *
                 svd.matrixV().col(i);
    extrapolated += weight * ridge;
  }
  const double spread =
      (extrapolated - x).norm() / std::max(x.norm(), 1e-300);
  if (spread > 1e-4) {
    std::ostringstream os;
    os << "oracle: ridge ladder disagrees with the truncated solution by "
       << spread << " (relative)";
    throw Error(ErrorCode::IllConditioned, os.str());
  }

  Vec solution = from_eigen(x);
  const double residual = norm2(y - matvec(g, solution));
  return OracleResult{std::move(solution), residual,
                      std::vector<double>(kLadder.begin(), kLadder.end()),
                      spread};
}

bool residual_is_minimal(const Matrix& g, const Vec& y, const Vec& candidate,
                         std::size_t trials, std::uint64_t seed) {
  if (trials == 0)
    throw Error(ErrorCode::InvalidArgument, "oracle: trials must be >= 1");
  if (g.rows() != y.dim() || g.cols() != candidate.dim())
    throw Error(ErrorCode::DimensionMismatch, "oracle: shapes do not match G");
  const double base = norm2(y - matvec(g, candidate));
  const double radius = 1e-3 * std::max(1.0, norm2(candidate));
  Lcg rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Vec delta = random_vec(rng, candidate.dim());
    const double len = norm2(delta);
    if (len == 0.0) continue;
    delta = (radius / len) * delta;
    if (norm2(y - matvec(g, candidate + delta)) < base - 1e-9) return false;
  }
  return true;
}

}  // namespace obsolve::oracle

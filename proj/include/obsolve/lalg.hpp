#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace obsolve {

/// Relative pivot threshold used wherever a numerical rank is decided. A
/// pivot counts only if its magnitude exceeds this fraction of the largest
/// absolute entry of the matrix under reduction.
inline constexpr double kRankTolerance = 1e-10;

/// Dense real vector with a positive dimension and finite entries on
/// construction.
class Vec {
 public:
  explicit Vec(std::size_t dim, double fill = 0.0);
  explicit Vec(std::vector<double> entries);
  Vec(std::initializer_list<double> entries);

  std::size_t dim() const noexcept { return data_.size(); }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> entries() const noexcept { return data_; }
  std::span<double> entries() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const Vec&, const Vec&) = default;

 private:
  std::vector<double> data_;
};

/// Dense row-major real matrix. Both dimensions are positive and every entry
/// is finite when the matrix is built from caller data.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix column(const Vec& v);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }

  Vec column_vec(std::size_t c) const;
  Matrix transposed() const;
  /// Copy of the columns listed in `cols`, in that order.
  Matrix select_columns(std::span<const std::size_t> cols) const;
  /// Copy of the leading `count` rows.
  Matrix leading_rows(std::size_t count) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

// Products and elementwise arithmetic. All inner products accumulate
// strictly left to right.
double dot(std::span<const double> a, std::span<const double> b);
Matrix matmul(const Matrix& a, const Matrix& b);
Vec matvec(const Matrix& a, const Vec& x);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);

/// [a | b]: column-wise concatenation of two matrices with equal row counts.
Matrix hstack(const Matrix& a, const Matrix& b);

double norm2(const Vec& v);
double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
double max_abs(const Vec& v);
double trace(const Matrix& a);

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
};

/// Reduced row-echelon form by Gauss-Jordan elimination with partial
/// pivoting. A pivot is accepted iff its magnitude exceeds
/// tol * max_abs(a). Rows past the rank are zeroed exactly.
RrefResult rref(const Matrix& a, double tol = kRankTolerance);

std::size_t rank(const Matrix& a, double tol = kRankTolerance);

/// G = H * Ghat with H (p x m) full column rank and Ghat (m x q) full row
/// rank.
struct RankFactorization {
  Matrix h;
  Matrix ghat;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

/// H takes the pivot columns of g, Ghat the nonzero rows of its RREF.
/// Throws ZeroMatrix when no pivot clears the threshold.
RankFactorization full_rank_factorization(const Matrix& g,
                                          double tol = kRankTolerance);

/// Gelfand estimate of the spectral radius by repeated squaring with
/// per-step rescaling. Accurate to roughly 1e-3; meant for diagnostics
/// only. Nilpotent inputs short-circuit to exactly 0.
double spectral_radius_estimate(const Matrix& a);

/// Smallest nu in [1, n] with max_abs(a^nu) <= tol * max(1, max_abs(a^(nu-1))),
/// or nullopt when a is not nilpotent within its own dimension.
std::optional<std::size_t> nilpotency_degree(const Matrix& a,
                                             double tol = kRankTolerance);

/// Solves a x = b by Gaussian elimination with partial pivoting. Throws
/// SingularMatrix when a pivot is at or below kRankTolerance * max_abs(a).
Vec gaussian_solve(const Matrix& a, const Vec& b);

/// Same elimination applied to every column of b.
Matrix gaussian_solve(const Matrix& a, const Matrix& b);

Matrix inverse(const Matrix& a);

}  // namespace obsolve

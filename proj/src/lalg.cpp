#include "obsolve/lalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "obsolve/errors.hpp"

namespace obsolve {

namespace {

[[noreturn]] void dimension_error(const char* op, std::size_t ar,
                                  std::size_t ac, std::size_t br,
                                  std::size_t bc) {
  std::ostringstream os;
  os << op << ": incompatible shapes " << ar << "x" << ac << " and " << br
     << "x" << bc;
  throw Error(ErrorCode::DimensionMismatch, os.str());
}

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      std::ostringstream os;
      os << what << ": entry " << i << " is not finite";
      throw Error(ErrorCode::NonFiniteEntry, os.str());
    }
  }
}

void require_square(const Matrix& a, const char* op) {
  if (!a.is_square()) {
    std::ostringstream os;
    os << op << ": expected a square matrix, got " << a.rows() << "x"
       << a.cols();
    throw Error(ErrorCode::NotSquare, os.str());
  }
}

// Row-reduces the augmented system [a | b] in place and back-substitutes.
// Both a and b are consumed.
Matrix eliminate(Matrix a, Matrix b) {
  const std::size_t n = a.rows();
  const double threshold = kRankTolerance * max_abs(a);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > best) {
        best = std::abs(a(r, col));
        pivot = r;
      }
    }
    if (!(best > threshold)) {
      std::ostringstream os;
      os << "gaussian_solve: pivot " << best << " in column " << col
         << " is below threshold " << threshold;
      throw Error(ErrorCode::SingularMatrix, os.str());
    }
    if (pivot != col) {
      std::swap_ranges(a.row(col).begin(), a.row(col).end(),
                       a.row(pivot).begin());
      std::swap_ranges(b.row(col).begin(), b.row(col).end(),
                       b.row(pivot).begin());
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / a(col, col);
      if (factor == 0.0) continue;
      a(r, col) = 0.0;
      for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= factor * a(col, c);
      for (std::size_t c = 0; c < b.cols(); ++c) b(r, c) -= factor * b(col, c);
    }
  }
  Matrix x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = n; i-- > 0;) {
      double sum = b(i, c);
      for (std::size_t j = i + 1; j < n; ++j) sum -= a(i, j) * x(j, c);
      x(i, c) = sum / a(i, i);
    }
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------- Vec

Vec::Vec(std::size_t dim, double fill) : data_(dim, fill) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "Vec: zero dimension");
  require_finite(data_, "Vec");
}

Vec::Vec(std::vector<double> entries) : data_(std::move(entries)) {
  if (data_.empty())
    throw Error(ErrorCode::InvalidArgument, "Vec: zero dimension");
  require_finite(data_, "Vec");
}

Vec::Vec(std::initializer_list<double> entries) : Vec(std::vector<double>(entries)) {}

bool Vec::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0)
    throw Error(ErrorCode::InvalidArgument, "Matrix: zero dimension");
  require_finite(data_, "Matrix");
}

Matrix::Matrix(std::size_t rows, std::size_t cols,
               std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (rows == 0 || cols == 0)
    throw Error(ErrorCode::InvalidArgument, "Matrix: zero dimension");
  if (data_.size() != rows * cols) {
    std::ostringstream os;
    os << "Matrix: " << data_.size() << " entries supplied for a " << rows
       << "x" << cols << " matrix";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  require_finite(data_, "Matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0)
    throw Error(ErrorCode::InvalidArgument, "Matrix: zero dimension");
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_)
      throw Error(ErrorCode::DimensionMismatch, "Matrix: ragged rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_, "Matrix");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(const Vec& v) {
  return Matrix(v.dim(), 1, v.values());
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vec Matrix::column_vec(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return Vec(std::move(out));
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < cols.size(); ++j) out(r, j) = (*this)(r, cols[j]);
  return out;
}

Matrix Matrix::leading_rows(std::size_t count) const {
  std::vector<double> head(data_.begin(),
                           data_.begin() + static_cast<std::ptrdiff_t>(count * cols_));
  return Matrix(count, cols_, std::move(head));
}

// ---------------------------------------------------------------- arithmetic

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) dimension_error("dot", a.size(), 1, b.size(), 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    dimension_error("matmul", a.rows(), a.cols(), b.rows(), b.cols());
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) sum += a(i, k) * b(k, j);
      out(i, j) = sum;
    }
  }
  return out;
}

Vec matvec(const Matrix& a, const Vec& x) {
  if (a.cols() != x.dim())
    dimension_error("matvec", a.rows(), a.cols(), x.dim(), 1);
  Vec out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x.entries());
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    dimension_error("add", a.rows(), a.cols(), b.rows(), b.cols());
  Matrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) += b(r, c);
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    dimension_error("subtract", a.rows(), a.cols(), b.rows(), b.cols());
  Matrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) -= b(r, c);
  return out;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (double& v : out.row(r)) v *= s;
  return out;
}

Vec operator+(const Vec& a, const Vec& b) {
  if (a.dim() != b.dim()) dimension_error("add", a.dim(), 1, b.dim(), 1);
  Vec out = a;
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] += b[i];
  return out;
}

Vec operator-(const Vec& a, const Vec& b) {
  if (a.dim() != b.dim()) dimension_error("subtract", a.dim(), 1, b.dim(), 1);
  Vec out = a;
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] -= b[i];
  return out;
}

Vec operator*(double s, const Vec& a) {
  Vec out = a;
  for (double& v : out.entries()) v *= s;
  return out;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    dimension_error("hstack", a.rows(), a.cols(), b.rows(), b.cols());
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::copy(a.row(r).begin(), a.row(r).end(), out.row(r).begin());
    std::copy(b.row(r).begin(), b.row(r).end(),
              out.row(r).begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return out;
}

double norm2(const Vec& v) { return std::sqrt(dot(v.entries(), v.entries())); }

double frobenius_norm(const Matrix& a) {
  // Scaled by the largest entry so squares neither overflow nor underflow.
  const double m = max_abs(a);
  if (m == 0.0 || !std::isfinite(m)) return m;
  double sum = 0.0;
  for (double v : a.data()) sum += (v / m) * (v / m);
  return m * std::sqrt(sum);
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v.entries()) m = std::max(m, std::abs(x));
  return m;
}

double trace(const Matrix& a) {
  require_square(a, "trace");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) sum += a(i, i);
  return sum;
}

// ---------------------------------------------------------------- reduction

RrefResult rref(const Matrix& a, double tol) {
  if (!(tol > 0.0))
    throw Error(ErrorCode::InvalidArgument, "rref: tolerance must be positive");
  Matrix m = a;
  const double threshold = tol * max_abs(a);
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    double best = std::abs(m(row, col));
    for (std::size_t r = row + 1; r < m.rows(); ++r) {
      if (std::abs(m(r, col)) > best) {
        best = std::abs(m(r, col));
        pivot = r;
      }
    }
    if (!(best > threshold)) {
      for (std::size_t r = row; r < m.rows(); ++r) m(r, col) = 0.0;
      continue;
    }
    if (pivot != row)
      std::swap_ranges(m.row(row).begin(), m.row(row).end(),
                       m.row(pivot).begin());
    const double p = m(row, col);
    for (double& v : m.row(row)) v /= p;
    m(row, col) = 1.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row) continue;
      const double factor = m(r, col);
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= factor * m(row, c);
      m(r, col) = 0.0;
    }
    pivots.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < m.rows(); ++r)
    std::fill(m.row(r).begin(), m.row(r).end(), 0.0);
  const std::size_t rank_found = pivots.size();
  return RrefResult{std::move(m), std::move(pivots), rank_found};
}

std::size_t rank(const Matrix& a, double tol) { return rref(a, tol).rank; }

RankFactorization full_rank_factorization(const Matrix& g, double tol) {
  RrefResult reduced = rref(g, tol);
  if (reduced.rank == 0)
    throw Error(ErrorCode::ZeroMatrix,
                "full_rank_factorization: matrix has no entry above the rank "
                "threshold");
  Matrix h = g.select_columns(reduced.pivot_cols);
  Matrix ghat = reduced.reduced.leading_rows(reduced.rank);
  return RankFactorization{std::move(h), std::move(ghat), reduced.rank,
                           std::move(reduced.pivot_cols)};
}

// ---------------------------------------------------------------- spectra

double spectral_radius_estimate(const Matrix& a) {
  require_square(a, "spectral_radius_estimate");
  const double peak = max_abs(a);
  if (peak == 0.0) return 0.0;
  // Scale first: tiny entries would otherwise pass the nilpotency test.
  if (nilpotency_degree((1.0 / peak) * a)) return 0.0;

  // b holds a^(2^j) / exp(log_scale).
  Matrix b = a;
  double log_scale = 0.0;
  double norm = frobenius_norm(b);
  if (norm == 0.0) return 0.0;
  double estimate = norm;
  for (int j = 1; j <= 30; ++j) {
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (double& v : b.row(r)) v /= norm;
    log_scale += std::log(norm);
    b = matmul(b, b);
    log_scale *= 2.0;
    norm = frobenius_norm(b);
    if (norm == 0.0 || !std::isfinite(norm)) return norm == 0.0 ? 0.0 : estimate;
    const double next = std::exp((std::log(norm) + log_scale) / std::ldexp(1.0, j));
    const double change = std::abs(next - estimate);
    estimate = next;
    if (change < 1e-4 * estimate) break;
  }
  return estimate;
}

std::optional<std::size_t> nilpotency_degree(const Matrix& a, double tol) {
  require_square(a, "nilpotency_degree");
  double previous = 1.0;  // max_abs of a^0
  Matrix power = a;
  for (std::size_t nu = 1; nu <= a.rows(); ++nu) {
    const double current = max_abs(power);
    if (current <= tol * std::max(1.0, previous)) return nu;
    if (nu == a.rows()) break;
    previous = current;
    power = matmul(power, a);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- solves

Vec gaussian_solve(const Matrix& a, const Vec& b) {
  require_square(a, "gaussian_solve");
  if (a.rows() != b.dim())
    dimension_error("gaussian_solve", a.rows(), a.cols(), b.dim(), 1);
  return eliminate(a, Matrix::column(b)).column_vec(0);
}

Matrix gaussian_solve(const Matrix& a, const Matrix& b) {
  require_square(a, "gaussian_solve");
  if (a.rows() != b.rows())
    dimension_error("gaussian_solve", a.rows(), a.cols(), b.rows(), b.cols());
  return eliminate(a, b);
}

Matrix inverse(const Matrix& a) {
  require_square(a, "inverse");
  return eliminate(a, Matrix::identity(a.rows()));
}

}  // namespace obsolve

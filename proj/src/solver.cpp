#include "obsolve/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <type_traits>
#include <utility>

#include "obsolve/errors.hpp"

namespace obsolve {

namespace {

// Divides a by its largest absolute entry so both halves of an augmented
// rank test sit on the same scale. Zero matrices pass through unchanged.
Matrix normalized(const Matrix& a) {
  const double m = max_abs(a);
  return m > 0.0 ? (1.0 / m) * a : a;
}

void require_gain_shape(const LaeProblem& problem, const Matrix& f) {
  if (f.rows() != problem.cols() || f.cols() != problem.rows()) {
    std::ostringstream os;
    os << "gain must be " << problem.cols() << "x" << problem.rows() << ", got "
       << f.rows() << "x" << f.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

// F H (H^T G F H)^-1 H^T, the q x p map shared by the particular solution and
// the null projector.
Matrix limit_gain(const LaeProblem& problem, const Matrix& f) {
  const Matrix& h = problem.factorization().h;
  const Matrix ht = h.transposed();
  const Matrix fh = matmul(f, h);
  const Matrix core = matmul(matmul(ht, problem.g()), fh);
  return matmul(fh, gaussian_solve(core, ht));
}

}  // namespace

// ---------------------------------------------------------------- problem

LaeProblem::LaeProblem(Matrix g, Vec y_d, RankFactorization fact,
                       double rank_tol)
    : g_(std::move(g)), y_d_(std::move(y_d)), fact_(std::move(fact)),
      rank_tol_(rank_tol) {}

LaeProblem::LaeProblem(Matrix g, Vec y_d, double rank_tol)
    : g_(std::move(g)),
      y_d_(std::move(y_d)),
      fact_(full_rank_factorization(g_, rank_tol)),
      rank_tol_(rank_tol) {
  if (y_d_.dim() != g_.rows()) {
    std::ostringstream os;
    os << "target has dimension " << y_d_.dim() << " but G has " << g_.rows()
       << " rows";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  if (max_abs(y_d_) == 0.0)
    throw Error(ErrorCode::InvalidArgument, "target vector must be nonzero");
}

LaeProblem LaeProblem::with_factorization(Matrix g, Vec y_d,
                                          RankFactorization factorization,
                                          double rank_tol) {
  LaeProblem base(g, y_d, rank_tol);
  const auto& f = factorization;
  if (f.h.rows() != g.rows() || f.ghat.cols() != g.cols() ||
      f.h.cols() != f.rank || f.ghat.rows() != f.rank)
    throw Error(ErrorCode::DimensionMismatch,
                "factorization shapes do not match G");
  if (f.rank != base.rank() || obsolve::rank(f.h, rank_tol) != f.rank ||
      obsolve::rank(f.ghat, rank_tol) != f.rank)
    throw Error(ErrorCode::InvalidArgument,
                "factorization ranks are inconsistent with G");
  const double err = frobenius_norm(g - matmul(f.h, f.ghat));
  if (err > 1e-10 * std::max(1.0, frobenius_norm(g)))
    throw Error(ErrorCode::InvalidArgument,
                "factorization does not reproduce G");
  return LaeProblem(std::move(g), std::move(y_d), std::move(factorization),
                    rank_tol);
}

// ---------------------------------------------------------------- gains

bool has_property_p(const LaeProblem& problem, const Matrix& f) {
  require_gain_shape(problem, f);
  const Matrix augmented =
      hstack(normalized(problem.g()), normalized(f.transposed()));
  return rank(augmented, problem.rank_tolerance()) == problem.rank();
}

Matrix reduced_error_map(const LaeProblem& problem, const Matrix& f) {
  require_gain_shape(problem, f);
  const auto& fact = problem.factorization();
  return Matrix::identity(fact.rank) - matmul(matmul(fact.ghat, f), fact.h);
}

Gain default_gain(const LaeProblem& problem, std::optional<double> sigma) {
  const Matrix gt = problem.g().transposed();
  const double tr = trace(matmul(problem.g(), gt));
  const double upper = 2.0 / tr;
  double s = 1.0 / tr;
  if (sigma) {
    if (!(*sigma > 0.0 && *sigma < upper)) {
      std::ostringstream os;
      os.precision(17);
      os << "sigma " << *sigma << " outside (0, " << upper
         << ") with trace(G G^T) = " << tr;
      throw Error(ErrorCode::SigmaOutOfRange, os.str());
    }
    s = *sigma;
  }
  return Gain{s * gt, true, MonotoneContraction{}};
}

Gain deadbeat_gain(const LaeProblem& problem, NilpotentKind kind) {
  const auto& fact = problem.factorization();
  const std::size_t m = fact.rank;
  const Matrix ht = fact.h.transposed();
  const Matrix& ghat = fact.ghat;

  // (H^T H)^-1 H^T and Ghat^T (Ghat Ghat^T)^-1; both Gram matrices are SPD.
  const Matrix left_inv_h = gaussian_solve(matmul(ht, fact.h), ht);
  const Matrix right_inv_ghat =
      gaussian_solve(matmul(ghat, ghat.transposed()), ghat).transposed();

  Matrix shaped = Matrix::identity(m);
  std::size_t expected = 1;
  if (kind == NilpotentKind::Shift) {
    for (std::size_t i = 0; i + 1 < m; ++i) shaped(i, i + 1) = -1.0;
    expected = m;
  }
  Matrix f = matmul(matmul(right_inv_ghat, shaped), left_inv_h);

  // The Gram solves square the conditioning of H and Ghat, so Ghat F H can
  // miss its target by far more than rounding. A few refinement passes
  // F += Ghat^+ (target - Ghat F H) H^+ restore it.
  double defect = max_abs(shaped - matmul(matmul(ghat, f), fact.h));
  for (int pass = 0; pass < 3 && defect > 0.0; ++pass) {
    const Matrix miss = shaped - matmul(matmul(ghat, f), fact.h);
    Matrix refined = f + matmul(matmul(right_inv_ghat, miss), left_inv_h);
    const double next = max_abs(shaped - matmul(matmul(ghat, refined), fact.h));
    if (!(next < defect)) break;
    f = std::move(refined);
    defect = next;
  }

  const Matrix e = reduced_error_map(problem, f);
  const auto nu = nilpotency_degree(e);
  if (!nu || *nu != expected) {
    std::ostringstream os;
    os << "deadbeat gain failed its nilpotency check (expected degree "
       << expected << ", largest entry of the reduced error map "
       << max_abs(e) << ")";
    throw Error(ErrorCode::IllConditioned, os.str());
  }
  const bool p = has_property_p(problem, f);
  return Gain{std::move(f), p, Nilpotent{*nu}};
}

Gain validate_gain(const LaeProblem& problem, const Matrix& f) {
  require_gain_shape(problem, f);
  const bool p = has_property_p(problem, f);
  const Matrix e = reduced_error_map(problem, f);
  if (const auto nu = nilpotency_degree(e)) return Gain{f, p, Nilpotent{*nu}};
  const double rho = spectral_radius_estimate(e);
  if (!std::isfinite(rho)) return Gain{f, p, Unverified{}};
  return Gain{f, p, SpectralEstimate{rho, rho >= 1.0 + 1e-3}};
}

Gain make_gain(const LaeProblem& problem, const GainSpec& spec) {
  return std::visit(
      [&](const auto& s) -> Gain {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SigmaTranspose>) {
          return default_gain(problem, s.sigma);
        } else if constexpr (std::is_same_v<T, Deadbeat>) {
          return deadbeat_gain(problem, s.kind);
        } else {
          return validate_gain(problem, s.f);
        }
      },
      spec);
}

bool converges(const Certificate& certificate) {
  if (std::holds_alternative<MonotoneContraction>(certificate) ||
      std::holds_alternative<Nilpotent>(certificate))
    return true;
  if (const auto* est = std::get_if<SpectralEstimate>(&certificate))
    return est->rho < 1.0;
  return false;
}

// ---------------------------------------------------------------- iteration

Vec iterate_once(const LaeProblem& problem, const Matrix& f, const Vec& u_k) {
  require_gain_shape(problem, f);
  const Matrix step_map =
      Matrix::identity(problem.cols()) - matmul(f, problem.g());
  return matvec(step_map, u_k) + matvec(f, problem.y_d());
}

SolveOutcome solve(const LaeProblem& problem, const Gain& gain,
                   const SolverConfig& config) {
  require_gain_shape(problem, gain.f);
  if (!(config.epsilon > 0.0) || !(config.residual_epsilon > 0.0))
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  if (config.max_iters == 0)
    throw Error(ErrorCode::InvalidArgument, "max_iters must be positive");
  if (config.u0 && config.u0->dim() != problem.cols())
    throw Error(ErrorCode::DimensionMismatch,
                "initial input has the wrong dimension");

  const Matrix& g = problem.g();
  const Vec& y_d = problem.y_d();
  const Matrix step_map = Matrix::identity(problem.cols()) - matmul(gain.f, g);
  const Vec offset = matvec(gain.f, y_d);

  Vec u = config.u0 ? *config.u0 : Vec(problem.cols());
  std::optional<IterationTrace> trace;
  if (config.record_trace) trace.emplace();

  std::size_t k = 0;
  double step = 0.0;
  bool converged = false;
  while (k < config.max_iters) {
    Vec next = matvec(step_map, u) + offset;
    ++k;
    if (!next.all_finite()) {
      std::ostringstream os;
      os << "iterate " << k << " is not finite; the gain diverges";
      throw Error(ErrorCode::NonFinite, os.str());
    }
    step = norm2(next - u);
    u = std::move(next);
    if (trace)
      trace->records.push_back({k, step, norm2(y_d - matvec(g, u))});
    if (step < config.epsilon) {
      converged = true;
      break;
    }
  }

  const double residual = norm2(y_d - matvec(g, u));
  return SolveOutcome{std::move(u),
                      k,
                      step,
                      residual,
                      classify_solvability(problem),
                      converged,
                      residual < config.residual_epsilon,
                      std::move(trace)};
}

// ---------------------------------------------------------------- solution set

Vec SolutionSet::limit_from(const Vec& u0) const {
  return matvec(null_projector, u0) + particular;
}

SolutionSet solution_set(const LaeProblem& problem, const Gain& gain) {
  require_gain_shape(problem, gain.f);
  if (!gain.property_p)
    throw Error(ErrorCode::PropertyPViolated,
                "gain columns are not confined to the range of G^T");
  if (!std::holds_alternative<MonotoneContraction>(gain.certificate) &&
      !std::holds_alternative<Nilpotent>(gain.certificate))
    throw Error(ErrorCode::NoCertificate,
                "solution set needs a monotone or nilpotent certificate");

  const Matrix k = limit_gain(problem, gain.f);
  Vec particular = matvec(k, problem.y_d());
  Matrix projector = Matrix::identity(problem.cols()) - matmul(k, problem.g());

  // The range of I - K G is null(G) = null(Ghat). Read a basis off the RREF
  // of Ghat (Ghat itself for the default factorization): each free column f
  // gives e_f - sum_i R(i, f) e_pivot(i).
  const RrefResult r = rref(problem.factorization().ghat, problem.rank_tolerance());
  if (r.rank != problem.rank())
    throw Error(ErrorCode::IllConditioned, "row factor lost rank on re-reduction");
  std::vector<bool> is_pivot(problem.cols(), false);
  for (std::size_t c : r.pivot_cols) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < problem.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec v(problem.cols());
    v[f] = 1.0;
    for (std::size_t i = 0; i < r.rank; ++i) v[r.pivot_cols[i]] = -r.reduced(i, f);
    basis.push_back((1.0 / norm2(v)) * v);
  }
  return SolutionSet{std::move(particular), std::move(projector),
                     std::move(basis),
                     classify_solvability(problem) == Solvability::Unsolvable};
}

Vec projected_target(const LaeProblem& problem) {
  const Matrix& h = problem.factorization().h;
  const Matrix ht = h.transposed();
  const Vec coeffs = gaussian_solve(matmul(ht, h), matvec(ht, problem.y_d()));
  return matvec(h, coeffs);
}

Solvability classify_solvability(const LaeProblem& problem) {
  const Matrix augmented = hstack(normalized(problem.g()),
                                  normalized(Matrix::column(problem.y_d())));
  return rank(augmented, problem.rank_tolerance()) == problem.rank()
             ? Solvability::Solvable
             : Solvability::Unsolvable;
}

const char* to_string(Solvability s) noexcept {
  return s == Solvability::Solvable ? "Solvable" : "Unsolvable";
}

const char* certificate_name(const Certificate& c) noexcept {
  switch (c.index()) {
    case 0: return "MonotoneContraction";
    case 1: return "Nilpotent";
    case 2: return "SpectralEstimate";
    default: return "Unverified";
  }
}

}  // namespace obsolve

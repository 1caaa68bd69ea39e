#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "obsolve/lalg.hpp"

namespace obsolve {

/// The linear algebraic equation Y_d = G * U. G and Y_d must both be
/// nonzero; the rank factorization of G is computed once on construction.
class LaeProblem {
 public:
  LaeProblem(Matrix g, Vec y_d, double rank_tol = kRankTolerance);

  /// Uses a caller-supplied factorization instead of the RREF-based one.
  /// The factorization must reproduce g and carry consistent ranks.
  static LaeProblem with_factorization(Matrix g, Vec y_d,
                                       RankFactorization factorization,
                                       double rank_tol = kRankTolerance);

  const Matrix& g() const noexcept { return g_; }
  const Vec& y_d() const noexcept { return y_d_; }
  const RankFactorization& factorization() const noexcept { return fact_; }
  double rank_tolerance() const noexcept { return rank_tol_; }

  std::size_t rows() const noexcept { return g_.rows(); }
  std::size_t cols() const noexcept { return g_.cols(); }
  std::size_t rank() const noexcept { return fact_.rank; }

 private:
  LaeProblem(Matrix g, Vec y_d, RankFactorization fact, double rank_tol);

  Matrix g_;
  Vec y_d_;
  RankFactorization fact_;
  double rank_tol_;
};

enum class Solvability { Solvable, Unsolvable };

// ---- gain specification

struct SigmaTranspose {
  std::optional<double> sigma;
};

enum class NilpotentKind { Zero, Shift };

struct Deadbeat {
  NilpotentKind kind = NilpotentKind::Zero;
};

struct Custom {
  Matrix f;
};

using GainSpec = std::variant<SigmaTranspose, Deadbeat, Custom>;

// ---- convergence certificates

struct MonotoneContraction {};
struct Nilpotent {
  std::size_t nu = 0;
};
struct SpectralEstimate {
  double rho = 0.0;
  bool diverging = false;  // rho >= 1 + 1e-3
};
struct Unverified {};

using Certificate =
    std::variant<MonotoneContraction, Nilpotent, SpectralEstimate, Unverified>;

struct Gain {
  Matrix f;
  bool property_p = false;
  Certificate certificate;
};

/// F = sigma * G^T with sigma in (0, 2 / trace(G G^T)); the default sigma
/// is 1 / trace(G G^T).
Gain default_gain(const LaeProblem& problem,
                  std::optional<double> sigma = std::nullopt);

/// F = Ghat^T (Ghat Ghat^T)^-1 (I_m - Ftilde) (H^T H)^-1 H^T with Ftilde the
/// zero matrix (nu = 1) or the m x m super-diagonal shift (nu = m).
Gain deadbeat_gain(const LaeProblem& problem, NilpotentKind kind);

/// Classifies an arbitrary q x p gain.
Gain validate_gain(const LaeProblem& problem, const Matrix& f);

Gain make_gain(const LaeProblem& problem, const GainSpec& spec);

/// Every column of F^T lies in the column span of G, decided by a rank
/// augmentation test at the problem's rank tolerance.
bool has_property_p(const LaeProblem& problem, const Matrix& f);

/// I_m - Ghat F H; its spectrum governs convergence of the iteration.
Matrix reduced_error_map(const LaeProblem& problem, const Matrix& f);

bool converges(const Certificate& certificate);

// ---- iteration

struct SolverConfig {
  double epsilon = 1e-5;
  double residual_epsilon = 1e-3;
  std::size_t max_iters = 1'000'000;
  std::optional<Vec> u0;  // zero vector when absent
  bool record_trace = false;
};

struct IterationRecord {
  std::size_t k = 0;
  double step_norm = 0.0;
  double residual_norm = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
};

struct SolveOutcome {
  Vec u_inf;
  std::size_t iterations = 0;
  double final_step_norm = 0.0;
  double final_residual = 0.0;
  Solvability solvability = Solvability::Solvable;
  bool converged = false;
  /// final_residual < residual_epsilon.
  bool residual_probe_passed = false;
  std::optional<IterationTrace> trace;

  /// Index of the last iterate that still moved by epsilon or more. For a
  /// converged run this is iterations - 1; deadbeat gains report nu here.
  std::size_t limit_reached_at() const noexcept {
    return converged && iterations > 0 ? iterations - 1 : iterations;
  }
};

/// One application of U_{k+1} = (I_q - F G) U_k + F Y_d.
Vec iterate_once(const LaeProblem& problem, const Matrix& f, const Vec& u_k);

/// Runs the update from config.u0 until the first k >= 1 with
/// ||U_k - U_{k-1}||_2 < epsilon, or until max_iters. Throws NonFinite if an
/// iterate overflows.
SolveOutcome solve(const LaeProblem& problem, const Gain& gain,
                   const SolverConfig& config = {});

// ---- closed-form characterization

struct SolutionSet {
  Vec particular;
  Matrix null_projector;
  std::vector<Vec> null_basis;  // unit-norm basis of null(G), q - m entries
  bool is_least_squares = false;

  /// Limit of the iteration started from u0.
  Vec limit_from(const Vec& u0) const;
};

SolutionSet solution_set(const LaeProblem& problem, const Gain& gain);

/// Orthogonal projection of Y_d onto the column span of G.
Vec projected_target(const LaeProblem& problem);

Solvability classify_solvability(const LaeProblem& problem);

const char* to_string(Solvability s) noexcept;
const char* certificate_name(const Certificate& c) noexcept;

}  // namespace obsolve

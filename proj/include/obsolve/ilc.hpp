#pragma once

#include <cstddef>
#include <vector>

#include "obsolve/lalg.hpp"
#include "obsolve/solver.hpp"

namespace obsolve::ilc {

/// Discrete-time LTI plant repeated over trials:
///   x(t+1) = A x(t) + B u(t) + w(t),  y(t) = C x(t) + v(t),  x(0) = x0.
/// w is indexed by absolute time starting at 0; v by position in the output
/// window t = r, ..., r + N - 1. Empty sequences mean zero disturbances.
class LtiPlant {
 public:
  LtiPlant(Matrix a, Matrix b, Matrix c, Vec x0, std::size_t horizon,
           std::vector<Vec> w = {}, std::vector<Vec> v = {});

  const Matrix& a() const noexcept { return a_; }
  const Matrix& b() const noexcept { return b_; }
  const Matrix& c() const noexcept { return c_; }
  const Vec& x0() const noexcept { return x0_; }
  std::size_t horizon() const noexcept { return horizon_; }

  std::size_t states() const noexcept { return a_.rows(); }
  std::size_t inputs() const noexcept { return b_.cols(); }
  std::size_t outputs() const noexcept { return c_.rows(); }

  /// w(t), zero past the supplied sequence.
  Vec w(std::size_t t) const;
  /// v at window position i (absolute time r + i), zero past the sequence.
  Vec v(std::size_t i) const;

  std::size_t w_length() const noexcept { return w_.size(); }
  std::size_t v_length() const noexcept { return v_.size(); }

 private:
  Matrix a_, b_, c_;
  Vec x0_;
  std::size_t horizon_;
  std::vector<Vec> w_, v_;
};

/// Supervector form Y = G U + X0 + D W + V over the output window.
struct LiftedSystem {
  std::size_t r = 0;
  std::size_t horizon = 0;
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  Matrix g;          // N n_o x N n_i, block lower-triangular Toeplitz
  Matrix d;          // N n_o x (N + r - 1) n_s
  Vec x0_term;       // stacked C A^(r+t) x0
  Vec w_stack;       // w(0), ..., w(N + r - 2)
  Vec v_stack;       // v over the window
  Vec y_d;           // stacked reference
  Vec y_tilde_d;     // y_d - (x0_term + d w_stack + v_stack)

  /// x0_term + d * w_stack + v_stack.
  Vec free_response() const;
  /// Markov block (i, j) of g.
  Matrix block(std::size_t i, std::size_t j) const;
};

/// Smallest r >= 1 with C A^(r-1) B nonzero; throws ZeroTransfer when every
/// Markov parameter up to the state dimension vanishes.
std::size_t relative_degree(const LtiPlant& plant, double tol = kRankTolerance);

/// reference holds y_d(r), ..., y_d(r + N - 1).
LiftedSystem lift(const LtiPlant& plant, const std::vector<Vec>& reference);

/// Runs the recursion for one trial with input u(0..N-1) (zero afterwards)
/// and returns y over the output window t = r, ..., r + N - 1.
std::vector<Vec> simulate_time_domain(const LtiPlant& plant,
                                      const std::vector<Vec>& u);

/// I_N (x) f0.
Matrix ptype_gain(const Matrix& f0, std::size_t horizon);

struct IlcRun {
  std::vector<Vec> inputs;              // U_k supervectors, k = 0..iterations-1
  std::vector<Vec> outputs;             // Y_k supervectors
  std::vector<double> tracking_errors;  // max_t ||y_d(t) - y_k(t)||_2
  std::size_t iterations = 0;
};

/// Plays `iters` trials. Each trial simulates the plant in the time domain,
/// measures the window outputs and updates U_{k+1} = U_k + F (Y_d - Y_k).
/// Throws NonFinite when an input or output overflows.
IlcRun run_ilc(const LtiPlant& plant, const std::vector<Vec>& reference,
               const Matrix& f, const std::vector<Vec>& u0, std::size_t iters);

/// The equation Ytilde_d = G U that the learning law solves.
LaeProblem lifted_problem(const LiftedSystem& lifted,
                          double rank_tol = kRankTolerance);

Vec stack(const std::vector<Vec>& blocks);
std::vector<Vec> unstack(const Vec& v, std::size_t block_size);

}  // namespace obsolve::ilc

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "../support/generators.hpp"
#include "obsolve/errors.hpp"
#include "obsolve/ilc.hpp"
#include "obsolve/lalg.hpp"
#include "obsolve/oracle.hpp"
#include "obsolve/random.hpp"
#include "obsolve/solver.hpp"

using namespace obsolve;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

Matrix example_g() {
  return Matrix(4, 5, {1, 3, 5, 7, 2,  //
                       2, 4, 6, 1, 5,  //
                       1, 2, 5, 3, 3,  //
                       1, 2, 1, -2, 2});
}

SolveOutcome run_example(const Vec& y, bool trace) {
  const LaeProblem problem(example_g(), y);
  const Gain gain = default_gain(problem, 1.0 / 120.0);
  SolverConfig cfg;
  cfg.epsilon = 1e-5;
  cfg.u0 = Vec({1, 1, 0, 0, 0});
  cfg.record_trace = trace;
  return solve(problem, gain, cfg);
}

double relative_gap(const Vec& a, const Vec& b) {
  return norm2(a - b) / std::max(norm2(b), 1e-300);
}

// ---------------------------------------------------------------- 1-3

Verdict example_solvable() {
  const auto start = Clock::now();
  const SolveOutcome o = run_example(Vec({1, 0, 2, -2}), false);
  const double t = seconds_since(start);
  Verdict v;
  v.pass = o.converged && o.iterations >= 585 && o.iterations <= 589 &&
           o.final_residual >= 8.9e-4 && o.final_residual <= 9.3e-4 && t < 1.0;
  v.detail = "iterations " + std::to_string(o.iterations) + " (expected 587 +/- 2), residual " +
             sci(o.final_residual) + " (expected [8.9e-4, 9.3e-4]), " + sci(t) + " s";
  return v;
}

Verdict example_unsolvable() {
  const auto start = Clock::now();
  const Vec y({1, 1, 2, 2});
  const SolveOutcome o = run_example(y, false);
  const auto ref = oracle::min_norm_least_squares(example_g(), y);
  const double t = seconds_since(start);
  const double exact = 1351.0 / 780.0;
  Verdict v;
  v.pass = o.converged && o.iterations >= 502 && o.iterations <= 506 &&
           std::abs(o.final_residual - 1.7321) <= 1e-3 &&
           std::abs(ref.residual - exact) <= 1e-5 && t < 1.0;
  v.detail = "iterations " + std::to_string(o.iterations) + " (expected 504 +/- 2), residual " +
             sci(o.final_residual) + ", oracle residual " + sci(ref.residual) +
             " vs 1351/780 (gap " + sci(std::abs(ref.residual - exact)) + "), " + sci(t) + " s";
  return v;
}

Verdict example_monotone() {
  Verdict v;
  double worst = -INFINITY;
  std::size_t rows = 0;
  for (const Vec& y : {Vec({1, 0, 2, -2}), Vec({1, 1, 2, 2})}) {
    const SolveOutcome o = run_example(y, true);
    const auto& r = o.trace->records;
    rows += r.size();
    for (std::size_t i = 1; i < r.size(); ++i)
      worst = std::max(worst, r[i].step_norm - r[i - 1].step_norm);
  }
  v.pass = worst <= 1e-12;
  v.detail = std::to_string(rows) + " trace rows, largest step-norm increase " + sci(worst) +
             " (allowed 1e-12)";
  return v;
}

// ---------------------------------------------------------------- 4

Verdict example_ilc() {
  const auto start = Clock::now();
  const std::size_t n = 30;
  const Matrix a(3, 3, {1, 1, 0, 0, 1, 1, 0, 0, 1});
  const Matrix b(3, 2, {1, -1, 2, -2, 0, 0});
  const Matrix c(2, 3, {1, 0, 1, 0, 1, -1});
  std::vector<Vec> v_seq, ref, u0;
  for (std::size_t t = 1; t <= n; ++t) {
    const double s = static_cast<double>(t);
    v_seq.push_back(Vec({2 * std::sin(0.2 * s + 1) - 1, 2 * std::sin(0.2 * s)}));
    ref.push_back(Vec({2 * std::sin(0.2 * s + 1), 2 * std::sin(0.2 * s)}));
    u0.push_back(Vec({5, 1}));
  }
  const ilc::LtiPlant plant(a, b, c, Vec({1, 0, 0}), n, {}, v_seq);
  const std::size_t r = ilc::relative_degree(plant);
  const Matrix f = ilc::ptype_gain(Matrix(2, 2, {2, 1, 1, 1}), n);
  const ilc::IlcRun run = ilc::run_ilc(plant, ref, f, u0, 50);
  const double t = seconds_since(start);

  double worst_after = 0.0;
  for (std::size_t k = 30; k < run.tracking_errors.size(); ++k)
    worst_after = std::max(worst_after, run.tracking_errors[k]);
  const double e29 = run.tracking_errors.at(29);
  Verdict v;
  v.pass = r == 1 && run.iterations == 50 && worst_after <= 1e-9 && t < 5.0;
  v.detail = "relative degree " + std::to_string(r) + ", max error over k >= 30 " +
             sci(worst_after) + ", e_29 " + sci(e29) + ", " + sci(t) + " s";
  return v;
}

// ---------------------------------------------------------------- 5

Verdict deadbeat_suite() {
  Lcg rng(20240501);
  std::size_t failures = 0, checked = 0;
  std::string first;
  for (std::size_t i = 0; i < 50; ++i) {
    const LaeProblem problem = gen::random_problem(rng, gen::class_for(i), 30);
    const Vec u0 = random_vec(rng, problem.cols());
    for (NilpotentKind kind : {NilpotentKind::Zero, NilpotentKind::Shift}) {
      ++checked;
      const std::size_t nu = kind == NilpotentKind::Zero ? 1 : problem.rank();
      const Gain gain = deadbeat_gain(problem, kind);
      std::vector<Vec> iterates{u0};
      for (std::size_t k = 0; k <= nu; ++k)
        iterates.push_back(iterate_once(problem, gain.f, iterates.back()));
      const double settle = norm2(iterates[nu + 1] - iterates[nu]);
      const double before = norm2(iterates[nu] - iterates[nu - 1]);
      const bool settled = settle <= 1e-9 * std::max(1.0, norm2(iterates[nu]));
      const bool moving = before > 1e-9 * std::max(1.0, norm2(iterates[nu - 1]));

      SolverConfig cfg;
      cfg.epsilon = 1e-9 * std::max(1.0, norm2(iterates[nu]));
      cfg.u0 = u0;
      const SolveOutcome o = solve(problem, gain, cfg);
      const bool counted = o.converged && o.limit_reached_at() == nu;

      if (!(settled && moving && counted)) {
        if (failures++ == 0) {
          std::ostringstream os;
          os << "first failure: problem " << i << " (" << problem.rows() << "x"
             << problem.cols() << ", rank " << problem.rank() << ", "
             << (kind == NilpotentKind::Zero ? "zero" : "shift") << "): step at nu "
             << sci(settle) << ", before " << sci(before) << ", limit at "
             << o.limit_reached_at() << " vs nu " << nu;
          first = os.str();
        }
      }
    }
  }
  Verdict v;
  v.pass = failures == 0;
  v.detail = std::to_string(checked - failures) + "/" + std::to_string(checked) +
             " deadbeat runs reach their limit exactly at nu" +
             (first.empty() ? "" : "; " + first);
  return v;
}

// ---------------------------------------------------------------- 6

Verdict oracle_suite() {
  Lcg rng(777);
  std::size_t failures = 0, unsolvable = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    const LaeProblem problem =
        gen::random_problem(rng, gen::class_for(i), 30, i % 4 == 3);
    const Gain gain = default_gain(problem);
    SolverConfig cfg;
    cfg.epsilon = 1e-11;
    const SolveOutcome o = solve(problem, gain, cfg);
    const auto ref = oracle::min_norm_least_squares(problem.g(), problem.y_d());
    const double gap = relative_gap(o.u_inf, ref.solution);
    worst = std::max(worst, gap);
    bool ok = o.converged && gap <= 1e-6;
    if (classify_solvability(problem) == Solvability::Unsolvable) {
      ++unsolvable;
      ok = ok && oracle::residual_is_minimal(problem.g(), problem.y_d(), o.u_inf, 200, i + 1);
    }
    failures += ok ? 0 : 1;
  }
  Verdict v;
  v.pass = failures == 0;
  v.detail = std::to_string(100 - failures) + "/100 match (" + std::to_string(unsolvable) +
             " unsolvable, residual minimality over 200 trials), worst relative gap " +
             sci(worst);
  return v;
}

// ---------------------------------------------------------------- 7

struct Invariant {
  std::string name;
  std::size_t passed = 0;
  std::size_t total = 0;
  double worst = 0.0;
  void record(bool ok, double measure) {
    ++total;
    passed += ok ? 1 : 0;
    worst = std::max(worst, measure);
  }
};

Verdict structural_suite() {
  const double eps = 1e-10;
  const double tol = std::max(1e-6, 10 * eps);
  Invariant round_trip{"factorization round-trip"}, closed{"closed-form limit"},
      projection{"output projection"}, shift{"nullspace shift"},
      independence{"initial-condition independence"}, lifted{"lifted vs time domain"};

  Lcg rng(4242);
  for (std::size_t i = 0; i < 100; ++i) {
    const RankClass cls = gen::class_for(i);
    const LaeProblem problem = gen::random_problem(rng, cls, 30, i % 5 == 4);
    const auto& fact = problem.factorization();
    const double err = frobenius_norm(problem.g() - matmul(fact.h, fact.ghat));
    const bool ranks = rank(fact.h) == fact.rank && rank(fact.ghat) == fact.rank &&
                       fact.rank == rank(problem.g());
    round_trip.record(ranks && err <= 1e-10 * std::max(1.0, frobenius_norm(problem.g())), err);

    // Alternate between the two gain families so both limits are exercised.
    const Gain gain = i % 2 == 0 ? default_gain(problem)
                                 : deadbeat_gain(problem, NilpotentKind::Shift);
    const SolutionSet set = solution_set(problem, gain);
    const Vec u0 = random_vec(rng, problem.cols());
    SolverConfig cfg;
    cfg.epsilon = eps;
    cfg.u0 = u0;
    const SolveOutcome o = solve(problem, gain, cfg);
    const double closed_gap = max_abs(o.u_inf - set.limit_from(u0));
    closed.record(o.converged && closed_gap <= tol, closed_gap);

    const double proj_gap = norm2(matvec(problem.g(), o.u_inf) - projected_target(problem));
    projection.record(proj_gap <= tol, proj_gap);

    // gamma in the span of the null projector.
    const Vec gamma = matvec(set.null_projector, random_vec(rng, problem.cols()));
    SolverConfig shifted = cfg;
    shifted.u0 = u0 + gamma;
    const SolveOutcome os = solve(problem, gain, shifted);
    const double shift_gap = max_abs((os.u_inf - o.u_inf) - gamma);
    shift.record(os.converged && shift_gap <= tol, shift_gap);
  }

  for (std::size_t i = 0; i < 100; ++i) {
    const LaeProblem problem =
        gen::random_problem(rng, RankClass::FullColumn, 30, i % 2 == 0);
    const Gain gain = default_gain(problem);
    SolverConfig a, b;
    a.epsilon = b.epsilon = eps;
    a.u0 = random_vec(rng, problem.cols(), -10, 10);
    b.u0 = random_vec(rng, problem.cols(), -10, 10);
    const SolveOutcome oa = solve(problem, gain, a), ob = solve(problem, gain, b);
    const double gap = max_abs(oa.u_inf - ob.u_inf);
    independence.record(oa.converged && ob.converged && gap <= tol, gap);
  }

  for (std::size_t i = 0; i < 100; ++i) {
    const std::size_t n = gen::draw(rng, 1, 10);
    const ilc::LtiPlant plant = gen::random_plant(rng, n, 4, i % 2 == 0);
    std::vector<Vec> ref = gen::random_sequence(rng, n, plant.outputs());
    const ilc::LiftedSystem l = ilc::lift(plant, ref);
    const std::vector<Vec> u = gen::random_sequence(rng, n, plant.inputs());
    const Vec y_time = ilc::stack(ilc::simulate_time_domain(plant, u));
    const Vec y_lift = matvec(l.g, ilc::stack(u)) + l.free_response();
    const double gap = max_abs(y_time - y_lift);
    lifted.record(gap <= 1e-9, gap);
  }

  Verdict v;
  std::ostringstream os;
  bool first = true;
  for (const Invariant* inv : {&round_trip, &closed, &projection, &shift, &independence, &lifted}) {
    v.pass = v.pass && inv->passed == inv->total && inv->total == 100;
    os << (first ? "" : "; ") << inv->name << " " << inv->passed << "/" << inv->total
       << " (worst " << sci(inv->worst) << ")";
    first = false;
  }
  v.detail = os.str();
  return v;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 rank-3 consistent system", example_solvable},
      {"2 rank-3 inconsistent system", example_unsolvable},
      {"3 rank-3 monotone step norms", example_monotone},
      {"4 two-output learning control", example_ilc},
      {"5 deadbeat termination suite", deadbeat_suite},
      {"6 oracle equivalence suite", oracle_suite},
      {"7 structural invariants suite", structural_suite},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s criterion %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  const double total = seconds_since(start);
  const bool fast = total < 60.0;
  std::printf("%s total runtime %.2f s (limit 60 s)\n", fast ? "PASS" : "FAIL", total);
  return failed == 0 && fast ? 0 : 1;
}

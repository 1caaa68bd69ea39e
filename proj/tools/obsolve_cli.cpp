// obsolve command-line front end. Talks to the library only through the C API.

#include <obsolve/obsolve.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

// ------------------------------------------------------------ handle plumbing

struct Free {
  void operator()(obs_matrix* p) const { obs_matrix_free(p); }
  void operator()(obs_problem* p) const { obs_problem_free(p); }
  void operator()(obs_gain* p) const { obs_gain_free(p); }
  void operator()(obs_outcome* p) const { obs_outcome_free(p); }
  void operator()(obs_solution_set* p) const { obs_solution_set_free(p); }
  void operator()(obs_plant* p) const { obs_plant_free(p); }
  void operator()(obs_lifted* p) const { obs_lifted_free(p); }
  void operator()(obs_ilc_run* p) const { obs_ilc_run_free(p); }
};

template <class T>
using Handle = std::unique_ptr<T, Free>;

using MatrixH = Handle<obs_matrix>;

enum Exit { kOk = 0, kInput = 1, kGain = 2, kNoConvergence = 3, kMismatch = 4 };

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(obs_status s) {
  switch (s) {
    case OBS_ERR_SIGMA_OUT_OF_RANGE:
    case OBS_ERR_PROPERTY_P:
    case OBS_ERR_NO_CERTIFICATE:
    case OBS_ERR_ILL_CONDITIONED:
    case OBS_ERR_SINGULAR:
    case OBS_ERR_ZERO_TRANSFER:
      return kGain;
    case OBS_ERR_NON_FINITE:
      return kNoConvergence;
    default:
      return kInput;
  }
}

void check(obs_status s, const std::string& context) {
  if (s == OBS_OK) return;
  throw Failure{exit_code_for(s), context + ": " + obs_status_name(s) + ": " +
                                      obs_last_error()};
}

std::vector<MatrixH> read_blocks(const std::string& path) {
  obs_matrix** raw = nullptr;
  std::size_t n = 0;
  check(obs_matrix_read_file(path.c_str(), &raw, &n), "reading " + path);
  std::vector<MatrixH> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(raw[i]);
  // Ownership moved into the handles; release only the array itself.
  for (std::size_t i = 0; i < n; ++i) raw[i] = nullptr;
  obs_matrix_array_free(raw, n);
  return out;
}

void write_blocks(const std::string& path, const std::vector<const obs_matrix*>& blocks) {
  check(obs_matrix_write_file(path.c_str(), blocks.data(), blocks.size()),
        "writing " + path);
}

MatrixH make_matrix(std::size_t rows, std::size_t cols, const std::vector<double>& data) {
  obs_matrix* m = nullptr;
  check(obs_matrix_create(rows, cols, data.data(), &m), "building matrix");
  return MatrixH(m);
}

std::string fmt(double v) {
  char buf[40];
  obs_format_double(v, buf, sizeof buf);
  return buf;
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string shape(const obs_matrix* m) {
  return std::to_string(obs_matrix_rows(m)) + "x" + std::to_string(obs_matrix_cols(m));
}

std::string vector_text(const obs_matrix* m) {
  const std::size_t n = obs_matrix_rows(m) * obs_matrix_cols(m);
  const double* d = obs_matrix_data(m);
  std::string out = "[";
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += fmt(d[i]);
  }
  return out + "]";
}

double norm2(const obs_matrix* m) {
  const std::size_t n = obs_matrix_rows(m) * obs_matrix_cols(m);
  const double* d = obs_matrix_data(m);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += d[i] * d[i];
  return std::sqrt(s);
}

double distance(const obs_matrix* a, const obs_matrix* b) {
  const std::size_t n = obs_matrix_rows(a) * obs_matrix_cols(a);
  const double* x = obs_matrix_data(a);
  const double* y = obs_matrix_data(b);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

MatrixH matvec(const obs_matrix* a, const obs_matrix* x) {
  const std::size_t rows = obs_matrix_rows(a), cols = obs_matrix_cols(a);
  const double* ad = obs_matrix_data(a);
  const double* xd = obs_matrix_data(x);
  std::vector<double> out(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[i] += ad[i * cols + j] * xd[j];
  return make_matrix(rows, 1, out);
}

const char* certificate_text(const obs_gain* gain, std::string& detail) {
  double value = 0.0;
  const obs_certificate c = obs_gain_certificate(gain, &value);
  switch (c) {
    case OBS_CERT_MONOTONE:
      detail.clear();
      return "monotone";
    case OBS_CERT_NILPOTENT:
      detail = " (nu = " + std::to_string(static_cast<std::size_t>(value)) + ")";
      return "nilpotent";
    case OBS_CERT_SPECTRAL:
      detail = " (rho ~ " + sci(value) + (obs_gain_diverging(gain) ? ", diverging)" : ")");
      return "spectral-estimate";
    default:
      detail.clear();
      return "unverified";
  }
}

// ------------------------------------------------------------ solve

struct SolveArgs {
  std::string problem;
  std::string gain = "sigma";
  double epsilon = 1e-5;
  double residual_epsilon = 1e-3;
  std::string u0;
  std::size_t max_iters = 1'000'000;
  std::string trace;
  std::string out;
  bool verify = false;
  bool solution_set = false;
};

Handle<obs_gain> build_gain(const obs_problem* problem, const std::string& spec) {
  obs_gain* g = nullptr;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "sigma") {
    double sigma = 0.0;
    if (!arg.empty()) {
      try {
        std::size_t used = 0;
        sigma = std::stod(arg, &used);
        if (used != arg.size()) throw std::invalid_argument(arg);
      } catch (const std::exception&) {
        throw Failure{kInput, "--gain: '" + arg + "' is not a number"};
      }
      if (!(sigma > 0.0))
        throw Failure{kGain, "--gain: sigma must be positive, got " + arg};
    }
    check(obs_gain_sigma(problem, sigma, &g), "sigma gain");
  } else if (kind == "deadbeat") {
    obs_nilpotent_kind nk = OBS_NILPOTENT_ZERO;
    if (arg == "shift") nk = OBS_NILPOTENT_SHIFT;
    else if (!arg.empty() && arg != "zero")
      throw Failure{kInput, "--gain: deadbeat takes 'zero' or 'shift', got '" + arg + "'"};
    check(obs_gain_deadbeat(problem, nk, &g), "deadbeat gain");
  } else if (kind == "custom") {
    if (arg.empty()) throw Failure{kInput, "--gain: custom needs a file path"};
    auto blocks = read_blocks(arg);
    if (blocks.size() != 1)
      throw Failure{kInput, arg + ": expected exactly one gain matrix block"};
    check(obs_gain_custom(problem, blocks[0].get(), &g), "custom gain");
  } else {
    throw Failure{kInput, "--gain: unknown gain '" + spec + "'"};
  }
  return Handle<obs_gain>(g);
}

int cmd_solve(const SolveArgs& a) {
  auto blocks = read_blocks(a.problem);
  if (blocks.size() < 2 || blocks.size() > 3)
    throw Failure{kInput, a.problem + ": expected blocks G, Y_d and optionally U0, found " +
                              std::to_string(blocks.size())};
  obs_problem* raw = nullptr;
  check(obs_problem_create(blocks[0].get(), blocks[1].get(), &raw), a.problem);
  Handle<obs_problem> problem(raw);
  const bool solvable = obs_problem_solvable(problem.get()) != 0;

  auto gain = build_gain(problem.get(), a.gain);
  const bool property_p = obs_gain_property_p(gain.get()) != 0;
  if (!solvable && !property_p)
    throw Failure{kGain,
                  "gain violates property (P) on an unsolvable problem; the limit "
                  "would not be a least-squares solution"};

  MatrixH u0;
  const obs_matrix* u0_view = nullptr;
  if (!a.u0.empty() && a.u0 != "zero") {
    auto ub = read_blocks(a.u0);
    if (ub.size() != 1) throw Failure{kInput, a.u0 + ": expected one vector block"};
    u0 = std::move(ub[0]);
    u0_view = u0.get();
  } else if (a.u0.empty() && blocks.size() == 3) {
    u0_view = blocks[2].get();
  }

  obs_solver_config cfg = obs_solver_config_default();
  cfg.epsilon = a.epsilon;
  cfg.residual_epsilon = a.residual_epsilon;
  cfg.max_iters = a.max_iters;
  cfg.record_trace = a.trace.empty() ? 0 : 1;
  obs_outcome* rawo = nullptr;
  check(obs_solve(problem.get(), gain.get(), &cfg, u0_view, &rawo), "solve");
  Handle<obs_outcome> outcome(rawo);

  if (!a.trace.empty()) {
    std::ofstream csv(a.trace);
    if (!csv) throw Failure{kInput, "cannot write " + a.trace};
    csv << "k,step_norm,residual_norm\n";
    const std::size_t n = obs_outcome_trace_length(outcome.get());
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t k = 0;
      double step = 0.0, res = 0.0;
      obs_outcome_trace_row(outcome.get(), i, &k, &step, &res);
      csv << k << ',' << fmt(step) << ',' << fmt(res) << '\n';
    }
  }

  std::string detail;
  const char* cert = certificate_text(gain.get(), detail);
  const bool converged = obs_outcome_converged(outcome.get()) != 0;
  const bool probe = obs_outcome_residual_probe_passed(outcome.get()) != 0;
  const obs_matrix* u_inf = obs_outcome_u_inf(outcome.get());

  std::cout << "problem: " << obs_problem_rows(problem.get()) << "x"
            << obs_problem_cols(problem.get()) << ", rank "
            << obs_problem_rank(problem.get()) << "\n"
            << "gain: " << a.gain << "\n"
            << "certificate: " << cert << detail << "\n"
            << "property P: " << (property_p ? "yes" : "no") << "\n"
            << "iterations: " << obs_outcome_limit_reached_at(outcome.get()) << "\n"
            << "updates: " << obs_outcome_iterations(outcome.get()) << "\n"
            << "converged: " << (converged ? "yes" : "no") << "\n"
            << "final step norm: " << sci(obs_outcome_final_step_norm(outcome.get())) << "\n"
            << "residual: " << sci(obs_outcome_final_residual(outcome.get())) << "\n"
            << "residual probe (< " << sci(a.residual_epsilon)
            << "): " << (probe ? "Solvable" : "Unsolvable") << "\n"
            << "solvability (rank test): " << (solvable ? "Solvable" : "Unsolvable") << "\n"
            << "least squares: " << (!solvable && property_p ? "yes" : "no") << "\n"
            << "u_inf: " << vector_text(u_inf) << "\n";

  std::vector<const obs_matrix*> out_blocks{u_inf};
  Handle<obs_solution_set> set;
  if (a.solution_set) {
    obs_solution_set* raws = nullptr;
    check(obs_solution_set_create(problem.get(), gain.get(), &raws), "solution set");
    set.reset(raws);
    const obs_matrix* particular = obs_solution_set_particular(set.get());
    const obs_matrix* basis = obs_solution_set_null_basis(set.get());
    std::cout << "particular: " << vector_text(particular) << "\n"
              << "null dimension: " << obs_solution_set_null_dim(set.get()) << "\n";
    out_blocks.push_back(particular);
    if (basis) {
      const std::size_t q = obs_matrix_rows(basis), d = obs_matrix_cols(basis);
      const double* data = obs_matrix_data(basis);
      for (std::size_t j = 0; j < d; ++j) {
        std::cout << "null basis " << j << ": [";
        for (std::size_t i = 0; i < q; ++i)
          std::cout << (i ? ", " : "") << fmt(data[i * d + j]);
        std::cout << "]\n";
      }
      out_blocks.push_back(basis);
    }
  }
  if (!a.out.empty()) write_blocks(a.out, out_blocks);

  if (!converged) {
    std::cerr << "error: no convergence within " << a.max_iters << " iterations\n";
    return kNoConvergence;
  }

  if (a.verify) {
    // Any least-squares solution has the same row-space component as the
    // minimum-norm one, so compare G^+ G u_inf with G^+ Y_d.
    const obs_matrix* g = obs_problem_g(problem.get());
    obs_matrix* ref_raw = nullptr;
    double ref_residual = 0.0;
    check(obs_oracle_min_norm(g, obs_problem_y_d(problem.get()), &ref_raw, &ref_residual),
          "oracle");
    MatrixH ref(ref_raw);
    MatrixH gu = matvec(g, u_inf);
    obs_matrix* proj_raw = nullptr;
    check(obs_oracle_min_norm(g, gu.get(), &proj_raw, nullptr), "oracle");
    MatrixH proj(proj_raw);
    const double rel = distance(proj.get(), ref.get()) / std::max(norm2(ref.get()), 1e-300);
    const double res = obs_outcome_final_residual(outcome.get());
    const double res_gap = std::abs(res - ref_residual) / std::max(1.0, ref_residual);
    const bool ok = rel <= 1e-5 && res_gap <= 1e-5;
    std::cout << "oracle residual: " << sci(ref_residual) << "\n"
              << "oracle solution gap (relative): " << sci(rel) << "\n"
              << "verify: " << (ok ? "pass" : "FAIL") << "\n";
    if (!ok) return kMismatch;
  }
  return kOk;
}

// ------------------------------------------------------------ ilc

struct IlcArgs {
  std::string plant;
  std::string reference;
  std::string gain = "sigma";
  std::string u0;
  std::size_t iters = 50;
  std::string trace;
};

int cmd_ilc(const IlcArgs& a) {
  auto pb = read_blocks(a.plant);
  if (pb.size() < 4 || pb.size() > 6)
    throw Failure{kInput, a.plant + ": expected blocks A, B, C, x0 and optionally W, V"};
  auto rb = read_blocks(a.reference);
  if (rb.size() != 1) throw Failure{kInput, a.reference + ": expected one N x n_o block"};
  const obs_matrix* reference = rb[0].get();
  const std::size_t horizon = obs_matrix_rows(reference);

  obs_plant* rawp = nullptr;
  check(obs_plant_create(pb[0].get(), pb[1].get(), pb[2].get(), pb[3].get(), horizon,
                         pb.size() > 4 ? pb[4].get() : nullptr,
                         pb.size() > 5 ? pb[5].get() : nullptr, &rawp),
        a.plant);
  Handle<obs_plant> plant(rawp);
  const std::size_t n_i = obs_plant_inputs(plant.get());

  obs_lifted* rawl = nullptr;
  check(obs_lift(plant.get(), reference, &rawl), "lifting");
  Handle<obs_lifted> lifted(rawl);
  const obs_matrix* g = obs_lifted_g(lifted.get());

  // A zero shifted reference makes the lifted equation degenerate; the
  // learning law still runs, only the certificate is unavailable.
  Handle<obs_problem> lifted_problem;
  {
    obs_problem* raw = nullptr;
    if (obs_lifted_problem(lifted.get(), &raw) == OBS_OK) lifted_problem.reset(raw);
  }

  MatrixH f;
  const auto colon = a.gain.find(':');
  const std::string kind = a.gain.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : a.gain.substr(colon + 1);
  Handle<obs_gain> gain;
  if (kind == "f0" || kind == "full") {
    if (arg.empty()) throw Failure{kInput, "--gain: " + kind + " needs a file path"};
    auto fb = read_blocks(arg);
    if (fb.size() != 1) throw Failure{kInput, arg + ": expected one gain block"};
    if (kind == "f0") {
      obs_matrix* raw = nullptr;
      check(obs_ptype_gain(fb[0].get(), horizon, &raw), "P-type gain");
      f.reset(raw);
    } else {
      f = std::move(fb[0]);
    }
    if (lifted_problem) {
      obs_gain* raw = nullptr;
      check(obs_gain_custom(lifted_problem.get(), f.get(), &raw), "gain");
      gain.reset(raw);
    }
  } else if (kind == "sigma") {
    if (!lifted_problem)
      throw Failure{kInput, std::string("sigma gain needs a nonzero shifted reference: ") +
                                obs_last_error()};
    gain = build_gain(lifted_problem.get(), a.gain);
    obs_matrix* raw = nullptr;
    check(obs_matrix_clone(obs_gain_matrix(gain.get()), &raw), "gain");
    f.reset(raw);
  } else {
    throw Failure{kInput, "--gain: unknown gain '" + a.gain + "'"};
  }

  MatrixH u0;
  if (!a.u0.empty() && a.u0 != "zero") {
    auto ub = read_blocks(a.u0);
    if (ub.size() != 1) throw Failure{kInput, a.u0 + ": expected one N x n_i block"};
    u0 = std::move(ub[0]);
  } else {
    u0 = make_matrix(horizon, n_i, std::vector<double>(horizon * n_i, 0.0));
  }

  obs_ilc_run* rawr = nullptr;
  check(obs_ilc_run_create(plant.get(), reference, f.get(), u0.get(), a.iters, &rawr),
        "learning run");
  Handle<obs_ilc_run> run(rawr);
  const std::size_t trials = obs_ilc_run_iterations(run.get());

  if (!a.trace.empty()) {
    std::ofstream csv(a.trace);
    if (!csv) throw Failure{kInput, "cannot write " + a.trace};
    csv << "k,tracking_error\n";
    for (std::size_t k = 0; k < trials; ++k)
      csv << k << ',' << fmt(obs_ilc_run_tracking_error(run.get(), k)) << '\n';
  }

  std::optional<std::size_t> settled;
  for (std::size_t k = trials; k-- > 0;) {
    if (obs_ilc_run_tracking_error(run.get(), k) > 1e-9) break;
    settled = k;
  }

  std::string detail;
  std::cout << "relative degree: " << obs_lifted_relative_degree(lifted.get()) << "\n"
            << "horizon: " << horizon << "\n"
            << "lifted G: " << shape(g) << "\n"
            << "gain: " << a.gain << "\n"
            << "certificate: "
            << (gain ? certificate_text(gain.get(), detail) : "unavailable") << detail
            << "\n"
            << "trials: " << trials << "\n"
            << "initial tracking error: " << sci(obs_ilc_run_tracking_error(run.get(), 0))
            << "\n"
            << "final tracking error: "
            << sci(obs_ilc_run_tracking_error(run.get(), trials - 1)) << "\n"
            << "error <= 1e-9 from trial: "
            << (settled ? std::to_string(*settled) : std::string("never")) << "\n";
  return kOk;
}

// ------------------------------------------------------------ bench

struct BenchArgs {
  std::string sizes = "20x30";
  std::string rank_class = "deficient";
  std::uint64_t seed = 1;
  std::size_t count = 5;
  double epsilon = 1e-9;
  std::string out;
  bool timing = false;
};

// splitmix64 finalizer; decorrelates the per-problem seeds handed to the LCG.
std::uint64_t problem_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::pair<std::size_t, std::size_t>> parse_sizes(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    std::size_t p = 0, q = 0;
    try {
      std::size_t used_p = 0, used_q = 0;
      if (x == std::string::npos) throw std::invalid_argument(item);
      const std::string ps = item.substr(0, x), qs = item.substr(x + 1);
      p = std::stoul(ps, &used_p);
      q = std::stoul(qs, &used_q);
      if (used_p != ps.size() || used_q != qs.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure{kInput, "--sizes: expected PxQ, got '" + item + "'"};
    }
    if (p == 0 || q == 0) throw Failure{kInput, "--sizes: dimensions must be positive"};
    out.emplace_back(p, q);
  }
  if (out.empty()) throw Failure{kInput, "--sizes: empty list"};
  return out;
}

int cmd_bench(const BenchArgs& a) {
  obs_rank_class cls;
  if (a.rank_class == "full-col") cls = OBS_RANK_FULL_COLUMN;
  else if (a.rank_class == "full-row") cls = OBS_RANK_FULL_ROW;
  else if (a.rank_class == "deficient") cls = OBS_RANK_DEFICIENT;
  else throw Failure{kInput, "--rank-class: unknown class '" + a.rank_class + "'"};
  const auto sizes = parse_sizes(a.sizes);
  if (!(a.epsilon > 0.0)) throw Failure{kInput, "--epsilon must be positive"};

  std::ostringstream csv;
  csv << "problem,p,q,rank,rank_class,gain,iterations,updates,residual,u0_spread,check";
  if (a.timing) csv << ",time_ms";
  csv << '\n';

  bool all_ok = true;
  std::size_t index = 0;
  for (const auto& [p, q] : sizes) {
    for (std::size_t rep = 0; rep < a.count; ++rep, ++index) {
      const std::uint64_t seed = problem_seed(a.seed, index);
      obs_problem* rawp = nullptr;
      check(obs_problem_random(seed, p, q, cls, &rawp),
            "problem " + std::to_string(index));
      Handle<obs_problem> problem(rawp);
      const std::size_t m = obs_problem_rank(problem.get());

      for (const char* spec : {"sigma", "deadbeat:zero", "deadbeat:shift"}) {
        const auto start = std::chrono::steady_clock::now();
        auto gain = build_gain(problem.get(), spec);
        obs_solver_config cfg = obs_solver_config_default();
        cfg.epsilon = a.epsilon;
        obs_outcome* rawo = nullptr;
        check(obs_solve(problem.get(), gain.get(), &cfg, nullptr, &rawo), spec);
        Handle<obs_outcome> outcome(rawo);
        const std::size_t iters = obs_outcome_limit_reached_at(outcome.get());
        bool ok = obs_outcome_converged(outcome.get()) != 0;
        if (std::string(spec) != "sigma") ok = ok && iters <= m;

        // Full column rank pins the limit regardless of the starting point.
        std::string spread = "-";
        if (cls == OBS_RANK_FULL_COLUMN && std::string(spec) == "sigma") {
          obs_matrix* rawu = nullptr;
          check(obs_random_vector(problem_seed(seed, 0), q, &rawu), "random U0");
          MatrixH u0(rawu);
          obs_outcome* rawo2 = nullptr;
          check(obs_solve(problem.get(), gain.get(), &cfg, u0.get(), &rawo2), spec);
          Handle<obs_outcome> other(rawo2);
          const obs_matrix* x = obs_outcome_u_inf(outcome.get());
          const double s = distance(x, obs_outcome_u_inf(other.get())) /
                           std::max(norm2(x), 1e-300);
          spread = sci(s);
          ok = ok && obs_outcome_converged(other.get()) && s <= 1e-6;
        }
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        all_ok = all_ok && ok;
        csv << index << ',' << p << ',' << q << ',' << m << ',' << a.rank_class << ','
            << spec << ',' << iters << ',' << obs_outcome_iterations(outcome.get()) << ','
            << sci(obs_outcome_final_residual(outcome.get())) << ',' << spread << ','
            << (ok ? "ok" : "FAIL");
        if (a.timing) csv << ',' << sci(ms);
        csv << '\n';
      }
    }
  }

  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream file(a.out);
    if (!file) throw Failure{kInput, "cannot write " + a.out};
    file << csv.str();
  }
  if (!all_ok) {
    std::cerr << "error: at least one bench row failed its check\n";
    return kMismatch;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Observer-based iterative solver for linear algebraic equations"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve Y_d = G U from a problem file");
  solve->add_option("--problem", sa.problem, "File with blocks G, Y_d [, U0]")->required();
  solve->add_option("--gain", sa.gain, "sigma[:V] | deadbeat[:zero|shift] | custom:PATH");
  solve->add_option("--epsilon", sa.epsilon, "Stop when ||U_k - U_{k-1}|| < epsilon");
  solve->add_option("--residual-epsilon", sa.residual_epsilon, "Residual probe threshold");
  solve->add_option("--u0", sa.u0, "Initial input file, or 'zero'");
  solve->add_option("--max-iters", sa.max_iters, "Iteration cap");
  solve->add_option("--trace", sa.trace, "Write k,step_norm,residual_norm CSV");
  solve->add_option("--out", sa.out, "Write u_inf (and solution set blocks) to a file");
  solve->add_flag("--verify", sa.verify, "Cross-check against an SVD reference");
  solve->add_flag("--solution-set", sa.solution_set, "Print particular solution and null basis");

  IlcArgs ia;
  auto* ilc = app.add_subcommand("ilc", "Run iterative learning control on an LTI plant");
  ilc->add_option("--plant", ia.plant, "File with blocks A, B, C, x0 [, W, V]")->required();
  ilc->add_option("--reference", ia.reference, "N x n_o reference file")->required();
  ilc->add_option("--gain", ia.gain, "f0:PATH | full:PATH | sigma[:V]");
  ilc->add_option("--u0", ia.u0, "N x n_i initial input file, or 'zero'");
  ilc->add_option("--iters", ia.iters, "Number of trials");
  ilc->add_option("--trace", ia.trace, "Write k,tracking_error CSV");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run seeded random problems");
  bench->add_option("--sizes", ba.sizes, "Comma-separated PxQ list");
  bench->add_option("--rank-class", ba.rank_class, "full-col | full-row | deficient");
  bench->add_option("--seed", ba.seed, "Generator seed");
  bench->add_option("--count", ba.count, "Problems per size");
  bench->add_option("--epsilon", ba.epsilon, "Stopping threshold");
  bench->add_option("--out", ba.out, "CSV output path (stdout when absent)");
  bench->add_flag("--timing", ba.timing, "Append a wall-clock time_ms column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*solve) return cmd_solve(sa);
    if (*ilc) return cmd_ilc(ia);
    return cmd_bench(ba);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
}

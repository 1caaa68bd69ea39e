#include "obsolve/obsolve.h"

#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "obsolve/errors.hpp"
#include "obsolve/ilc.hpp"
#include "obsolve/lalg.hpp"
#include "obsolve/oracle.hpp"
#include "obsolve/random.hpp"
#include "obsolve/solver.hpp"
#include "obsolve/textio.hpp"

using obsolve::Error;
using obsolve::ErrorCode;
using obsolve::Matrix;
using obsolve::Vec;

struct obs_matrix {
  Matrix m;
};

struct obs_problem {
  obsolve::LaeProblem problem;
  obs_matrix g;
  obs_matrix y_d;
};

struct obs_gain {
  obsolve::Gain gain;
  obs_matrix f;
};

struct obs_outcome {
  obsolve::SolveOutcome outcome;
  obs_matrix u_inf;
};

struct obs_solution_set {
  obsolve::SolutionSet set;
  obs_matrix particular;
  obs_matrix projector;
  std::optional<obs_matrix> basis;
};

struct obs_plant {
  obsolve::ilc::LtiPlant plant;
};

struct obs_lifted {
  obsolve::ilc::LiftedSystem lifted;
  obs_matrix g;
  obs_matrix y_tilde;
};

struct obs_ilc_run {
  obsolve::ilc::IlcRun run;
  std::size_t inputs;
};

namespace {

thread_local std::string last_error;

obs_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return OBS_ERR_DIMENSION;
    case ErrorCode::NotSquare: return OBS_ERR_NOT_SQUARE;
    case ErrorCode::NonFiniteEntry: return OBS_ERR_NON_FINITE_ENTRY;
    case ErrorCode::SingularMatrix: return OBS_ERR_SINGULAR;
    case ErrorCode::ZeroMatrix: return OBS_ERR_ZERO_MATRIX;
    case ErrorCode::SigmaOutOfRange: return OBS_ERR_SIGMA_OUT_OF_RANGE;
    case ErrorCode::PropertyPViolated: return OBS_ERR_PROPERTY_P;
    case ErrorCode::NoCertificate: return OBS_ERR_NO_CERTIFICATE;
    case ErrorCode::NonFinite: return OBS_ERR_NON_FINITE;
    case ErrorCode::ZeroTransfer: return OBS_ERR_ZERO_TRANSFER;
    case ErrorCode::IllConditioned: return OBS_ERR_ILL_CONDITIONED;
    case ErrorCode::InvalidArgument: return OBS_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return OBS_ERR_PARSE;
    case ErrorCode::Io: return OBS_ERR_IO;
  }
  return OBS_ERR_INTERNAL;
}

template <class Fn>
obs_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return OBS_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return OBS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return OBS_ERR_INTERNAL;
  }
}

obs_status null_argument(const char* fn) {
  last_error = std::string(fn) + ": required argument is NULL";
  return OBS_ERR_NULL_ARGUMENT;
}

template <class... Ptrs>
bool any_null(Ptrs... ptrs) {
  return ((ptrs == nullptr) || ...);
}

Vec column_of(const obs_matrix* m, const char* what) {
  return obsolve::io::as_vector(m->m, what);
}

}  // namespace

extern "C" {

const char* obs_status_name(obs_status status) {
  switch (status) {
    case OBS_OK: return "OK";
    case OBS_ERR_DIMENSION: return "DimensionMismatch";
    case OBS_ERR_NOT_SQUARE: return "NotSquare";
    case OBS_ERR_NON_FINITE_ENTRY: return "NonFiniteEntry";
    case OBS_ERR_SINGULAR: return "SingularMatrix";
    case OBS_ERR_ZERO_MATRIX: return "ZeroMatrix";
    case OBS_ERR_SIGMA_OUT_OF_RANGE: return "SigmaOutOfRange";
    case OBS_ERR_PROPERTY_P: return "PropertyPViolated";
    case OBS_ERR_NO_CERTIFICATE: return "NoCertificate";
    case OBS_ERR_NON_FINITE: return "NonFinite";
    case OBS_ERR_ZERO_TRANSFER: return "ZeroTransfer";
    case OBS_ERR_ILL_CONDITIONED: return "IllConditioned";
    case OBS_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case OBS_ERR_PARSE: return "Parse";
    case OBS_ERR_IO: return "Io";
    case OBS_ERR_NULL_ARGUMENT: return "NullArgument";
    case OBS_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* obs_last_error(void) { return last_error.c_str(); }

// ---------------------------------------------------------------- matrices

obs_status obs_matrix_create(size_t rows, size_t cols, const double* row_major,
                             obs_matrix** out) {
  if (any_null(row_major, out)) return null_argument("obs_matrix_create");
  return guarded([&] {
    std::vector<double> data(row_major, row_major + rows * cols);
    *out = new obs_matrix{Matrix(rows, cols, std::move(data))};
  });
}

obs_status obs_matrix_clone(const obs_matrix* m, obs_matrix** out) {
  if (any_null(m, out)) return null_argument("obs_matrix_clone");
  return guarded([&] { *out = new obs_matrix{m->m}; });
}

void obs_matrix_free(obs_matrix* m) { delete m; }
size_t obs_matrix_rows(const obs_matrix* m) { return m ? m->m.rows() : 0; }
size_t obs_matrix_cols(const obs_matrix* m) { return m ? m->m.cols() : 0; }
const double* obs_matrix_data(const obs_matrix* m) {
  return m ? m->m.data().data() : nullptr;
}

obs_status obs_matrix_read_file(const char* path, obs_matrix*** out,
                                size_t* count) {
  if (any_null(path, out, count)) return null_argument("obs_matrix_read_file");
  return guarded([&] {
    std::vector<Matrix> blocks = obsolve::io::read_matrix_file(path);
    auto* arr = new obs_matrix*[blocks.size() ? blocks.size() : 1];
    for (std::size_t i = 0; i < blocks.size(); ++i)
      arr[i] = new obs_matrix{std::move(blocks[i])};
    *out = arr;
    *count = blocks.size();
  });
}

void obs_matrix_array_free(obs_matrix** blocks, size_t count) {
  if (!blocks) return;
  for (std::size_t i = 0; i < count; ++i) delete blocks[i];
  delete[] blocks;
}

obs_status obs_matrix_write_file(const char* path,
                                 const obs_matrix* const* blocks, size_t count) {
  if (any_null(path, blocks)) return null_argument("obs_matrix_write_file");
  return guarded([&] {
    std::vector<Matrix> list;
    for (std::size_t i = 0; i < count; ++i) {
      if (!blocks[i]) throw Error(ErrorCode::InvalidArgument, "NULL block");
      list.push_back(blocks[i]->m);
    }
    obsolve::io::write_matrix_file(path, list);
  });
}

obs_status obs_format_double(double value, char* buf, size_t len) {
  if (!buf) return null_argument("obs_format_double");
  return guarded([&] {
    const std::string s = obsolve::io::format_double(value);
    if (s.size() + 1 > len)
      throw Error(ErrorCode::InvalidArgument, "buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
  });
}

// ---------------------------------------------------------------- problems

obs_status obs_problem_create(const obs_matrix* g, const obs_matrix* y_d,
                              obs_problem** out) {
  if (any_null(g, y_d, out)) return null_argument("obs_problem_create");
  return guarded([&] {
    obsolve::LaeProblem p(g->m, column_of(y_d, "target"));
    *out = new obs_problem{p, obs_matrix{p.g()},
                           obs_matrix{Matrix::column(p.y_d())}};
  });
}

obs_status obs_problem_random(uint64_t seed, size_t p, size_t q,
                              obs_rank_class rank_class, obs_problem** out) {
  if (!out) return null_argument("obs_problem_random");
  return guarded([&] {
    obsolve::RankClass cls = obsolve::RankClass::Deficient;
    switch (rank_class) {
      case OBS_RANK_FULL_COLUMN: cls = obsolve::RankClass::FullColumn; break;
      case OBS_RANK_FULL_ROW: cls = obsolve::RankClass::FullRow; break;
      case OBS_RANK_DEFICIENT: cls = obsolve::RankClass::Deficient; break;
      default: throw Error(ErrorCode::InvalidArgument, "unknown rank class");
    }
    if (p == 0 || q == 0)
      throw Error(ErrorCode::InvalidArgument, "dimensions must be positive");
    obsolve::Lcg rng(seed);
    const std::size_t m = obsolve::rank_for_class(rng, p, q, cls);
    Matrix g = obsolve::random_rank_matrix(rng, p, q, m);
    Vec y = obsolve::random_vec(rng, p);
    obsolve::LaeProblem prob(std::move(g), std::move(y));
    *out = new obs_problem{prob, obs_matrix{prob.g()},
                           obs_matrix{Matrix::column(prob.y_d())}};
  });
}

obs_status obs_random_vector(uint64_t seed, size_t dim, obs_matrix** out) {
  if (!out) return null_argument("obs_random_vector");
  return guarded([&] {
    obsolve::Lcg rng(seed);
    *out = new obs_matrix{Matrix::column(obsolve::random_vec(rng, dim))};
  });
}

void obs_problem_free(obs_problem* problem) { delete problem; }
size_t obs_problem_rows(const obs_problem* p) { return p ? p->problem.rows() : 0; }
size_t obs_problem_cols(const obs_problem* p) { return p ? p->problem.cols() : 0; }
size_t obs_problem_rank(const obs_problem* p) { return p ? p->problem.rank() : 0; }
const obs_matrix* obs_problem_g(const obs_problem* p) { return p ? &p->g : nullptr; }
const obs_matrix* obs_problem_y_d(const obs_problem* p) { return p ? &p->y_d : nullptr; }

int obs_problem_solvable(const obs_problem* p) {
  if (!p) return 0;
  return obsolve::classify_solvability(p->problem) ==
                 obsolve::Solvability::Solvable
             ? 1
             : 0;
}

obs_status obs_problem_projected_target(const obs_problem* problem,
                                        obs_matrix** out) {
  if (any_null(problem, out)) return null_argument("obs_problem_projected_target");
  return guarded([&] {
    *out = new obs_matrix{Matrix::column(obsolve::projected_target(problem->problem))};
  });
}

// ---------------------------------------------------------------- gains

namespace {

obs_status make_gain_handle(const obs_problem* problem,
                            const obsolve::GainSpec& spec, obs_gain** out) {
  return guarded([&] {
    obsolve::Gain g = obsolve::make_gain(problem->problem, spec);
    obs_matrix f{g.f};
    *out = new obs_gain{std::move(g), std::move(f)};
  });
}

}  // namespace

obs_status obs_gain_sigma(const obs_problem* problem, double sigma,
                          obs_gain** out) {
  if (any_null(problem, out)) return null_argument("obs_gain_sigma");
  obsolve::SigmaTranspose spec;
  if (sigma > 0.0) spec.sigma = sigma;
  return make_gain_handle(problem, spec, out);
}

obs_status obs_gain_deadbeat(const obs_problem* problem, obs_nilpotent_kind kind,
                             obs_gain** out) {
  if (any_null(problem, out)) return null_argument("obs_gain_deadbeat");
  if (kind != OBS_NILPOTENT_ZERO && kind != OBS_NILPOTENT_SHIFT) {
    last_error = "unknown nilpotent kind";
    return OBS_ERR_INVALID_ARGUMENT;
  }
  return make_gain_handle(
      problem,
      obsolve::Deadbeat{kind == OBS_NILPOTENT_SHIFT ? obsolve::NilpotentKind::Shift
                                                    : obsolve::NilpotentKind::Zero},
      out);
}

obs_status obs_gain_custom(const obs_problem* problem, const obs_matrix* f,
                           obs_gain** out) {
  if (any_null(problem, f, out)) return null_argument("obs_gain_custom");
  return make_gain_handle(problem, obsolve::Custom{f->m}, out);
}

void obs_gain_free(obs_gain* gain) { delete gain; }
const obs_matrix* obs_gain_matrix(const obs_gain* gain) {
  return gain ? &gain->f : nullptr;
}
int obs_gain_property_p(const obs_gain* gain) {
  return gain && gain->gain.property_p ? 1 : 0;
}

obs_certificate obs_gain_certificate(const obs_gain* gain, double* value) {
  if (value) *value = 0.0;
  if (!gain) return OBS_CERT_UNVERIFIED;
  const auto& c = gain->gain.certificate;
  if (std::holds_alternative<obsolve::MonotoneContraction>(c)) return OBS_CERT_MONOTONE;
  if (const auto* n = std::get_if<obsolve::Nilpotent>(&c)) {
    if (value) *value = static_cast<double>(n->nu);
    return OBS_CERT_NILPOTENT;
  }
  if (const auto* s = std::get_if<obsolve::SpectralEstimate>(&c)) {
    if (value) *value = s->rho;
    return OBS_CERT_SPECTRAL;
  }
  return OBS_CERT_UNVERIFIED;
}

int obs_gain_diverging(const obs_gain* gain) {
  if (!gain) return 0;
  const auto* s = std::get_if<obsolve::SpectralEstimate>(&gain->gain.certificate);
  return s && s->diverging ? 1 : 0;
}

// ---------------------------------------------------------------- solving

obs_solver_config obs_solver_config_default(void) {
  const obsolve::SolverConfig d;
  return obs_solver_config{d.epsilon, d.residual_epsilon, d.max_iters,
                           d.record_trace ? 1 : 0};
}

obs_status obs_solve(const obs_problem* problem, const obs_gain* gain,
                     const obs_solver_config* config, const obs_matrix* u0,
                     obs_outcome** out) {
  if (any_null(problem, gain, out)) return null_argument("obs_solve");
  return guarded([&] {
    obsolve::SolverConfig cfg;
    if (config) {
      cfg.epsilon = config->epsilon;
      cfg.residual_epsilon = config->residual_epsilon;
      cfg.max_iters = config->max_iters;
      cfg.record_trace = config->record_trace != 0;
    }
    if (u0) cfg.u0 = column_of(u0, "initial input");
    obsolve::SolveOutcome o = obsolve::solve(problem->problem, gain->gain, cfg);
    obs_matrix u{Matrix::column(o.u_inf)};
    *out = new obs_outcome{std::move(o), std::move(u)};
  });
}

void obs_outcome_free(obs_outcome* outcome) { delete outcome; }
size_t obs_outcome_iterations(const obs_outcome* o) {
  return o ? o->outcome.iterations : 0;
}
size_t obs_outcome_limit_reached_at(const obs_outcome* o) {
  return o ? o->outcome.limit_reached_at() : 0;
}
int obs_outcome_converged(const obs_outcome* o) {
  return o && o->outcome.converged ? 1 : 0;
}
int obs_outcome_solvable(const obs_outcome* o) {
  return o && o->outcome.solvability == obsolve::Solvability::Solvable ? 1 : 0;
}
int obs_outcome_residual_probe_passed(const obs_outcome* o) {
  return o && o->outcome.residual_probe_passed ? 1 : 0;
}
double obs_outcome_final_step_norm(const obs_outcome* o) {
  return o ? o->outcome.final_step_norm : 0.0;
}
double obs_outcome_final_residual(const obs_outcome* o) {
  return o ? o->outcome.final_residual : 0.0;
}
const obs_matrix* obs_outcome_u_inf(const obs_outcome* o) {
  return o ? &o->u_inf : nullptr;
}
size_t obs_outcome_trace_length(const obs_outcome* o) {
  return o && o->outcome.trace ? o->outcome.trace->records.size() : 0;
}

obs_status obs_outcome_trace_row(const obs_outcome* o, size_t i, size_t* k,
                                 double* step_norm, double* residual_norm) {
  if (!o) return null_argument("obs_outcome_trace_row");
  if (i >= obs_outcome_trace_length(o)) {
    last_error = "trace row out of range";
    return OBS_ERR_INVALID_ARGUMENT;
  }
  const auto& rec = o->outcome.trace->records[i];
  if (k) *k = rec.k;
  if (step_norm) *step_norm = rec.step_norm;
  if (residual_norm) *residual_norm = rec.residual_norm;
  last_error.clear();
  return OBS_OK;
}

// ---------------------------------------------------------------- solution set

obs_status obs_solution_set_create(const obs_problem* problem,
                                   const obs_gain* gain, obs_solution_set** out) {
  if (any_null(problem, gain, out)) return null_argument("obs_solution_set_create");
  return guarded([&] {
    obsolve::SolutionSet s = obsolve::solution_set(problem->problem, gain->gain);
    obs_matrix particular{Matrix::column(s.particular)};
    obs_matrix projector{s.null_projector};
    std::optional<obs_matrix> basis;
    if (!s.null_basis.empty()) {
      Matrix b(problem->problem.cols(), s.null_basis.size());
      for (std::size_t j = 0; j < s.null_basis.size(); ++j)
        for (std::size_t i = 0; i < b.rows(); ++i) b(i, j) = s.null_basis[j][i];
      basis = obs_matrix{std::move(b)};
    }
    *out = new obs_solution_set{std::move(s), std::move(particular),
                                std::move(projector), std::move(basis)};
  });
}

void obs_solution_set_free(obs_solution_set* set) { delete set; }
const obs_matrix* obs_solution_set_particular(const obs_solution_set* s) {
  return s ? &s->particular : nullptr;
}
const obs_matrix* obs_solution_set_null_projector(const obs_solution_set* s) {
  return s ? &s->projector : nullptr;
}
size_t obs_solution_set_null_dim(const obs_solution_set* s) {
  return s ? s->set.null_basis.size() : 0;
}
const obs_matrix* obs_solution_set_null_basis(const obs_solution_set* s) {
  return s && s->basis ? &*s->basis : nullptr;
}
int obs_solution_set_is_least_squares(const obs_solution_set* s) {
  return s && s->set.is_least_squares ? 1 : 0;
}

obs_status obs_solution_set_limit_from(const obs_solution_set* set,
                                       const obs_matrix* u0, obs_matrix** out) {
  if (any_null(set, u0, out)) return null_argument("obs_solution_set_limit_from");
  return guarded([&] {
    *out = new obs_matrix{
        Matrix::column(set->set.limit_from(column_of(u0, "initial input")))};
  });
}

// ---------------------------------------------------------------- oracle

obs_status obs_oracle_min_norm(const obs_matrix* g, const obs_matrix* y,
                               obs_matrix** solution, double* residual) {
  if (any_null(g, y, solution)) return null_argument("obs_oracle_min_norm");
  return guarded([&] {
    auto r = obsolve::oracle::min_norm_least_squares(g->m, column_of(y, "target"));
    if (residual) *residual = r.residual;
    *solution = new obs_matrix{Matrix::column(r.solution)};
  });
}

obs_status obs_oracle_residual_is_minimal(const obs_matrix* g, const obs_matrix* y,
                                          const obs_matrix* candidate,
                                          size_t trials, uint64_t seed,
                                          int* minimal) {
  if (any_null(g, y, candidate, minimal))
    return null_argument("obs_oracle_residual_is_minimal");
  return guarded([&] {
    *minimal = obsolve::oracle::residual_is_minimal(
                   g->m, column_of(y, "target"),
                   column_of(candidate, "candidate"), trials, seed)
                   ? 1
                   : 0;
  });
}

// ---------------------------------------------------------------- learning control

obs_status obs_plant_create(const obs_matrix* a, const obs_matrix* b,
                            const obs_matrix* c, const obs_matrix* x0,
                            size_t horizon, const obs_matrix* w,
                            const obs_matrix* v, obs_plant** out) {
  if (any_null(a, b, c, x0, out)) return null_argument("obs_plant_create");
  return guarded([&] {
    std::vector<Vec> ws, vs;
    if (w) ws = obsolve::io::as_sequence(w->m);
    if (v) vs = obsolve::io::as_sequence(v->m);
    *out = new obs_plant{obsolve::ilc::LtiPlant(a->m, b->m, c->m,
                                                column_of(x0, "x0"), horizon,
                                                std::move(ws), std::move(vs))};
  });
}

void obs_plant_free(obs_plant* plant) { delete plant; }
size_t obs_plant_inputs(const obs_plant* p) { return p ? p->plant.inputs() : 0; }
size_t obs_plant_outputs(const obs_plant* p) { return p ? p->plant.outputs() : 0; }

obs_status obs_plant_relative_degree(const obs_plant* plant, size_t* r) {
  if (any_null(plant, r)) return null_argument("obs_plant_relative_degree");
  return guarded([&] { *r = obsolve::ilc::relative_degree(plant->plant); });
}

obs_status obs_lift(const obs_plant* plant, const obs_matrix* reference,
                    obs_lifted** out) {
  if (any_null(plant, reference, out)) return null_argument("obs_lift");
  return guarded([&] {
    auto l = obsolve::ilc::lift(plant->plant, obsolve::io::as_sequence(reference->m));
    obs_matrix g{l.g};
    obs_matrix yt{Matrix::column(l.y_tilde_d)};
    *out = new obs_lifted{std::move(l), std::move(g), std::move(yt)};
  });
}

void obs_lifted_free(obs_lifted* lifted) { delete lifted; }
size_t obs_lifted_relative_degree(const obs_lifted* l) { return l ? l->lifted.r : 0; }
const obs_matrix* obs_lifted_g(const obs_lifted* l) { return l ? &l->g : nullptr; }
const obs_matrix* obs_lifted_y_tilde(const obs_lifted* l) {
  return l ? &l->y_tilde : nullptr;
}

obs_status obs_lifted_problem(const obs_lifted* lifted, obs_problem** out) {
  if (any_null(lifted, out)) return null_argument("obs_lifted_problem");
  return guarded([&] {
    obsolve::LaeProblem p = obsolve::ilc::lifted_problem(lifted->lifted);
    *out = new obs_problem{p, obs_matrix{p.g()},
                           obs_matrix{Matrix::column(p.y_d())}};
  });
}

obs_status obs_ptype_gain(const obs_matrix* f0, size_t horizon, obs_matrix** out) {
  if (any_null(f0, out)) return null_argument("obs_ptype_gain");
  return guarded([&] {
    *out = new obs_matrix{obsolve::ilc::ptype_gain(f0->m, horizon)};
  });
}

obs_status obs_simulate(const obs_plant* plant, const obs_matrix* u,
                        obs_matrix** y) {
  if (any_null(plant, u, y)) return null_argument("obs_simulate");
  return guarded([&] {
    auto out = obsolve::ilc::simulate_time_domain(plant->plant,
                                                  obsolve::io::as_sequence(u->m));
    *y = new obs_matrix{obsolve::io::from_sequence(out)};
  });
}

obs_status obs_ilc_run_create(const obs_plant* plant, const obs_matrix* reference,
                              const obs_matrix* f, const obs_matrix* u0,
                              size_t iters, obs_ilc_run** out) {
  if (any_null(plant, reference, f, u0, out)) return null_argument("obs_ilc_run_create");
  return guarded([&] {
    auto run = obsolve::ilc::run_ilc(plant->plant,
                                     obsolve::io::as_sequence(reference->m), f->m,
                                     obsolve::io::as_sequence(u0->m), iters);
    *out = new obs_ilc_run{std::move(run), plant->plant.inputs()};
  });
}

void obs_ilc_run_free(obs_ilc_run* run) { delete run; }
size_t obs_ilc_run_iterations(const obs_ilc_run* run) {
  return run ? run->run.iterations : 0;
}
double obs_ilc_run_tracking_error(const obs_ilc_run* run, size_t k) {
  if (!run || k >= run->run.tracking_errors.size()) return -1.0;
  return run->run.tracking_errors[k];
}

obs_status obs_ilc_run_input(const obs_ilc_run* run, size_t k, obs_matrix** out) {
  if (any_null(run, out)) return null_argument("obs_ilc_run_input");
  return guarded([&] {
    if (k >= run->run.inputs.size())
      throw Error(ErrorCode::InvalidArgument, "trial index out of range");
    *out = new obs_matrix{obsolve::io::from_sequence(
        obsolve::ilc::unstack(run->run.inputs[k], run->inputs))};
  });
}

}  // extern "C"

#include "obsolve/ilc.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "obsolve/errors.hpp"

namespace obsolve::ilc {

namespace {

[[noreturn]] void shape_error(const std::string& what) {
  throw Error(ErrorCode::DimensionMismatch, what);
}

void require_sequence(const std::vector<Vec>& seq, std::size_t dim,
                      const char* name) {
  for (std::size_t t = 0; t < seq.size(); ++t) {
    if (seq[t].dim() != dim) {
      std::ostringstream os;
      os << name << "[" << t << "] has dimension " << seq[t].dim()
         << ", expected " << dim;
      shape_error(os.str());
    }
  }
}

// C A^k for k = 0..count-1.
std::vector<Matrix> output_powers(const LtiPlant& plant, std::size_t count) {
  std::vector<Matrix> out;
  out.reserve(count);
  Matrix ca = plant.c();
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(ca);
    ca = matmul(ca, plant.a());
  }
  return out;
}

void place_block(Matrix& target, std::size_t row0, std::size_t col0,
                 const Matrix& block) {
  for (std::size_t r = 0; r < block.rows(); ++r)
    for (std::size_t c = 0; c < block.cols(); ++c)
      target(row0 + r, col0 + c) = block(r, c);
}

}  // namespace

// ---------------------------------------------------------------- plant

LtiPlant::LtiPlant(Matrix a, Matrix b, Matrix c, Vec x0, std::size_t horizon,
                   std::vector<Vec> w, std::vector<Vec> v)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), x0_(std::move(x0)),
      horizon_(horizon), w_(std::move(w)), v_(std::move(v)) {
  if (!a_.is_square()) shape_error("plant: A must be square");
  if (b_.rows() != a_.rows()) shape_error("plant: B rows must match A");
  if (c_.cols() != a_.rows()) shape_error("plant: C columns must match A");
  if (x0_.dim() != a_.rows()) shape_error("plant: x0 must match A");
  if (horizon_ == 0)
    throw Error(ErrorCode::InvalidArgument, "plant: horizon must be positive");
  if (max_abs(b_) == 0.0 || max_abs(c_) == 0.0)
    throw Error(ErrorCode::ZeroTransfer, "plant: B and C must be nonzero");
  require_sequence(w_, a_.rows(), "w");
  require_sequence(v_, c_.rows(), "v");
}

Vec LtiPlant::w(std::size_t t) const {
  return t < w_.size() ? w_[t] : Vec(states());
}

Vec LtiPlant::v(std::size_t i) const {
  return i < v_.size() ? v_[i] : Vec(outputs());
}

// ---------------------------------------------------------------- lifting

std::size_t relative_degree(const LtiPlant& plant, double tol) {
  Matrix a_pow_b = plant.b();
  const double c_scale = max_abs(plant.c());
  for (std::size_t r = 1; r <= plant.states(); ++r) {
    const Matrix markov = matmul(plant.c(), a_pow_b);
    const double scale = c_scale * max_abs(a_pow_b);
    if (scale > 0.0 && max_abs(markov) > tol * scale) return r;
    a_pow_b = matmul(plant.a(), a_pow_b);
  }
  throw Error(ErrorCode::ZeroTransfer,
              "every Markov parameter C A^j B vanishes; the input never "
              "reaches the output");
}

Vec LiftedSystem::free_response() const {
  return x0_term + matvec(d, w_stack) + v_stack;
}

Matrix LiftedSystem::block(std::size_t i, std::size_t j) const {
  Matrix out(outputs, inputs);
  for (std::size_t r = 0; r < outputs; ++r)
    for (std::size_t c = 0; c < inputs; ++c)
      out(r, c) = g(i * outputs + r, j * inputs + c);
  return out;
}

LiftedSystem lift(const LtiPlant& plant, const std::vector<Vec>& reference) {
  const std::size_t n = plant.horizon();
  const std::size_t ni = plant.inputs();
  const std::size_t no = plant.outputs();
  const std::size_t ns = plant.states();
  if (reference.size() != n) {
    std::ostringstream os;
    os << "reference has " << reference.size() << " samples, horizon is " << n;
    shape_error(os.str());
  }
  require_sequence(reference, no, "reference");

  const std::size_t r = relative_degree(plant);
  const std::vector<Matrix> ca = output_powers(plant, r + n);

  Matrix g(n * no, n * ni);
  std::vector<Matrix> markov;
  markov.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    markov.push_back(matmul(ca[i + r - 1], plant.b()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      place_block(g, i * no, j * ni, markov[i - j]);

  // Row block i holds y(r + i); w(s) reaches it through C A^(r + i - 1 - s).
  const std::size_t w_count = n + r - 1;
  Matrix d(n * no, w_count * ns);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s <= r + i - 1; ++s)
      place_block(d, i * no, s * ns, ca[r + i - 1 - s]);

  std::vector<Vec> x0_blocks, w_blocks, v_blocks;
  for (std::size_t i = 0; i < n; ++i) {
    x0_blocks.push_back(matvec(ca[r + i], plant.x0()));
    v_blocks.push_back(plant.v(i));
  }
  for (std::size_t s = 0; s < w_count; ++s) w_blocks.push_back(plant.w(s));

  LiftedSystem out{r,
                   n,
                   ni,
                   no,
                   std::move(g),
                   std::move(d),
                   stack(x0_blocks),
                   stack(w_blocks),
                   stack(v_blocks),
                   stack(reference),
                   Vec(n * no)};
  out.y_tilde_d = out.y_d - out.free_response();
  return out;
}

std::vector<Vec> simulate_time_domain(const LtiPlant& plant,
                                      const std::vector<Vec>& u) {
  const std::size_t n = plant.horizon();
  if (u.size() != n) {
    std::ostringstream os;
    os << "input has " << u.size() << " samples, horizon is " << n;
    shape_error(os.str());
  }
  require_sequence(u, plant.inputs(), "u");

  const std::size_t r = relative_degree(plant);
  const Vec zero_input(plant.inputs());
  std::vector<Vec> y;
  y.reserve(n);
  Vec x = plant.x0();
  for (std::size_t t = 0; t < r + n; ++t) {
    if (t >= r) y.push_back(matvec(plant.c(), x) + plant.v(t - r));
    if (t + 1 == r + n) break;
    const Vec& ut = t < n ? u[t] : zero_input;
    x = matvec(plant.a(), x) + matvec(plant.b(), ut) + plant.w(t);
  }
  return y;
}

Matrix ptype_gain(const Matrix& f0, std::size_t horizon) {
  if (horizon == 0)
    throw Error(ErrorCode::InvalidArgument, "ptype_gain: horizon must be positive");
  Matrix out(horizon * f0.rows(), horizon * f0.cols());
  for (std::size_t i = 0; i < horizon; ++i)
    place_block(out, i * f0.rows(), i * f0.cols(), f0);
  return out;
}

// ---------------------------------------------------------------- learning

IlcRun run_ilc(const LtiPlant& plant, const std::vector<Vec>& reference,
               const Matrix& f, const std::vector<Vec>& u0, std::size_t iters) {
  const std::size_t n = plant.horizon();
  const std::size_t ni = plant.inputs();
  const std::size_t no = plant.outputs();
  if (f.rows() != n * ni || f.cols() != n * no) {
    std::ostringstream os;
    os << "learning gain must be " << n * ni << "x" << n * no << ", got "
       << f.rows() << "x" << f.cols();
    shape_error(os.str());
  }
  if (reference.size() != n) shape_error("reference length must equal horizon");
  require_sequence(reference, no, "reference");
  const Vec y_d = stack(reference);

  IlcRun run;
  Vec u = stack(u0);
  if (u.dim() != n * ni) shape_error("initial input length must equal horizon");
  const auto diverged = [](std::size_t k) {
    std::ostringstream os;
    os << "trial " << k << " produced non-finite signals";
    return Error(ErrorCode::NonFinite, os.str());
  };
  for (std::size_t k = 0; k < iters; ++k) {
    if (!u.all_finite()) throw diverged(k);
    const std::vector<Vec> y_blocks = simulate_time_domain(plant, unstack(u, ni));
    for (const Vec& yt : y_blocks)
      if (!yt.all_finite()) throw diverged(k);
    Vec y = stack(y_blocks);
    double worst = 0.0;
    for (std::size_t t = 0; t < n; ++t)
      worst = std::max(worst, norm2(reference[t] - y_blocks[t]));

    Vec next = u + matvec(f, y_d - y);
    run.inputs.push_back(std::move(u));
    run.outputs.push_back(std::move(y));
    run.tracking_errors.push_back(worst);
    u = std::move(next);
  }
  run.iterations = iters;
  return run;
}

LaeProblem lifted_problem(const LiftedSystem& lifted, double rank_tol) {
  return LaeProblem(lifted.g, lifted.y_tilde_d, rank_tol);
}

// ---------------------------------------------------------------- supervectors

Vec stack(const std::vector<Vec>& blocks) {
  std::vector<double> out;
  for (const Vec& b : blocks) out.insert(out.end(), b.values().begin(), b.values().end());
  return Vec(std::move(out));
}

std::vector<Vec> unstack(const Vec& v, std::size_t block_size) {
  if (block_size == 0 || v.dim() % block_size != 0)
    shape_error("unstack: length is not a multiple of the block size");
  std::vector<Vec> out;
  out.reserve(v.dim() / block_size);
  for (std::size_t i = 0; i < v.dim(); i += block_size) {
    std::vector<double> chunk(v.values().begin() + static_cast<std::ptrdiff_t>(i),
                              v.values().begin() + static_cast<std::ptrdiff_t>(i + block_size));
    out.emplace_back(std::move(chunk));
  }
  return out;
}

}  // namespace obsolve::ilc

#pragma once

// Seeded instance generators shared by the unit tests and the acceptance run.

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "obsolve/ilc.hpp"
#include "obsolve/lalg.hpp"
#include "obsolve/random.hpp"
#include "obsolve/solver.hpp"

namespace obsolve::gen {

inline std::size_t draw(Lcg& rng, std::size_t lo, std::size_t hi) {
  return lo + rng.below(hi - lo + 1);
}

/// Shape (p, q) with both sides in [1, max_dim] that can host the class.
inline std::pair<std::size_t, std::size_t> random_shape(Lcg& rng, RankClass cls,
                                                        std::size_t max_dim) {
  switch (cls) {
    case RankClass::FullColumn: {
      const std::size_t q = draw(rng, 1, max_dim);
      return {draw(rng, q, max_dim), q};
    }
    case RankClass::FullRow: {
      const std::size_t p = draw(rng, 1, max_dim);
      return {p, draw(rng, p, max_dim)};
    }
    case RankClass::Deficient:
      break;
  }
  return {draw(rng, 2, max_dim), draw(rng, 2, max_dim)};
}

inline RankClass class_for(std::size_t i) {
  static constexpr RankClass order[] = {RankClass::FullColumn, RankClass::FullRow,
                                        RankClass::Deficient};
  return order[i % 3];
}

/// Random LAE of the given class. With `consistent` the target is G x for a
/// random x, otherwise it is drawn independently (unsolvable whenever the
/// rank is below p).
inline LaeProblem random_problem(Lcg& rng, RankClass cls, std::size_t max_dim,
                                 bool consistent = false) {
  const auto [p, q] = random_shape(rng, cls, max_dim);
  const std::size_t m = rank_for_class(rng, p, q, cls);
  Matrix g = random_rank_matrix(rng, p, q, m);
  Vec y = consistent ? matvec(g, random_vec(rng, q)) : random_vec(rng, p);
  return LaeProblem(std::move(g), std::move(y));
}

/// Plant with n_s <= max_states and n_i, n_o <= 2 whose first Markov
/// parameter is nonzero; entries scaled so A has spectral radius below about 1.
inline ilc::LtiPlant random_plant(Lcg& rng, std::size_t horizon, std::size_t max_states,
                                  bool with_disturbances) {
  const std::size_t ns = draw(rng, 1, max_states);
  const std::size_t ni = draw(rng, 1, 2);
  const std::size_t no = draw(rng, 1, 2);
  Matrix a = (1.0 / static_cast<double>(ns)) * random_matrix(rng, ns, ns);
  Matrix b = random_matrix(rng, ns, ni);
  Matrix c = random_matrix(rng, no, ns);
  Vec x0 = random_vec(rng, ns);
  std::vector<Vec> w, v;
  if (with_disturbances) {
    for (std::size_t t = 0; t < horizon + ns; ++t) w.push_back(random_vec(rng, ns, -0.1, 0.1));
    for (std::size_t t = 0; t < horizon; ++t) v.push_back(random_vec(rng, no, -0.1, 0.1));
  }
  return ilc::LtiPlant(std::move(a), std::move(b), std::move(c), std::move(x0), horizon,
                       std::move(w), std::move(v));
}

inline std::vector<Vec> random_sequence(Lcg& rng, std::size_t length, std::size_t dim) {
  std::vector<Vec> out;
  for (std::size_t t = 0; t < length; ++t) out.push_back(random_vec(rng, dim));
  return out;
}

}  // namespace obsolve::gen

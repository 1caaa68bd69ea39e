#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "obsolve/lalg.hpp"

namespace obsolve {

/// Reproducible generator used by benches and property tests.
///
/// State update (mod 2^64):
///   x_{n+1} = 6364136223846793005 * x_n + 1442695040888963407
/// Doubles take the top 53 bits: uniform() = (x >> 11) * 2^-53, in [0, 1).
/// Integers below n use floor(uniform() * n). None of the standard
/// distributions are involved, so streams match across platforms.
class Lcg {
 public:
  using Engine = std::linear_congruential_engine<std::uint64_t,
                                                 6364136223846793005ULL,
                                                 1442695040888963407ULL, 0>;

  explicit Lcg(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
  }

 private:
  Engine engine_;
};

enum class RankClass { FullColumn, FullRow, Deficient };

const char* to_string(RankClass c) noexcept;

/// Entries drawn uniformly from [lo, hi).
Matrix random_matrix(Lcg& rng, std::size_t rows, std::size_t cols,
                     double lo = -1.0, double hi = 1.0);
Vec random_vec(Lcg& rng, std::size_t dim, double lo = -1.0, double hi = 1.0);

/// p x q matrix of exact rank m built as P1 [I; K1] [I K2] P2 with random
/// permutations P1, P2 and K1, K2 uniform on [-1, 1). Both factors have
/// smallest singular value at least 1, so the product is well conditioned.
Matrix random_rank_matrix(Lcg& rng, std::size_t p, std::size_t q, std::size_t m);

/// Rank implied by the class: q for FullColumn (needs p >= q), p for FullRow
/// (needs q >= p), uniform on [1, min(p, q) - 1] for Deficient (needs
/// min(p, q) >= 2). Throws InvalidArgument when the shape cannot host the
/// class.
std::size_t rank_for_class(Lcg& rng, std::size_t p, std::size_t q,
                           RankClass rank_class);

}  // namespace obsolve

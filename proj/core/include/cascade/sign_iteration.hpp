#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cascade/equilibria.hpp"

namespace cascade {

/// Element of {-1, +1}^n. sign(x) is +1 for x >= 0 (after the 1e-12 zero clamp).
struct SignVector {
  std::vector<std::int8_t> signs;

  static SignVector uniform(std::size_t n, std::int8_t sign);
  static SignVector of(const Vector& x);

  std::size_t size() const noexcept { return signs.size(); }
  /// Indices carrying +1.
  std::vector<std::size_t> safe_set() const;
  /// Elementwise a <= b.
  friend bool leq(const SignVector& a, const SignVector& b);
  friend bool operator==(const SignVector&, const SignVector&) = default;
};

enum class Direction { Worst, Best };

struct SignIterationTrace {
  std::vector<SignVector> sequence;  // sigma(0), sigma(1), ..., fixed point repeated last
  std::vector<std::vector<std::size_t>> safe_sets;
  SignVector fixed_point;
  Direction direction = Direction::Worst;
  std::size_t iterations = 0;  // number of sign_step applications
  std::vector<std::size_t> marginal;  // components ever within 1e-12 of zero
};

/// Psi(sigma)_i = r_i for sigma_i = +1 and r_i - beta_i for sigma_i = -1.
Vector psi(const TranslatedSystem& ts, const SignVector& sigma);

/// sign(P psi(sigma)).
SignVector sign_step(const TranslatedSystem& ts, const SignVector& sigma);

bool is_sign_fixed_point(const TranslatedSystem& ts, const SignVector& sigma);

/// From all -1: the worst-case rest point sigma^W; safe sets only grow.
/// Throws NonMonotoneTrace if the chain ever shrinks or runs past n + 2 steps.
SignIterationTrace iterate_worst(const TranslatedSystem& ts);
/// From all +1: the best-case rest point sigma^B; safe sets only shrink.
SignIterationTrace iterate_best(const TranslatedSystem& ts);

enum class FixedSign { AlwaysNegative, AlwaysPositive, Undetermined };

/// (P r)_i < 0: negative at every equilibrium; (P (r - beta))_i >= 0: nonnegative at every one.
std::vector<FixedSign> fixed_sign_classification(const TranslatedSystem& ts);

struct AttractorPair {
  Vector x_worst;  // P psi(sigma^W)
  Vector x_best;   // P psi(sigma^B)
  SignVector sigma_worst;
  SignVector sigma_best;
  std::size_t worst_settle_steps = 0;
  std::size_t best_settle_steps = 0;
};

/// Solves both iterations, then confirms by simulating the translated system
/// from P psi(all -1) (must rise monotonically) and P psi(all +1) (must fall)
/// until each lands on its attractor. Throws MonotoneViolation otherwise.
AttractorPair attractors(const TranslatedSystem& ts, std::size_t max_steps = 1'000'000);

/// One step of the translated dynamics x -> C x + r - B phi(x).
Vector translated_step(const TranslatedSystem& ts, const Vector& x);

}  // namespace cascade

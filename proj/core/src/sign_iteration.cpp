#include "cascade/sign_iteration.hpp"

#include <algorithm>
#include <string>

namespace cascade {

namespace {

constexpr double kZeroClamp = 1e-12;

struct StepResult {
  SignVector sigma;
  std::vector<std::size_t> marginal;
};

StepResult sign_step_detail(const TranslatedSystem& ts, const SignVector& sigma) {
  const Vector x = multiply(ts.inverse, psi(ts, sigma));
  StepResult out;
  out.sigma.signs.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = clamp_zero(x[i], kZeroClamp);
    if (v == 0.0) out.marginal.push_back(i);
    out.sigma.signs[i] = v < 0.0 ? -1 : 1;
  }
  return out;
}

bool subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

SignIterationTrace iterate_from(const TranslatedSystem& ts, Direction dir) {
  const std::size_t n = ts.drive.size();
  SignIterationTrace trace;
  trace.direction = dir;
  trace.sequence.push_back(SignVector::uniform(n, dir == Direction::Worst ? -1 : 1));
  trace.safe_sets.push_back(trace.sequence.back().safe_set());

  while (true) {
    if (trace.iterations >= n + 2) {
      throw Error(ErrorCode::NonMonotoneTrace,
                  "sign iteration exceeded " + std::to_string(n + 2) + " steps");
    }
    StepResult next = sign_step_detail(ts, trace.sequence.back());
    ++trace.iterations;
    for (std::size_t i : next.marginal)
      if (std::find(trace.marginal.begin(), trace.marginal.end(), i) == trace.marginal.end())
        trace.marginal.push_back(i);

    const auto& prev = trace.sequence.back();
    const bool ordered = dir == Direction::Worst ? leq(prev, next.sigma) : leq(next.sigma, prev);
    auto safe = next.sigma.safe_set();
    const bool chained = dir == Direction::Worst ? subset(trace.safe_sets.back(), safe)
                                                 : subset(safe, trace.safe_sets.back());
    if (!ordered || !chained) {
      throw Error(ErrorCode::NonMonotoneTrace,
                  "sign iteration left its monotone chain at step " +
                      std::to_string(trace.iterations));
    }
    const bool done = next.sigma == prev;
    trace.sequence.push_back(std::move(next.sigma));
    trace.safe_sets.push_back(std::move(safe));
    if (done) break;
  }
  std::sort(trace.marginal.begin(), trace.marginal.end());
  trace.fixed_point = trace.sequence.back();
  return trace;
}

// Simulates from `start` towards `target`, requiring every step to move in
// one direction (+1 rising, -1 falling). Returns the steps taken.
std::size_t confirm_monotone_approach(const TranslatedSystem& ts, Vector x, const Vector& target,
                                      int direction, std::size_t max_steps, const char* label) {
  const double tol = 1e-9 * std::max(1.0, norm_inf(target));
  for (std::size_t t = 0; t <= max_steps; ++t) {
    if (norm_inf(subtract(x, target)) <= tol) return t;
    Vector next = translated_step(ts, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = clamp_zero(next[i] - x[i], kZeroClamp) * direction;
      if (d < 0.0) {
        throw Error(ErrorCode::MonotoneViolation,
                    std::string(label) + " trajectory reversed at t=" + std::to_string(t) +
                        ", component " + std::to_string(i));
      }
    }
    x = std::move(next);
  }
  throw Error(ErrorCode::MonotoneViolation,
              std::string(label) + " trajectory did not settle within " +
                  std::to_string(max_steps) + " steps");
}

}  // namespace

SignVector SignVector::uniform(std::size_t n, std::int8_t sign) {
  return SignVector{std::vector<std::int8_t>(n, sign)};
}

SignVector SignVector::of(const Vector& x) {
  SignVector s;
  s.signs.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s.signs[i] = clamp_zero(x[i], kZeroClamp) < 0.0 ? -1 : 1;
  return s;
}

std::vector<std::size_t> SignVector::safe_set() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < signs.size(); ++i)
    if (signs[i] > 0) out.push_back(i);
  return out;
}

bool leq(const SignVector& a, const SignVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "sign vectors differ in length");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.signs[i] > b.signs[i]) return false;
  return true;
}

Vector psi(const TranslatedSystem& ts, const SignVector& sigma) {
  const std::size_t n = ts.drive.size();
  if (sigma.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "sign vector length " + std::to_string(sigma.size()) +
                                               ", expected " + std::to_string(n));
  }
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = sigma.signs[i] > 0 ? ts.drive[i] : ts.drive[i] - ts.failure_costs[i];
  return out;
}

SignVector sign_step(const TranslatedSystem& ts, const SignVector& sigma) {
  return sign_step_detail(ts, sigma).sigma;
}

bool is_sign_fixed_point(const TranslatedSystem& ts, const SignVector& sigma) {
  return sign_step(ts, sigma) == sigma;
}

SignIterationTrace iterate_worst(const TranslatedSystem& ts) {
  return iterate_from(ts, Direction::Worst);
}

SignIterationTrace iterate_best(const TranslatedSystem& ts) {
  return iterate_from(ts, Direction::Best);
}

std::vector<FixedSign> fixed_sign_classification(const TranslatedSystem& ts) {
  const Vector upper = multiply(ts.inverse, ts.drive);
  const Vector lower = multiply(ts.inverse, subtract(ts.drive, ts.failure_costs));
  std::vector<FixedSign> labels(upper.size(), FixedSign::Undetermined);
  for (std::size_t i = 0; i < upper.size(); ++i) {
    if (clamp_zero(upper[i], kZeroClamp) < 0.0) {
      labels[i] = FixedSign::AlwaysNegative;
    } else if (clamp_zero(lower[i], kZeroClamp) >= 0.0) {
      labels[i] = FixedSign::AlwaysPositive;
    }
  }
  return labels;
}

Vector translated_step(const TranslatedSystem& ts, const Vector& x) {
  Vector next = multiply(ts.cross_holdings, x);
  for (std::size_t i = 0; i < next.size(); ++i)
    next[i] += ts.drive[i] - (x[i] < 0.0 ? ts.failure_costs[i] : 0.0);
  return next;
}

AttractorPair attractors(const TranslatedSystem& ts, std::size_t max_steps) {
  const std::size_t n = ts.drive.size();
  AttractorPair pair;
  pair.sigma_worst = iterate_worst(ts).fixed_point;
  pair.sigma_best = iterate_best(ts).fixed_point;
  pair.x_worst = multiply(ts.inverse, psi(ts, pair.sigma_worst));
  pair.x_best = multiply(ts.inverse, psi(ts, pair.sigma_best));

  const Vector from_below = multiply(ts.inverse, psi(ts, SignVector::uniform(n, -1)));
  const Vector from_above = multiply(ts.inverse, psi(ts, SignVector::uniform(n, 1)));
  pair.worst_settle_steps =
      confirm_monotone_approach(ts, from_below, pair.x_worst, +1, max_steps, "worst-case");
  pair.best_settle_steps =
      confirm_monotone_approach(ts, from_above, pair.x_best, -1, max_steps, "best-case");
  return pair;
}

}  // namespace cascade

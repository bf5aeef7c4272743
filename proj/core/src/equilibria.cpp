#include "cascade/equilibria.hpp"

#include <cmath>
#include <string>

#include "cascade/numerics.hpp"

namespace cascade {

namespace {

bool below(double v) { return clamp_zero(v) < 0.0; }

}  // namespace

TranslatedSystem translate(const FinancialNetwork& network) {
  const Matrix& c = network.cross_holdings();
  const std::size_t n = network.organizations();
  TranslatedSystem ts{c, numerics::invert_i_minus_c(c), Vector(n), network.failure_costs()};
  const Vector held = multiply(c, network.thresholds());
  const Vector& income = network.asset_income();
  const Vector& thr = network.thresholds();
  for (std::size_t i = 0; i < n; ++i) ts.drive[i] = held[i] - thr[i] + income[i];
  return ts;
}

OrthantEquilibrium orthant_equilibrium(const TranslatedSystem& ts, const FinancialNetwork& network,
                                       std::uint64_t k) {
  const std::size_t n = network.organizations();
  OrthantEquilibrium eq;
  eq.k = k;
  eq.pattern = orthant_sign_pattern(k, n);

  Vector rhs = network.asset_income();
  const Vector& beta = network.failure_costs();
  for (std::size_t i = 0; i < n; ++i)
    if (eq.pattern.flags[i]) rhs[i] -= beta[i];
  eq.values = multiply(ts.inverse, rhs);
  eq.translated = subtract(eq.values, network.thresholds());

  eq.consistent = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = eq.translated[i];
    if (below(x) != static_cast<bool>(eq.pattern.flags[i])) eq.consistent = false;
    if (std::abs(x) < kBoundaryTolerance) eq.on_boundary = true;
  }
  return eq;
}

std::vector<OrthantEquilibrium> enumerate_equilibria(const TranslatedSystem& ts,
                                                     const FinancialNetwork& network,
                                                     std::size_t max_n) {
  const std::size_t n = network.organizations();
  if (n > max_n || n >= 63) {
    throw Error(ErrorCode::TooLarge, "n = " + std::to_string(n) + " exceeds enumeration limit " +
                                         std::to_string(max_n) +
                                         "; use the sign-space iteration instead");
  }

  // Screen candidates with x(k) = P r - sum over failed j of beta_j P(:, j), then
  // recompute survivors through orthant_equilibrium so results match it exactly.
  const Vector top = multiply(ts.inverse, ts.drive);
  std::vector<double> scaled(n * n);  // column-major beta_j P(:, j)
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) scaled[j * n + i] = ts.failure_costs[j] * ts.inverse(i, j);

  const double slack = 1e-9 * (1.0 + norm_inf(top) + norm_inf(ts.failure_costs) * norm_inf(ts.inverse));
  std::vector<OrthantEquilibrium> found;
  Vector x(n);
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t k = 0; k < count; ++k) {
    x = top;
    for (std::size_t j = 0; j < n; ++j) {
      if (((k >> (n - 1 - j)) & 1U) == 0) continue;
      const double* col = &scaled[j * n];
      for (std::size_t i = 0; i < n; ++i) x[i] -= col[i];
    }
    bool plausible = true;
    for (std::size_t i = 0; i < n && plausible; ++i) {
      const bool failed = ((k >> (n - 1 - i)) & 1U) != 0;
      plausible = failed ? x[i] < slack : x[i] > -slack;
    }
    if (!plausible) continue;
    auto eq = orthant_equilibrium(ts, network, k);
    if (eq.consistent) found.push_back(std::move(eq));
  }
  return found;
}

RegimeReport classify_translated(const TranslatedSystem& ts) {
  const std::size_t n = ts.drive.size();
  RegimeReport rep;
  rep.upper_bound = multiply(ts.inverse, ts.drive);
  rep.lower_bound = multiply(ts.inverse, subtract(ts.drive, ts.failure_costs));

  bool upper_nonneg = true, upper_neg = true, lower_nonneg = true, lower_neg = true;
  for (std::size_t i = 0; i < n; ++i) {
    const bool u_below = below(rep.upper_bound[i]);
    const bool l_below = below(rep.lower_bound[i]);
    upper_nonneg = upper_nonneg && !u_below;
    upper_neg = upper_neg && u_below;
    lower_nonneg = lower_nonneg && !l_below;
    lower_neg = lower_neg && l_below;
    rep.n_f_lower += u_below ? 1 : 0;
    rep.n_f_upper += l_below ? 1 : 0;
  }
  rep.pos_eq_exists = upper_nonneg;
  rep.pos_eq_unique_overall = lower_nonneg && upper_nonneg;
  rep.neg_eq_exists = lower_neg;
  rep.neg_eq_unique_overall = upper_neg && lower_neg;
  return rep;
}

RegimeReport classify_regime(const TranslatedSystem& ts, const FinancialNetwork& network) {
  RegimeReport rep = classify_translated(ts);
  rep.positivity_ok = true;
  const Vector& income = network.asset_income();
  const Vector& beta = network.failure_costs();
  for (std::size_t i = 0; i < income.size(); ++i)
    if (income[i] - beta[i] < 0.0) rep.positivity_ok = false;
  return rep;
}

NoAllFailCertificate no_all_fail_certificate(const FinancialNetwork& network,
                                             std::span<const std::size_t> indices) {
  const Matrix sub = numerics::principal_submatrix(network.cross_holdings(), indices);
  NoAllFailCertificate cert;
  cert.frobenius = numerics::frobenius_eigenvalue(sub).radius;
  const double denom = 1.0 - cert.frobenius;
  const Vector& income = network.asset_income();
  const Vector& beta = network.failure_costs();
  const Vector& thr = network.thresholds();
  cert.bounds.resize(income.size());
  cert.holds = denom > 0.0;
  for (std::size_t i = 0; i < income.size(); ++i) {
    cert.bounds[i] = (income[i] - beta[i]) / denom;
    if (!(thr[i] < cert.bounds[i])) cert.holds = false;
  }
  return cert;
}

StabilityRecord stability_report(const OrthantEquilibrium& eq, const FinancialNetwork& network) {
  if (!eq.consistent) {
    throw Error(ErrorCode::InconsistentEquilibrium,
                "orthant " + std::to_string(eq.k) + " candidate is not a rest point");
  }
  const Matrix& c = network.cross_holdings();
  StabilityRecord rec;
  rec.k = eq.k;
  rec.contraction = norm_1(c);
  rec.spectral_radius = numerics::frobenius_eigenvalue(c).radius;
  rec.fragile = eq.on_boundary;
  rec.stable = !eq.on_boundary && numerics::is_schur_by_column_sums(c);
  return rec;
}

}  // namespace cascade

#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "cascade/equilibria.hpp"
#include "cascade/numerics.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using cascade::FinancialNetwork;
using cascade::Matrix;
using cascade::Vector;

namespace {

std::set<std::uint64_t> interior_orthants(const std::vector<cascade::OrthantEquilibrium>& eqs) {
  std::set<std::uint64_t> out;
  for (const auto& e : eqs)
    if (!e.on_boundary) out.insert(e.k);
  return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

std::uint64_t all_fail(std::size_t n) { return (std::uint64_t{1} << n) - 1; }

}  // namespace

TEST_CASE("translation with zero thresholds drives with asset income") {
  auto data = fixture::example1_data();
  data.thresholds = {0.0, 0.0};
  const auto ts = cascade::translate(FinancialNetwork::validate(data));
  CHECK(ts.drive[0] == doctest::Approx(2.0));
  CHECK(ts.drive[1] == doctest::Approx(2.0));
}

TEST_CASE("translation of an uncoupled network") {
  const auto ts = cascade::translate(fixture::decoupled({3.0, 2.0}, {1.0, 1.0}, {1.0, 5.0}));
  CHECK(ts.drive == Vector{2.0, -3.0});
  CHECK(ts.inverse == Matrix::identity(2));
  CHECK(ts.failure_costs == Vector{1.0, 1.0});
}

TEST_CASE("translation of the seeded twenty-organization network") {
  const auto sc = fixture::scenario("example2");
  const auto& net = sc.network();
  const auto ts = cascade::translate(net);
  const Matrix& c = net.cross_holdings();
  for (std::size_t i = 0; i < 20; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < 20; ++j) row += c(i, j);
    CHECK(ts.drive[i] == doctest::Approx(5.0 - 10.0 + 10.0 * row).epsilon(1e-13));
  }
  // x + thresholds recovers V
  const Vector v = sc.initial_state();
  const Vector x = cascade::subtract(v, net.thresholds());
  const Vector back = cascade::add(x, net.thresholds());
  for (std::size_t i = 0; i < 20; ++i) CHECK(back[i] == doctest::Approx(v[i]));
}

TEST_CASE("healthy candidate of the two-organization example") {
  const auto net = fixture::example1();
  const auto eq = cascade::orthant_equilibrium(cascade::translate(net), net, 0);
  CHECK(eq.values[0] == doctest::Approx(2.0503).epsilon(1e-4));
  CHECK(eq.values[1] == doctest::Approx(2.0103).epsilon(1e-4));
  CHECK(eq.consistent);
  CHECK_FALSE(eq.on_boundary);
  CHECK(eq.translated[0] == doctest::Approx(eq.values[0] - 1.5));
}

TEST_CASE("healthy candidate at the depressed price is inconsistent") {
  const auto net = fixture::example1(14.9);
  const auto eq = cascade::orthant_equilibrium(cascade::translate(net), net, 0);
  CHECK(eq.values[0] == doctest::Approx(1.5275).epsilon(1e-4));
  CHECK(eq.values[1] == doctest::Approx(1.4975).epsilon(1e-4));
  CHECK_FALSE(eq.consistent);
}

TEST_CASE("huge failure costs make the all-failed candidate consistent") {
  auto data = fixture::example1_data();
  data.failure_costs = {1e6, 1e6};
  const auto net = FinancialNetwork::validate(data);
  const auto eq = cascade::orthant_equilibrium(cascade::translate(net), net, 3);
  CHECK(eq.consistent);
  CHECK(eq.values[0] < -1e5);
  CHECK(eq.values[1] < -1e5);
}

TEST_CASE("orthant index out of range") {
  const auto net = fixture::example1();
  CHECK_THROWS_AS(cascade::orthant_equilibrium(cascade::translate(net), net, 4), cascade::Error);
}

TEST_CASE("enumeration of an uncoupled pair") {
  SUBCASE("both organizations bistable: all four patterns") {
    const auto net = fixture::decoupled({3.0, 3.0}, {2.0, 2.0}, {2.0, 2.0});
    const auto eqs = cascade::enumerate_equilibria(cascade::translate(net), net);
    CHECK(interior_orthants(eqs) == std::set<std::uint64_t>{0, 1, 2, 3});
  }
  SUBCASE("second organization cannot fail") {
    const auto net = fixture::decoupled({3.0, 1.5}, {2.0, 1.0}, {2.0, 0.2});
    const auto eqs = cascade::enumerate_equilibria(cascade::translate(net), net);
    CHECK(interior_orthants(eqs) == std::set<std::uint64_t>{0, 2});
    CHECK(interior_orthants(eqs) == oracle::brute_force_equilibria(net));
  }
  SUBCASE("first organization cannot survive") {
    const auto net = fixture::decoupled({1.0, 3.0}, {0.5, 2.0}, {2.0, 2.0});
    const auto eqs = cascade::enumerate_equilibria(cascade::translate(net), net);
    CHECK(interior_orthants(eqs) == std::set<std::uint64_t>{2, 3});
  }
}

TEST_CASE("a network whose worst case is still healthy has one equilibrium, in orthant 0") {
  auto data = fixture::example1_data();
  data.thresholds = {0.5, 0.5};
  const auto net = FinancialNetwork::validate(data);
  const auto ts = cascade::translate(net);
  const auto regime = cascade::classify_regime(ts, net);
  REQUIRE(regime.pos_eq_unique_overall);
  const auto eqs = cascade::enumerate_equilibria(ts, net);
  REQUIRE(eqs.size() == 1);
  CHECK(eqs[0].k == 0);
}

TEST_CASE("seeded twenty-organization network: enumeration agrees with the trajectory") {
  const auto sc = fixture::scenario("example2");
  const auto& net = sc.network();
  const auto ts = cascade::translate(net);
  const auto eqs = cascade::enumerate_equilibria(ts, net);
  REQUIRE(eqs.size() == 1);
  const auto traj = cascade::simulate(net, sc.initial_state(), sc.prices(), sc.options());
  REQUIRE(traj.converged);
  CHECK(cascade::orthant_index(traj.indicators.back()) == eqs[0].k);
  CHECK(cascade::norm_inf(cascade::subtract(traj.states.back().values, eqs[0].values)) < 1e-8);
  CHECK(cascade::stability_report(eqs[0], net).stable);
}

TEST_CASE("enumeration refuses oversized networks") {
  const auto sc = fixture::scenario("example2");
  const auto ts = cascade::translate(sc.network());
  try {
    cascade::enumerate_equilibria(ts, sc.network(), 10);
    FAIL("expected TooLarge");
  } catch (const cascade::Error& e) {
    CHECK(e.code() == cascade::ErrorCode::TooLarge);
  }
}

TEST_CASE("the all-failed regime of the low-income twenty-organization network") {
  const auto sc = fixture::scenario("example3_sim2");
  const auto ts = cascade::translate(sc.network());
  const auto regime = cascade::classify_regime(ts, sc.network());
  CHECK(regime.neg_eq_exists);
  CHECK(regime.neg_eq_unique_overall);
  CHECK_FALSE(regime.pos_eq_exists);
  CHECK(regime.n_f_lower == 20);
  CHECK(regime.n_f_upper == 20);
  const std::vector<std::size_t> idx = all_indices(20);
  CHECK_FALSE(cascade::no_all_fail_certificate(sc.network(), idx).holds);
}

TEST_CASE("zero failure costs collapse the bounds on the failure count") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    auto ts = cascade::translate(oracle::random_network(rng, 2 + rng() % 8));
    std::fill(ts.failure_costs.begin(), ts.failure_costs.end(), 0.0);
    const auto regime = cascade::classify_translated(ts);
    CHECK(regime.n_f_lower == regime.n_f_upper);
  }
}

TEST_CASE("certificate on an uncoupled network compares thresholds with the margin") {
  const auto net = fixture::decoupled({3.0, 3.0}, {1.0, 1.0}, {1.9, 1.0});
  const std::vector<std::size_t> idx{0, 1};
  const auto cert = cascade::no_all_fail_certificate(net, idx);
  CHECK(cert.frobenius == 0.0);
  CHECK(cert.holds);
  CHECK(cert.bounds == Vector{2.0, 2.0});
  const auto tight = fixture::decoupled({3.0, 3.0}, {1.0, 1.0}, {2.0, 1.0});
  CHECK_FALSE(cascade::no_all_fail_certificate(tight, idx).holds);
}

TEST_CASE("stability tags") {
  SUBCASE("boundary candidate is fragile") {
    const auto net = fixture::decoupled({3.0, 2.0}, {1.0, 1.0}, {3.0, 1.0});
    const auto eq = cascade::orthant_equilibrium(cascade::translate(net), net, 0);
    REQUIRE(eq.consistent);
    REQUIRE(eq.on_boundary);
    const auto rec = cascade::stability_report(eq, net);
    CHECK(rec.fragile);
    CHECK_FALSE(rec.stable);
  }
  SUBCASE("inconsistent candidate is rejected") {
    const auto net = fixture::example1(14.9);
    const auto eq = cascade::orthant_equilibrium(cascade::translate(net), net, 0);
    try {
      cascade::stability_report(eq, net);
      FAIL("expected InconsistentEquilibrium");
    } catch (const cascade::Error& e) {
      CHECK(e.code() == cascade::ErrorCode::InconsistentEquilibrium);
    }
  }
}

TEST_CASE("interior equilibria attract nearby states") {
  std::mt19937_64 rng(555);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    const auto net = oracle::random_network(rng, n);
    const auto ts = cascade::translate(net);
    for (const auto& eq : cascade::enumerate_equilibria(ts, net)) {
      if (eq.on_boundary) continue;
      const auto rec = cascade::stability_report(eq, net);
      REQUIRE(rec.stable);
      CHECK(rec.contraction < 1.0);
      double margin = 1e300;
      for (double x : eq.translated) margin = std::min(margin, std::abs(x));
      for (int rep = 0; rep < 10; ++rep) {
        Vector v0 = eq.values;
        // perturbation with 1-norm below the distance to the nearest threshold
        for (auto& v : v0) v += oracle::uniform(rng, -0.9, 0.9) * margin / static_cast<double>(n);
        const auto traj = cascade::simulate(net, v0, cascade::PriceSignal(net.prices()), {.horizon = 400});
        REQUIRE(traj.converged);
        CHECK(cascade::norm_inf(cascade::subtract(traj.states.back().values, eq.values)) < 1e-7);
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("enumeration properties on random networks") {
  std::mt19937_64 rng(8080);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + rng() % 9;
    const auto net = oracle::random_network(rng, n);
    const auto ts = cascade::translate(net);
    const auto eqs = cascade::enumerate_equilibria(ts, net);
    const auto regime = cascade::classify_regime(ts, net);

    CHECK(interior_orthants(eqs) == oracle::brute_force_equilibria(net));

    std::set<std::uint64_t> seen;
    for (const auto& e : eqs) {
      CHECK(seen.insert(e.k).second);
      CHECK(e.consistent);
      const auto phi = cascade::failure_indicator(e.values, net.thresholds());
      CHECK(phi == e.pattern);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(e.translated[i] <= regime.upper_bound[i] + 1e-9);
        CHECK(e.translated[i] >= regime.lower_bound[i] - 1e-9);
      }
      CHECK(phi.failed_count() >= regime.n_f_lower);
      CHECK(phi.failed_count() <= regime.n_f_upper);
    }

    const bool has_pos = seen.count(0) > 0;
    const bool has_neg = seen.count(all_fail(n)) > 0;
    CHECK(regime.pos_eq_exists == has_pos);
    CHECK(regime.neg_eq_exists == has_neg);
    if (regime.pos_eq_unique_overall) CHECK(eqs.size() == 1);
    if (regime.neg_eq_unique_overall) CHECK(eqs.size() == 1);
  }
}

TEST_CASE("certificate soundness on random networks") {
  std::mt19937_64 rng(1234);
  int held = 0;
  for (int trial = 0; trial < 200; ++trial) {
    oracle::NetworkShape shape;
    shape.n = 2 + rng() % 9;
    shape.m = 1 + rng() % shape.n;
    shape.threshold_lo = 0.5;
    shape.threshold_hi = 4.0;
    const auto net = oracle::random_network(rng, shape);
    const auto ts = cascade::translate(net);
    const auto idx = all_indices(shape.n);
    const auto cert = cascade::no_all_fail_certificate(net, idx);
    if (!cert.holds) continue;
    ++held;
    for (const auto& e : cascade::enumerate_equilibria(ts, net)) CHECK(e.k != all_fail(shape.n));
  }
  CHECK(held >= 20);
}

#include <doctest.h>

#include <set>
#include <sstream>
#include <string>

#include "cascade/export.hpp"
#include "cascade/scenario.hpp"
#include "fixtures.hpp"

using cascade::Matrix;
using cascade::Vector;

namespace {

const char* kMinimal = R"(schema_version = 1
name = tiny
C = [[0, 0.1], [0.2, 0]]
D = [[1], [2]]
p = [3]
beta = [0.5, 0.5]
v_threshold = [1, 1]
initial_state = [2, 2]
horizon = 10
)";

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("the seeded twenty-organization scenario carries the stated parameters") {
  const auto sc = fixture::scenario("example2");
  const auto& net = sc.network();
  CHECK(net.organizations() == 20);
  CHECK(net.assets() == 10);
  CHECK(net.asset_holdings() == Matrix(20, 10, 0.05));
  CHECK(net.prices() == Vector(10, 10.0));
  CHECK(net.failure_costs() == Vector(20, 1.0));
  CHECK(net.thresholds() == Vector(20, 10.0));
  for (double v : sc.initial_state()) {
    CHECK(v >= 0.0);
    CHECK(v <= 30.0);
  }
  for (std::size_t i = 0; i < 20; ++i) CHECK(net.cross_holdings()(i, i) == 0.0);
}

TEST_CASE("the country scenario carries the stated parameters") {
  const auto sc = fixture::scenario("countries9");
  const auto& net = sc.network();
  CHECK(net.organizations() == 9);
  CHECK(net.asset_holdings() == Matrix::identity(9));
  CHECK(net.prices() == Vector{12.29, 16.81, 1.02, 9.3, 20, 1, 6, 12.99, 75.7});
  CHECK(net.failure_costs() == Vector(9, 0.5));
  CHECK(net.thresholds() == Vector(9, 10.0));
  CHECK(sc.initial_state() ==
        Vector{15.2838, 19.9137, 0.9863, 9.0642, 28.3350, 0.7829, 8.8020, 12.1361, 59.8130});
  CHECK(sc.node_names() == std::vector<std::string>{"FR", "DE", "GR", "IT", "JP", "PT", "ES", "GB", "US"});
}

TEST_CASE("the two simulations of the third example share C and differ in D") {
  const auto a = fixture::scenario("example3_sim1");
  const auto b = fixture::scenario("example3_sim2");
  CHECK(a.network().cross_holdings() == b.network().cross_holdings());
  CHECK(a.network().asset_holdings() == Matrix(20, 10, 0.06));
  CHECK(b.network().asset_holdings() == Matrix(20, 10, 0.03));
}

TEST_CASE("price overrides of the first example") {
  const auto s = fixture::scenario("example1_short");
  CHECK(s.prices().overrides().size() == 1);
  CHECK(s.prices().overrides()[0].start == 4);
  CHECK(s.prices().overrides()[0].end_exclusive == 5);
  const auto l = fixture::scenario("example1_long");
  CHECK(l.prices().overrides()[0].end_exclusive == 21);
  CHECK(l.prices().at(20) == Vector{14.9, 14.9});
}

TEST_CASE("a short matrix row is reported with its row and line") {
  std::string doc = kMinimal;
  doc.replace(doc.find("[0.2, 0]"), 8, "[0.2]");
  try {
    cascade::parse_scenario(doc);
    FAIL("expected ParseError");
  } catch (const cascade::ParseError& e) {
    CHECK(e.code() == cascade::ErrorCode::ParseError);
    CHECK(e.field() == "C");
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("row 1 has 1 entries, expected 2") != std::string::npos);
  }
}

TEST_CASE("parse errors") {
  auto expect_parse_error = [](const std::string& doc, const std::string& field) {
    try {
      cascade::parse_scenario(doc);
      FAIL("expected ParseError for " << field);
    } catch (const cascade::ParseError& e) {
      CHECK(e.field() == field);
    }
  };
  expect_parse_error(std::string(kMinimal) + "horizon = 5\n", "horizon");
  expect_parse_error(std::string(kMinimal) + "colour = blue\n", "colour");
  expect_parse_error(std::string(kMinimal) + "conv_tol = [1\n", "conv_tol");
  std::string missing = kMinimal;
  missing.erase(missing.find("horizon"));
  expect_parse_error(missing, "horizon");
  std::string bad_version = kMinimal;
  bad_version.replace(0, 18, "schema_version = 2");
  expect_parse_error(bad_version, "schema_version");
}

TEST_CASE("model violations surface as ValidationFailure") {
  std::string doc = kMinimal;
  doc.replace(doc.find("[[0, 0.1], [0.2, 0]]"), 20, "[[0, 0.1], [1.2, 0]]");
  CHECK_THROWS_AS(cascade::parse_scenario(doc), cascade::ValidationFailure);
  std::string wrong_len = kMinimal;
  wrong_len.replace(wrong_len.find("initial_state = [2, 2]"), 22, "initial_state = [2]");
  CHECK_THROWS_AS(cascade::parse_scenario(wrong_len), cascade::ValidationFailure);
}

TEST_CASE("missing files are an I/O failure") {
  try {
    cascade::load_scenario("/nonexistent/none.scenario");
    FAIL("expected IoFailure");
  } catch (const cascade::Error& e) {
    CHECK(e.code() == cascade::ErrorCode::IoFailure);
  }
}

TEST_CASE("parse, serialize, parse is the identity on every bundled scenario") {
  for (const char* name : {"example1_short", "example1_long", "example2", "example3_sim1",
                           "example3_sim2", "countries9"}) {
    CAPTURE(name);
    const auto def = fixture::scenario(name).definition();
    const std::string text = cascade::serialize_scenario(def);
    const auto again = cascade::parse_scenario_definition(text);
    CHECK(again == def);
    CHECK(cascade::serialize_scenario(again) == text);
  }
}

TEST_CASE("serialization keeps generator forms and seeds") {
  const auto def = fixture::scenario("example2").definition();
  CHECK(cascade::uses_random_seeds(def));
  const std::string text = cascade::serialize_scenario(def);
  CHECK(text.find("zero_diagonal(random_uniform(20, 20, 0, 0.01, 20))") != std::string::npos);
  const auto reseeded = cascade::with_seed(def, 99);
  CHECK(reseeded.cross_holdings.seed == 99);
  CHECK(reseeded.initial_state.seed == 99);
  CHECK_FALSE(cascade::uses_random_seeds(fixture::scenario("countries9").definition()));
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 1e-300, 12.29, 6.02214076e23}) {
    CHECK(std::stod(cascade::format_number(v)) == v);
  }
  CHECK(cascade::format_number(0.1) == "0.1");
  CHECK(cascade::format_significant(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("trajectory CSV for a one-step run") {
  const auto net = fixture::example1();
  const Vector v0{2.0, 1.0};
  const auto traj = cascade::simulate(net, v0, cascade::PriceSignal(net.prices()), {.horizon = 1});
  const auto lines = split_lines(cascade::export_trajectory(traj, cascade::TrajectoryFormat::Csv));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "t,V_1,V_2,phi_1,phi_2");
  CHECK(lines[1] == "0,2,1,0,1");
  CHECK(split_csv(lines[2]).size() == 5);
}

TEST_CASE("empty trajectories cannot be exported") {
  try {
    cascade::export_trajectory(cascade::Trajectory{}, cascade::TrajectoryFormat::Csv);
    FAIL("expected IoFailure");
  } catch (const cascade::Error& e) {
    CHECK(e.code() == cascade::ErrorCode::IoFailure);
  }
}

TEST_CASE("exported CSV replays under the step map") {
  const auto sc = fixture::scenario("example2");
  const auto& net = sc.network();
  const auto traj = cascade::simulate(net, sc.initial_state(), sc.prices(), sc.options());
  const auto lines = split_lines(cascade::export_trajectory(traj, cascade::TrajectoryFormat::Csv));
  REQUIRE(lines.size() == traj.states.size() + 1);
  auto row_values = [&](std::size_t r) {
    const auto cells = split_csv(lines[r]);
    Vector v;
    for (std::size_t i = 1; i <= 20; ++i) v.push_back(std::stod(cells[i]));
    return v;
  };
  Vector prev = row_values(1);
  for (std::size_t r = 2; r < lines.size(); ++r) {
    const Vector expect = cascade::step(net, prev, sc.prices().at(r - 2));
    const Vector got = row_values(r);
    CHECK(cascade::norm_inf(cascade::subtract(expect, got)) < 1e-9);
    prev = got;
  }
}

TEST_CASE("trajectory JSON round-trips exactly") {
  const auto sc = fixture::scenario("countries9");
  const auto traj = cascade::simulate(sc.network(), sc.initial_state(), sc.prices(), sc.options());
  const std::string json = cascade::export_trajectory(traj, cascade::TrajectoryFormat::Json);
  CHECK(cascade::parse_trajectory_json(json) == traj);
  CHECK(cascade::export_trajectory(traj, cascade::TrajectoryFormat::Json) == json);
  CHECK_THROWS_AS(cascade::parse_trajectory_json("{\"states\": 3}"), cascade::ParseError);
}

TEST_CASE("topology of the two-organization example") {
  const auto net = fixture::example1();
  const auto snap = cascade::make_topology(net, {0, {2.0, 2.0}}, {"1", "2"});
  CHECK(snap.nodes.size() == 2);
  CHECK(snap.edges.size() == 2);
  const std::string dot = cascade::export_topology(snap, cascade::TopologyFormat::Dot);
  CHECK(dot.rfind("digraph network {", 0) == 0);
  CHECK(count_of(dot, "class=\"healthy\"") == 2);
  CHECK(count_of(dot, " -> ") == 2);
  CHECK(dot.find("\"1\" -> \"2\" [weight=\"0.025\"]") != std::string::npos);
  CHECK(cascade::export_topology(snap, cascade::TopologyFormat::Dot) == dot);
  CHECK_THROWS_AS(cascade::make_topology(net, {0, {2.0}}, {"1", "2"}), cascade::Error);
}

TEST_CASE("topology of the country network at t = 0") {
  const auto sc = fixture::scenario("countries9");
  const auto snap = cascade::make_topology(sc.network(), {0, sc.initial_state()}, sc.node_names());
  CHECK(snap.nodes.size() == 9);
  std::size_t nonzero = 0;
  for (double c : sc.network().cross_holdings().data()) nonzero += c > 0.0 ? 1 : 0;
  CHECK(snap.edges.size() == nonzero);
  CHECK(snap.edges.size() == 50);
  std::set<std::string> failed;
  for (const auto& node : snap.nodes)
    if (node.failed) failed.insert(node.id);
  CHECK(failed.count("GR"));
  CHECK(failed.count("PT"));
  CHECK(failed == std::set<std::string>{"GR", "IT", "PT", "ES"});
  const std::string dot = cascade::export_topology(snap, cascade::TopologyFormat::Dot);
  CHECK(count_of(dot, "class=\"failed\"") == 4);
  CHECK(count_of(dot, " -> ") == 50);
  const std::string json = cascade::export_topology(snap, cascade::TopologyFormat::Json);
  CHECK(count_of(json, "\"weight\"") == 50);
}

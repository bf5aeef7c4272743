#include "cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "cascade/cascade.hpp"

namespace cascade::cli {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationFailure:
    case ErrorCode::LengthMismatch:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::NegativeEntry:
    case ErrorCode::IoFailure:
      return kInputError;
    case ErrorCode::NotSchur:
    case ErrorCode::Singular:
    case ErrorCode::TooLarge:
    case ErrorCode::InconsistentEquilibrium:
      return kInfeasible;
    case ErrorCode::NonMonotoneTrace:
    case ErrorCode::MonotoneViolation:
      return kInternalError;
  }
  return kInternalError;
}

namespace {

// ---------------------------------------------------------------------------
// Shared plumbing

struct Context {
  const GlobalOptions& global;
  std::vector<std::string> warnings;
  std::vector<std::string> artifacts;
};

using Runner = std::function<json(const ScenarioFile&, Context&)>;
using Renderer = std::function<void(const json&, std::ostream&)>;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<fs::path> expand_inputs(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_directory(path, ec)) return {path};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_regular_file() && entry.path().extension() == ".scenario") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::IoFailure, "no .scenario files in " + path.string());
  return files;
}

ScenarioFile load(const fs::path& path, Context& ctx) {
  ScenarioDefinition def = parse_scenario_definition(read_text(path));
  if (ctx.global.seed_override) {
    if (!uses_random_seeds(def)) {
      ctx.warnings.push_back("--seed-override ignored: scenario has no seeded generators");
    } else if (def.seeds_pinned && !ctx.global.force) {
      throw ValidationFailure("seeds_pinned",
                              "scenario pins its seeds; pass --force to override them");
    } else {
      if (def.seeds_pinned) ctx.warnings.push_back("overriding pinned seeds (--force)");
      def = with_seed(std::move(def), *ctx.global.seed_override);
    }
  }
  return ScenarioFile::build(std::move(def));
}

json error_report(const char* command, const fs::path& path, const Error& e) {
  json rep{{"command", command}, {"scenario_path", path.string()},
           {"error", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (const auto* vf = dynamic_cast<const ValidationFailure*>(&e)) {
    rep["violations"] = json::array();
    for (const auto& v : vf->violations()) rep["violations"].push_back({{"field", v.field}, {"message", v.message}});
  }
  if (e.code() == ErrorCode::TooLarge) {
    rep["hint"] = "use `cascade signiter` for networks beyond the enumeration limit";
  }
  return rep;
}

void render_error(const json& rep, std::ostream& out) {
  out << "error in " << rep["scenario_path"].get<std::string>() << ": "
      << rep["message"].get<std::string>() << "\n";
  if (rep.contains("hint")) out << "hint: " << rep["hint"].get<std::string>() << "\n";
}

std::string num(const json& v) { return v.dump(); }

std::string list(const json& arr) {
  std::string out = "[";
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (i) out += ", ";
    out += arr[i].is_string() ? arr[i].get<std::string>() : arr[i].dump();
  }
  return out + "]";
}

std::string yes_no(const json& b) { return b.get<bool>() ? "yes" : "no"; }

CommandOutcome run(const char* command, const fs::path& input, const GlobalOptions& global,
                   const Runner& runner, const Renderer& renderer) {
  CommandOutcome outcome;
  json reports = json::array();
  std::vector<fs::path> files;
  try {
    files = expand_inputs(input);
  } catch (const Error& e) {
    files.clear();
    reports.push_back(error_report(command, input, e));
    outcome.exit_code = exit_code_for(e.code());
  }

  for (const auto& path : files) {
    Context ctx{global, {}, {}};
    json rep;
    try {
      ScenarioFile sc = load(path, ctx);
      rep = runner(sc, ctx);
      rep["command"] = command;
      rep["scenario"] = sc.name();
      rep["scenario_path"] = path.string();
      rep["warnings"] = ctx.warnings;
      rep["artifacts"] = ctx.artifacts;
      outcome.artifacts_written.insert(outcome.artifacts_written.end(), ctx.artifacts.begin(),
                                       ctx.artifacts.end());
    } catch (const Error& e) {
      rep = error_report(command, path, e);
      outcome.exit_code = std::max(outcome.exit_code, exit_code_for(e.code()));
    } catch (const std::exception& e) {
      rep = {{"command", command}, {"scenario_path", path.string()}, {"error", "Internal"},
             {"message", e.what()}};
      outcome.exit_code = std::max<int>(outcome.exit_code, kInternalError);
    }
    reports.push_back(std::move(rep));
  }

  if (global.json) {
    outcome.report = (reports.size() == 1 ? reports[0] : reports).dump(2) + "\n";
    return outcome;
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) out << "\n";
    const json& rep = reports[i];
    if (rep.contains("error")) {
      render_error(rep, out);
      if (rep.contains("violations"))
        for (const auto& v : rep["violations"])
          out << "  " << v["field"].get<std::string>() << ": " << v["message"].get<std::string>() << "\n";
      continue;
    }
    out << rep["command"].get<std::string>() << ": " << rep["scenario"].get<std::string>() << " ("
        << rep["scenario_path"].get<std::string>() << ")\n";
    renderer(rep, out);
    for (const auto& w : rep["warnings"]) out << "warning: " << w.get<std::string>() << "\n";
    if (!rep["artifacts"].empty()) {
      out << "artifacts:\n";
      for (const auto& a : rep["artifacts"]) out << "  " << a.get<std::string>() << "\n";
    }
  }
  outcome.report = out.str();
  return outcome;
}

std::vector<std::string> names_of(const std::vector<std::size_t>& idx,
                                  const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(names[i]);
  return out;
}

std::string sign_string(const SignVector& s) {
  std::string out;
  for (auto v : s.signs) out += v > 0 ? '+' : '-';
  return out;
}

// ---------------------------------------------------------------------------
// simulate

json run_simulate(const ScenarioFile& sc, Context& ctx, const SimulateOptions& opts) {
  const auto& net = sc.network();
  const auto names = sc.node_names();
  const Trajectory traj = simulate(net, sc.initial_state(), sc.prices(), sc.options());
  const auto& final_state = traj.states.back();
  const FailureIndicator& final_phi = traj.indicators.back();

  fs::create_directories(ctx.global.out_dir);
  const fs::path base = ctx.global.out_dir / sc.name();
  auto emit = [&](const fs::path& p, const std::string& bytes) {
    write_file(p, bytes);
    ctx.artifacts.push_back(p.string());
  };
  emit(base.string() + ".trajectory.csv", export_trajectory(traj, TrajectoryFormat::Csv));
  emit(base.string() + ".trajectory.json", export_trajectory(traj, TrajectoryFormat::Json));

  const auto times = opts.snapshot_times.value_or(sc.definition().snapshot_times);
  const char* ext = opts.topology_format == TopologyFormat::Dot ? ".dot" : ".json";
  for (std::size_t t : times) {
    if (t >= traj.states.size()) {
      ctx.warnings.push_back("snapshot t=" + std::to_string(t) + " beyond horizon, skipped");
      continue;
    }
    const auto snap = make_topology(net, traj.states[t], names);
    emit(base.string() + ".topology.t" + std::to_string(t) + ext,
         export_topology(snap, opts.topology_format));
  }

  double min_value = final_state.values.front();
  for (const auto& st : traj.states)
    for (double v : st.values) min_value = std::min(min_value, v);

  return {{"n", net.organizations()},
          {"horizon", sc.options().horizon},
          {"converged", traj.converged},
          {"settle_time", traj.settle_time ? json(*traj.settle_time) : json(nullptr)},
          {"positivity_condition", check_positivity_condition(net)},
          {"min_value", min_value},
          {"final_values", final_state.values},
          {"failed", names_of(final_phi.failed(), names)},
          {"failed_count", final_phi.failed_count()}};
}

void render_simulate(const json& r, std::ostream& out) {
  out << "organizations: " << num(r["n"]) << ", horizon: " << num(r["horizon"]) << "\n";
  out << "converged: " << yes_no(r["converged"]);
  if (!r["settle_time"].is_null()) out << ", settle time: " << num(r["settle_time"]);
  out << "\n";
  out << "positivity condition (D p - beta >= 0): " << yes_no(r["positivity_condition"]) << "\n";
  out << "minimum value over trajectory: " << num(r["min_value"]) << "\n";
  out << "final values: " << list(r["final_values"]) << "\n";
  out << "failed at end (" << num(r["failed_count"]) << "): " << list(r["failed"]) << "\n";
}

// ---------------------------------------------------------------------------
// equilibria

json run_equilibria(const ScenarioFile& sc, Context&, const EquilibriaOptions& opts) {
  const auto& net = sc.network();
  const auto names = sc.node_names();
  const std::size_t n = net.organizations();
  const TranslatedSystem ts = translate(net);
  const RegimeReport reg = classify_regime(ts, net);

  json rep{{"n", n}};
  rep["positivity"] = {{"holds", reg.positivity_ok}, {"margin", positivity_margin(net)}};

  const bool show_regime = opts.regime || !opts.enumerate;
  if (show_regime) {
    rep["regime"] = {{"pos_eq_exists", reg.pos_eq_exists},
                     {"pos_eq_unique_overall", reg.pos_eq_unique_overall},
                     {"neg_eq_exists", reg.neg_eq_exists},
                     {"neg_eq_unique_overall", reg.neg_eq_unique_overall},
                     {"upper_bound", reg.upper_bound},
                     {"lower_bound", reg.lower_bound}};
  }
  rep["n_f_bounds"] = {reg.n_f_lower, reg.n_f_upper};

  const bool want_enum = opts.enumerate || !opts.regime;
  std::string summary;
  if (want_enum && (opts.enumerate || n <= opts.max_n)) {
    const auto eqs = enumerate_equilibria(ts, net, opts.max_n);  // throws TooLarge
    json list = json::array();
    std::size_t stable = 0;
    for (const auto& eq : eqs) {
      const auto rec = stability_report(eq, net);
      stable += rec.stable ? 1 : 0;
      list.push_back({{"orthant", eq.k},
                      {"failed", names_of(eq.pattern.failed(), names)},
                      {"values", eq.values},
                      {"stable", rec.stable},
                      {"fragile", rec.fragile}});
    }
    rep["equilibria"] = list;
    if (eqs.size() == 1) {
      summary = "unique equilibrium, orthant " + std::to_string(eqs[0].k) +
                (list[0]["stable"].get<bool>() ? ", stable" : ", fragile");
    } else {
      summary = std::to_string(eqs.size()) + " equilibria (" + std::to_string(stable) + " stable)";
    }
  } else if (want_enum) {
    rep["enumeration_skipped"] = "n exceeds --max-n; use `signiter` for the worst/best attractors";
    summary = "enumeration skipped";
  } else {
    summary = "regime only";
  }
  summary += "; n_F in [" + std::to_string(reg.n_f_lower) + ", " + std::to_string(reg.n_f_upper) + "]";
  rep["summary"] = summary;

  if (opts.certificate_all || opts.certificate_indices) {
    std::vector<std::size_t> idx;
    if (opts.certificate_all) {
      for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
    } else {
      idx = *opts.certificate_indices;
    }
    const auto cert = no_all_fail_certificate(net, idx);
    rep["certificate"] = {{"indices", idx},
                          {"holds", cert.holds},
                          {"frobenius", cert.frobenius},
                          {"bounds", cert.bounds}};
  }
  return rep;
}

void render_equilibria(const json& r, std::ostream& out) {
  out << "organizations: " << num(r["n"]) << "\n";
  out << "positivity condition (D p - beta >= 0): " << (r["positivity"]["holds"].get<bool>() ? "holds" : "fails")
      << ", margin = " << list(r["positivity"]["margin"]) << "\n";
  if (r.contains("regime")) {
    const auto& g = r["regime"];
    out << "regime:\n";
    out << "  equilibrium with x >= 0 exists:      " << yes_no(g["pos_eq_exists"]) << "\n";
    out << "  ... and it is the only equilibrium:  " << yes_no(g["pos_eq_unique_overall"]) << "\n";
    out << "  equilibrium with x < 0 exists:       " << yes_no(g["neg_eq_exists"]) << "\n";
    out << "  ... and it is the only equilibrium:  " << yes_no(g["neg_eq_unique_overall"]) << "\n";
    out << "  upper bound P r:                     " << list(g["upper_bound"]) << "\n";
    out << "  lower bound P (r - beta):            " << list(g["lower_bound"]) << "\n";
  }
  out << "failed organizations at any equilibrium: n_F in [" << num(r["n_f_bounds"][0]) << ", "
      << num(r["n_f_bounds"][1]) << "]\n";
  if (r.contains("equilibria")) {
    out << "consistent equilibria: " << r["equilibria"].size() << "\n";
    for (const auto& e : r["equilibria"]) {
      out << "  orthant " << num(e["orthant"]) << ": "
          << (e["stable"].get<bool>() ? "stable" : "fragile") << ", failed " << list(e["failed"])
          << "\n    values " << list(e["values"]) << "\n";
    }
  }
  if (r.contains("enumeration_skipped")) out << "enumeration skipped: " << r["enumeration_skipped"].get<std::string>() << "\n";
  if (r.contains("certificate")) {
    const auto& c = r["certificate"];
    out << "no-all-fail certificate on submatrix " << list(c["indices"]) << ": "
        << (c["holds"].get<bool>() ? "holds" : "does not hold") << " (lambda_F = " << num(c["frobenius"])
        << ")\n  bounds " << list(c["bounds"]) << "\n";
  }
  out << "summary: " << r["summary"].get<std::string>() << "\n";
}

// ---------------------------------------------------------------------------
// signiter

json trace_json(const SignIterationTrace& trace, const std::vector<std::string>& names, bool full) {
  json t{{"fixed_point", sign_string(trace.fixed_point)},
         {"iterations", trace.iterations},
         {"safe_set", names_of(trace.fixed_point.safe_set(), names)},
         {"marginal", names_of(trace.marginal, names)}};
  if (full) {
    json steps = json::array();
    for (std::size_t k = 0; k < trace.sequence.size(); ++k) {
      steps.push_back({{"step", k},
                       {"sigma", sign_string(trace.sequence[k])},
                       {"safe", names_of(trace.safe_sets[k], names)}});
    }
    t["trace"] = steps;
  }
  return t;
}

json run_signiter(const ScenarioFile& sc, Context&, const SigniterOptions& opts) {
  const auto& net = sc.network();
  const auto names = sc.node_names();
  const TranslatedSystem ts = translate(net);
  const Vector& thr = net.thresholds();
  json rep{{"n", net.organizations()}};

  auto attractor_json = [&](const Vector& x) {
    return json{{"translated", x}, {"values", add(x, thr)}};
  };

  const bool worst = opts.direction != SignDirection::Best;
  const bool best = opts.direction != SignDirection::Worst;
  if (worst) {
    const auto tr = iterate_worst(ts);
    rep["worst"] = trace_json(tr, names, opts.trace);
  }
  if (best) {
    const auto tr = iterate_best(ts);
    rep["best"] = trace_json(tr, names, opts.trace);
  }
  if (worst && best) {
    const AttractorPair pair = attractors(ts);
    rep["worst"]["attractor"] = attractor_json(pair.x_worst);
    rep["best"]["attractor"] = attractor_json(pair.x_best);
    rep["worst"]["settle_steps"] = pair.worst_settle_steps;
    rep["best"]["settle_steps"] = pair.best_settle_steps;
  } else if (worst) {
    rep["worst"]["attractor"] = attractor_json(multiply(ts.inverse, psi(ts, iterate_worst(ts).fixed_point)));
  } else {
    rep["best"]["attractor"] = attractor_json(multiply(ts.inverse, psi(ts, iterate_best(ts).fixed_point)));
  }

  json labels = json::array();
  for (auto l : fixed_sign_classification(ts)) {
    labels.push_back(l == FixedSign::AlwaysNegative   ? "always_negative"
                     : l == FixedSign::AlwaysPositive ? "always_positive"
                                                      : "undetermined");
  }
  rep["labels"] = labels;
  rep["names"] = names;
  return rep;
}

void render_signiter(const json& r, std::ostream& out) {
  out << "organizations: " << num(r["n"]) << "\n";
  for (const char* dir : {"worst", "best"}) {
    if (!r.contains(dir)) continue;
    const auto& d = r[dir];
    out << dir << "-case sign fixed point: " << d["fixed_point"].get<std::string>() << " after "
        << num(d["iterations"]) << " step(s)\n";
    out << "  safe nodes: " << list(d["safe_set"]) << "\n";
    if (!d["marginal"].empty()) out << "  numerically marginal: " << list(d["marginal"]) << "\n";
    if (d.contains("trace")) {
      for (const auto& s : d["trace"]) {
        out << "  sigma(" << num(s["step"]) << ") = " << s["sigma"].get<std::string>()
            << "  safe " << list(s["safe"]) << "\n";
      }
    }
    out << "  attractor x: " << list(d["attractor"]["translated"]) << "\n";
    out << "  attractor V: " << list(d["attractor"]["values"]) << "\n";
    if (d.contains("settle_steps")) out << "  reached by monotone simulation in " << num(d["settle_steps"]) << " step(s)\n";
  }
  out << "fixed signs:\n";
  for (std::size_t i = 0; i < r["labels"].size(); ++i)
    out << "  " << r["names"][i].get<std::string>() << ": " << r["labels"][i].get<std::string>() << "\n";
}

// ---------------------------------------------------------------------------
// validate

json run_validate(const ScenarioFile& sc, Context&) {
  const auto& net = sc.network();
  return {{"valid", true},
          {"n", net.organizations()},
          {"m", net.assets()},
          {"schur_by_column_sums", numerics::is_schur_by_column_sums(net.cross_holdings())},
          {"positivity_condition", check_positivity_condition(net)}};
}

void render_validate(const json& r, std::ostream& out) {
  out << "valid: " << yes_no(r["valid"]) << " (" << num(r["n"]) << " organizations, " << num(r["m"])
      << " assets)\n";
  out << "column sums of C below one: " << yes_no(r["schur_by_column_sums"]) << "\n";
  out << "positivity condition (D p - beta >= 0): " << yes_no(r["positivity_condition"]) << "\n";
}

}  // namespace

CommandOutcome cmd_simulate(const fs::path& scenario, const GlobalOptions& global,
                            const SimulateOptions& options) {
  return run(
      "simulate", scenario, global,
      [&](const ScenarioFile& sc, Context& ctx) { return run_simulate(sc, ctx, options); },
      render_simulate);
}

CommandOutcome cmd_equilibria(const fs::path& scenario, const GlobalOptions& global,
                              const EquilibriaOptions& options) {
  return run(
      "equilibria", scenario, global,
      [&](const ScenarioFile& sc, Context& ctx) { return run_equilibria(sc, ctx, options); },
      render_equilibria);
}

CommandOutcome cmd_signiter(const fs::path& scenario, const GlobalOptions& global,
                            const SigniterOptions& options) {
  return run(
      "signiter", scenario, global,
      [&](const ScenarioFile& sc, Context& ctx) { return run_signiter(sc, ctx, options); },
      render_signiter);
}

CommandOutcome cmd_validate(const fs::path& scenario, const GlobalOptions& global) {
  return run("validate", scenario, global, run_validate, render_validate);
}

}  // namespace cascade::cli

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nilmag/chaos.hpp"
#include "nilmag/config.hpp"
#include "nilmag/defaults.hpp"
#include "nilmag/error.hpp"
#include "nilmag/euler.hpp"
#include "nilmag/liealg.hpp"
#include "nilmag/magext.hpp"
#include "nilmag/orbits.hpp"
#include "nilmag/output.hpp"
#include "nilmag/scenarios.hpp"
#include "nilmag/symdyn.hpp"

using namespace nilmag;

namespace {

using Clock = std::chrono::steady_clock;

struct StateFlags {
  std::optional<double> k1, k2, c;
  std::vector<double> state;
  bool geodesic = false;
};

void add_state_flags(CLI::App* cmd, StateFlags& f) {
  cmd->add_option("--k1", f.k1, "Casimir K1 (t4-shaped extensions)");
  cmd->add_option("--k2", f.k2, "Casimir K2 (t4-shaped extensions)");
  cmd->add_option("--state", f.state, "Initial covector, comma separated")->delimiter(',');
  cmd->add_option("--c", f.c, "Field strength for base systems");
  cmd->add_flag("--geodesic", f.geodesic, "Drop the magnetic term on a base system");
}

std::string join_labels(const std::vector<std::string>& labels, const std::vector<std::size_t>& idx) {
  std::string out;
  for (auto i : idx) out += (out.empty() ? "" : ",") + labels[i];
  return out;
}

Json summary_header(const std::string& command, const Scenario& sc, std::optional<std::uint64_t> seed) {
  Json doc;
  doc["command"] = command;
  doc["scenario"] = sc.id;
  doc["config_hash"] = config_hash(sc.config);
  if (seed) doc["seed"] = *seed;
  return doc;
}

void finish(Json& summary, Clock::time_point start) {
  summary["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start).count();
  std::cout << dump_json(summary);
}

FieldSpec field_for(const Scenario& sc, const StateFlags& f) {
  if (sc.extension) {
    if (f.c) fail(ErrorCategory::validation, "--c applies to base systems; set p_W through the state instead");
    return FieldSpec::geodesic(*sc.extension);
  }
  if (f.geodesic) return FieldSpec::geodesic(sc.system);
  return FieldSpec::magnetic(sc.system, f.c.value_or(sc.system.field_strength()));
}

struct InitialState {
  DualState lam;
  std::optional<OrbitSpec> orbit;
};

InitialState initial_state(const Scenario& sc, const StateFlags& f, const IntegrateSection& cfg_sec,
                           std::uint64_t seed) {
  const std::size_t n = sc.system.dim();
  const bool t4 = is_t4_shaped(sc.system.algebra());
  const std::optional<double> k1 = f.k1 ? f.k1 : cfg_sec.k1;
  const std::optional<double> k2 = f.k2 ? f.k2 : cfg_sec.k2;
  const std::vector<double> explicit_state = !f.state.empty() ? f.state : cfg_sec.state.value_or(std::vector<double>{});

  if (!explicit_state.empty()) {
    if (k1 || k2) fail(ErrorCategory::validation, "give either a state or (k1, k2), not both");
    if (explicit_state.size() != n) fail(ErrorCategory::validation, "state has the wrong dimension");
    InitialState out{Eigen::Map<const Eigen::VectorXd>(explicit_state.data(), static_cast<Eigen::Index>(n)), {}};
    if (t4) {
      const Casimirs k = casimirs_t4(out.lam);
      out.orbit = make_orbit_spec(k.k1, k.k2);
    }
    return out;
  }
  if (t4) {
    const double a = k1.value_or(defaults::kOrbitK1);
    const double b = k2.value_or(defaults::kOrbitK2);
    return InitialState{orbit_sample(a, b, seed), make_orbit_spec(a, b)};
  }
  if (k1 || k2) fail(ErrorCategory::validation, "(k1, k2) needs a t4-shaped extension scenario");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-kOrbitSampleHalfWidth, kOrbitSampleHalfWidth);
  DualState lam(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = coord(rng);
  return InitialState{lam, {}};
}

std::vector<Observable> observables_for(const Scenario& sc, const FieldSpec& spec) {
  std::vector<Observable> obs;
  const InnerProduct metric = spec.metric();
  obs.push_back({"hamiltonian", [metric](const DualState& lam) { return hamiltonian(metric, lam); }});
  if (sc.extension) {
    const auto w = static_cast<Eigen::Index>(sc.extension->w_index());
    obs.push_back({"p_W", [w](const DualState& lam) { return lam(w); }});
  }
  if (is_t4_shaped(sc.system.algebra())) {
    obs.push_back({"K1", [](const DualState& lam) { return casimirs_t4(lam).k1; }});
    obs.push_back({"K2", [](const DualState& lam) { return casimirs_t4(lam).k2; }});
  }
  return obs;
}

Json state_json(const DualState& lam) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < lam.size(); ++i) arr.push_back(lam(i));
  return arr;
}

std::string out_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

// ---- check -------------------------------------------------------------

int run_check(const std::string& target, bool as_json, Clock::time_point start) {
  const Scenario sc = load_scenario(target);
  const MagneticSystem& m = sc.system;
  const auto& labels = m.algebra().labels();

  struct Row {
    std::string name, value;
    bool ok;
  };
  std::vector<Row> rows;
  Json checks;

  const ValidationReport jac = validate(m.algebra());
  rows.push_back({"jacobi_residual", to_string(jac.max_residual), jac.pass});
  checks["jacobi"] = {{"pass", jac.pass}, {"max_residual", to_string(jac.max_residual)}};

  const CentralSeries series = lower_central_series(m.algebra());
  std::string dims;
  for (auto d : series.dims) dims += (dims.empty() ? "" : ",") + std::to_string(d);
  rows.push_back({"lower_central_series", "[" + dims + "]", series.step.has_value()});
  rows.push_back({"nilpotency_step", series.step ? std::to_string(*series.step) : "none", series.step.has_value()});
  checks["lower_central_series"] = series.dims;
  checks["nilpotency_step"] = series.step ? Json(*series.step) : Json(nullptr);

  const CocycleReport cocycle = is_cocycle(m.algebra(), m.sigma());
  rows.push_back({"sigma_closed", cocycle.closed ? "true" : "false", cocycle.closed});
  checks["sigma_closed"] = {{"pass", cocycle.closed}, {"max_residual", to_string(cocycle.max_residual)}};
  if (cocycle.worst) {
    checks["sigma_closed"]["worst_triple"] = join_labels(labels, {(*cocycle.worst)[0], (*cocycle.worst)[1], (*cocycle.worst)[2]});
  }

  const bool vanishes = vanishes_on_derived(m.algebra(), m.sigma());
  rows.push_back({"vanishes_on_derived", vanishes ? "true" : "false", true});
  checks["vanishes_on_derived"] = vanishes;

  const ExtendedSystem ext = extend(m);
  const CentralSeries ext_series = lower_central_series(ext.algebra());
  // The 2-step dichotomy only speaks about bases of step <= 2.
  const bool applies = series.step && *series.step <= 2;
  const bool dichotomy = !applies || (ext_series.step && (*ext_series.step <= 2) == vanishes);
  rows.push_back({"extension_step", ext_series.step ? std::to_string(*ext_series.step) : "none", dichotomy});
  checks["extension_step"] = ext_series.step ? Json(*ext_series.step) : Json(nullptr);
  checks["step_dichotomy"] = applies ? Json(dichotomy) : Json(nullptr);

  bool all_ok = jac.pass && series.step && cocycle.closed && dichotomy;

  if (sc.extension) {
    const CentralSeries base_series = lower_central_series(sc.extension->base().algebra());
    const bool base_vanishes = vanishes_on_derived(sc.extension->base().algebra(), sc.extension->base().sigma());
    rows.push_back({"base_step", base_series.step ? std::to_string(*base_series.step) : "none", true});
    rows.push_back({"base_vanishes_on_derived", base_vanishes ? "true" : "false", true});
    checks["base_step"] = base_series.step ? Json(*base_series.step) : Json(nullptr);
    checks["base_vanishes_on_derived"] = base_vanishes;
  }

  if (m.lattice()) {
    const ExtendedSystem* closure_ext = nullptr;
    std::optional<LatticeBasis> gens;
    if (sc.extension) {
      closure_ext = &*sc.extension;
      gens = *m.lattice();
      const Integer k = rationality_k(sc.extension->base());
      rows.push_back({"rationality_k", k.get_str(), true});
      checks["rationality_k"] = k.get_str();
    } else {
      const Integer k = rationality_k(m);
      rows.push_back({"rationality_k", k.get_str(), true});
      checks["rationality_k"] = k.get_str();
      gens = extended_lattice(m, k);
      rows.push_back({"w_generator", "W/" + Integer(12 * k * k).get_str(), true});
      checks["w_generator"] = "1/" + Integer(12 * k * k).get_str();
      closure_ext = &ext;
    }
    const auto closure_step = lower_central_series(closure_ext->algebra()).step;
    if (closure_step && *closure_step <= 3) {
      const ClosureResult closure = verify_lattice_closure(*closure_ext, *gens, defaults::kClosureWordLength);
      rows.push_back({"lattice_closure", closure.closed ? "true" : "false", closure.closed});
      checks["lattice_closure"] = {{"pass", closure.closed}, {"words_checked", closure.words_checked},
                                   {"max_word_len", defaults::kClosureWordLength}};
      all_ok = all_ok && closure.closed;
    } else {
      rows.push_back({"lattice_closure", "skipped", true});
      checks["lattice_closure"] = {{"pass", nullptr}, {"skipped", "unsupported-step"}};
    }
  }
  checks["all_pass"] = all_ok;

  if (as_json) {
    Json summary = summary_header("check", sc, std::nullopt);
    summary["checks"] = checks;
    summary["outputs"] = Json::array();
    finish(summary, start);
  } else {
    std::printf("scenario %s  (config %s)\n", sc.id.c_str(), config_hash(sc.config).substr(0, 16).c_str());
    for (const auto& r : rows) {
      std::printf("  %-26s %-14s %s\n", r.name.c_str(), r.value.c_str(), r.ok ? "ok" : "FAIL");
    }
    std::printf("%s\n", all_ok ? "all checks pass" : "some checks failed");
  }
  return all_ok ? 0 : exit_code(ErrorCategory::validation);
}

// ---- integrate / lyapunov ----------------------------------------------

struct RunFlags {
  std::optional<std::uint64_t> seed;
  std::string out_dir = "nilmag-out";
  std::optional<double> step, t_end, renorm, transient;
  std::optional<std::size_t> stride;
  bool spectrum = false;
  bool no_convergence = false;
};

int run_integrate(const std::string& target, const StateFlags& sf, const RunFlags& rf, Clock::time_point start) {
  const Scenario sc = load_scenario(target);
  const std::uint64_t seed = resolve_seed(sc.config, rf.seed);
  const FieldSpec spec = field_for(sc, sf);
  const InitialState init = initial_state(sc, sf, sc.config.integrate, seed);

  IntegratorConfig cfg;
  cfg.step = rf.step.value_or(sc.config.integrate.step.value_or(defaults::kStep));
  cfg.t_end = rf.t_end.value_or(sc.config.integrate.t_end.value_or(defaults::kIntegrateTEnd));
  cfg.sample_stride = rf.stride.value_or(sc.config.integrate.sample_stride.value_or(defaults::kSampleStride));
  const Trajectory traj = integrate(spec, init.lam, cfg, observables_for(sc, spec));

  const std::string csv = out_path(rf.out_dir, "trajectory.csv");
  const std::string drift = out_path(rf.out_dir, "drift.json");
  write_text_file(csv, trajectory_csv(traj));
  write_text_file(drift, dump_json(drift_json(traj)));

  Json summary = summary_header("integrate", sc, seed);
  summary["checks"] = {{"drift", drift_json(traj)}, {"samples", traj.times.size()}};
  summary["outputs"] = {csv, drift};
  if (init.orbit) summary["orbit"] = orbit_json(*init.orbit);
  finish(summary, start);
  return 0;
}

int run_lyapunov(const std::string& target, const StateFlags& sf, const RunFlags& rf, Clock::time_point start) {
  const Scenario sc = load_scenario(target);
  const std::uint64_t seed = resolve_seed(sc.config, rf.seed);
  const FieldSpec spec = field_for(sc, sf);
  const InitialState init = initial_state(sc, sf, sc.config.integrate, seed);
  const auto& ch = sc.config.chaos;

  LyapunovConfig cfg;
  cfg.step = rf.step.value_or(ch.step.value_or(defaults::kStep));
  cfg.renorm_interval = rf.renorm.value_or(ch.renorm_interval.value_or(defaults::kRenormInterval));
  cfg.transient_fraction = rf.transient.value_or(ch.transient_fraction.value_or(defaults::kTransientFraction));
  cfg.seed = seed;
  cfg.check_convergence = rf.no_convergence ? false : ch.check_convergence.value_or(true);
  const double t_end = rf.t_end.value_or(ch.t_end.value_or(defaults::kLyapunovTEnd));
  const bool want_spectrum = rf.spectrum || ch.spectrum.value_or(false);

  const LyapunovReport report =
      want_spectrum ? lyapunov_spectrum(spec, init.lam, t_end, cfg) : mle_benettin(spec, init.lam, t_end, cfg);

  Json doc;
  doc["scenario"] = sc.id;
  doc["config_hash"] = config_hash(sc.config);
  doc["initial_state"] = state_json(init.lam);
  doc["report"] = lyapunov_json(report);
  if (init.orbit) doc["orbit"] = orbit_json(*init.orbit);
  const std::string path = out_path(rf.out_dir, "lyapunov.json");
  write_text_file(path, dump_json(doc));

  Json summary = summary_header("lyapunov", sc, seed);
  summary["checks"] = {{"converged", report.converged},
                       {"mle_positive", report.mle > defaults::kPositiveMle},
                       {"mle_near_zero", std::abs(report.mle) <= defaults::kZeroMle}};
  summary["result"] = doc;
  summary["outputs"] = {path};
  finish(summary, start);
  return 0;
}

// ---- sweep ---------------------------------------------------------------

struct SweepFlags {
  std::optional<std::string> kind;
  std::vector<double> a, b;
  std::vector<std::uint64_t> seeds;
  std::optional<unsigned> threads;
};

int run_sweep(const std::string& target, const SweepFlags& sw, const RunFlags& rf, Clock::time_point start) {
  const Scenario sc = load_scenario(target);
  const auto& sec = sc.config.sweep;
  const bool t4 = is_t4_shaped(sc.system.algebra());
  const std::string kind = sw.kind.value_or(sec.kind.value_or(t4 ? "orbit" : "energy"));
  if (kind != "orbit" && kind != "energy") fail(ErrorCategory::parse, "--kind must be orbit or energy");

  SweepScenario scenario;
  std::vector<double> a_default, b_default;
  if (kind == "orbit") {
    if (!t4) fail(ErrorCategory::validation, "orbit sweeps need a t4-shaped extension scenario");
    scenario = orbit_sweep(FieldSpec::geodesic(sc.system));
    a_default = {defaults::kOrbitK1};
    b_default = {5.0, 50.0, 500.0};
  } else {
    if (sc.extension) fail(ErrorCategory::validation, "energy sweeps run on base systems");
    scenario = energy_sweep(sc.system);
    a_default = {sc.system.field_strength()};
    b_default = {0.5};
  }
  const std::vector<double> as = !sw.a.empty() ? sw.a : sec.a.value_or(a_default);
  const std::vector<double> bs = !sw.b.empty() ? sw.b : sec.b.value_or(b_default);
  const std::vector<std::uint64_t> seeds =
      !sw.seeds.empty() ? sw.seeds : sec.seeds.value_or(std::vector<std::uint64_t>{resolve_seed(sc.config, rf.seed)});

  std::vector<GridPoint> grid;
  for (double a : as)
    for (double b : bs) grid.push_back(GridPoint{a, b});

  LyapunovConfig cfg;
  cfg.step = rf.step.value_or(sc.config.chaos.step.value_or(defaults::kStep));
  cfg.renorm_interval = rf.renorm.value_or(sc.config.chaos.renorm_interval.value_or(defaults::kRenormInterval));
  cfg.transient_fraction =
      rf.transient.value_or(sc.config.chaos.transient_fraction.value_or(defaults::kTransientFraction));
  cfg.check_convergence = !rf.no_convergence;
  const double t_end = rf.t_end.value_or(sec.t_end.value_or(defaults::kSweepTEnd));
  const unsigned threads = sw.threads.value_or(sec.threads.value_or(0));

  const GridKind gk = kind == "orbit" ? GridKind::orbit : GridKind::energy;
  const auto rows = sweep(scenario, grid, t_end, seeds, cfg, threads);
  const std::string csv = out_path(rf.out_dir, "sweep.csv");
  const std::string json = out_path(rf.out_dir, "sweep.json");
  write_text_file(csv, sweep_csv(rows, gk));
  Json doc = sweep_json(rows, gk);
  doc["scenario"] = sc.id;
  doc["config_hash"] = config_hash(sc.config);
  write_text_file(json, dump_json(doc));

  Json summary = summary_header("sweep", sc, std::nullopt);
  summary["checks"] = {{"rows", rows.size()}, {"failures", doc["failures"]}, {"mle_min", doc["mle_min"]},
                       {"mle_max", doc["mle_max"]}};
  summary["outputs"] = {csv, json};
  finish(summary, start);
  return 0;
}

// ---- sft / extend ----------------------------------------------------------

int run_sft(const std::optional<std::string>& matrix, const std::optional<std::string>& config_path,
            std::optional<std::size_t> max_period, const RunFlags& rf, Clock::time_point start) {
  std::optional<ScenarioConfig> cfg;
  if (config_path) cfg = load_config_file(*config_path);
  std::optional<std::string> text = matrix;
  if (!text && cfg) text = cfg->sft.matrix;
  if (!text) fail(ErrorCategory::parse, "sft needs --matrix or a config with [sft] matrix");
  const TransitionMatrix a = TransitionMatrix::parse(*text);
  const std::size_t periods =
      max_period.value_or(cfg && cfg->sft.max_period ? *cfg->sft.max_period : defaults::kMaxPeriod);

  const Json doc = sft_json(a, periods);
  const std::string path = out_path(rf.out_dir, "sft.json");
  write_text_file(path, dump_json(doc));

  Json summary;
  summary["command"] = "sft";
  summary["scenario"] = cfg ? cfg->name : "inline";
  if (cfg) summary["config_hash"] = config_hash(*cfg);
  summary["result"] = doc;
  summary["checks"] = {{"transitive", doc["transitive"]}, {"entropy_defined", doc["entropy_defined"]}};
  summary["outputs"] = {path};
  finish(summary, start);
  return 0;
}

int run_extend(const std::string& target, const std::optional<std::string>& output,
               const std::optional<std::string>& name) {
  const Scenario sc = load_scenario(target);
  const std::string text = serialize(extension_config(sc.system, name.value_or(sc.id + "-ext")));
  if (output) {
    write_text_file(*output, text);
  } else {
    std::cout << text;
  }
  return 0;
}

void report_error(const std::string& category, const std::string& message, std::optional<double> last_time = {}) {
  Json doc;
  doc["error"] = {{"category", category}, {"message", message}};
  if (last_time) doc["error"]["last_valid_time"] = *last_time;
  std::cerr << dump_json(doc);
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = Clock::now();
  CLI::App app{"Magnetic flows on nilpotent Lie groups: exact checks, Euler flows, Lyapunov exponents, subshifts"};
  app.require_subcommand(1);

  std::string target;
  bool as_json = false;
  StateFlags sf;
  RunFlags rf;
  SweepFlags sw;
  std::optional<std::string> matrix, config_path, output, ext_name;
  std::optional<std::size_t> max_period;

  const auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", rf.seed, "Seed (overrides NILMAG_SEED and the config)");
    cmd->add_option("--out-dir", rf.out_dir, "Directory for artifact files");
    cmd->add_option("--step", rf.step, "Integrator step");
    cmd->add_option("--t-end", rf.t_end, "Final time");
  };

  auto* check = app.add_subcommand("check", "Exact algebraic checks for a scenario");
  check->add_option("scenario", target, "Built-in name or config path")->required();
  check->add_flag("--json", as_json, "Print the run summary as JSON");

  auto* ext = app.add_subcommand("extend", "Emit the central extension as a config document");
  ext->add_option("scenario", target, "Built-in name or config path")->required();
  ext->add_option("--output", output, "Write to this file instead of stdout");
  ext->add_option("--name", ext_name, "Scenario name of the extension");

  auto* integ = app.add_subcommand("integrate", "Integrate the Euler flow (trajectory CSV + drift JSON)");
  integ->add_option("scenario", target, "Built-in name or config path")->required();
  add_state_flags(integ, sf);
  add_run_flags(integ);
  integ->add_option("--stride", rf.stride, "Keep every n-th step");

  auto* lyap = app.add_subcommand("lyapunov", "Largest Lyapunov exponent (or full spectrum)");
  lyap->add_option("scenario", target, "Built-in name or config path")->required();
  add_state_flags(lyap, sf);
  add_run_flags(lyap);
  lyap->add_option("--renorm", rf.renorm, "Renormalization interval");
  lyap->add_option("--transient", rf.transient, "Discarded fraction of the run");
  lyap->add_flag("--spectrum", rf.spectrum, "Full spectrum by QR");
  lyap->add_flag("--no-convergence", rf.no_convergence, "Skip the step-halving rerun");

  auto* swp = app.add_subcommand("sweep", "MLE over a (k1,k2) or (c,energy) grid");
  swp->add_option("scenario", target, "Built-in name or config path")->required();
  add_run_flags(swp);
  swp->add_option("--kind", sw.kind, "orbit or energy");
  swp->add_option("--a", sw.a, "k1 (orbit) or c (energy) values")->delimiter(',');
  swp->add_option("--b", sw.b, "k2 (orbit) or energy values")->delimiter(',');
  swp->add_option("--seeds", sw.seeds, "Seeds")->delimiter(',');
  swp->add_option("--threads", sw.threads, "Worker threads (0: hardware)");
  swp->add_option("--renorm", rf.renorm, "Renormalization interval");
  swp->add_flag("--no-convergence", rf.no_convergence, "Skip the step-halving rerun");

  auto* sft = app.add_subcommand("sft", "Entropy, transitivity and periodic counts of a subshift");
  sft->add_option("--matrix", matrix, "Rows of 0/1 digits separated by commas, e.g. 11,10");
  sft->add_option("--config", config_path, "Config file with an [sft] section");
  sft->add_option("--max-period", max_period, "Count periodic points up to this period");
  sft->add_option("--out-dir", rf.out_dir, "Directory for artifact files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("parse", e.what());
    return exit_code(ErrorCategory::parse);
  }

  try {
    if (*check) return run_check(target, as_json, start);
    if (*ext) return run_extend(target, output, ext_name);
    if (*integ) return run_integrate(target, sf, rf, start);
    if (*lyap) return run_lyapunov(target, sf, rf, start);
    if (*swp) return run_sweep(target, sw, rf, start);
    if (*sft) return run_sft(matrix, config_path, max_period, rf, start);
  } catch (const DivergenceError& e) {
    report_error(std::string(category_name(e.category())), e.what(), e.last_valid_time());
    return exit_code(e.category());
  } catch (const Error& e) {
    report_error(std::string(category_name(e.category())), e.what());
    return exit_code(e.category());
  } catch (const std::exception& e) {
    report_error(std::string(category_name(ErrorCategory::validation)), e.what());
    return exit_code(ErrorCategory::validation);
  }
  return 0;
}

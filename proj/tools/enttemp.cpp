// Command-line front end: Pareto sampling, toy-model sweeps, oracle checks
// and field-theory scaling curves.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "enttemp/checks.hpp"
#include "enttemp/errors.hpp"
#include "enttemp/method3.hpp"
#include "enttemp/models.hpp"
#include "enttemp/oneshot.hpp"
#include "enttemp/oracles.hpp"
#include "enttemp/report.hpp"

namespace fs = std::filesystem;
using namespace enttemp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitConvergence = 3;

struct ConvergenceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t thread_cap() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ENTTEMP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw InvalidInput("ENTTEMP_THREADS must be a positive integer");
    n = std::min(n, static_cast<std::size_t>(v));
  }
  return n;
}

struct Output {
  std::string dir = ".";
  std::vector<std::string> formats{"csv", "svg"};

  bool wants(const std::string& f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }

  fs::path prepare() const {
    fs::create_directories(dir);
    return fs::path(dir);
  }
};

void add_output_options(CLI::App* cmd, Output& out) {
  cmd->add_option("--out", out.dir, "Output directory")->capture_default_str();
  cmd->add_option("--format", out.formats, "Artifact formats (repeatable)")
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->delimiter(',')
      ->capture_default_str();
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  fn(os);
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  write_file(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

// ---- pareto

struct ParetoArgs {
  std::string model;
  method3::SamplerConfig cfg;
  std::string epsilon_dist = "uniform";
  std::size_t ground_chi = 32;
  double fit_max_ds = 0.2;
  Output out;
};

void register_pareto(CLI::App& app, ParetoArgs& a) {
  auto* cmd = app.add_subcommand("pareto", "Sample the energy/entanglement trade-off and its Pareto front");
  cmd->add_option("--model", a.model, "haf:<N>, tfi:<N> or fermion:<N>:<a>")->required();
  cmd->add_option("--seed", a.cfg.seed, "Sampler seed")->capture_default_str();
  cmd->add_option("--samples", a.cfg.n_samples, "Number of samples")->capture_default_str();
  cmd->add_option("--rounds", a.cfg.rounds_per_sample, "Moves per sample")->capture_default_str();
  cmd->add_option("--chi-max", a.cfg.chi_max, "Bond dimension cap while sampling")->capture_default_str();
  cmd->add_option("--tau-min", a.cfg.tau_min)->capture_default_str();
  cmd->add_option("--tau-max", a.cfg.tau_max)->capture_default_str();
  cmd->add_option("--epsilon-min", a.cfg.epsilon_min)->capture_default_str();
  cmd->add_option("--epsilon-max", a.cfg.epsilon_max)->capture_default_str();
  cmd->add_option("--epsilon-dist", a.epsilon_dist, "Sharpening exponent distribution")
      ->check(CLI::IsMember({"uniform", "log-uniform"}))
      ->capture_default_str();
  cmd->add_option("--ground-chi", a.ground_chi, "Bond dimension cap of the ground-state search")->capture_default_str();
  cmd->add_option("--fit-max-ds", a.fit_max_ds, "Upper delta_s of the power-law fit")->capture_default_str();
  add_output_options(cmd, a.out);
}

int run_pareto(ParetoArgs& a) {
  const LocalHamiltonian h = parse_model(a.model);
  a.cfg.epsilon_log_uniform = a.epsilon_dist == "log-uniform";
  a.cfg.threads = thread_cap();
  a.cfg.validate();
  if (a.ground_chi == 0) throw InvalidInput("--ground-chi must be >= 1");
  if (!h.nearest_neighbour()) throw InvalidInput("pareto needs a nearest-neighbour model");

  method3::GroundResult ground;
  try {
    ground = method3::find_ground(h, a.ground_chi, method3::default_ground_schedule());
  } catch (const method3::ConvergenceError& e) {
    throw ConvergenceFailure(std::string("stage 'ground search': ") + e.what());
  }
  ground = method3::refine_ground(h, std::move(ground), a.cfg.chi_max);

  const auto points = method3::sample_tradeoff(h, ground.state, ground.energy, a.cfg);
  const auto front = method3::pareto_front(points);
  const auto curve = method3::ent_temperature(front);
  const auto fit = method3::fit_temperature_power_law(curve, a.fit_max_ds, method3::energy_resolution(ground.energy));

  const fs::path dir = a.out.prepare();
  if (a.out.wants("csv")) {
    write_file(dir / "points.csv", [&](std::ostream& os) { report::write_points_csv(os, points); });
    write_file(dir / "front.csv", [&](std::ostream& os) { report::write_points_csv(os, front.points); });
    write_file(dir / "temperature.csv", [&](std::ostream& os) { report::write_temperature_csv(os, curve); });
  }
  if (a.out.wants("json")) {
    write_json(dir / "points.json", report::points_json(points));
    write_json(dir / "front.json", report::points_json(front.points));
    write_json(dir / "temperature.json", report::temperature_json(curve));
  }
  if (a.out.wants("svg")) {
    report::SvgSeries series{"Pareto front", {}, {}, true};
    for (const auto& p : curve.points) {
      series.x.push_back(p.delta_s);
      series.y.push_back(p.t_ent);
    }
    write_file(dir / "temperature.svg", [&](std::ostream& os) {
      report::write_svg(os, {"Entanglement temperature, " + a.model, "delta S (bits)", "T_ent", true, true}, {series});
    });
  }
  const nlohmann::json summary = {{"model", a.model},
                                  {"seed", a.cfg.seed},
                                  {"e0", ground.energy},
                                  {"points", points.size()},
                                  {"front", front.points.size()},
                                  {"fit", {{"max_delta_s", a.fit_max_ds},
                                           {"exponent", fit.exponent},
                                           {"prefactor", fit.prefactor},
                                           {"used", fit.used}}}};
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

// ---- toy

struct ToyArgs {
  std::size_t n = 4;
  std::uint64_t seed = 7;
  std::size_t restarts = 20;
  Output out;
};

void register_toy(CLI::App& app, ToyArgs& a) {
  auto* cmd = app.add_subcommand("toy", "Rank-restricted minimum energy of the toy model over all chi");
  cmd->add_option("--n", a.n, "Number of Bell pairs (1..6)")->capture_default_str();
  cmd->add_option("--seed", a.seed, "Multistart seed")->capture_default_str();
  cmd->add_option("--restarts", a.restarts, "Random restarts per chi")->capture_default_str();
  add_output_options(cmd, a.out);
}

int run_toy(const ToyArgs& a) {
  if (a.n < 1 || a.n > 6) throw InvalidInput("--n must be in 1..6");
  oneshot::RankOptions opts;
  opts.seed = a.seed;
  opts.restarts = a.restarts;
  opts.threads = thread_cap();
  const auto sweep = oneshot::rank_sweep(toy_model(a.n), opts);

  const fs::path dir = a.out.prepare();
  if (a.out.wants("csv")) write_file(dir / "toy.csv", [&](std::ostream& os) { report::write_rank_csv(os, sweep); });
  if (a.out.wants("json")) write_json(dir / "toy.json", report::rank_json(sweep));
  if (a.out.wants("svg")) {
    report::SvgSeries numeric{"min over rank", {}, {}, true};
    report::SvgSeries line{"0.5 dS0", {}, {}, true};
    for (const auto& r : sweep) {
      numeric.x.push_back(r.delta_s0);
      numeric.y.push_back(r.delta_e);
    }
    line.x = {0.0, static_cast<double>(a.n)};
    line.y = {0.0, 0.5 * static_cast<double>(a.n)};
    write_file(dir / "toy.svg", [&](std::ostream& os) {
      report::write_svg(os, {"Toy model one-shot cost", "delta S0 (bits)", "delta E", false, false}, {numeric, line});
    });
  }
  std::cout << "wrote " << sweep.size() << " rank points for " << a.n << " pairs\n";
  return kExitOk;
}

// ---- check

struct CheckArgs {
  std::string suite = "all";
  std::string out;
};

void register_check(CLI::App& app, CheckArgs& a) {
  auto* cmd = app.add_subcommand("check", "Run named oracle checks and print a JSON report");
  cmd->add_option("suite", a.suite, "Suite name or 'all'")->capture_default_str();
  cmd->add_option("--out", a.out, "Also write the report to this file");
}

int run_check(const CheckArgs& a) {
  std::vector<std::string> suites = a.suite == "all" ? checks::suite_names() : std::vector<std::string>{a.suite};
  nlohmann::json report = nlohmann::json::array();
  bool ok = true;
  for (const auto& s : suites) {
    const auto results = checks::run_suite(s);
    ok = ok && checks::all_passed(results);
    report.push_back(checks::to_json(s, results));
  }
  const nlohmann::json doc = {{"pass", ok}, {"suites", report}};
  std::cout << doc.dump(2) << '\n';
  if (!a.out.empty()) write_json(a.out, doc);
  return ok ? kExitOk : 1;
}

// ---- scaling

struct ScalingArgs {
  oracles::QftScalingParams params;
  double ds_min = 0.0;
  double ds_max = 2.0;
  std::size_t points = 41;
  Output out;
};

void register_scaling(CLI::App& app, ScalingArgs& a) {
  auto* cmd = app.add_subcommand("scaling", "Field-theory energy cost curve dE(dS) in d dimensions");
  cmd->add_option("--dimension,-d", a.params.dimension, "Spatial dimension d >= 1")->capture_default_str();
  cmd->add_option("--central-charge,-c", a.params.central_charge, "Central charge (d = 1)")->capture_default_str();
  cmd->add_option("--prefactor", a.params.prefactor)->capture_default_str();
  cmd->add_option("--ds-min", a.ds_min)->capture_default_str();
  cmd->add_option("--ds-max", a.ds_max)->capture_default_str();
  cmd->add_option("--points", a.points)->capture_default_str();
  add_output_options(cmd, a.out);
}

int run_scaling(const ScalingArgs& a) {
  a.params.validate();
  if (a.points < 2 || !(a.ds_max > a.ds_min)) throw InvalidInput("need --points >= 2 and --ds-max > --ds-min");
  std::vector<double> ds(a.points);
  for (std::size_t i = 0; i < a.points; ++i)
    ds[i] = a.ds_min + (a.ds_max - a.ds_min) * static_cast<double>(i) / static_cast<double>(a.points - 1);
  const auto curve = oracles::qft_scaling_curve(a.params, ds);

  const fs::path dir = a.out.prepare();
  if (a.out.wants("csv")) write_file(dir / "scaling.csv", [&](std::ostream& os) { report::write_scaling_csv(os, curve); });
  if (a.out.wants("json")) write_json(dir / "scaling.json", report::scaling_json(curve));
  if (a.out.wants("svg")) {
    report::SvgSeries energy{"delta E", {}, {}, true};
    for (const auto& p : curve) {
      energy.x.push_back(p.delta_s);
      energy.y.push_back(p.delta_e);
    }
    write_file(dir / "scaling.svg", [&](std::ostream& os) {
      report::write_svg(os, {"Energy cost, d = " + std::to_string(a.params.dimension), "delta S (bits)", "delta E",
                             false, a.params.dimension == 1},
                        {energy});
    });
  }
  std::cout << "wrote " << curve.size() << " scaling points\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy cost of entanglement extraction from 1D ground states"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file: [pareto] chi-max = 24, ...; flags override file values");
  app.set_version_flag("--version", "0.1.0");

  ParetoArgs pareto;
  ToyArgs toy;
  CheckArgs check;
  ScalingArgs scaling;
  register_pareto(app, pareto);
  register_toy(app, toy);
  register_check(app, check);
  register_scaling(app, scaling);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    thread_cap();  // rejects a malformed ENTTEMP_THREADS for every command
    if (app.got_subcommand("pareto")) return run_pareto(pareto);
    if (app.got_subcommand("toy")) return run_toy(toy);
    if (app.got_subcommand("check")) return run_check(check);
    if (app.got_subcommand("scaling")) return run_scaling(scaling);
  } catch (const ConvergenceFailure& e) {
    std::cerr << "convergence failure in " << e.what() << '\n';
    return kExitConvergence;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitInvalid;
}

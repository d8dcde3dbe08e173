#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dmt/closed_form.hpp"
#include "dmt/io.hpp"
#include "dmt/montecarlo.hpp"
#include "dmt/optimizers.hpp"
#include "dmt/validation.hpp"

namespace {

using dmt::io::format_number;

// Bad flag values. Exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

// The manifest sits next to the output as <out>.manifest.json. With stdout
// output it goes to --manifest if given.
void write_manifest(const std::string& out, const std::string& manifest_path, dmt::io::RunManifest m) {
  const std::string path = !manifest_path.empty() ? manifest_path : (out.empty() || out == "-" ? "" : out + ".manifest.json");
  if (path.empty()) return;
  m.tool_version = std::string(dmt::io::tool_version());
  m.timestamp = dmt::io::iso8601_now();
  write_text(path, m.to_json());
}

double require_eta(double eta) {
  if (!(eta >= 1.0)) throw UsageError("--eta: proximity gain must satisfy eta >= 1, got " + format_number(eta));
  return eta;
}

struct SolverFlags {
  std::string mode = "exact_lp";
  double f_step = 1e-3;
  double alpha_step = 0.01;

  void add(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "inner solver: exact_lp or grid")->capture_default_str();
    cmd->add_option("--f-step", f_step, "listen-fraction grid step")->capture_default_str();
    cmd->add_option("--alpha-step", alpha_step, "exponent grid step")->capture_default_str();
  }

  dmt::OptimizerConfig config() const {
    dmt::OptimizerConfig cfg;
    if (mode == "exact_lp")
      cfg.mode = dmt::InnerMode::exact_lp;
    else if (mode == "grid")
      cfg.mode = dmt::InnerMode::grid;
    else
      throw UsageError("--mode: expected exact_lp or grid, got '" + mode + "'");
    if (!(f_step > 0.0 && f_step <= 1.0)) throw UsageError("--f-step: must lie in (0, 1], got " + format_number(f_step));
    if (!(alpha_step > 0.0 && alpha_step <= 1.0))
      throw UsageError("--alpha-step: must lie in (0, 1], got " + format_number(alpha_step));
    cfg.f_grid_step = f_step;
    cfg.alpha_grid_step = alpha_step;
    return cfg;
  }

  void describe(std::map<std::string, std::string>& p) const {
    p["mode"] = mode;
    p["f_step"] = format_number(f_step);
    p["alpha_step"] = format_number(alpha_step);
  }
};

struct CurveArgs {
  std::vector<double> etas;
  std::vector<std::string> strategies;
  double r_step = 0.01;
  std::string out;
  std::string manifest;
  SolverFlags solver;
};

int run_curve(const CurveArgs& a) {
  if (a.etas.empty()) throw UsageError("--eta: at least one value is required");
  if (a.strategies.empty()) throw UsageError("--strategy: at least one value is required");
  if (!(a.r_step > 0.0)) throw UsageError("--r-step: must be > 0, got " + format_number(a.r_step));
  std::vector<dmt::Strategy> strategies;
  for (const auto& s : a.strategies) {
    const auto st = dmt::parse_strategy(s);
    if (!st) throw UsageError("--strategy: expected global, local, blind or mimo2x2, got '" + s + "'");
    strategies.push_back(*st);
  }
  for (double eta : a.etas) require_eta(eta);
  const dmt::OptimizerConfig cfg = a.solver.config();

  std::vector<dmt::TradeoffCurve> curves;
  for (auto st : strategies)
    for (double eta : a.etas) curves.push_back(dmt::compute_curve(st, dmt::NetworkParams(eta), a.r_step, cfg));
  write_text(a.out, dmt::io::curves_to_csv(curves));

  dmt::io::RunManifest m;
  m.command = "curve";
  std::vector<std::string> etas;
  for (double e : a.etas) etas.push_back(format_number(e));
  m.parameters["eta"] = join(etas);
  m.parameters["strategy"] = join(a.strategies);
  m.parameters["r_step"] = format_number(a.r_step);
  a.solver.describe(m.parameters);
  write_manifest(a.out, a.manifest, m);
  return 0;
}

struct ScheduleArgs {
  double eta = 1.0;
  double r = 0.0;
  std::string strategy;
  std::optional<double> alpha1, alpha2, alpha_sr;
  SolverFlags solver;
};

int run_schedule(const ScheduleArgs& a) {
  require_eta(a.eta);
  const auto st = dmt::parse_strategy(a.strategy);
  if (!st || *st == dmt::Strategy::mimo2x2)
    throw UsageError("--strategy: expected global, local or blind, got '" + a.strategy + "'");
  if (!(a.r >= 0.0)) throw UsageError("--r: multiplexing gain must be >= 0, got " + format_number(a.r));
  const dmt::NetworkParams params(a.eta);
  const dmt::OptimizerConfig cfg = a.solver.config();
  const bool any_alpha = a.alpha1 || a.alpha2 || a.alpha_sr;
  if (any_alpha && *st != dmt::Strategy::global)
    throw UsageError("--alpha1/--alpha2/--alphasr: only valid with --strategy global");

  nlohmann::ordered_json j;
  j["strategy"] = std::string(dmt::to_string(*st));
  j["eta"] = a.eta;
  j["r"] = a.r;

  if (any_alpha) {
    if (!(a.alpha1 && a.alpha2 && a.alpha_sr))
      throw UsageError("--alpha1/--alpha2/--alphasr: all three are required together");
    const dmt::ChannelExponents alpha{*a.alpha1, *a.alpha2, *a.alpha_sr};
    try {
      dmt::check_support(alpha, params);
    } catch (const dmt::DomainError& e) {
      throw UsageError(std::string("--alpha: ") + e.what());
    }
    if (a.r > dmt::r_star(params) + dmt::kExponentTol)
      throw UsageError("--r: must be <= r* = " + format_number(dmt::r_star(params)) + " for the global schedule");
    j["f_opt"] = dmt::f_global(alpha).f();
    j["d_value"] = dmt::d_global_numeric(a.r, params, cfg).d_value;
    j["equalized_cut"] = dmt::equalized_cut(alpha);
    j["in_outage"] = dmt::equalized_cut(alpha) <= a.r + dmt::kExponentTol;
  } else {
    const double upper = *st == dmt::Strategy::global ? dmt::r_star(params) : 2.0;
    if (a.r > upper + dmt::kExponentTol)
      throw UsageError("--r: must be <= " + format_number(upper) + " for this strategy, got " + format_number(a.r));
    dmt::ScheduleResult res;
    if (*st == dmt::Strategy::global)
      res = dmt::d_global_numeric(a.r, params, cfg);
    else if (*st == dmt::Strategy::blind)
      res = dmt::d_blind_numeric(a.r, params, cfg);
    else
      res = dmt::d_local_numeric(a.r, params, cfg);
    j["f_opt"] = res.f_opt;
    j["d_value"] = res.d_value;
  }
  std::cout << j.dump() << "\n";
  return 0;
}

struct McArgs {
  double eta = 1.0;
  double r = 0.5;
  std::string rule = "fixed:0.3333333333333333";
  std::string snr_db;
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  bool max_approx = false;
  std::string out;
  std::string manifest;
};

int run_montecarlo(const McArgs& a) {
  dmt::McConfig cfg;
  cfg.eta = require_eta(a.eta);
  if (!(a.r >= 0.0 && a.r <= 2.0)) throw UsageError("--r: multiplexing gain must lie in [0, 2], got " + format_number(a.r));
  cfg.r = a.r;
  if (a.samples < 1) throw UsageError("--samples: must be >= 1, got " + std::to_string(a.samples));
  if (a.workers < 1) throw UsageError("--workers: must be >= 1, got " + std::to_string(a.workers));
  if (a.snr_db.empty()) throw UsageError("--snr-db: required (start:stop:step)");
  try {
    cfg.rule = dmt::io::parse_rule(a.rule);
    cfg.snr_db_list = dmt::io::parse_snr_range(a.snr_db);
    cfg.samples_per_point = static_cast<std::uint64_t>(a.samples);
    cfg.seed = a.seed;
    cfg.workers = a.workers;
    cfg.cut_form = a.max_approx ? dmt::CutForm::max_approx : dmt::CutForm::exact;
    cfg.validate();
  } catch (const dmt::DomainError& e) {
    throw UsageError(e.what());
  }

  const auto estimates = dmt::estimate_outage(cfg);
  std::optional<dmt::SlopeFit> slope;
  try {
    slope = dmt::fit_slope(estimates);
  } catch (const dmt::InsufficientData& e) {
    std::cerr << "warning: no slope trailer: " << e.what() << "\n";
  }
  write_text(a.out, dmt::io::outage_to_csv(estimates, slope));

  dmt::io::RunManifest m;
  m.command = "montecarlo";
  m.parameters["eta"] = format_number(a.eta);
  m.parameters["r"] = format_number(a.r);
  m.parameters["rule"] = dmt::describe(cfg.rule);
  m.parameters["snr_db"] = a.snr_db;
  m.parameters["samples"] = std::to_string(a.samples);
  m.parameters["workers"] = std::to_string(a.workers);
  m.parameters["cut_form"] = a.max_approx ? "max_approx" : "exact";
  m.seed = a.seed;
  write_manifest(a.out, a.manifest, m);
  return 0;
}

int run_validate(bool fast, int workers) {
  if (workers < 1) throw UsageError("--workers: must be >= 1, got " + std::to_string(workers));
  bool all = true;
  dmt::validation::run_suite({fast, workers}, [&](const dmt::validation::CheckResult& c) {
    all = all && c.pass;
    std::cout << dmt::validation::format_line(c) << std::endl;
  });
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diversity-multiplexing tradeoff tools for the half-duplex relay channel"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dmt::io::tool_version()));

  CurveArgs curve;
  auto* c = app.add_subcommand("curve", "tradeoff curves as CSV");
  c->add_option("--eta", curve.etas, "proximity gain (repeatable)")->take_all()->allow_extra_args(false);
  c->add_option("--strategy", curve.strategies, "global|local|blind|mimo2x2 (repeatable)")->allow_extra_args(false);
  c->add_option("--r-step", curve.r_step, "multiplexing-gain step")->capture_default_str();
  c->add_option("--out", curve.out, "output path (default stdout)");
  c->add_option("--manifest", curve.manifest, "manifest path (default <out>.manifest.json)");
  curve.solver.add(c);

  ScheduleArgs sched;
  auto* s = app.add_subcommand("schedule", "optimal schedule as one-line JSON");
  s->add_option("--eta", sched.eta, "proximity gain")->required();
  s->add_option("--r", sched.r, "multiplexing gain")->required();
  s->add_option("--strategy", sched.strategy, "global|local|blind")->required();
  s->add_option("--alpha1", sched.alpha1, "realization exponent alpha1 (global)");
  s->add_option("--alpha2", sched.alpha2, "realization exponent alpha2 (global)");
  s->add_option("--alphasr", sched.alpha_sr, "realization exponent alpha_sr (global)");
  sched.solver.add(s);

  McArgs mc;
  auto* m = app.add_subcommand("montecarlo", "finite-SNR outage estimates as CSV");
  m->add_option("--eta", mc.eta, "proximity gain")->capture_default_str();
  m->add_option("--r", mc.r, "multiplexing gain")->capture_default_str();
  m->add_option("--rule", mc.rule, "fixed:<f>|global|local|blind[:<f>]")->capture_default_str();
  m->add_option("--snr-db", mc.snr_db, "SNR range start:stop:step in dB")->required();
  m->add_option("--samples", mc.samples, "samples per SNR point")->capture_default_str();
  m->add_option("--seed", mc.seed, "RNG seed")->capture_default_str();
  m->add_option("--workers", mc.workers, "worker threads")->capture_default_str();
  m->add_flag("--max-approx", mc.max_approx, "use the max approximation of the listen-phase cut");
  m->add_option("--out", mc.out, "output path (default stdout)");
  m->add_option("--manifest", mc.manifest, "manifest path (default <out>.manifest.json)");

  bool fast = false;
  int vworkers = 1;
  auto* v = app.add_subcommand("validate", "run the invariant suite");
  v->add_flag("--fast", fast, "skip the large-sample checks");
  v->add_option("--workers", vworkers, "worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*c) return run_curve(curve);
    if (*s) return run_schedule(sched);
    if (*m) return run_montecarlo(mc);
    if (*v) return run_validate(fast, vworkers);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dmt::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

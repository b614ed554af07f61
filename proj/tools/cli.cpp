#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "epicon/config.hpp"
#include "epicon/epidemic.hpp"
#include "epicon/errors.hpp"
#include "epicon/harness.hpp"
#include "epicon/policy.hpp"

namespace epicon::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to the --out file when set, otherwise to the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

Axis parse_range(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw UsageError("--range expects axis=lo:hi:steps, got '" + text + "'");
  Axis axis;
  try {
    axis.kind = axis_from_string(text.substr(0, eq));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  double lo = 0.0, hi = 0.0;
  int steps = 0;
  char tail = 0;
  if (std::sscanf(text.c_str() + eq + 1, "%lf:%lf:%d%c", &lo, &hi, &steps, &tail) != 3) {
    throw UsageError("--range expects axis=lo:hi:steps, got '" + text + "'");
  }
  axis.lo = lo;
  axis.hi = hi;
  axis.steps = steps;
  return axis;
}

TrialConfig base_config(const std::string& config_path, std::optional<std::uint64_t> seed) {
  TrialConfig cfg;
  if (!config_path.empty()) cfg = load_trial_config(config_path);
  if (seed) cfg.seed = *seed;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coupled SIR epidemic and resilient consensus simulator", "epicon"};
  app.require_subcommand(1);

  std::string out_path;
  std::string config_path;
  std::optional<std::uint64_t> seed;

  // sir
  double beta = 0.4, gamma = 0.1, dt = 0.01, s0 = 0.99, i0 = 0.01;
  std::int64_t horizon = 6000;
  std::string policy_text = "none";
  auto* sir = app.add_subcommand("sir", "Mean-field SIR trajectory as CSV");
  sir->add_option("--beta", beta, "infection rate")->capture_default_str();
  sir->add_option("--gamma", gamma, "recovery rate")->capture_default_str();
  sir->add_option("--dt", dt, "time step")->capture_default_str();
  sir->add_option("--s0", s0, "initial susceptible fraction")->capture_default_str();
  sir->add_option("--i0", i0, "initial infectious fraction")->capture_default_str();
  sir->add_option("--horizon", horizon, "number of steps")->capture_default_str();
  sir->add_option("--policy", policy_text,
                  "none | fixed:B | adaptive:C | time_limited:B:K0:K1 | dynamic_local:W")
      ->capture_default_str();
  sir->add_option("--out", out_path, "output CSV (default stdout)");

  // bstar
  double r0 = 2.0, w_bar = 0.0;
  auto* bstar = app.add_subcommand("bstar", "Smallest static reduction keeping the peak at or below half");
  bstar->add_option("--r0", r0, "basic reproduction number")->required();
  bstar->add_option("--gamma", gamma, "recovery rate")->capture_default_str();
  bstar->add_option("--dt", dt, "time step")->capture_default_str();
  bstar->add_option("--w-bar", w_bar, "heterogeneity bound")->capture_default_str();

  // trial
  std::string status_path;
  auto* trial = app.add_subcommand("trial", "One coupled run: time-response CSV and verdict");
  trial->add_option("--config", config_path, "config file");
  trial->add_option("--seed", seed, "random seed");
  trial->add_option("--out", out_path, "time-response CSV (default stdout)");
  trial->add_option("--status-out", status_path, "per-step status counts CSV");

  // sweep
  std::vector<std::string> ranges;
  std::optional<int> trials;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool quiet = false;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo success rates over a 2-D grid");
  sweep->add_option("--config", config_path, "base config file");
  sweep->add_option("--seed", seed, "base seed");
  sweep->add_option("--out", out_path, "heatmap CSV (default stdout)");
  sweep->add_option("--trials", trials, "trials per cell (default 20)");
  sweep->add_option("--range", ranges, "axis=lo:hi:steps, axis in r0|radius|f|b0; give two")
      ->required()
      ->expected(2);
  sweep->add_option("--threads", threads, "worker threads")->capture_default_str();
  sweep->add_flag("--quiet", quiet, "no progress output");

  // compare
  std::string r0_range = "1:19:19";
  ComparisonSetup setup;
  auto* compare = app.add_subcommand("compare", "Peak and decay time for the reduction policies");
  compare->add_option("--r0-range", r0_range, "lo:hi:steps")->capture_default_str();
  compare->add_option("--s0", setup.s0, "initial susceptible fraction")->capture_default_str();
  compare->add_option("--i0", setup.i0, "initial infectious fraction")->capture_default_str();
  compare->add_option("--threshold", setup.threshold, "decay threshold for I")->capture_default_str();
  compare->add_option("--out", out_path, "output CSV (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*sir) {
      const SirParams params(beta, gamma, dt);
      const ReductionPolicy policy = parse_reduction(policy_text);
      SirState init{s0, i0, std::max(0.0, 1.0 - s0 - i0), 0};
      init.validate();
      Sink sink(out_path, out);
      write_sir_csv(sink.get(), simulate_sir(params, policy, init, horizon));
      return kExitOk;
    }
    if (*bstar) {
      const SirParams params = SirParams::from_r0(r0, gamma, dt);
      char line[128];
      try {
        const double b = solve_b_star(params, w_bar);
        std::snprintf(line, sizeof line, "b*=%.6f\n", b);
        out << line;
        std::snprintf(line, sizeof line, "I_max=%.6f\n", peak_bound_static(b, params).value);
        out << line;
      } catch (const Infeasible& e) {
        out << "b*=infeasible (" << e.condition() << ")\n";
      }
      std::snprintf(line, sizeof line, "W_s=%.6f\nW_d=%.6f\n", static_heterogeneity_bound(r0),
                    dynamic_heterogeneity_bound(r0));
      out << line;
      return kExitOk;
    }
    if (*trial) {
      const TrialConfig cfg = base_config(config_path, seed);
      TrialOptions options;
      options.keep_time_response = true;
      options.keep_status_rows = !status_path.empty();
      options.stop_on_breach = false;
      const TrialResult r = run_trial(cfg, options);
      {
        Sink sink(out_path, out);
        write_time_response_csv(sink.get(), r.time_response);
      }
      if (!status_path.empty()) {
        Sink sink(status_path, out);
        write_status_header(sink.get(), cfg.m);
        for (const auto& row : r.status_rows) write_status_row(sink.get(), row);
      }
      std::ostream& report = out_path.empty() ? err : out;
      report << "verdict=" << to_string(r.verdict) << '\n'
             << "peak_I=" << r.peak_i << '\n'
             << "final_spread=" << r.final_spread << '\n'
             << "max_negative_excess=" << r.max_negative_excess << '\n'
             << "b0=" << r.b0 << '\n'
             << "f_max=" << r.f_max << '\n'
             << "d_min=" << r.d_min << '\n'
             << "empirical_w_bar=" << r.empirical_w_bar << '\n'
             << "steps=" << r.steps << '\n';
      if (!r.failure_reason.empty()) report << "failure=" << r.failure_reason << '\n';
      if (r.static_bound_warning) report << "warning=initial I above the static bound regime\n";
      return kExitOk;
    }
    if (*sweep) {
      const TrialConfig cfg = base_config(config_path, seed);
      SweepGrid grid;
      grid.axes = {parse_range(ranges[0]), parse_range(ranges[1])};
      if (trials) grid.trials = *trials;
      try {
        grid.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      SweepProgress progress;
      if (!quiet) {
        progress = [&err](std::size_t done, std::size_t total) {
          if (done == total || done % 10 == 0) err << "\r" << done << "/" << total << std::flush;
          if (done == total) err << '\n';
        };
      }
      const auto cells = run_sweep(grid, cfg, threads, progress);
      {
        Sink sink(out_path, out);
        write_sweep_csv(sink.get(), cells);
      }
      if (!out_path.empty()) {
        std::ofstream meta(out_path + ".meta", std::ios::binary);
        meta << "axis1 = " << to_string(grid.axes[0].kind) << '\n'
             << "axis2 = " << to_string(grid.axes[1].kind) << '\n'
             << "trials = " << grid.trials << '\n';
        write_trial_config(meta, cfg);
      }
      return kExitOk;
    }
    if (*compare) {
      double lo = 0.0, hi = 0.0;
      int steps = 0;
      char tail = 0;
      if (std::sscanf(r0_range.c_str(), "%lf:%lf:%d%c", &lo, &hi, &steps, &tail) != 3 || steps < 1 ||
          lo > hi) {
        throw UsageError("--r0-range expects lo:hi:steps");
      }
      const Axis axis{AxisKind::R0, lo, hi, steps};
      Sink sink(out_path, out);
      write_comparison_csv(sink.get(), run_policy_comparison(axis.values(), setup));
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace epicon::cli

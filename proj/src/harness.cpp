#include "epicon/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "epicon/numeric.hpp"

namespace epicon {

namespace {

constexpr double kQuietLevel = 1e-4;
constexpr double kQuietFraction = 0.1;

// Sub-stream ids for the per-trial seed.
enum Stream : std::uint64_t { kGraph = 1, kPartition, kStatuses, kStates };

// Integer targets for the next step, kept monotone against the ledger:
// |S| never grows, |R| never shrinks (the double ceiling can otherwise
// hand back a recovered slot one step later).
Cardinalities reconcile(Cardinalities target, const Cardinalities& now, std::size_t n) {
  target.susceptible = std::min(target.susceptible, now.susceptible);
  target.recovered = std::max(target.recovered, now.recovered);
  if (target.susceptible + target.recovered > n) {
    target.recovered = n - target.susceptible;
  }
  target.infectious = n - target.susceptible - target.recovered;
  return target;
}

struct Ratios {
  double global = 0.0;
  std::vector<double> local;
  double w = 0.0;
};

Ratios observe_ratios(const StatusLedger& ledger, const SubgroupNeighborhoods& hoods) {
  Ratios r;
  const auto infected = ledger.mask(Status::Infectious);
  const auto count = static_cast<double>(std::count(infected.begin(), infected.end(), true));
  r.global = ledger.size() == 0 ? 0.0 : count / static_cast<double>(ledger.size());
  r.local.resize(hoods.count());
  for (std::size_t s = 0; s < hoods.count(); ++s) {
    r.local[s] = hoods.ratio(s, infected);
    r.w = std::max(r.w, std::abs(r.local[s] - r.global));
  }
  return r;
}

bool quiet_enough(std::int64_t k, std::int64_t quiet_since) {
  return quiet_since >= 0 &&
         static_cast<double>(quiet_since) <= (1.0 - kQuietFraction) * static_cast<double>(k);
}

}  // namespace

SirState TrialConfig::initial_state() const {
  SirState s;
  s.s = s0;
  s.i = i0;
  s.r = 1.0 - s0 - i0;
  if (s.r < 1e-15) s.r = 0.0;  // rounding residue of s0 + i0 = 1
  return s;
}

void TrialConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (n < 1) fail("n must be >= 1");
  if (!(side > 0.0)) fail("side must be > 0");
  if (!(radius > 0.0)) fail("radius must be > 0");
  if (m < 1 || m > n) fail("m must be in [1, n]");
  (void)params();
  if (!(s0 >= 0.0 && i0 >= 0.0 && s0 + i0 <= 1.0 + 1e-12)) fail("s0, i0 must be fractions with s0 + i0 <= 1");
  initial_state().validate();
  if (const auto* g = std::get_if<infection::Gathered>(&infection.kind)) {
    if (g->target >= m) fail("gathered target subgroup out of range");
  }
  if (!(policy.w_bar >= 0.0 && policy.w_bar <= 1.0)) fail("w_bar must be in [0,1]");
  if (policy.b0 && !(*policy.b0 >= 0.0 && *policy.b0 <= 1.0)) fail("b0 must be in [0,1]");
  if (const auto* a = std::get_if<pruning::AbsoluteCount>(&policy.rule)) {
    if (a->count && *a->count < 0) fail("pruning count must be >= 0");
    if (!a->count && is_static(policy.kind)) fail("static policy with absolute pruning needs a count");
  }
  if (!std::isfinite(adversary_value)) fail("adversary value must be finite");
  if (!(safety.lo <= safety.hi)) fail("safety interval is empty");
  if (horizon < 1) fail("horizon must be >= 1");
  if (max_horizon_factor < 1) fail("max_horizon_factor must be >= 1");
  if (!(eps > 0.0)) fail("eps must be > 0");
  if (stride < 1) fail("stride must be >= 1");
}

void write_time_response_csv(std::ostream& out, const std::vector<TimeResponseRow>& rows) {
  out << "k,S,I,R,neg_ratio,x_min_regular,x_max_regular,spread\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%lld,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                  static_cast<long long>(r.k), r.s, r.i, r.r, r.negative_ratio,
                  r.x_min_regular, r.x_max_regular, r.spread);
    out << line;
  }
}

Graph trial_graph(const TrialConfig& cfg) {
  return generate_rgg(cfg.n, cfg.side, cfg.radius, derive_seed(cfg.seed, kGraph));
}

Partition trial_partition(const TrialConfig& cfg, const Graph& g) {
  return partition_nodes(g, cfg.m, cfg.partition, derive_seed(cfg.seed, kPartition));
}

TrialResult run_trial(const TrialConfig& cfg, const TrialOptions& options) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();

  const SirParams params = cfg.params();
  const Graph g = trial_graph(cfg);
  const Partition partition = trial_partition(cfg, g);
  const SubgroupNeighborhoods hoods(g, partition);
  const PolicyMaker maker(cfg.policy, params, g, partition);
  const AdversaryBehavior adversary{adversary::Constant{cfg.adversary_value}};
  const std::size_t n = cfg.n;
  const std::optional<DynamicDesign> design =
      params.r0() > 0.0 ? std::optional(DynamicDesign{params.r0(), cfg.policy.w_bar})
                        : std::nullopt;

  std::mt19937_64 status_rng(derive_seed(cfg.seed, kStatuses));
  std::mt19937_64 state_rng(derive_seed(cfg.seed, kStates));

  TrialResult result;
  result.d_min = min_degree(g);
  result.isolated_nodes = g.isolated_count();
  result.b0 = is_static(cfg.policy.kind) ? maker.static_b0() : 1.0;

  SirState sir = cfg.initial_state();
  result.static_bound_warning = static_bound_warning(sir);
  StatusLedger ledger =
      initial_ledger(integer_cardinalities(sir, n), cfg.infection, partition, status_rng);

  AgentStates x;
  x.x.resize(n);
  std::uniform_real_distribution<double> initial_value(cfg.safety.lo, cfg.safety.hi);
  for (NodeId i = 0; i < n; ++i) {
    const double v = initial_value(state_rng);  // drawn for every agent to keep streams aligned
    x.x[i] = ledger.status(i) == Status::Infectious ? adversary.value(i, 0) : v;
  }

  ResilienceMonitor monitor(cfg.safety, cfg.eps);
  auto record = [&](const Ratios& ratios) {
    monitor.observe(x, ledger);
    result.peak_i = std::max(result.peak_i, sir.i);
    if (options.keep_time_response) {
      TimeResponseRow row;
      row.k = x.k;
      row.s = sir.s;
      row.i = sir.i;
      row.r = sir.r;
      row.negative_ratio = monitor.current_negative_ratio();
      row.x_min_regular = monitor.current_min();
      row.x_max_regular = monitor.current_max();
      row.spread = monitor.current_spread();
      row.n_infectious = ledger.count(Status::Infectious);
      row.n_cured = ledger.count(Status::Cured);
      result.time_response.push_back(row);
    }
    if (options.keep_status_rows) {
      StatusRow row;
      row.k = x.k;
      row.n_s = ledger.count(Status::Susceptible);
      row.n_i = ledger.count(Status::Infectious);
      row.n_c = ledger.count(Status::Cured);
      row.n_r = ledger.count(Status::Recovered);
      row.local_ratios = ratios.local;
      row.w_max = result.empirical_w_bar;
      result.status_rows.push_back(row);
    }
    if (options.keep_states) {
      result.states.push_back(x);
      result.ledgers.push_back(ledger);
    }
  };

  Ratios ratios = observe_ratios(ledger, hoods);
  result.empirical_w_bar = ratios.w;
  result.peak_infectious_ratio = ratios.global;
  record(ratios);

  const std::int64_t cap = cfg.horizon * cfg.max_horizon_factor;
  std::int64_t quiet_since = sir.i < kQuietLevel ? 0 : -1;
  std::int64_t next_ff_check = 0;
  bool first_feasibility = true;
  PolicyDecision decision;
  std::int64_t k = 0;
  bool x_fixed = false;
  std::vector<Status> last_statuses;
  PruningAssignment last_f;

  for (;;) {
    if (k >= cfg.horizon && quiet_enough(k, quiet_since)) break;
    if (k >= cap) {
      result.horizon_capped = true;
      break;
    }

    if (k % cfg.stride == 0) {
      decision = maker.decide(sir.i, ratios.local, ratios.global);
      const double worst_ratio =
          std::max(ratios.global, *std::max_element(ratios.local.begin(), ratios.local.end()));
      const auto fr = feasibility_report(n, result.d_min, decision.f_max, worst_ratio, design);
      auto& fs = result.feasibility;
      fs.lemma1 = fs.lemma1 && fr.lemma1.pass;
      fs.lemma2 = fs.lemma2 && fr.lemma2.pass;
      fs.lemma1_slack = first_feasibility ? fr.lemma1.slack : std::min(fs.lemma1_slack, fr.lemma1.slack);
      fs.lemma2_slack = first_feasibility ? fr.lemma2.slack : std::min(fs.lemma2_slack, fr.lemma2.slack);
      if (fr.eq24) {
        fs.eq24 = fs.eq24 && fr.eq24->pass;
        fs.eq24_slack = fr.eq24->slack;
      }
      first_feasibility = false;
      result.f_max = std::max(result.f_max, decision.f_max);
    }
    result.window_violations += decision.window_violations;

    sir = sir_step(sir, params, decision.effective_b);
    const auto target = reconcile(integer_cardinalities(sir, n), ledger.cardinalities(), n);
    ledger = advance_statuses(ledger, target, cfg.infection, partition, status_rng);

    try {
      // A round is a pure function of (x, statuses, F) for a constant
      // adversary, so a round that left x unchanged repeats exactly while
      // those inputs stay the same.
      if (x_fixed && ledger.statuses() == last_statuses && decision.f == last_f) {
        ++x.k;
        ++result.skipped_rounds;
      } else {
        AgentStates next = step_network(x, g, ledger, decision.f, adversary);
        x_fixed = next.x == x.x;
        x = std::move(next);
        last_statuses = ledger.statuses();
        last_f = decision.f;
      }
    } catch (const EmptyKeptSet& e) {
      result.failure_reason = e.what();
      break;
    }
    ++k;

    ratios = observe_ratios(ledger, hoods);
    result.empirical_w_bar = std::max(result.empirical_w_bar, ratios.w);
    result.peak_infectious_ratio = std::max(result.peak_infectious_ratio, ratios.global);
    record(ratios);

    if (sir.i < kQuietLevel) {
      if (quiet_since < 0) quiet_since = k;
    } else {
      quiet_since = -1;
    }

    if (options.stop_on_breach && monitor.safety_violated()) break;

    if (options.fast_forward && k >= next_ff_check && !monitor.safety_violated() &&
        monitor.current_spread() < cfg.eps && ledger.count(Status::Infectious) == 0 &&
        ledger.count(Status::Cured) == 0) {
      // With no corrupted agent left and no status change ahead, every
      // remaining round averages regular values only: the spread cannot
      // grow and no value can leave the current hull.
      const std::vector<double> zeros(partition.count(), 0.0);
      const Cardinalities frozen = ledger.cardinalities();
      SirState probe = sir;
      PolicyDecision probe_decision = decision;
      std::int64_t pk = k;
      std::int64_t pquiet = quiet_since;
      bool frozen_until_end = true;
      while (!(pk >= cfg.horizon && quiet_enough(pk, pquiet)) && pk < cap) {
        if (pk % cfg.stride == 0) probe_decision = maker.decide(probe.i, zeros, 0.0);
        if (probe_decision.f != decision.f) {
          frozen_until_end = false;
          break;
        }
        probe = sir_step(probe, params, probe_decision.effective_b);
        ++pk;
        if (reconcile(integer_cardinalities(probe, n), frozen, n) != frozen) {
          frozen_until_end = false;
          break;
        }
        if (probe.i < kQuietLevel) {
          if (pquiet < 0) pquiet = pk;
        } else {
          pquiet = -1;
        }
      }
      if (frozen_until_end) {
        result.fast_forwarded = true;
        result.horizon_capped = pk >= cap && !(pk >= cfg.horizon && quiet_enough(pk, pquiet));
        k = pk;
        break;
      }
      next_ff_check = pk;
    }
  }

  const ResilienceReport report = monitor.finish();
  result.verdict = result.failure_reason.empty() ? report.verdict : Verdict::NoConsensus;
  if (!result.failure_reason.empty() && report.first_breach) {
    result.verdict = Verdict::SafetyViolation;
  }
  if (result.failure_reason.empty() && result.isolated_nodes > 0) {
    // An isolated regular agent never hears anyone; count it as a failure.
    for (NodeId i : regular_set(ledger)) {
      if (g.degree(i) == 0) {
        if (result.verdict == Verdict::Success) result.verdict = Verdict::NoConsensus;
        result.failure_reason = "isolated regular agent " + std::to_string(i);
        break;
      }
    }
  }
  result.final_spread = report.final_spread;
  result.max_negative_excess = report.max_negative_excess;
  result.max_negative_ratio =
      *std::max_element(report.negative_ratio.begin(), report.negative_ratio.end());
  result.final_negative_ratio = report.negative_ratio.back();
  result.steps = k;
  result.horizon_extended = k > cfg.horizon;
  result.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return result;
}

const char* to_string(AxisKind kind) {
  switch (kind) {
    case AxisKind::R0: return "r0";
    case AxisKind::Radius: return "radius";
    case AxisKind::Pruning: return "f";
    case AxisKind::B0: return "b0";
  }
  return "unknown";
}

AxisKind axis_from_string(const std::string& name) {
  if (name == "r0") return AxisKind::R0;
  if (name == "radius" || name == "r") return AxisKind::Radius;
  if (name == "f" || name == "F") return AxisKind::Pruning;
  if (name == "b0") return AxisKind::B0;
  throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

std::vector<double> Axis::values() const {
  std::vector<double> out;
  if (steps == 1) return {lo};
  for (int s = 0; s < steps; ++s) {
    out.push_back(lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(steps - 1));
  }
  return out;
}

void SweepGrid::validate() const {
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  for (const auto& a : axes) {
    if (a.steps < 1) throw std::invalid_argument("sweep: axis needs at least one step");
    if (!(a.lo <= a.hi)) throw std::invalid_argument("sweep: axis range lo > hi");
  }
  if (axes[0].kind == axes[1].kind) throw std::invalid_argument("sweep: axes must differ");
}

void apply_axis(TrialConfig& cfg, AxisKind kind, double value) {
  switch (kind) {
    case AxisKind::R0: cfg.beta = value * cfg.gamma; break;
    case AxisKind::Radius: cfg.radius = value; break;
    case AxisKind::Pruning:
      cfg.policy.rule = pruning::AbsoluteCount{static_cast<int>(std::lround(value))};
      break;
    case AxisKind::B0: cfg.policy.b0 = value; break;
  }
}

std::uint64_t sweep_trial_seed(std::uint64_t base, std::size_t cell, std::size_t trial) {
  return derive_seed(base, cell + 1, trial + 1);
}

std::vector<SweepCell> run_sweep(const SweepGrid& grid, const TrialConfig& base,
                                 unsigned threads, const SweepProgress& progress) {
  grid.validate();
  const auto v1 = grid.axes[0].values();
  const auto v2 = grid.axes[1].values();
  const std::size_t cells = v1.size() * v2.size();
  const std::size_t total = cells * static_cast<std::size_t>(grid.trials);

  std::vector<TrialConfig> configs(cells, base);
  for (std::size_t c = 0; c < cells; ++c) {
    apply_axis(configs[c], grid.axes[0].kind, v1[c / v2.size()]);
    apply_axis(configs[c], grid.axes[1].kind, v2[c % v2.size()]);
    configs[c].validate();
  }

  struct Outcome {
    bool success = false;
    double peak = 0.0;
    FeasibilitySummary feasibility;
    std::string failure;
  };
  std::vector<Outcome> outcomes(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  TrialOptions options;
  options.fast_forward = true;
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t cell = job / static_cast<std::size_t>(grid.trials);
      const std::size_t trial = job % static_cast<std::size_t>(grid.trials);
      TrialConfig cfg = configs[cell];
      cfg.seed = sweep_trial_seed(base.seed, cell, trial);
      Outcome& out = outcomes[job];
      try {
        const TrialResult r = run_trial(cfg, options);
        out.success = r.success();
        out.peak = r.peak_i;
        out.feasibility = r.feasibility;
        out.failure = r.failure_reason;
      } catch (const std::exception& e) {
        out.success = false;
        out.failure = e.what();
        out.feasibility = {false, false, false, 0, 0, 0};
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, total);
      }
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<SweepCell> result(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    SweepCell& cell = result[c];
    cell.axis1 = v1[c / v2.size()];
    cell.axis2 = v2[c % v2.size()];
    cell.trials = grid.trials;
    double peak_sum = 0.0;
    for (int t = 0; t < grid.trials; ++t) {
      const Outcome& o = outcomes[c * static_cast<std::size_t>(grid.trials) + static_cast<std::size_t>(t)];
      cell.successes += o.success ? 1 : 0;
      peak_sum += o.peak;
      cell.lemma1 = cell.lemma1 && o.feasibility.lemma1;
      cell.lemma2 = cell.lemma2 && o.feasibility.lemma2;
      cell.eq24 = cell.eq24 && o.feasibility.eq24;
      if (!o.failure.empty()) cell.failures.push_back(o.failure);
    }
    cell.mean_peak_i = peak_sum / grid.trials;
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
  out << "axis1,axis2,success_rate,trials,mean_peak_I,lemma1,lemma2,eq24\n";
  auto pf = [](bool b) { return b ? "pass" : "fail"; };
  char line[256];
  for (const auto& c : cells) {
    std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g,%d,%.10g,%s,%s,%s\n", c.axis1,
                  c.axis2, c.success_rate(), c.trials, c.mean_peak_i, pf(c.lemma1),
                  pf(c.lemma2), pf(c.eq24));
    out << line;
  }
}

std::vector<ComparisonRow> run_policy_comparison(const std::vector<double>& r0_values,
                                                 const ComparisonSetup& setup) {
  std::vector<ComparisonRow> rows;
  for (double r0 : r0_values) {
    if (!(r0 > 0.0)) throw std::invalid_argument("comparison: R0 must be > 0");
    const SirParams params = SirParams::from_r0(r0, setup.gamma, setup.dt);
    const double b_star = r0 > 1.0 ? solve_b_star(params, 0.0) : 1.0;
    const std::vector<std::pair<std::string, ReductionPolicy>> policies = {
        {"static_bstar", reduction::Fixed{b_star}},
        {"dynamic", reduction::AdaptiveGlobal{2.0}},
        {"fixed_0.5", reduction::Fixed{0.5}},
        {"relaxed", reduction::AdaptiveGlobal{1.0}},
    };
    for (const auto& [name, policy] : policies) {
      SirState state;
      state.s = setup.s0;
      state.i = setup.i0;
      state.r = std::max(0.0, 1.0 - setup.s0 - setup.i0);
      ComparisonRow row{r0, name, state.i, -1};
      // A single-peaked SIR curve has its maximum before it first drops
      // below a threshold that I(0) does not undercut.
      for (std::int64_t k = 1; k <= setup.max_steps; ++k) {
        state = sir_step(state, params, reduction_at(policy, state));
        row.i_max = std::max(row.i_max, state.i);
        if (state.i < setup.threshold) {
          row.k_below = k;
          break;
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "r0,policy,i_max,k_below\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.10g,%s,%.10g,%lld\n", r.r0, r.policy.c_str(),
                  r.i_max, static_cast<long long>(r.k_below));
    out << line;
  }
}

}  // namespace epicon

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "epicon/consensus.hpp"
#include "epicon/epidemic.hpp"
#include "epicon/network.hpp"
#include "epicon/policy.hpp"
#include "epicon/population.hpp"

namespace epicon {

/// Everything one Monte-Carlo trial needs. Defaults are the desk-scale
/// time-response setup (n = 100 on a 100 x 100 square).
struct TrialConfig {
  std::size_t n = 100;
  double side = 100.0;
  double radius = 100.0;
  std::size_t m = 2;
  PartitionMode partition = PartitionMode::IndexSplit;

  double beta = 0.5;
  double gamma = 0.1;
  double dt = 0.01;
  double s0 = 0.99;
  double i0 = 0.01;  // R(0) = 1 - s0 - i0

  InfectionMode infection{infection::Homogeneous{}};
  PolicyConfig policy;
  double adversary_value = -1.0;
  Interval safety{0.0, 1.0};

  /// Minimum number of steps; extended until I(k) < 1e-4 over the last
  /// 10% of the run.
  std::int64_t horizon = 6000;
  /// Hard stop for the extension, as a multiple of `horizon`.
  std::int64_t max_horizon_factor = 50;
  double eps = 1e-3;
  /// Policy refresh period in steps.
  std::int64_t stride = 1;
  std::uint64_t seed = 1;

  SirParams params() const { return SirParams(beta, gamma, dt); }
  SirState initial_state() const;
  /// Throws std::invalid_argument describing the first bad field.
  void validate() const;
};

struct TimeResponseRow {
  std::int64_t k = 0;
  double s = 0.0, i = 0.0, r = 0.0;
  double negative_ratio = 0.0;
  double x_min_regular = 0.0;
  double x_max_regular = 0.0;
  double spread = 0.0;
  std::size_t n_infectious = 0;
  std::size_t n_cured = 0;
};

/// `k,S,I,R,neg_ratio,x_min_regular,x_max_regular,spread`
void write_time_response_csv(std::ostream& out, const std::vector<TimeResponseRow>& rows);

struct TrialOptions {
  bool keep_time_response = false;
  bool keep_status_rows = false;
  /// Full state and ledger per step, for auditing the verdict.
  bool keep_states = false;
  /// Stop at the first safety breach (the verdict cannot change after it).
  bool stop_on_breach = true;
  /// Stop once the epidemic layer can no longer change any status and the
  /// regular agents already agree within eps (the verdict is then fixed).
  bool fast_forward = false;
};

struct FeasibilitySummary {
  bool lemma1 = true;
  bool lemma2 = true;
  bool eq24 = true;
  double lemma1_slack = 0.0;  // worst over the run
  double lemma2_slack = 0.0;
  double eq24_slack = 0.0;
};

struct TrialResult {
  Verdict verdict = Verdict::Success;
  std::string failure_reason;  // set when the run aborted (e.g. empty kept set)
  double peak_i = 0.0;         // SIR layer
  double peak_infectious_ratio = 0.0;  // ledger
  double empirical_w_bar = 0.0;
  double final_spread = 0.0;
  double max_negative_ratio = 0.0;
  double final_negative_ratio = 0.0;
  double max_negative_excess = 0.0;
  FeasibilitySummary feasibility;
  std::size_t d_min = 0;
  std::size_t isolated_nodes = 0;
  double b0 = 1.0;  // static reduction in use (1 for dynamic kinds)
  int f_max = 0;
  std::size_t window_violations = 0;  // agent-steps
  std::int64_t steps = 0;
  bool horizon_extended = false;
  bool horizon_capped = false;
  bool fast_forwarded = false;
  std::int64_t skipped_rounds = 0;  // rounds proven identical to the previous one
  bool static_bound_warning = false;
  double wall_ms = 0.0;

  std::vector<TimeResponseRow> time_response;
  std::vector<StatusRow> status_rows;
  std::vector<AgentStates> states;
  std::vector<StatusLedger> ledgers;

  bool success() const { return verdict == Verdict::Success; }
};

/// Builds the graph and partition a trial with `cfg` uses.
Graph trial_graph(const TrialConfig& cfg);
Partition trial_partition(const TrialConfig& cfg, const Graph& g);

/// One coupled run. Per step: observe I and I_s on the ledger, let the
/// policy maker choose (b_s, F), advance the SIR fractions with the
/// size-weighted b, convert to integer set sizes, move agent statuses, then
/// run one consensus round. Deterministic for a fixed seed.
TrialResult run_trial(const TrialConfig& cfg, const TrialOptions& options = {});

enum class AxisKind { R0, Radius, Pruning, B0 };

const char* to_string(AxisKind kind);
AxisKind axis_from_string(const std::string& name);

struct Axis {
  AxisKind kind = AxisKind::R0;
  double lo = 1.0;
  double hi = 3.0;
  int steps = 5;

  std::vector<double> values() const;
};

struct SweepGrid {
  std::array<Axis, 2> axes;
  int trials = 20;

  void validate() const;
};

/// Sets one axis value on a config (R0 moves beta at fixed gamma; Pruning
/// installs a fixed AbsoluteCount).
void apply_axis(TrialConfig& cfg, AxisKind kind, double value);

struct SweepCell {
  double axis1 = 0.0;
  double axis2 = 0.0;
  int trials = 0;
  int successes = 0;
  double mean_peak_i = 0.0;
  bool lemma1 = true;
  bool lemma2 = true;
  bool eq24 = true;
  std::vector<std::string> failures;  // aborted-trial reasons

  double success_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / trials;
  }
};

/// Seed of trial `trial` in cell `cell`.
std::uint64_t sweep_trial_seed(std::uint64_t base, std::size_t cell, std::size_t trial);

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Cells in row-major order (axis 1 outer). Trials are independent and
/// run on up to `threads` workers; aggregation is order independent.
std::vector<SweepCell> run_sweep(const SweepGrid& grid, const TrialConfig& base,
                                 unsigned threads = 1,
                                 const SweepProgress& progress = {});

/// `axis1,axis2,success_rate,trials,mean_peak_I,lemma1,lemma2,eq24`
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

struct ComparisonRow {
  double r0 = 0.0;
  std::string policy;
  double i_max = 0.0;
  std::int64_t k_below = 0;  // first step with I(k) < threshold; -1 if never
};

struct ComparisonSetup {
  double gamma = 0.1;
  double dt = 0.01;
  double s0 = 0.9;
  double i0 = 0.1;
  double threshold = 0.1;
  std::int64_t max_steps = 2'000'000;
};

/// Pure-SIR peak and first step below `threshold` for the policies
/// static_bstar (Fixed(b*), b = 1 when R0 <= 1), dynamic (1 - 2I),
/// fixed_0.5 and relaxed (1 - I).
std::vector<ComparisonRow> run_policy_comparison(const std::vector<double>& r0_values,
                                                 const ComparisonSetup& setup = {});

/// `r0,policy,i_max,k_below`
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace epicon

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "epicon/network.hpp"
#include "epicon/population.hpp"

namespace epicon {

/// Opinion values x_i(k) for all agents at step k.
struct AgentStates {
  std::vector<double> x;
  std::int64_t k = 0;
};

/// Pruning numbers F_i(k), one per agent.
using PruningAssignment = std::vector<int>;

namespace adversary {
struct Constant {
  double value = -1.0;
};
/// u_i(k) as an arbitrary function of agent and step.
struct Custom {
  std::function<double(NodeId, std::int64_t)> value;
};
}  // namespace adversary

/// Value every infectious agent broadcasts (one value to all neighbors).
struct AdversaryBehavior {
  std::variant<adversary::Constant, adversary::Custom> kind = adversary::Constant{};

  double value(NodeId agent, std::int64_t k) const;
};

/// Raised when pruning leaves an agent with nothing to average.
class EmptyKeptSet : public std::runtime_error {
 public:
  EmptyKeptSet(NodeId agent, const std::string& what)
      : std::runtime_error(what), agent_(agent) {}
  NodeId agent() const { return agent_; }

 private:
  NodeId agent_;
};

/// One MSR update: drop the f largest and f smallest of {own} ∪ neighbors
/// and average the rest with equal weights. A cured agent leaves its own
/// value out of both the sort and the average. Kept values are summed in
/// ascending order, so the result does not depend on neighbor order.
/// Throws EmptyKeptSet (agent id 0) if nothing survives.
double msr_update(double own, std::span<const double> neighbor_values, int f,
                  bool cured);

/// Ids of the values an MSR update keeps. Ties are ordered by neighbor id
/// ascending with the agent's own value last among equals. `self` stands
/// for the own value.
std::vector<NodeId> msr_kept(NodeId self, double own,
                             std::span<const NodeId> neighbor_ids,
                             std::span<const double> neighbor_values, int f,
                             bool cured);

/// Synchronous round: every read uses step-k values.
///   Infectious: x_i(k+1) = u_i(k)
///   Susceptible/Recovered: msr_update(cured = false)
///   Cured: msr_update(cured = true)
/// Throws EmptyKeptSet carrying the failing agent id.
AgentStates step_network(const AgentStates& states, const Graph& g,
                         const StatusLedger& ledger,
                         const PruningAssignment& pruning,
                         const AdversaryBehavior& adversary);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

enum class Verdict { Success, SafetyViolation, NoConsensus };

const char* to_string(Verdict v);

struct SafetyBreach {
  std::int64_t k = 0;
  NodeId agent = 0;
  double value = 0.0;
};

struct ResilienceReport {
  Verdict verdict = Verdict::Success;
  std::optional<SafetyBreach> first_breach;
  double final_spread = 0.0;
  double final_min = 0.0;  // over regular agents at the last step
  double final_max = 0.0;
  /// Fraction of all agents with x < 0, per observed step.
  std::vector<double> negative_ratio;
  /// max_k (#negative - #infectious) / n; positive means corrupted values
  /// have leaked into agents that are not currently infectious.
  double max_negative_excess = 0.0;
};

/// Incremental form of the resilient-consensus check, so long trials need
/// not keep every state vector. Feed steps in order.
class ResilienceMonitor {
 public:
  ResilienceMonitor(Interval safety, double eps);

  void observe(const AgentStates& states, const StatusLedger& ledger);

  bool safety_violated() const { return report_.first_breach.has_value(); }
  double current_spread() const { return spread_; }
  double current_min() const { return min_; }
  double current_max() const { return max_; }
  double current_negative_ratio() const {
    return report_.negative_ratio.empty() ? 0.0 : report_.negative_ratio.back();
  }
  std::size_t steps() const { return report_.negative_ratio.size(); }

  ResilienceReport finish() const;

 private:
  Interval safety_;
  double eps_;
  double spread_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
  ResilienceReport report_;
};

/// Safety: every Susceptible/Recovered agent stays in `safety` at every step
/// (Cured agents are exempt during their cured round). Consensus: spread of
/// regular states at the final step below `eps`.
ResilienceReport check_resilient(const std::vector<AgentStates>& trace,
                                 const std::vector<StatusLedger>& ledgers,
                                 Interval safety, double eps);

}  // namespace epicon

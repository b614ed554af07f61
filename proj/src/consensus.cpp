#include "epicon/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace epicon {

namespace {

// Trimmed mean of `values` (reordered in place). Returns nullopt if 2f
// values or more would be removed.
std::optional<double> trimmed_mean(std::span<double> values, int f) {
  const auto size = values.size();
  const auto cut = static_cast<std::size_t>(f);
  if (f < 0 || size <= 2 * cut) return std::nullopt;
  auto first = values.begin() + static_cast<std::ptrdiff_t>(cut);
  auto last = values.end() - static_cast<std::ptrdiff_t>(cut);
  if (cut > 0) {
    std::nth_element(values.begin(), first, values.end());
    std::nth_element(first, last, values.end());
  }
  std::sort(first, last);
  double sum = 0.0;
  for (auto it = first; it != last; ++it) sum += *it;
  return sum / static_cast<double>(last - first);
}

}  // namespace

double AdversaryBehavior::value(NodeId agent, std::int64_t k) const {
  if (const auto* c = std::get_if<adversary::Constant>(&kind)) return c->value;
  return std::get<adversary::Custom>(kind).value(agent, k);
}

double msr_update(double own, std::span<const double> neighbor_values, int f,
                  bool cured) {
  std::vector<double> values(neighbor_values.begin(), neighbor_values.end());
  if (!cured) values.push_back(own);
  const auto mean = trimmed_mean(values, f);
  if (!mean) throw EmptyKeptSet(0, "msr_update: pruning removes every value");
  return *mean;
}

std::vector<NodeId> msr_kept(NodeId self, double own,
                             std::span<const NodeId> neighbor_ids,
                             std::span<const double> neighbor_values, int f,
                             bool cured) {
  struct Entry {
    double value;
    NodeId id;
    bool is_own;
  };
  std::vector<Entry> entries;
  for (std::size_t j = 0; j < neighbor_ids.size(); ++j) {
    entries.push_back({neighbor_values[j], neighbor_ids[j], false});
  }
  if (!cured) entries.push_back({own, self, true});
  // Descending by value; equal values by id ascending, own value last.
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.is_own != b.is_own) return !a.is_own;
    return a.id < b.id;
  });
  const auto cut = static_cast<std::size_t>(std::max(f, 0));
  if (entries.size() <= 2 * cut) {
    throw EmptyKeptSet(self, "msr_kept: pruning removes every value");
  }
  std::vector<NodeId> kept;
  for (std::size_t k = cut; k < entries.size() - cut; ++k) kept.push_back(entries[k].id);
  return kept;
}

AgentStates step_network(const AgentStates& states, const Graph& g,
                         const StatusLedger& ledger,
                         const PruningAssignment& pruning,
                         const AdversaryBehavior& adversary) {
  const std::size_t n = g.size();
  if (states.x.size() != n || ledger.size() != n || pruning.size() != n) {
    throw std::invalid_argument("step_network: size mismatch");
  }
  AgentStates next;
  next.k = states.k + 1;
  next.x.resize(n);
  std::vector<double> buffer;
  for (NodeId i = 0; i < n; ++i) {
    const Status status = ledger.status(i);
    if (status == Status::Infectious) {
      next.x[i] = adversary.value(i, states.k);
      continue;
    }
    const auto& nbrs = g.in_neighbors(i);
    buffer.clear();
    for (NodeId j : nbrs) buffer.push_back(states.x[j]);
    if (status != Status::Cured) buffer.push_back(states.x[i]);
    const auto mean = trimmed_mean(buffer, pruning[i]);
    if (!mean) {
      throw EmptyKeptSet(i, "agent " + std::to_string(i) + " (degree " +
                                std::to_string(nbrs.size()) + ", F=" +
                                std::to_string(pruning[i]) +
                                "): pruning removes every value");
    }
    next.x[i] = *mean;
  }
  return next;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Success: return "success";
    case Verdict::SafetyViolation: return "safety_violation";
    case Verdict::NoConsensus: return "no_consensus";
  }
  return "unknown";
}

ResilienceMonitor::ResilienceMonitor(Interval safety, double eps)
    : safety_(safety), eps_(eps) {}

void ResilienceMonitor::observe(const AgentStates& states,
                                const StatusLedger& ledger) {
  const std::size_t n = states.x.size();
  std::size_t negative = 0;
  std::size_t infectious = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (NodeId i = 0; i < n; ++i) {
    const double v = states.x[i];
    if (v < 0.0) ++negative;
    const Status s = ledger.status(i);
    if (s == Status::Infectious) ++infectious;
    if (s != Status::Susceptible && s != Status::Recovered) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    if (!report_.first_breach && !safety_.contains(v)) {
      report_.first_breach = SafetyBreach{states.k, i, v};
    }
  }
  const double nd = n == 0 ? 1.0 : static_cast<double>(n);
  report_.negative_ratio.push_back(static_cast<double>(negative) / nd);
  report_.max_negative_excess =
      std::max(report_.max_negative_excess,
               (static_cast<double>(negative) - static_cast<double>(infectious)) / nd);
  if (lo > hi) {
    lo = hi = 0.0;  // no regular agents this step
  }
  min_ = lo;
  max_ = hi;
  spread_ = hi - lo;
}

ResilienceReport ResilienceMonitor::finish() const {
  ResilienceReport out = report_;
  out.final_spread = spread_;
  out.final_min = min_;
  out.final_max = max_;
  if (out.first_breach) {
    out.verdict = Verdict::SafetyViolation;
  } else if (!(spread_ < eps_)) {
    out.verdict = Verdict::NoConsensus;
  } else {
    out.verdict = Verdict::Success;
  }
  return out;
}

ResilienceReport check_resilient(const std::vector<AgentStates>& trace,
                                 const std::vector<StatusLedger>& ledgers,
                                 Interval safety, double eps) {
  if (trace.empty() || trace.size() != ledgers.size()) {
    throw std::invalid_argument("check_resilient: need matching nonempty traces");
  }
  ResilienceMonitor monitor(safety, eps);
  for (std::size_t k = 0; k < trace.size(); ++k) monitor.observe(trace[k], ledgers[k]);
  return monitor.finish();
}

}  // namespace epicon

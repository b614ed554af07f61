#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "epicon/consensus.hpp"
#include "epicon/epidemic.hpp"
#include "epicon/network.hpp"

namespace epicon {

/// Heterogeneity ceiling for the static policy: (1 - 1/R0) / 2.
double static_heterogeneity_bound(double r0);
/// Heterogeneity ceiling for the dynamic policy: 1/(2 R0) - 1/4.
double dynamic_heterogeneity_bound(double r0);

enum class PolicyKind { StaticGlobal, DynamicGlobal, StaticLocal, DynamicLocal };

namespace pruning {
/// F_i = ceil((1 - b_s) n / 2); window upper end d_min/2 - n/4.
struct HalfN {};
/// F_i = ceil((1 - b_s) d_i / 2); window upper end d_i / 2.
struct HalfDegree {};
/// A fixed F for every agent, or ceil(I n) when no count is given.
struct AbsoluteCount {
  std::optional<int> count;
};
}  // namespace pruning

using PruningRule =
    std::variant<pruning::HalfN, pruning::HalfDegree, pruning::AbsoluteCount>;

struct PolicyConfig {
  PolicyKind kind = PolicyKind::DynamicLocal;
  /// Static reduction; unset means b* (with w_bar for StaticLocal, 0 for
  /// StaticGlobal), or 1 when R0 <= 1.
  std::optional<double> b0;
  double w_bar = 0.0;
  PruningRule rule = pruning::HalfN{};
};

bool is_static(PolicyKind kind);
const char* to_string(PolicyKind kind);
std::string to_string(const PruningRule& rule);

/// Static reduction actually used for `config` under `params`.
double resolve_b0(const PolicyConfig& config, const SirParams& params);

struct StaticSetup {
  double b0 = 1.0;
  int f0 = 0;
};

/// Complete graph: b0 = b*, F0 = ceil((1 - b0)(n - 1)/2) < (n - 1)/2.
/// Throws Infeasible for R0 <= 1.
StaticSetup static_setup_complete(const SirParams& params, std::size_t n);

/// Noncomplete graph design procedure. Checks, in order:
///   "R0-range"       R0 in (1, 2)
///   "heterogeneity"  w_bar < W_s
///   "degree"         d_min > (3/2 - b*) n
///   "f_w"            f_w(3/2 - d_min/n) < 0
///   "pruning-window" ceil((1 - b0) n/2) < d_min/2 - n/4
/// and throws Infeasible naming the first that fails. b0 is the midpoint
/// of (3/2 - d_min/n, b*).
StaticSetup static_setup_noncomplete(const SirParams& params, std::size_t n,
                                     std::size_t d_min, double w_bar);

/// Reductions per subgroup and pruning per agent for one step.
struct PolicyDecision {
  std::vector<double> b;        // per subgroup
  PruningAssignment f;          // per agent
  double effective_b = 1.0;     // subgroup-size weighted mean of b
  int f_max = 0;
  std::size_t window_violations = 0;  // agents whose F breaks the rule's upper end
};

/// Pruning numbers for given subgroup reductions. `global_ratio` feeds the
/// AbsoluteCount rule when it has no fixed count.
PolicyDecision assign_pruning(std::vector<double> subgroup_b, double global_ratio,
                              const Graph& g, const Partition& p,
                              const PruningRule& rule);

/// b_s = max(0, 1 - 2 I_s - 2 w_bar), then pruning per `rule`.
PolicyDecision dynamic_assign(std::span<const double> subgroup_ratios,
                              double global_ratio, double w_bar, const Graph& g,
                              const Partition& p, const PruningRule& rule);

/// Applies a PolicyConfig every step. Global kinds read the global ratio,
/// local kinds each subgroup's ratio.
class PolicyMaker {
 public:
  PolicyMaker(PolicyConfig config, const SirParams& params, const Graph& g,
              const Partition& p);

  /// `global_ratio` steers the global reductions; `count_ratio` (the
  /// share of agents actually infectious) feeds AbsoluteCount without a
  /// fixed count.
  PolicyDecision decide(double global_ratio, std::span<const double> subgroup_ratios,
                        double count_ratio) const;
  PolicyDecision decide(double global_ratio,
                        std::span<const double> subgroup_ratios) const {
    return decide(global_ratio, subgroup_ratios, global_ratio);
  }

  const PolicyConfig& config() const { return config_; }
  double static_b0() const { return b0_; }

 private:
  PolicyConfig config_;
  double b0_ = 1.0;
  const Graph* graph_;
  const Partition* partition_;
};

struct Check {
  bool pass = false;
  double slack = 0.0;  // > 0 (or >= 0 for non-strict parts) when it holds
};

struct FeasibilityReport {
  /// n > 2 F_max + 1 >= 2 I_max n + 1
  Check lemma1;
  /// d_min > 2 F_max + n/2 >= 2 I_s,max n + n/2
  Check lemma2;
  /// d_min > (3/2 + 2 w_bar - 1/R0) n; only when R0 is supplied.
  std::optional<Check> eq24;
  double eq24_threshold = 0.0;
};

struct DynamicDesign {
  double r0 = 0.0;
  double w_bar = 0.0;
};

FeasibilityReport feasibility_report(std::size_t n, std::size_t d_min, int f_max,
                                     double ratio_max,
                                     std::optional<DynamicDesign> design = {});

/// Key-value rendering, one `key=value` per line.
void write_feasibility(std::ostream& out, const FeasibilityReport& report);

}  // namespace epicon

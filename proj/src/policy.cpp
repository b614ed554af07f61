#include "epicon/policy.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "epicon/errors.hpp"
#include "epicon/numeric.hpp"

namespace epicon {

double static_heterogeneity_bound(double r0) { return 0.5 * (1.0 - 1.0 / r0); }

double dynamic_heterogeneity_bound(double r0) { return 1.0 / (2.0 * r0) - 0.25; }

bool is_static(PolicyKind kind) {
  return kind == PolicyKind::StaticGlobal || kind == PolicyKind::StaticLocal;
}

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::StaticGlobal: return "static_global";
    case PolicyKind::DynamicGlobal: return "dynamic_global";
    case PolicyKind::StaticLocal: return "static_local";
    case PolicyKind::DynamicLocal: return "dynamic_local";
  }
  return "unknown";
}

std::string to_string(const PruningRule& rule) {
  if (std::holds_alternative<pruning::HalfN>(rule)) return "half_n";
  if (std::holds_alternative<pruning::HalfDegree>(rule)) return "half_degree";
  const auto& a = std::get<pruning::AbsoluteCount>(rule);
  return a.count ? "absolute:" + std::to_string(*a.count) : "absolute";
}

double resolve_b0(const PolicyConfig& config, const SirParams& params) {
  if (config.b0) {
    if (!(*config.b0 >= 0.0 && *config.b0 <= 1.0)) {
      throw std::invalid_argument("policy: b0 outside [0,1]");
    }
    return *config.b0;
  }
  if (params.r0() <= 1.0) return 1.0;
  const double w = config.kind == PolicyKind::StaticLocal ? config.w_bar : 0.0;
  return solve_b_star(params, w);
}

StaticSetup static_setup_complete(const SirParams& params, std::size_t n) {
  const double b0 = solve_b_star(params, 0.0);
  const double span = static_cast<double>(n - 1) / 2.0;
  const auto f0 = static_cast<int>(ceil_count((1.0 - b0) * span));
  if (!(static_cast<double>(f0) < span)) {
    throw Infeasible("F0<(n-1)/2", "complete-graph pruning window is empty");
  }
  return {b0, f0};
}

StaticSetup static_setup_noncomplete(const SirParams& params, std::size_t n,
                                     std::size_t d_min, double w_bar) {
  const double r0 = params.r0();
  if (!(r0 > 1.0 && r0 < 2.0)) {
    throw Infeasible("R0-range", "static noncomplete design needs R0 in (1,2)");
  }
  if (!(w_bar < static_heterogeneity_bound(r0))) {
    throw Infeasible("heterogeneity", "w_bar must be below W_s = (1 - 1/R0)/2");
  }
  const double b_star = solve_b_star(params, w_bar);
  const auto nd = static_cast<double>(n);
  const auto dd = static_cast<double>(d_min);
  if (!(dd > (1.5 - b_star) * nd)) {
    throw Infeasible("degree", "d_min must exceed (3/2 - b*) n");
  }
  const double lower = 1.5 - dd / nd;
  if (!(b_star_residual(lower, params, w_bar) < 0.0)) {
    throw Infeasible("f_w", "f_w(3/2 - d_min/n) must be negative");
  }
  const double b0 = 0.5 * (lower + b_star);
  const auto f0 = static_cast<int>(ceil_count((1.0 - b0) * nd / 2.0));
  if (!(static_cast<double>(f0) < dd / 2.0 - nd / 4.0)) {
    throw Infeasible("pruning-window", "ceil((1 - b0) n/2) must be below d_min/2 - n/4");
  }
  return {b0, f0};
}

PolicyDecision assign_pruning(std::vector<double> subgroup_b, double global_ratio,
                              const Graph& g, const Partition& p,
                              const PruningRule& rule) {
  const std::size_t n = g.size();
  if (subgroup_b.size() != p.count()) {
    throw std::invalid_argument("assign_pruning: one reduction per subgroup expected");
  }
  PolicyDecision d;
  d.b = std::move(subgroup_b);
  d.f.resize(n);

  double weighted = 0.0;
  for (std::size_t s = 0; s < p.count(); ++s) {
    weighted += d.b[s] * static_cast<double>(p.members(s).size());
  }
  d.effective_b = n == 0 ? 1.0 : std::clamp(weighted / static_cast<double>(n), 0.0, 1.0);

  const auto nd = static_cast<double>(n);
  const double half_n_window = static_cast<double>(min_degree(g)) / 2.0 - nd / 4.0;
  for (NodeId i = 0; i < n; ++i) {
    const double b = d.b[p.group_of(i)];
    const auto di = static_cast<double>(g.degree(i));
    std::int64_t f = 0;
    double upper = 0.0;
    if (std::holds_alternative<pruning::HalfN>(rule)) {
      f = ceil_count((1.0 - b) * nd / 2.0);
      upper = half_n_window;
    } else if (std::holds_alternative<pruning::HalfDegree>(rule)) {
      f = ceil_count((1.0 - b) * di / 2.0);
      upper = di / 2.0;
    } else {
      const auto& a = std::get<pruning::AbsoluteCount>(rule);
      f = a.count ? *a.count : ceil_count(global_ratio * nd);
      upper = nd / 2.0;
    }
    d.f[i] = static_cast<int>(std::max<std::int64_t>(f, 0));
    d.f_max = std::max(d.f_max, d.f[i]);
    if (!(static_cast<double>(d.f[i]) < upper)) ++d.window_violations;
  }
  return d;
}

PolicyDecision dynamic_assign(std::span<const double> subgroup_ratios,
                              double global_ratio, double w_bar, const Graph& g,
                              const Partition& p, const PruningRule& rule) {
  std::vector<double> b(subgroup_ratios.size());
  for (std::size_t s = 0; s < b.size(); ++s) {
    b[s] = std::max(0.0, 1.0 - 2.0 * subgroup_ratios[s] - 2.0 * w_bar);
  }
  return assign_pruning(std::move(b), global_ratio, g, p, rule);
}

PolicyMaker::PolicyMaker(PolicyConfig config, const SirParams& params,
                         const Graph& g, const Partition& p)
    : config_(std::move(config)), graph_(&g), partition_(&p) {
  if (!(config_.w_bar >= 0.0 && config_.w_bar <= 1.0)) {
    throw std::invalid_argument("policy: w_bar outside [0,1]");
  }
  if (const auto* a = std::get_if<pruning::AbsoluteCount>(&config_.rule)) {
    if (a->count && *a->count < 0) throw std::invalid_argument("policy: negative F");
    if (!a->count && is_static(config_.kind)) {
      throw std::invalid_argument("policy: a static policy needs a fixed pruning count");
    }
  }
  if (is_static(config_.kind)) b0_ = resolve_b0(config_, params);
}

PolicyDecision PolicyMaker::decide(double global_ratio,
                                   std::span<const double> subgroup_ratios,
                                   double count_ratio) const {
  const std::size_t m = partition_->count();
  switch (config_.kind) {
    case PolicyKind::StaticGlobal:
    case PolicyKind::StaticLocal:
      return assign_pruning(std::vector<double>(m, b0_), count_ratio, *graph_,
                            *partition_, config_.rule);
    case PolicyKind::DynamicGlobal: {
      const std::vector<double> same(m, global_ratio);
      return dynamic_assign(same, count_ratio, config_.w_bar, *graph_, *partition_,
                            config_.rule);
    }
    case PolicyKind::DynamicLocal:
      return dynamic_assign(subgroup_ratios, count_ratio, config_.w_bar, *graph_,
                            *partition_, config_.rule);
  }
  throw std::logic_error("unknown policy kind");
}

FeasibilityReport feasibility_report(std::size_t n, std::size_t d_min, int f_max,
                                     double ratio_max,
                                     std::optional<DynamicDesign> design) {
  const auto nd = static_cast<double>(n);
  const auto dd = static_cast<double>(d_min);
  const double two_f = 2.0 * static_cast<double>(f_max);
  const double two_i = 2.0 * ratio_max * nd;

  FeasibilityReport r;
  {
    const double upper = nd - (two_f + 1.0);
    const double lower = two_f - two_i;
    r.lemma1 = {upper > 0.0 && lower >= 0.0, std::min(upper, lower)};
  }
  {
    const double upper = dd - (two_f + nd / 2.0);
    const double lower = two_f - two_i;
    r.lemma2 = {upper > 0.0 && lower >= 0.0, std::min(upper, lower)};
  }
  if (design) {
    r.eq24_threshold = (1.5 + 2.0 * design->w_bar - 1.0 / design->r0) * nd;
    const double slack = dd - r.eq24_threshold;
    r.eq24 = Check{slack > 0.0, slack};
  }
  return r;
}

void write_feasibility(std::ostream& out, const FeasibilityReport& report) {
  auto pf = [](bool b) { return b ? "pass" : "fail"; };
  out << "lemma1=" << pf(report.lemma1.pass) << '\n'
      << "lemma1_slack=" << report.lemma1.slack << '\n'
      << "lemma2=" << pf(report.lemma2.pass) << '\n'
      << "lemma2_slack=" << report.lemma2.slack << '\n';
  if (report.eq24) {
    out << "eq24=" << pf(report.eq24->pass) << '\n'
        << "eq24_threshold=" << report.eq24_threshold << '\n'
        << "eq24_slack=" << report.eq24->slack << '\n';
  } else {
    out << "eq24=n/a\n";
  }
}

}  // namespace epicon

#include "epicon/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "epicon/errors.hpp"

namespace epicon {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kClampTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double clamp_component(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  if (std::abs(c - v) >= kClampTolerance) {
    throw std::logic_error("SIR component left [0,1] by " +
                           std::to_string(v - c) +
                           "; dt too large for forward Euler");
  }
  return c;
}

}  // namespace

SirParams::SirParams(double beta, double gamma, double dt)
    : beta_(beta), gamma_(gamma), dt_(dt) {
  if (!(beta > 0.0) || !(gamma > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("SirParams: beta, gamma and dt must be > 0");
  }
}

SirParams SirParams::from_r0(double r0, double gamma, double dt) {
  return SirParams(r0 * gamma, gamma, dt);
}

void SirState::validate() const {
  for (double v : {s, i, r}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("SirState component outside [0,1]");
    }
  }
  if (std::abs(s + i + r - 1.0) > kSumTolerance) {
    throw std::invalid_argument("SirState fractions do not sum to 1");
  }
  if (k < 0) throw std::invalid_argument("SirState step index is negative");
}

double reduction_at(const ReductionPolicy& policy, const SirState& state) {
  const double b = std::visit(
      overloaded{
          [](const reduction::None&) { return 1.0; },
          [](const reduction::Fixed& p) { return p.b0; },
          [&](const reduction::AdaptiveGlobal& p) { return 1.0 - p.c * state.i; },
          [&](const reduction::TimeLimited& p) {
            return (state.k >= p.k_start && state.k <= p.k_end) ? p.b0 : 1.0;
          },
          [&](const reduction::DynamicLocal& p) {
            return 1.0 - 2.0 * state.i - 2.0 * p.w_bar;
          },
      },
      policy);
  return std::clamp(b, 0.0, 1.0);
}

SirState sir_step(const SirState& state, const SirParams& params, double b) {
  if (!(b >= 0.0 && b <= 1.0)) {
    throw std::invalid_argument("sir_step: reduction b outside [0,1]");
  }
  state.validate();

  const double infection = b * params.beta() * state.s * state.i * params.dt();
  const double recovery = params.gamma() * state.i * params.dt();

  SirState next;
  next.s = clamp_component(state.s - infection);
  next.i = clamp_component(state.i + infection - recovery);
  next.r = clamp_component(state.r + recovery);
  next.k = state.k + 1;
  return next;
}

std::vector<SirTracePoint> simulate_sir(const SirParams& params,
                                        const ReductionPolicy& policy,
                                        const SirState& initial,
                                        std::int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("simulate_sir: horizon < 1");
  initial.validate();

  std::vector<SirTracePoint> trace;
  trace.reserve(static_cast<std::size_t>(horizon) + 1);
  SirState state = initial;
  for (std::int64_t step = 0; step <= horizon; ++step) {
    const double b = reduction_at(policy, state);
    trace.push_back({state, b});
    if (step < horizon) state = sir_step(state, params, b);
  }
  return trace;
}

void write_sir_csv(std::ostream& out, const std::vector<SirTracePoint>& trace) {
  out << "k,S,I,R,b\n";
  char line[160];
  for (const auto& p : trace) {
    std::snprintf(line, sizeof line, "%lld,%.10g,%.10g,%.10g,%.10g\n",
                  static_cast<long long>(p.state.k), p.state.s, p.state.i,
                  p.state.r, p.b);
    out << line;
  }
}

double static_peak_of(double rho) {
  if (rho <= 1.0) return 0.0;
  const double inv = 1.0 / rho;
  return 1.0 - inv + inv * std::log(inv);
}

PeakBound peak_bound_static(double b0, const SirParams& params) {
  if (!(b0 >= 0.0 && b0 <= 1.0)) {
    throw std::invalid_argument("peak_bound_static: b0 outside [0,1]");
  }
  const double rho = b0 * params.r0();
  if (rho <= 1.0) return {0.0, false};
  return {static_peak_of(rho), true};
}

double b_star_residual(double b, const SirParams& params, double w_bar) {
  return 2.0 * static_peak_of(b * params.r0()) + 2.0 * w_bar - (1.0 - b);
}

double solve_b_star(const SirParams& params, double w_bar) {
  const double r0 = params.r0();
  if (r0 <= 1.0) {
    throw Infeasible("R0>1", "no epidemic regime: R0 <= 1");
  }
  const double w_static = 0.5 * (1.0 - 1.0 / r0);
  if (w_bar < 0.0) throw std::invalid_argument("solve_b_star: w_bar < 0");
  if (w_bar >= w_static) {
    throw Infeasible("w_bar<W_s", "heterogeneity exceeds static bound");
  }

  // f_w(1/R0) = 2 w_bar - (1 - 1/R0) < 0 < f_w(1) and f_w is increasing
  // on (1/R0, 1], so plain bisection brackets the unique root.
  constexpr double kResidualTolerance = 1e-9;
  constexpr int kMaxIterations = 200;
  double lo = 1.0 / r0;
  double hi = 1.0;
  double mid = hi;
  for (int it = 0; it < kMaxIterations; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = b_star_residual(mid, params, w_bar);
    if (f == 0.0) break;
    (f < 0.0 ? lo : hi) = mid;
    if (std::abs(f) < kResidualTolerance * 1e-3 || hi - lo <= 4e-16) break;
  }
  if (std::abs(b_star_residual(mid, params, w_bar)) >= kResidualTolerance) {
    throw std::logic_error("solve_b_star: bisection did not converge");
  }
  return mid;
}

double dynamic_peak_bound(const SirParams& params) {
  const double r0 = params.r0();
  if (r0 <= 1.0) throw Infeasible("R0>1", "no epidemic regime: R0 <= 1");
  return 0.5 * (1.0 - 1.0 / r0);
}

}  // namespace epicon

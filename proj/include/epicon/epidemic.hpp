#pragma once

#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

namespace epicon {

/// Rates of the SIR layer. Immutable once built; the constructor rejects
/// non-positive rates or sampling period.
class SirParams {
 public:
  SirParams(double beta, double gamma, double dt);

  /// Builds parameters for a target reproduction number at fixed gamma.
  static SirParams from_r0(double r0, double gamma, double dt);

  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double dt() const { return dt_; }
  double r0() const { return beta_ / gamma_; }

 private:
  double beta_;
  double gamma_;
  double dt_;
};

/// Population fractions at step k.
struct SirState {
  double s = 1.0;
  double i = 0.0;
  double r = 0.0;
  std::int64_t k = 0;

  /// Throws std::invalid_argument if a component leaves [0,1] or the
  /// fractions do not sum to one within 1e-12.
  void validate() const;
};

namespace reduction {
struct None {};
struct Fixed {
  double b0;
};
/// b(k) = 1 - c * I(k)
struct AdaptiveGlobal {
  double c;
};
/// b0 for k in [k_start, k_end], 1 elsewhere.
struct TimeLimited {
  double b0;
  std::int64_t k_start;
  std::int64_t k_end;
};
/// Pure-SIR view of the local dynamic rule: b = max(0, 1 - 2I - 2 w_bar).
struct DynamicLocal {
  double w_bar;
};
}  // namespace reduction

using ReductionPolicy =
    std::variant<reduction::None, reduction::Fixed, reduction::AdaptiveGlobal,
                 reduction::TimeLimited, reduction::DynamicLocal>;

/// Transmission reduction chosen for `state`, clamped to [0,1].
/// The policy observes I(k) at the step it is applied (no delay).
double reduction_at(const ReductionPolicy& policy, const SirState& state);

/// One forward-Euler step of the controlled SIR model.
SirState sir_step(const SirState& state, const SirParams& params, double b);

struct SirTracePoint {
  SirState state;
  double b = 1.0;  // reduction applied on the transition out of `state`
};

/// horizon + 1 points; trace[0] is `initial`.
std::vector<SirTracePoint> simulate_sir(const SirParams& params,
                                        const ReductionPolicy& policy,
                                        const SirState& initial,
                                        std::int64_t horizon);

/// `k,S,I,R,b` with 10 significant digits.
void write_sir_csv(std::ostream& out, const std::vector<SirTracePoint>& trace);

struct PeakBound {
  double value = 0.0;
  bool outbreak = false;  // false: b0*R0 <= 1, I(k) is nonincreasing
};

/// Peak of I under a constant reduction b0, assuming S(0) close to 1:
///   1 - 1/(b0 R0) + ln(1/(b0 R0)) / (b0 R0).
/// The bound degrades once I(0) exceeds a few percent; see
/// `static_bound_warning`.
PeakBound peak_bound_static(double b0, const SirParams& params);

/// Same formula given only the product rho = b0 * R0.
double static_peak_of(double rho);

/// True when I(0) is too large for the S(0) ~ 1 approximation above.
inline bool static_bound_warning(const SirState& initial) {
  return initial.i > 0.03;
}

/// f_w(b) = 2 I_max(b) + 2 w_bar - (1 - b); I_max taken as 0 when b R0 <= 1.
double b_star_residual(double b, const SirParams& params, double w_bar);

/// Root of f_w on (1/R0, 1]. Throws Infeasible for R0 <= 1 or
/// w_bar >= (1 - 1/R0) / 2.
double solve_b_star(const SirParams& params, double w_bar = 0.0);

/// (1 - 1/R0) / 2: bound on I(k) under b(k) = 1 - 2 I(k). Throws Infeasible
/// for R0 <= 1.
double dynamic_peak_bound(const SirParams& params);

}  // namespace epicon

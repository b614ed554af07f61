#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "epicon/epidemic.hpp"
#include "epicon/errors.hpp"
#include "oracle/oracles.hpp"

using namespace epicon;

namespace {

double peak_of(const std::vector<SirTracePoint>& trace, std::int64_t* when = nullptr) {
  double best = -1.0;
  for (const auto& p : trace) {
    if (p.state.i > best) {
      best = p.state.i;
      if (when) *when = p.state.k;
    }
  }
  return best;
}

const SirParams kFig(0.4, 0.1, 0.01);
const SirState kStart{0.99, 0.01, 0.0, 0};

}  // namespace

TEST(SirParams, RejectsNonPositive) {
  EXPECT_THROW(SirParams(0.0, 0.1, 0.01), std::invalid_argument);
  EXPECT_THROW(SirParams(0.4, -0.1, 0.01), std::invalid_argument);
  EXPECT_THROW(SirParams(0.4, 0.1, 0.0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(SirParams::from_r0(5.0, 0.1, 0.01).beta(), 0.5);
}

TEST(SirState, Validate) {
  EXPECT_NO_THROW(kStart.validate());
  EXPECT_THROW((SirState{0.5, 0.6, 0.0, 0}).validate(), std::invalid_argument);
  EXPECT_THROW((SirState{1.1, -0.1, 0.0, 0}).validate(), std::invalid_argument);
}

TEST(SirStep, HandEvaluated) {
  const SirState next = sir_step(kStart, kFig, 1.0);
  EXPECT_NEAR(next.s, 0.9899604, 1e-10);
  EXPECT_NEAR(next.i, 0.0100296, 1e-10);
  EXPECT_NEAR(next.r, 0.00001, 1e-12);
  EXPECT_EQ(next.k, 1);
}

TEST(SirStep, MatchesOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double s = u(rng);
    const double i = (1.0 - s) * u(rng);
    const SirState x{s, i, 1.0 - s - i, 0};
    const double b = u(rng);
    const SirParams p(0.05 + u(rng), 0.01 + 0.5 * u(rng), 0.01);
    const SirState got = sir_step(x, p, b);
    const auto want = oracle::euler({x.s, x.i, x.r}, p.beta(), p.gamma(), p.dt(), b);
    EXPECT_NEAR(got.s, want.s, 1e-15);
    EXPECT_NEAR(got.i, want.i, 1e-15);
    EXPECT_NEAR(got.r, want.r, 1e-15);
  }
}

TEST(SirStep, NoInfectionIsStationary) {
  const SirState x{0.7, 0.0, 0.3, 4};
  for (double b : {0.0, 0.5, 1.0}) {
    const SirState next = sir_step(x, kFig, b);
    EXPECT_EQ(next.s, x.s);
    EXPECT_EQ(next.i, 0.0);
    EXPECT_EQ(next.r, x.r);
    EXPECT_EQ(next.k, 5);
  }
}

TEST(SirStep, ZeroReductionOnlyRecovers) {
  // b = 0 stops transmission; S stays put while I flows to R.
  const SirState next = sir_step(kStart, kFig, 0.0);
  EXPECT_EQ(next.s, kStart.s);
  EXPECT_LT(next.i, kStart.i);
  EXPECT_GT(next.r, kStart.r);
}

TEST(SirStep, RejectsBadInput) {
  EXPECT_THROW(sir_step(kStart, kFig, 1.5), std::invalid_argument);
  EXPECT_THROW(sir_step(kStart, kFig, -0.1), std::invalid_argument);
  EXPECT_THROW(sir_step(SirState{1.2, 0.0, -0.2, 0}, kFig, 1.0), std::invalid_argument);
}

TEST(Reduction, ValuesAndClamp) {
  const SirState x{0.5, 0.3, 0.2, 10};
  EXPECT_EQ(reduction_at(reduction::None{}, x), 1.0);
  EXPECT_EQ(reduction_at(reduction::Fixed{0.7}, x), 0.7);
  EXPECT_NEAR(reduction_at(reduction::AdaptiveGlobal{2.0}, x), 0.4, 1e-15);
  EXPECT_EQ(reduction_at(reduction::AdaptiveGlobal{4.0}, x), 0.0);
  EXPECT_EQ(reduction_at(reduction::TimeLimited{0.7, 10, 20}, x), 0.7);
  EXPECT_EQ(reduction_at(reduction::TimeLimited{0.7, 11, 20}, x), 1.0);
  EXPECT_NEAR(reduction_at(reduction::DynamicLocal{0.1}, x), 0.2, 1e-15);
  EXPECT_EQ(reduction_at(reduction::DynamicLocal{0.4}, x), 0.0);
}

TEST(SimulateSir, TraceShape) {
  const auto trace = simulate_sir(kFig, reduction::Fixed{0.7}, kStart, 50);
  ASSERT_EQ(trace.size(), 51u);
  EXPECT_EQ(trace[0].state.s, kStart.s);
  EXPECT_EQ(trace[0].b, 0.7);
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const SirState want = sir_step(trace[k - 1].state, kFig, trace[k - 1].b);
    EXPECT_EQ(trace[k].state.s, want.s);
    EXPECT_EQ(trace[k].state.i, want.i);
    EXPECT_EQ(trace[k].state.k, static_cast<std::int64_t>(k));
  }
}

TEST(SimulateSir, PolicyPeaks) {
  std::int64_t k_none = 0, k_fixed = 0;
  const double none = peak_of(simulate_sir(kFig, reduction::None{}, kStart, 6000), &k_none);
  const double fixed = peak_of(simulate_sir(kFig, reduction::Fixed{0.7}, kStart, 6000), &k_fixed);
  const double adaptive = peak_of(simulate_sir(kFig, reduction::AdaptiveGlobal{2.0}, kStart, 6000));
  EXPECT_GT(none, 0.4);
  EXPECT_LT(fixed, 0.3);
  EXPECT_GT(k_fixed, k_none);
  EXPECT_LT(adaptive, 0.25);
}

TEST(SimulateSir, CsvFormat) {
  std::ostringstream out;
  write_sir_csv(out, simulate_sir(kFig, reduction::None{}, kStart, 2));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,S,I,R,b");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0.99,0.01,0,1");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(PeakBound, Values) {
  EXPECT_EQ(peak_bound_static(0.5, SirParams::from_r0(2.0, 0.1, 0.01)).value, 0.0);
  EXPECT_FALSE(peak_bound_static(0.5, SirParams::from_r0(2.0, 0.1, 0.01)).outbreak);
  EXPECT_NEAR(peak_bound_static(1.0, SirParams::from_r0(2.0, 0.1, 0.01)).value, 0.15343, 1e-4);
  EXPECT_NEAR(peak_bound_static(0.5, SirParams::from_r0(19.0, 0.1, 0.01)).value, 0.6578, 1e-3);
  for (double rho : {1.01, 1.5, 3.0, 10.0, 95.0}) {
    EXPECT_NEAR(static_peak_of(rho), oracle::peak(rho), 1e-14);
  }
}

TEST(PeakBound, InitialWarning) {
  EXPECT_FALSE(static_bound_warning(kStart));
  EXPECT_FALSE(static_bound_warning({0.97, 0.03, 0.0, 0}));
  EXPECT_TRUE(static_bound_warning({0.9, 0.1, 0.0, 0}));
}

TEST(BStar, KnownValue) {
  const SirParams p = SirParams::from_r0(2.0, 0.1, 0.01);
  const double b = solve_b_star(p);
  EXPECT_NEAR(b, 0.822, 1e-3);
  EXPECT_LT(b_star_residual(0.82, p, 0.0), 0.0);
  EXPECT_GT(b_star_residual(0.83, p, 0.0), 0.0);
  EXPECT_NEAR(b, oracle::b_star(2.0, 0.0), 1e-9);
}

TEST(BStar, Errors) {
  try {
    solve_b_star(SirParams::from_r0(2.0, 0.1, 0.01), 0.25);
    FAIL() << "expected Infeasible";
  } catch (const Infeasible& e) {
    EXPECT_NE(std::string(e.what()).find("heterogeneity"), std::string::npos);
  }
  EXPECT_THROW(solve_b_star(SirParams::from_r0(1.0, 0.1, 0.01)), Infeasible);
  EXPECT_THROW(solve_b_star(SirParams::from_r0(0.5, 0.1, 0.01)), Infeasible);
}

TEST(BStar, SignStructureAndMonotone) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r0s(1.05, 20.0);
  for (int t = 0; t < 30; ++t) {
    const double r0 = r0s(rng);
    const double w = std::uniform_real_distribution<double>(0.0, 0.9)(rng) *
                     0.5 * (1.0 - 1.0 / r0);
    const SirParams p = SirParams::from_r0(r0, 0.1, 0.01);
    const double b = solve_b_star(p, w);
    EXPECT_LT(std::abs(b_star_residual(b, p, w)), 1e-9);
    EXPECT_GT(b, 1.0 / r0);
    EXPECT_LE(b, 1.0);
    EXPECT_LT(b_star_residual(1.0 / r0 + 1e-9, p, w), 0.0);
    EXPECT_GT(b_star_residual(1.0, p, w), 0.0);
    double prev = -1e300;
    for (int j = 1; j <= 100; ++j) {
      const double x = 1.0 / r0 + (1.0 - 1.0 / r0) * j / 100.0;
      const double f = b_star_residual(x, p, w);
      EXPECT_GT(f, prev);
      prev = f;
    }
    EXPECT_NEAR(b, oracle::b_star(r0, w), 1e-9);
  }
}

TEST(DynamicPeakBound, Values) {
  EXPECT_DOUBLE_EQ(dynamic_peak_bound(SirParams::from_r0(2.0, 0.1, 0.01)), 0.25);
  EXPECT_DOUBLE_EQ(dynamic_peak_bound(SirParams::from_r0(5.0, 0.1, 0.01)), 0.4);
  EXPECT_THROW(dynamic_peak_bound(SirParams::from_r0(1.0, 0.1, 0.01)), Infeasible);
}

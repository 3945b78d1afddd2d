#pragma once

// (1 - eps)-approximate colored disk MaxRS by sampling colors.
//
// A quarter-accurate estimate opt' of the optimum comes from the sampling
// solver. Small optima are solved exactly. Otherwise every color is kept with
// probability lambda = c1 ln n / (eps^2 opt'), the exact solver runs on the
// kept disks, and the returned point's depth is recounted on the full input.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "colored_exact.hpp"
#include "maxrs_colored_sample.hpp"
#include "oracles.hpp"

namespace maxrs {

struct ColorSamplePlan {
  int opt_estimate = 0;
  double c1 = 8.0;
  double tau = 0.0;
  double lambda = 1.0;
  bool exact_branch = true;
  std::vector<int> sampled_colors;
  std::size_t sampled_disks = 0;
  bool fell_back = false;  // sampling kept no disk; the full input was solved
};

inline ColorSamplePlan plan_color_sampling(int opt_estimate, std::size_t n, double eps, double c1) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  if (!(c1 > 0.0)) throw ParameterError("c1 must be positive");
  ColorSamplePlan p;
  p.opt_estimate = opt_estimate;
  p.c1 = c1;
  const double log_n = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  p.tau = c1 * log_n / (eps * eps);
  p.exact_branch = opt_estimate <= p.tau;
  p.lambda = p.exact_branch ? 1.0 : std::min(1.0, c1 * log_n / (eps * eps * opt_estimate));
  return p;
}

struct ApproxColoredResult {
  PointD point;
  int reported_depth = 0;
  ColorSamplePlan plan;
};

inline std::optional<ApproxColoredResult> approx_colored_maxrs(const std::vector<ColoredBall>& balls, double eps,
                                                               double c1, std::uint64_t seed,
                                                               double c_sample = 4.0) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0, 1)");
  if (balls.empty()) return std::nullopt;
  const auto estimate = colored_solve(balls, 2, 0.25, c_sample, seed);
  ApproxColoredResult out;
  out.plan = plan_color_sampling(estimate ? estimate->depth : 0, balls.size(), eps, c1);
  auto& plan = out.plan;

  const std::vector<ColoredBall>* input = &balls;
  std::vector<ColoredBall> kept;
  if (!plan.exact_branch) {
    std::vector<int> colors;
    for (const auto& b : balls) colors.push_back(b.color);
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
    std::mt19937_64 rng(mix64(seed ^ 0xc0105a3b1e5ULL));
    std::bernoulli_distribution keep(plan.lambda);
    for (int c : colors)
      if (keep(rng)) plan.sampled_colors.push_back(c);
    for (const auto& b : balls)
      if (std::binary_search(plan.sampled_colors.begin(), plan.sampled_colors.end(), b.color)) kept.push_back(b);
    plan.sampled_disks = kept.size();
    if (kept.empty()) plan.fell_back = true;
    else input = &kept;
  } else {
    plan.sampled_disks = balls.size();
  }

  const auto r = exact_colored_maxrs(*input);
  out.point = r->point;
  out.reported_depth = oracle::brute_colored_depth(r->point, balls);
  return out;
}

}  // namespace maxrs

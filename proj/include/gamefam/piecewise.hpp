#pragma once

#include <optional>
#include <vector>

#include "gamefam/model.hpp"

namespace gamefam {

/// Empirical k-quantile partition of q*theta over n_samples fresh draws.
TypePartition build_equiprobable_partition(int k, int n_samples, double theta_max,
                                           const Rng& rng);

/// Per-interval mean of interim predictions over the samples falling in each
/// interval. Throws (naming the interval) if any interval holds no sample.
std::vector<Eigen::VectorXd> conditional_devpay(const PayoffModel& model,
                                                const Eigen::VectorXd& sigma, double r,
                                                const TypePartition& partition,
                                                const std::vector<TypeDraw>& samples);

struct PiecewiseBestResponse {
  PiecewiseStrategy phi;
  double predicted_payoff = 0.0;          // sample-weighted max over intervals
  Eigen::VectorXd recombined_marginal;    // sample-weighted per-strategy means
  std::vector<int> interval_counts;
  std::vector<Eigen::VectorXd> conditional;  // per-interval deviation payoffs
};

/// Interval-wise argmax of the conditional deviation payoffs (ties to the
/// lowest strategy id). The predicted payoff always dominates the recombined
/// marginal's best entry.
PiecewiseBestResponse piecewise_best_response(const PayoffModel& model,
                                              const Eigen::VectorXd& sigma, double r,
                                              const TypePartition& partition, int n_samples,
                                              const Rng& rng);

/// Same construction over a fixed type sample (used when the caller needs
/// the draws elsewhere).
PiecewiseBestResponse piecewise_best_response_with(const PayoffModel& model,
                                                   const Eigen::VectorXd& sigma, double r,
                                                   const TypePartition& partition,
                                                   const std::vector<TypeDraw>& samples);

/// Simulation estimate of the deviation payoff for playing phi against
/// sigma: enumerates opponent profiles and averages the deviator's payoff
/// over n_settings simulations each, resolving phi by the sampled type.
double true_piecewise_payoff(const StrategySet& set, const PiecewiseStrategy& phi,
                             const Eigen::VectorXd& sigma, double r, int n_settings,
                             const AuctionConfig& cfg, const Rng& rng, int threads = 1);

/// (piecewise - atomic_best) / atomic_best * 100; empty when the base payoff
/// is not positive.
std::optional<double> percentage_increase(double piecewise_payoff, double atomic_best);

}  // namespace gamefam

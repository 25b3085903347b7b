#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gamefam/rng.hpp"
#include "gamefam/sim.hpp"

namespace gamefam {

/// Opponent profile: how many of the p-1 opponents play each strategy.
using ProfileCounts = Eigen::VectorXi;

/// Multinomial probability of drawing `counts` from `sigma`.
double multinomial_prob(const ProfileCounts& counts, const Eigen::VectorXd& sigma);

/// All opponent multisets over the support of sigma, with their multinomial
/// probabilities. Probabilities sum to 1.
std::vector<std::pair<ProfileCounts, double>> enumerate_opponent_profiles(
    const Eigen::VectorXd& sigma, int opponents);

/// max_j devpay_j - sigma . devpay, clamped to 0 when within -1e-9.
double regret(const Eigen::VectorXd& sigma, const Eigen::VectorXd& devpay);

/// Raw simulator record for one observation: contexts are kept so datasets
/// can later be re-labeled with piecewise strategies without re-simulation.
struct Observation {
  TypeDraw t;                        // deviator's own type
  std::vector<TypeDraw> opp_types;   // opponents, in draw order
  std::vector<int> opp_strats;       // opponent strategy ids, in draw order
  std::vector<std::uint8_t> coins;   // update-success flags: deviator first
  Eigen::VectorXd payoffs;           // deviator payoff per strategy in S
};

/// Deviator payoff vector for a fixed context: seats the deviator at index 0
/// and plays the auction once per strategy in `set`, reusing the opponents'
/// strategies, all types, and all stage-two coins across deviations.
Eigen::VectorXd deviation_payoffs_for_context(const StrategySet& set,
                                              const std::vector<int>& opp_strats,
                                              const TypeDraw& t,
                                              const std::vector<TypeDraw>& opp_types,
                                              const std::vector<std::uint8_t>& coins,
                                              const AuctionConfig& cfg);

/// One observation at (sigma, r): draws the opponent profile from sigma,
/// fresh types for everyone, one set of update coins, then records the
/// deviator payoff for every strategy against that shared context.
Observation sample_observation(const StrategySet& set, const Eigen::VectorXd& sigma,
                               double r, const AuctionConfig& cfg, Rng& rng);

/// Simulation oracle for one opponent profile: averages
/// deviation_payoffs_for_context over n_settings sampled settings. The same
/// settings and coins are shared across all deviating strategies.
Eigen::VectorXd oracle_profile_devpay(const StrategySet& set, const ProfileCounts& counts,
                                      double r, int n_settings, const AuctionConfig& cfg,
                                      Rng rng);

/// Ground-truth deviation payoffs at a mixture: probability-weighted average
/// of oracle_profile_devpay over every profile sigma can produce.
Eigen::VectorXd true_devpay(const StrategySet& set, const Eigen::VectorXd& sigma,
                            double r, int n_settings, const AuctionConfig& cfg,
                            const Rng& rng, int threads = 1);

/// Expands profile counts into a per-opponent strategy list in canonical
/// (ascending id) order.
std::vector<int> expand_profile(const ProfileCounts& counts);

}  // namespace gamefam

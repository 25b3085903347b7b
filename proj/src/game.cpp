#include "gamefam/game.hpp"

#include <cmath>
#include <stdexcept>

#include "gamefam/parallel.hpp"

namespace gamefam {

double multinomial_prob(const ProfileCounts& counts, const Eigen::VectorXd& sigma) {
  if (counts.size() != sigma.size())
    throw std::invalid_argument("multinomial_prob: size mismatch");
  double log_p = std::lgamma(counts.sum() + 1.0);
  for (int j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    if (sigma[j] <= 0.0) return 0.0;
    log_p += counts[j] * std::log(sigma[j]) - std::lgamma(counts[j] + 1.0);
  }
  return std::exp(log_p);
}

std::vector<std::pair<ProfileCounts, double>> enumerate_opponent_profiles(
    const Eigen::VectorXd& sigma, int opponents) {
  if (opponents < 0)
    throw std::invalid_argument("enumerate_opponent_profiles: opponents must be >= 0");
  std::vector<int> support;
  for (int j = 0; j < sigma.size(); ++j)
    if (sigma[j] > 0.0) support.push_back(j);

  std::vector<std::pair<ProfileCounts, double>> out;
  ProfileCounts counts = ProfileCounts::Zero(sigma.size());
  // Stars and bars over the support, depth-first in ascending id order.
  auto recurse = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == static_cast<int>(support.size()) - 1) {
      counts[support[pos]] = remaining;
      out.emplace_back(counts, multinomial_prob(counts, sigma));
      counts[support[pos]] = 0;
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[support[pos]] = c;
      self(self, pos + 1, remaining - c);
    }
    counts[support[pos]] = 0;
  };
  if (support.empty()) throw std::invalid_argument("enumerate_opponent_profiles: empty support");
  recurse(recurse, 0, opponents);
  return out;
}

double regret(const Eigen::VectorXd& sigma, const Eigen::VectorXd& devpay) {
  if (sigma.size() != devpay.size()) throw std::invalid_argument("regret: size mismatch");
  const double value = devpay.maxCoeff() - sigma.dot(devpay);
  if (value < 0.0 && value >= -1e-9) return 0.0;
  return value;
}

std::vector<int> expand_profile(const ProfileCounts& counts) {
  std::vector<int> out;
  for (int j = 0; j < counts.size(); ++j)
    for (int c = 0; c < counts[j]; ++c) out.push_back(j);
  return out;
}

Eigen::VectorXd deviation_payoffs_for_context(const StrategySet& set,
                                              const std::vector<int>& opp_strats,
                                              const TypeDraw& t,
                                              const std::vector<TypeDraw>& opp_types,
                                              const std::vector<std::uint8_t>& coins,
                                              const AuctionConfig& cfg) {
  const int p = static_cast<int>(opp_strats.size()) + 1;
  if (static_cast<int>(coins.size()) != p)
    throw std::invalid_argument("deviation_payoffs_for_context: need one coin per player");
  std::vector<int> profile(p);
  std::vector<TypeDraw> setting(p);
  setting[0] = t;
  for (int x = 0; x < p - 1; ++x) {
    profile[x + 1] = opp_strats[x];
    setting[x + 1] = opp_types[x];
  }
  Eigen::VectorXd payoffs(set.size());
  for (int j = 0; j < set.size(); ++j) {
    profile[0] = j;
    payoffs[j] = play_auction_with_coins(set, profile, setting, cfg, coins).payoff[0];
  }
  return payoffs;
}

Observation sample_observation(const StrategySet& set, const Eigen::VectorXd& sigma,
                               double r, const AuctionConfig& cfg, Rng& rng) {
  const AuctionConfig inst = cfg.with_reserve(r);
  Observation obs;
  obs.opp_strats.resize(cfg.players - 1);
  for (auto& s : obs.opp_strats) s = rng.categorical(sigma);
  std::vector<TypeDraw> all = sample_setting(rng, cfg.players, cfg.theta_max);
  obs.t = all[0];
  obs.opp_types.assign(all.begin() + 1, all.end());
  obs.coins.resize(cfg.players);
  for (auto& c : obs.coins) c = rng.bernoulli(cfg.update_success_prob) ? 1 : 0;
  obs.payoffs =
      deviation_payoffs_for_context(set, obs.opp_strats, obs.t, obs.opp_types, obs.coins, inst);
  return obs;
}

Eigen::VectorXd oracle_profile_devpay(const StrategySet& set, const ProfileCounts& counts,
                                      double r, int n_settings, const AuctionConfig& cfg,
                                      Rng rng) {
  if (n_settings < 1)
    throw std::invalid_argument("oracle_profile_devpay: n_settings must be >= 1");
  const AuctionConfig inst = cfg.with_reserve(r);
  const std::vector<int> opp_strats = expand_profile(counts);
  if (static_cast<int>(opp_strats.size()) != cfg.players - 1)
    throw std::invalid_argument("oracle_profile_devpay: counts must sum to players-1");

  Eigen::VectorXd total = Eigen::VectorXd::Zero(set.size());
  std::vector<std::uint8_t> coins(cfg.players);
  for (int i = 0; i < n_settings; ++i) {
    std::vector<TypeDraw> all = sample_setting(rng, cfg.players, cfg.theta_max);
    for (auto& c : coins) c = rng.bernoulli(cfg.update_success_prob) ? 1 : 0;
    const std::vector<TypeDraw> opp_types(all.begin() + 1, all.end());
    total += deviation_payoffs_for_context(set, opp_strats, all[0], opp_types, coins, inst);
  }
  return total / n_settings;
}

Eigen::VectorXd true_devpay(const StrategySet& set, const Eigen::VectorXd& sigma,
                            double r, int n_settings, const AuctionConfig& cfg,
                            const Rng& rng, int threads) {
  const auto profiles = enumerate_opponent_profiles(sigma, cfg.players - 1);
  std::vector<Eigen::VectorXd> per_profile(profiles.size());
  parallel_for(static_cast<int>(profiles.size()), threads, [&](int i) {
    per_profile[i] = oracle_profile_devpay(set, profiles[i].first, r, n_settings, cfg,
                                           rng.child("profile", i));
  });
  Eigen::VectorXd total = Eigen::VectorXd::Zero(set.size());
  for (std::size_t i = 0; i < profiles.size(); ++i)
    total += profiles[i].second * per_profile[i];
  return total;
}

}  // namespace gamefam

#include "gamefam/piecewise.hpp"

#include <algorithm>
#include <stdexcept>

#include "gamefam/parallel.hpp"

namespace gamefam {

TypePartition build_equiprobable_partition(int k, int n_samples, double theta_max,
                                           const Rng& rng) {
  if (k < 1) throw std::invalid_argument("build_equiprobable_partition: k must be >= 1");
  if (n_samples < k) throw std::invalid_argument("build_equiprobable_partition: too few samples");
  TypePartition part;
  part.theta_max = theta_max;
  if (k == 1) return part;

  Rng stream = rng;
  std::vector<double> caps(n_samples);
  for (auto& c : caps) c = stream.uniform() * stream.uniform(0.0, theta_max);
  std::sort(caps.begin(), caps.end());
  part.cutoffs.reserve(k - 1);
  for (int i = 1; i < k; ++i) {
    const std::size_t at = static_cast<std::size_t>(
        static_cast<double>(i) * n_samples / k);
    part.cutoffs.push_back(caps[std::min(at, caps.size() - 1)]);
  }
  part.validate();
  return part;
}

std::vector<Eigen::VectorXd> conditional_devpay(const PayoffModel& model,
                                                const Eigen::VectorXd& sigma, double r,
                                                const TypePartition& partition,
                                                const std::vector<TypeDraw>& samples) {
  if (model.mode != ModelMode::Interim)
    throw std::invalid_argument("conditional_devpay: model must be interim");
  const Eigen::MatrixXd preds = model.predict_types(sigma, r, samples);
  const int k = partition.intervals();
  std::vector<Eigen::VectorXd> sums(k, Eigen::VectorXd::Zero(preds.cols()));
  std::vector<int> counts(k, 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const int c = partition.interval_of(samples[i].effective_cap());
    sums[c] += preds.row(i);
    counts[c] += 1;
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0)
      throw std::runtime_error("conditional_devpay: interval " + std::to_string(c) +
                               " holds no type sample");
    sums[c] /= counts[c];
  }
  return sums;
}

PiecewiseBestResponse piecewise_best_response_with(const PayoffModel& model,
                                                   const Eigen::VectorXd& sigma, double r,
                                                   const TypePartition& partition,
                                                   const std::vector<TypeDraw>& samples) {
  PiecewiseBestResponse out;
  out.conditional = conditional_devpay(model, sigma, r, partition, samples);
  const int k = partition.intervals();
  out.interval_counts.assign(k, 0);
  for (const auto& t : samples) out.interval_counts[partition.interval_of(t.effective_cap())]++;

  out.phi.partition = partition;
  out.phi.assignment.resize(k);
  out.recombined_marginal = Eigen::VectorXd::Zero(model.n_strategies);
  const double n = static_cast<double>(samples.size());
  for (int c = 0; c < k; ++c) {
    int best = 0;
    for (int j = 1; j < out.conditional[c].size(); ++j)
      if (out.conditional[c][j] > out.conditional[c][best]) best = j;
    out.phi.assignment[c] = best;
    const double weight = out.interval_counts[c] / n;
    out.predicted_payoff += weight * out.conditional[c][best];
    out.recombined_marginal += weight * out.conditional[c];
  }
  return out;
}

PiecewiseBestResponse piecewise_best_response(const PayoffModel& model,
                                              const Eigen::VectorXd& sigma, double r,
                                              const TypePartition& partition, int n_samples,
                                              const Rng& rng) {
  if (n_samples < partition.intervals())
    throw std::invalid_argument("piecewise_best_response: need at least k samples");
  Rng stream = rng;
  const auto samples = sample_types(stream, n_samples, model.theta_max);
  return piecewise_best_response_with(model, sigma, r, partition, samples);
}

double true_piecewise_payoff(const StrategySet& set, const PiecewiseStrategy& phi,
                             const Eigen::VectorXd& sigma, double r, int n_settings,
                             const AuctionConfig& cfg, const Rng& rng, int threads) {
  for (int id : phi.assignment)
    if (id < 0 || id >= set.size())
      throw std::invalid_argument("true_piecewise_payoff: phi references unknown strategy");
  const AuctionConfig inst = cfg.with_reserve(r);
  const auto profiles = enumerate_opponent_profiles(sigma, cfg.players - 1);

  // Deviator plays phi resolved per sampled type; shares the profile's
  // settings and coins the way the atomic oracle does.
  std::vector<double> per_profile(profiles.size());
  parallel_for(static_cast<int>(profiles.size()), threads, [&](int i) {
    Rng stream = rng.child("pw-profile", i);
    const std::vector<int> opp_strats = expand_profile(profiles[i].first);
    std::vector<std::uint8_t> coins(cfg.players);
    std::vector<int> profile(cfg.players);
    std::vector<TypeDraw> setting(cfg.players);
    double total = 0.0;
    for (int s = 0; s < n_settings; ++s) {
      const auto all = sample_setting(stream, cfg.players, cfg.theta_max);
      for (auto& c : coins) c = stream.bernoulli(cfg.update_success_prob) ? 1 : 0;
      setting = all;
      profile[0] = phi.strategy_for(all[0]);
      for (int x = 0; x < cfg.players - 1; ++x) profile[x + 1] = opp_strats[x];
      total += play_auction_with_coins(set, profile, setting, inst, coins).payoff[0];
    }
    per_profile[i] = total / n_settings;
  });

  double value = 0.0;
  for (std::size_t i = 0; i < profiles.size(); ++i)
    value += profiles[i].second * per_profile[i];
  return value;
}

std::optional<double> percentage_increase(double piecewise_payoff, double atomic_best) {
  if (atomic_best <= 0.0) return std::nullopt;
  return (piecewise_payoff - atomic_best) / atomic_best * 100.0;
}

}  // namespace gamefam

#include "gamefam/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gamefam {

std::vector<TypeDraw> sample_setting(Rng& rng, int players, double theta_max) {
  if (players < 1) throw std::invalid_argument("sample_setting: players must be >= 1");
  std::vector<TypeDraw> out(players);
  for (auto& t : out) {
    t.quality = rng.uniform();
    t.valuation = rng.uniform(0.0, theta_max);
  }
  return out;
}

int initial_bid(const AtomicStrategy& s, const TypeDraw& t) {
  return std::max(static_cast<int>(std::floor(t.valuation)) - s.offset, 0);
}

AuctionOutcome allocate_and_price(const std::vector<int>& bids,
                                  const std::vector<TypeDraw>& types,
                                  const AuctionConfig& cfg) {
  const int p = static_cast<int>(bids.size());
  if (static_cast<int>(types.size()) != p)
    throw std::invalid_argument("allocate_and_price: bids/types size mismatch");
  if (cfg.slots != static_cast<int>(cfg.ctr.size()))
    throw std::invalid_argument("allocate_and_price: slots must equal length of ctr");

  AuctionOutcome out;
  out.slot.assign(p, -1);
  out.price.assign(p, 0.0);
  out.payoff.assign(p, 0.0);

  // Participants meet the reserve; rank by descending effective bid,
  // ties to the lower player index.
  std::vector<int> ranked;
  auto effective = [&](int i) { return types[i].quality * bids[i]; };
  for (int i = 0; i < p; ++i)
    if (effective(i) >= cfg.reserve) ranked.push_back(i);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](int a, int b) { return effective(a) > effective(b); });

  const int awarded = std::min<int>(cfg.slots, static_cast<int>(ranked.size()));
  for (int k = 0; k < awarded; ++k) {
    const int i = ranked[k];
    const double next_eff =
        (k + 1 < static_cast<int>(ranked.size())) ? effective(ranked[k + 1]) : 0.0;
    const double price = std::max(next_eff, cfg.reserve) / types[i].quality;
    out.slot[i] = k;
    out.price[i] = price;
    out.payoff[i] = cfg.ctr[k] * (types[i].valuation - price);
    out.revenue += cfg.ctr[k] * price;
  }
  return out;
}

int best_response_bid(int player, const std::vector<int>& bids,
                      const std::vector<TypeDraw>& types, const AuctionConfig& cfg) {
  const int max_bid = static_cast<int>(std::floor(types[player].valuation));
  std::vector<int> trial = bids;
  int best_bid = 0;
  double best_utility = -1.0;
  for (int b = 0; b <= max_bid; ++b) {
    trial[player] = b;
    const AuctionOutcome o = allocate_and_price(trial, types, cfg);
    if (o.payoff[player] > best_utility) {
      best_utility = o.payoff[player];
      best_bid = b;
    }
  }
  return best_bid;
}

AuctionOutcome play_auction_with_coins(const StrategySet& set,
                                       const std::vector<int>& profile,
                                       const std::vector<TypeDraw>& setting,
                                       const AuctionConfig& cfg,
                                       const std::vector<std::uint8_t>& update_landed) {
  const int p = static_cast<int>(profile.size());
  if (static_cast<int>(setting.size()) != p || static_cast<int>(update_landed.size()) != p)
    throw std::invalid_argument("play_auction: profile/setting/coins size mismatch");

  std::vector<const AtomicStrategy*> resolved(p);
  std::vector<int> bids(p);
  for (int i = 0; i < p; ++i) {
    resolved[i] = &set.resolve(profile[i], setting[i]);
    bids[i] = initial_bid(*resolved[i], setting[i]);
  }

  // Stage two: every updater best-responds to the stage-one bids; updates
  // land only when the coin says so.
  std::vector<int> final_bids = bids;
  for (int i = 0; i < p; ++i)
    if (resolved[i]->update && update_landed[i])
      final_bids[i] = best_response_bid(i, bids, setting, cfg);
  return allocate_and_price(final_bids, setting, cfg);
}

AuctionOutcome play_auction(const StrategySet& set, const std::vector<int>& profile,
                            const std::vector<TypeDraw>& setting,
                            const AuctionConfig& cfg, Rng& rng) {
  std::vector<std::uint8_t> coins(profile.size());
  for (auto& c : coins) c = rng.bernoulli(cfg.update_success_prob) ? 1 : 0;
  return play_auction_with_coins(set, profile, setting, cfg, coins);
}

}  // namespace gamefam

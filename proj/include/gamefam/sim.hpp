#pragma once

#include <vector>

#include "gamefam/rng.hpp"
#include "gamefam/strategy_set.hpp"
#include "gamefam/types.hpp"

namespace gamefam {

/// p independent type draws: quality ~ U(0,1), valuation ~ U(0, theta_max).
std::vector<TypeDraw> sample_setting(Rng& rng, int players, double theta_max);

/// Stage-one bid: max(floor(theta) - offset, 0).
int initial_bid(const AtomicStrategy& s, const TypeDraw& t);

/// Weighted GSP with quality-weighted reserves. Effective bid is
/// quality * bid; bidders below the reserve are excluded, the rest are
/// ranked by descending effective bid (ties to the lower player index).
/// The occupant of slot k pays max(next effective bid, reserve) / quality
/// per click and earns ctr[k] * (valuation - price).
AuctionOutcome allocate_and_price(const std::vector<int>& bids,
                                  const std::vector<TypeDraw>& types,
                                  const AuctionConfig& cfg);

/// Best stage-two bid for `player` holding everyone else's bids fixed:
/// scans every integer bid in [0, floor(theta)] and returns the smallest
/// bid attaining maximal utility (0 when unallocated).
int best_response_bid(int player, const std::vector<int>& bids,
                      const std::vector<TypeDraw>& types, const AuctionConfig& cfg);

/// Runs the two-stage auction with explicit stage-two outcomes:
/// update_landed[i] tells whether player i's attempted update is received
/// on time. Players whose strategy does not update ignore their flag.
AuctionOutcome play_auction_with_coins(const StrategySet& set,
                                       const std::vector<int>& profile,
                                       const std::vector<TypeDraw>& setting,
                                       const AuctionConfig& cfg,
                                       const std::vector<std::uint8_t>& update_landed);

/// Two-stage auction; stage-two success coins drawn from rng with
/// probability cfg.update_success_prob.
AuctionOutcome play_auction(const StrategySet& set, const std::vector<int>& profile,
                            const std::vector<TypeDraw>& setting,
                            const AuctionConfig& cfg, Rng& rng);

}  // namespace gamefam

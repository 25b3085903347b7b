#pragma once

#include <vector>

namespace gamefam {

/// One bidder's private type: advertiser quality in [0,1] and a valuation
/// in money units.
struct TypeDraw {
  double quality = 0.0;
  double valuation = 0.0;

  /// q * theta, the maximum effective bid this bidder could ever post.
  double effective_cap() const { return quality * valuation; }
};

/// Base strategy: bid max(floor(theta) - offset, 0) in stage one, and
/// optionally submit a best-response update in stage two.
struct AtomicStrategy {
  int offset = 0;
  bool update = false;

  friend bool operator==(const AtomicStrategy& a, const AtomicStrategy& b) {
    return a.offset == b.offset && a.update == b.update;
  }
};

/// Static parameters of the two-stage auction family. The reserve
/// requirement is the family parameter; everything else is fixed per study.
struct AuctionConfig {
  int players = 5;
  int slots = 4;
  std::vector<double> ctr = {1.0, 0.7, 0.49, 0.343};
  double update_success_prob = 0.5;
  double theta_max = 25.0;
  double reserve = 0.0;

  /// Throws std::invalid_argument on inconsistent settings
  /// (slot/ctr mismatch, non-positive or increasing ctr, bad probability).
  void validate() const;

  AuctionConfig with_reserve(double r) const {
    AuctionConfig c = *this;
    c.reserve = r;
    return c;
  }
};

/// Default desk-scale configuration: 3 players, 2 slots.
AuctionConfig desk_auction_config();

/// Result of one auction: per-player slot (-1 if unallocated),
/// price-per-click, payoff, and total publisher revenue.
struct AuctionOutcome {
  std::vector<int> slot;
  std::vector<double> price;
  std::vector<double> payoff;
  double revenue = 0.0;
};

}  // namespace gamefam

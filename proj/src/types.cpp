#include "gamefam/types.hpp"

#include <limits>
#include <stdexcept>

namespace gamefam {

void AuctionConfig::validate() const {
  if (players < 1) throw std::invalid_argument("config: players must be >= 1");
  if (slots != static_cast<int>(ctr.size()))
    throw std::invalid_argument("config: slots must equal length of ctr");
  if (slots < 1 || slots > players)
    throw std::invalid_argument("config: slots must be in [1, players]");
  double prev = std::numeric_limits<double>::infinity();
  for (double c : ctr) {
    if (c <= 0 || c > prev)
      throw std::invalid_argument("config: ctr must be strictly positive and non-increasing");
    prev = c;
  }
  if (update_success_prob < 0 || update_success_prob > 1)
    throw std::invalid_argument("config: update_success_prob must be in [0,1]");
  if (theta_max <= 0) throw std::invalid_argument("config: theta_max must be positive");
  if (reserve < 0) throw std::invalid_argument("config: reserve must be non-negative");
}

AuctionConfig desk_auction_config() {
  AuctionConfig cfg;
  cfg.players = 3;
  cfg.slots = 2;
  cfg.ctr = {1.0, 0.7};
  return cfg;
}

}  // namespace gamefam

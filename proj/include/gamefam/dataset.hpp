#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gamefam/game.hpp"

namespace gamefam {

enum class DatasetMode { Interim, ExAnte };

/// One sampled (sigma, r) pair and its observations. `origin` identifies the
/// generation-time pair; rows added by augmentation inherit it so the
/// train/validation split never separates a pair from its derived mixtures.
struct PairBlock {
  Eigen::VectorXd sigma;
  double r = 0.0;
  std::uint64_t origin = 0;
  std::vector<Observation> obs;
};

struct DatasetMeta {
  int schema_version = 1;
  DatasetMode mode = DatasetMode::Interim;
  int m = 0;
  int o = 0;
  double r_min = 0.0;
  double r_max = 0.0;
  std::uint64_t seed = 0;
  nlohmann::json strategy_set;
  nlohmann::json auction;
};

struct Dataset {
  DatasetMeta meta;
  std::vector<PairBlock> pairs;

  int n_strategies() const {
    return pairs.empty() ? 0 : static_cast<int>(pairs.front().sigma.size());
  }
  std::size_t example_count() const;
};

/// m pairs with sigma uniform on the simplex and r ~ U(r_min, r_max), each
/// with o observations. Generation is parallel over pairs; pair k always
/// sees the same stream regardless of thread count.
Dataset generate_dataset(const StrategySet& set, const AuctionConfig& cfg, int m, int o,
                         double r_min, double r_max, const Rng& rng, int threads = 1);

/// Collapses each pair's o observations into their mean payoff vector and
/// drops the deviator types.
Dataset to_ex_ante(const Dataset& d);

/// Expands an interim dataset to the strategy set with `phi` appended,
/// without touching the simulator:
///  - every original example gets sigma extended with probability 0 and the
///    target extended with the stored payoff of the strategy phi picks for
///    the example's own type;
///  - per pair, opponents whose recorded strategy matches phi's choice for
///    their type are relabeled to phi; if any opponent is relabeled, the
///    pair contributes o new examples under the empirical mixture of the
///    relabeled profiles.
/// `set` must be the strategy set the dataset was generated against.
Dataset augment_with_piecewise(const Dataset& d, const PiecewiseStrategy& phi,
                               const StrategySet& set);

/// Stable 90/10 split by generation-time pair id.
bool is_validation_pair(std::uint64_t origin);

/// JSON-lines dataset plus a `<path>.meta.json` sidecar. Round-trips are
/// bit-exact.
void save_dataset(const Dataset& d, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace gamefam

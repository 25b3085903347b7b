#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gamefam/types.hpp"

namespace gamefam {

/// Contiguous intervals over the scalar type statistic q*theta, covering
/// [0, theta_max]. `cutoffs` holds only the interior boundaries, strictly
/// increasing. Intervals are [lo, hi); the last interval is closed.
struct TypePartition {
  std::vector<double> cutoffs;
  double theta_max = 25.0;

  int intervals() const { return static_cast<int>(cutoffs.size()) + 1; }

  int interval_of(double effective_cap) const {
    int i = 0;
    while (i < static_cast<int>(cutoffs.size()) && effective_cap >= cutoffs[i]) ++i;
    return i;
  }

  void validate() const;
};

/// Higher-order strategy: picks a strategy from the current set based on
/// the interval containing the player's own q*theta.
struct PiecewiseStrategy {
  TypePartition partition;
  std::vector<int> assignment;  // one strategy id per interval

  int strategy_for(const TypeDraw& t) const {
    return assignment[partition.interval_of(t.effective_cap())];
  }
};

/// Ordered strategy set: atomic strategies first, then piecewise strategies
/// appended in the order they were introduced. A piecewise strategy may only
/// reference strategies with smaller ids, so resolution always terminates.
class StrategySet {
 public:
  StrategySet() = default;
  explicit StrategySet(std::vector<AtomicStrategy> atomics);

  /// Built-in presets: "paper10" (offsets {0,2,4,6,8} x {hold, update}) and
  /// "paper6" (offsets {0,4,8} x {hold, update}); "desk3" is the small
  /// 3-strategy set used in desk-scale runs.
  static StrategySet preset(std::string_view name);

  /// Parses a descriptor (atomic list plus optional piecewise list).
  /// Throws on duplicate atomic strategies, negative offsets, or piecewise
  /// assignments that reference out-of-range ids.
  static StrategySet from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  int size() const { return static_cast<int>(atomics_.size() + pieces_.size()); }
  int atomic_count() const { return static_cast<int>(atomics_.size()); }
  int piecewise_count() const { return static_cast<int>(pieces_.size()); }
  bool is_piecewise(int id) const { return id >= atomic_count(); }

  const AtomicStrategy& atomic(int id) const { return atomics_.at(id); }
  const PiecewiseStrategy& piecewise(int id) const {
    return pieces_.at(id - atomic_count());
  }

  /// Appends a piecewise strategy; validates that every assignment id is in
  /// [0, size()) before the append.
  void add_piecewise(PiecewiseStrategy phi);

  /// Resolves a strategy id down to the atomic strategy it plays for type t.
  const AtomicStrategy& resolve(int id, const TypeDraw& t) const;

  std::string label(int id) const;

 private:
  std::vector<AtomicStrategy> atomics_;
  std::vector<PiecewiseStrategy> pieces_;
};

/// Loads a StrategySet from a preset name or a descriptor file path.
StrategySet load_strategy_set(const std::string& name_or_path);

}  // namespace gamefam

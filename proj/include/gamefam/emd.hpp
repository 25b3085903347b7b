#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gamefam/nash.hpp"
#include "gamefam/piecewise.hpp"

namespace gamefam {

enum class EvalMode { Search, Final };
enum class RestartDist { Uniform, Bell };

struct SearchConfig {
  std::vector<double> neighbor_offsets = {0.05, 0.1, 0.25};  // applied as +/-
  int max_iterations = 50;
  int restarts = 5;
  double r_min = 0.05;
  double r_max = 15.0;
  double grid_step = 0.05;  // instance lattice; searches snap to it
  double initial_temp = 0.0;  // <= 0 derives 10% of the pilot revenue spread
  double temp_decay = 0.9;
  RestartDist restart_dist = RestartDist::Uniform;
  double bell_center = 4.0;
  double bell_sd = 4.0 / 3.0;
  int n_pure = 100;             // sampled revenue: pure profiles per candidate
  int n_settings_revenue = 10000;  // simulations per pure/enumerated profile
  int oracle_settings = 10000;  // confirmation simulations per profile
  int marginalization_samples = 1000;
  double eps = 0.01;
  RdParams rd;
  double dedup_tol = 1e-3;
  double tie_tol = 0.005;  // plateau width as a fraction of max revenue
  int threads = 1;

  double snap(double r) const;
  double draw_restart(Rng& rng) const;
};

struct InstanceEvaluation {
  double r = 0.0;
  std::vector<CandidateEquilibrium> candidates;  // deduped model-approved mixtures
  std::optional<double> revenue;                 // absent = hole
  long n_revenue_samples = 0;
  int n_starts = 0;
  int dead = 0;
  int non_convergent = 0;
};

/// Expected revenue when all players draw from sigma. Exact mode enumerates
/// every pure profile in the support with its multinomial weight; otherwise
/// n_pure profiles are sampled. Each pure profile is averaged over
/// n_settings simulated settings.
double revenue_for_mixture(const StrategySet& set, const Eigen::VectorXd& sigma, double r,
                           int n_pure, int n_settings, const AuctionConfig& cfg,
                           const Rng& rng, bool exact, int threads = 1);

/// Caching game-instance evaluator over the reserve lattice. Instances are
/// keyed by snapped r; the stream for an instance depends only on
/// (base seed, key), so grid search and local search agree exactly on any
/// instance they both touch.
class InstanceEvaluator {
 public:
  InstanceEvaluator(const PayoffModel& model, const StrategySet& set,
                    const AuctionConfig& cfg, const SearchConfig& scfg,
                    std::uint64_t base_seed);

  long key_of(double r) const;
  InstanceEvaluation evaluate(double r, EvalMode mode);
  /// Precomputes several distinct instances in parallel.
  void ensure(const std::vector<double>& rs, EvalMode mode);

  bool is_cached(double r) const;
  long evaluations_performed() const { return evals_; }
  const PayoffModel& model() const { return model_; }
  const SearchConfig& config() const { return scfg_; }

 private:
  struct Entry {
    InstanceEvaluation search;
    std::optional<InstanceEvaluation> final;
  };
  InstanceEvaluation compute_search(double r, int threads) const;
  InstanceEvaluation upgrade_final(const InstanceEvaluation& search_eval, int threads) const;
  Entry* find(long key);

  const PayoffModel& model_;
  StrategySet set_;
  AuctionConfig cfg_;
  SearchConfig scfg_;
  Rng base_;
  std::map<long, Entry> cache_;
  mutable std::mutex mutex_;
  long evals_ = 0;
};

struct GridResult {
  std::vector<InstanceEvaluation> curve;  // final-mode, in grid order
  double max_revenue = 0.0;
  double max_r = 0.0;
  std::vector<double> argmax_plateau;  // reserves within tie tolerance of max
};

GridResult grid_optimize(InstanceEvaluator& evaluator, const std::vector<double>& r_grid);

std::vector<double> make_grid(double r_min, double r_max, double step);

struct SearchStep {
  int iteration = 0;
  double r = 0.0;
  std::optional<double> revenue;
  bool accepted = false;
};

struct SearchResult {
  std::string algorithm;
  double best_r = 0.0;
  std::optional<double> best_search_revenue;
  std::optional<InstanceEvaluation> confirmed;  // final-mode evaluation at best_r
  long instances_evaluated = 0;                 // distinct instances this run added
  std::vector<SearchStep> steps;
};

/// Stochastic hill climbing over the reserve lattice: evaluates the +/-
/// offset neighbors, moves to a strictly better one with probability
/// proportional to the improvement, stops when no neighbor is uphill or
/// after max_iterations. The best instance seen is re-confirmed with the
/// oracle.
SearchResult hill_climb(InstanceEvaluator& evaluator, double r0, const SearchConfig& cfg,
                        Rng rng);

/// Simulated annealing with geometric cooling over the same neighbor set.
SearchResult simulated_annealing(InstanceEvaluator& evaluator, double r0,
                                 const SearchConfig& cfg, Rng rng);

struct IterationConfig {
  SearchConfig search;
  RegressorSpec retrain_spec;
  int rounds = 1;
  int partition_k = 5;
  int partition_samples = 1000000;
  int pbr_samples = 100000;
  int true_eval_settings = 10000;
  bool tune = true;  // train a small spec grid each round, keep the best
};

struct RoundReport {
  int round = 0;
  bool aborted = false;
  std::string abort_reason;
  double r_star = 0.0;
  Eigen::VectorXd sigma_star;
  int sigma_star_basin = 0;
  double sigma_star_predicted_regret = 0.0;
  std::vector<double> partition_cutoffs;
  std::vector<int> phi_assignment;
  double phi_predicted_payoff = 0.0;
  double marginal_best_predicted = 0.0;
  std::optional<double> predicted_gain_pct;
  double phi_true_payoff = 0.0;
  double marginal_best_true = 0.0;
  std::optional<double> true_gain_pct;
  double expanded_predicted_regret_eq6 = 0.0;    // pre-retrain, appended phi payoff
  double expanded_predicted_regret_model = 0.0;  // retrained model on extended sigma
  double expanded_true_regret = 0.0;
  double regret_abs_error = 0.0;
  double expected_revenue = 0.0;
  int pairs_before = 0;
  int pairs_after = 0;
  double retrain_val_mse = 0.0;
  int retrain_epochs = 0;
  long instances_evaluated = 0;

  nlohmann::json to_json() const;
};

/// Double-oracle style loop: search for the revenue-optimal reserve, best
/// piecewise response to the biggest-basin equilibrium, dataset
/// augmentation, retraining. Mutates data/set/model in place so callers can
/// keep iterating or persist the expanded artifacts.
std::vector<RoundReport> iterate_emd(Dataset& data, StrategySet& set, PayoffModel& model,
                                     const IterationConfig& icfg, const Rng& rng);

}  // namespace gamefam

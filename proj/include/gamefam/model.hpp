#pragma once

#include <optional>
#include <string>

#include "gamefam/dataset.hpp"
#include "gamefam/net.hpp"

namespace gamefam {

enum class ModelMode { ExAnte, Interim };

struct TrainReport {
  double initial_train_mse = 0.0;  // de-normalized units
  double final_train_mse = 0.0;
  double best_val_mse = 0.0;
  int epochs_run = 0;
};

/// Learned deviation-payoff function over the game family. Ex ante input is
/// (sigma, r); interim appends the deviator's (q, theta). Inputs and targets
/// are standardized with training-set statistics.
class PayoffModel {
 public:
  ModelMode mode = ModelMode::ExAnte;
  int n_strategies = 0;
  double theta_max = 25.0;
  RegressorSpec spec;
  Eigen::VectorXd in_mean, in_std, out_mean, out_std;
  MlpNet net;
  nlohmann::json strategy_set;
  nlohmann::json auction;

  int input_dim() const { return n_strategies + (mode == ModelMode::Interim ? 3 : 1); }

  Eigen::VectorXd predict(const Eigen::VectorXd& sigma, double r) const;
  Eigen::VectorXd predict(const Eigen::VectorXd& sigma, double r, const TypeDraw& t) const;

  /// De-normalized predictions for many rows at once (rows of X are
  /// un-normalized model inputs).
  Eigen::MatrixXd predict_rows(const Eigen::MatrixXd& X) const;

  /// Interim predictions for one (sigma, r) across many deviator types.
  Eigen::MatrixXd predict_types(const Eigen::VectorXd& sigma, double r,
                                const std::vector<TypeDraw>& types) const;

  /// Monte Carlo marginalization over n fresh type samples.
  Eigen::VectorXd marginalize(const Eigen::VectorXd& sigma, double r, int n,
                              const Rng& rng) const;
  /// Marginalization over a fixed, caller-supplied type sample.
  Eigen::VectorXd marginalize_with(const Eigen::VectorXd& sigma, double r,
                                   const std::vector<TypeDraw>& types) const;

  void save(const std::string& path) const;
  static PayoffModel load(const std::string& path);
};

/// Trains a model of the requested mode from a dataset. Interim mode needs
/// an interim dataset; ex ante mode accepts either (interim data is
/// collapsed first). Deterministic given spec.seed.
PayoffModel train_model(const Dataset& d, ModelMode mode, const RegressorSpec& spec,
                        TrainReport* report = nullptr);

/// Flattens a dataset into model input/target matrices (one row per
/// training example).
void dataset_matrices(const Dataset& d, ModelMode mode, Eigen::MatrixXd& X, Eigen::MatrixXd& Y,
                      std::vector<std::uint64_t>* origins = nullptr);

std::vector<TypeDraw> sample_types(Rng& rng, int n, double theta_max);

}  // namespace gamefam

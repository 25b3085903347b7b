#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "gamefam/rng.hpp"

namespace gamefam {

struct RegressorSpec {
  std::vector<int> hidden = {64, 64};
  std::string activation = "relu";  // relu | tanh
  double learning_rate = 1e-3;
  int batch_size = 128;
  int epochs = 200;
  double weight_decay = 0.0;
  double dropout = 0.0;
  int patience = 10;
  std::uint64_t seed = 0;

  void validate() const;
  nlohmann::json to_json() const;
  static RegressorSpec from_json(const nlohmann::json& j);
};

/// Fully-connected regressor: hidden layers with the configured nonlinearity,
/// linear output. Rows of X are examples.
class MlpNet {
 public:
  MlpNet() = default;
  MlpNet(int in_dim, const std::vector<int>& hidden, int out_dim,
         const std::string& activation, Rng& rng);

  Eigen::MatrixXd forward(const Eigen::MatrixXd& X) const;

  struct Gradients {
    std::vector<Eigen::MatrixXd> dW;
    std::vector<Eigen::VectorXd> db;
  };
  Gradients zero_gradients() const;

  /// MSE over all entries of (forward(X) - Y), with gradients. When
  /// dropout > 0 and drop_rng is given, hidden activations are dropped with
  /// inverted scaling (training mode only).
  double mse_and_gradients(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, Gradients& g,
                           double dropout = 0.0, Rng* drop_rng = nullptr) const;

  int layer_count() const { return static_cast<int>(W_.size()); }
  int in_dim() const { return W_.empty() ? 0 : static_cast<int>(W_.front().cols()); }
  int out_dim() const { return W_.empty() ? 0 : static_cast<int>(W_.back().rows()); }

  std::vector<Eigen::MatrixXd>& weights() { return W_; }
  std::vector<Eigen::VectorXd>& biases() { return b_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return W_; }
  const std::vector<Eigen::VectorXd>& biases() const { return b_; }

  int n_params() const;
  Eigen::VectorXd flat_params() const;
  void set_flat_params(const Eigen::VectorXd& params);

  nlohmann::json to_json() const;
  static MlpNet from_json(const nlohmann::json& j);

 private:
  std::vector<Eigen::MatrixXd> W_;  // W[l]: rows = layer width, cols = fan-in
  std::vector<Eigen::VectorXd> b_;
  std::string activation_ = "relu";
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  int worst_param_index = -1;
  bool pass = false;
};

/// Analytic gradients vs central finite differences on a random problem of
/// the given shape, built from spec.hidden with spec.seed. Dropout is
/// disabled for the check.
GradCheckReport gradient_check(const RegressorSpec& spec, int in_dim, int out_dim,
                               int n_examples, double rel_tol = 1e-4);

}  // namespace gamefam

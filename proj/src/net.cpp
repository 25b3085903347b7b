#include "gamefam/net.hpp"

#include <cmath>
#include <stdexcept>

namespace gamefam {

void RegressorSpec::validate() const {
  if (hidden.empty()) throw std::invalid_argument("spec: at least one hidden layer");
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("spec: hidden sizes must be >= 1");
  if (activation != "relu" && activation != "tanh")
    throw std::invalid_argument("spec: unknown activation: " + activation);
  if (learning_rate <= 0) throw std::invalid_argument("spec: learning rate must be > 0");
  if (batch_size < 1 || epochs < 1) throw std::invalid_argument("spec: counts must be >= 1");
  if (dropout < 0 || dropout >= 1) throw std::invalid_argument("spec: dropout must be in [0,1)");
  if (weight_decay < 0) throw std::invalid_argument("spec: weight decay must be >= 0");
}

nlohmann::json RegressorSpec::to_json() const {
  return {{"hidden", hidden},         {"activation", activation},
          {"learning_rate", learning_rate}, {"batch_size", batch_size},
          {"epochs", epochs},         {"weight_decay", weight_decay},
          {"dropout", dropout},       {"patience", patience},
          {"seed", seed}};
}

RegressorSpec RegressorSpec::from_json(const nlohmann::json& j) {
  RegressorSpec s;
  s.hidden = j.value("hidden", s.hidden);
  s.activation = j.value("activation", s.activation);
  s.learning_rate = j.value("learning_rate", s.learning_rate);
  s.batch_size = j.value("batch_size", s.batch_size);
  s.epochs = j.value("epochs", s.epochs);
  s.weight_decay = j.value("weight_decay", s.weight_decay);
  s.dropout = j.value("dropout", s.dropout);
  s.patience = j.value("patience", s.patience);
  s.seed = j.value("seed", s.seed);
  s.validate();
  return s;
}

MlpNet::MlpNet(int in_dim, const std::vector<int>& hidden, int out_dim,
               const std::string& activation, Rng& rng)
    : activation_(activation) {
  std::vector<int> widths;
  widths.push_back(in_dim);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(out_dim);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const int fan_in = widths[l];
    const int fan_out = widths[l + 1];
    const double scale = std::sqrt(2.0 / fan_in);  // He init
    Eigen::MatrixXd W(fan_out, fan_in);
    for (int i = 0; i < W.size(); ++i) W.data()[i] = rng.normal() * scale;
    W_.push_back(std::move(W));
    b_.push_back(Eigen::VectorXd::Zero(fan_out));
  }
}

namespace {

// activation applied in place; deriv expects the *pre-activation* values
inline void apply_activation(Eigen::MatrixXd& Z, const std::string& act) {
  if (act == "relu") {
    Z = Z.cwiseMax(0.0);
  } else {
    Z = Z.array().tanh();
  }
}

inline Eigen::MatrixXd activation_deriv(const Eigen::MatrixXd& A, const std::string& act) {
  if (act == "relu") return (A.array() > 0.0).cast<double>();
  return 1.0 - A.array().square();  // A already holds tanh(Z)
}

}  // namespace

Eigen::MatrixXd MlpNet::forward(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd A = X;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    Eigen::MatrixXd Z = A * W_[l].transpose();
    Z.rowwise() += b_[l].transpose();
    if (l + 1 < W_.size()) apply_activation(Z, activation_);
    A = std::move(Z);
  }
  return A;
}

MlpNet::Gradients MlpNet::zero_gradients() const {
  Gradients g;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    g.dW.push_back(Eigen::MatrixXd::Zero(W_[l].rows(), W_[l].cols()));
    g.db.push_back(Eigen::VectorXd::Zero(b_[l].size()));
  }
  return g;
}

double MlpNet::mse_and_gradients(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                 Gradients& g, double dropout, Rng* drop_rng) const {
  const int L = layer_count();
  const bool dropping = dropout > 0.0 && drop_rng != nullptr;
  const double keep = 1.0 - dropout;

  std::vector<Eigen::MatrixXd> inputs;  // inputs[l] feeds layer l
  std::vector<Eigen::MatrixXd> hidden;  // hidden[l] = activation of layer l, pre-dropout
  std::vector<Eigen::MatrixXd> masks;   // dropout masks per hidden layer
  inputs.reserve(L);
  inputs.push_back(X);
  Eigen::MatrixXd out;
  for (int l = 0; l < L; ++l) {
    Eigen::MatrixXd Z = inputs.back() * W_[l].transpose();
    Z.rowwise() += b_[l].transpose();
    if (l + 1 == L) {
      out = std::move(Z);
      break;
    }
    apply_activation(Z, activation_);
    hidden.push_back(Z);
    if (dropping) {
      Eigen::MatrixXd mask(Z.rows(), Z.cols());
      for (int i = 0; i < mask.size(); ++i) mask.data()[i] = drop_rng->bernoulli(keep) ? 1.0 : 0.0;
      Z = Z.cwiseProduct(mask) / keep;
      masks.push_back(std::move(mask));
    }
    inputs.push_back(std::move(Z));
  }

  const Eigen::MatrixXd diff = out - Y;
  const double n_terms = static_cast<double>(diff.size());
  const double loss = diff.squaredNorm() / n_terms;

  Eigen::MatrixXd delta = 2.0 * diff / n_terms;
  for (int l = L - 1; l >= 0; --l) {
    g.dW[l] = delta.transpose() * inputs[l];
    g.db[l] = delta.colwise().sum();
    if (l > 0) {
      delta = delta * W_[l];
      if (dropping) delta = delta.cwiseProduct(masks[l - 1]) / keep;
      delta = delta.cwiseProduct(activation_deriv(hidden[l - 1], activation_));
    }
  }
  return loss;
}

int MlpNet::n_params() const {
  int n = 0;
  for (std::size_t l = 0; l < W_.size(); ++l)
    n += static_cast<int>(W_[l].size() + b_[l].size());
  return n;
}

Eigen::VectorXd MlpNet::flat_params() const {
  Eigen::VectorXd out(n_params());
  int at = 0;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    out.segment(at, W_[l].size()) = Eigen::Map<const Eigen::VectorXd>(W_[l].data(), W_[l].size());
    at += static_cast<int>(W_[l].size());
    out.segment(at, b_[l].size()) = b_[l];
    at += static_cast<int>(b_[l].size());
  }
  return out;
}

void MlpNet::set_flat_params(const Eigen::VectorXd& params) {
  if (params.size() != n_params()) throw std::invalid_argument("set_flat_params: size mismatch");
  int at = 0;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    Eigen::Map<Eigen::VectorXd>(W_[l].data(), W_[l].size()) = params.segment(at, W_[l].size());
    at += static_cast<int>(W_[l].size());
    b_[l] = params.segment(at, b_[l].size());
    at += static_cast<int>(b_[l].size());
  }
}

nlohmann::json MlpNet::to_json() const {
  nlohmann::json j;
  j["activation"] = activation_;
  j["layers"] = nlohmann::json::array();
  for (std::size_t l = 0; l < W_.size(); ++l) {
    nlohmann::json layer;
    layer["rows"] = W_[l].rows();
    layer["cols"] = W_[l].cols();
    layer["W"] = std::vector<double>(W_[l].data(), W_[l].data() + W_[l].size());
    layer["b"] = std::vector<double>(b_[l].data(), b_[l].data() + b_[l].size());
    j["layers"].push_back(std::move(layer));
  }
  return j;
}

MlpNet MlpNet::from_json(const nlohmann::json& j) {
  MlpNet net;
  net.activation_ = j.at("activation").get<std::string>();
  for (const auto& layer : j.at("layers")) {
    const int rows = layer.at("rows").get<int>();
    const int cols = layer.at("cols").get<int>();
    const auto w = layer.at("W").get<std::vector<double>>();
    const auto b = layer.at("b").get<std::vector<double>>();
    if (static_cast<int>(w.size()) != rows * cols || static_cast<int>(b.size()) != rows)
      throw std::runtime_error("model file: layer size mismatch");
    net.W_.push_back(Eigen::Map<const Eigen::MatrixXd>(w.data(), rows, cols));
    net.b_.push_back(Eigen::Map<const Eigen::VectorXd>(b.data(), rows));
  }
  return net;
}

GradCheckReport gradient_check(const RegressorSpec& spec, int in_dim, int out_dim,
                               int n_examples, double rel_tol) {
  Rng rng(spec.seed);
  MlpNet net(in_dim, spec.hidden, out_dim, spec.activation, rng);
  Eigen::MatrixXd X(n_examples, in_dim), Y(n_examples, out_dim);
  for (int i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
  for (int i = 0; i < Y.size(); ++i) Y.data()[i] = rng.normal();

  auto g = net.zero_gradients();
  net.mse_and_gradients(X, Y, g);
  Eigen::VectorXd analytic(net.n_params());
  {
    MlpNet::Gradients& gr = g;
    int at = 0;
    for (std::size_t l = 0; l < gr.dW.size(); ++l) {
      analytic.segment(at, gr.dW[l].size()) =
          Eigen::Map<const Eigen::VectorXd>(gr.dW[l].data(), gr.dW[l].size());
      at += static_cast<int>(gr.dW[l].size());
      analytic.segment(at, gr.db[l].size()) = gr.db[l];
      at += static_cast<int>(gr.db[l].size());
    }
  }

  GradCheckReport report;
  Eigen::VectorXd params = net.flat_params();
  auto scratch = net.zero_gradients();
  for (int i = 0; i < params.size(); ++i) {
    const double h = 1e-5 * std::max(1.0, std::abs(params[i]));
    Eigen::VectorXd p = params;
    p[i] = params[i] + h;
    net.set_flat_params(p);
    const double up = net.mse_and_gradients(X, Y, scratch);
    p[i] = params[i] - h;
    net.set_flat_params(p);
    const double down = net.mse_and_gradients(X, Y, scratch);
    const double numeric = (up - down) / (2.0 * h);
    const double rel =
        std::abs(analytic[i] - numeric) / std::max(std::abs(analytic[i]) + std::abs(numeric), 1e-8);
    if (rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_param_index = i;
    }
  }
  net.set_flat_params(params);
  report.pass = report.max_rel_error < rel_tol;
  return report;
}

}  // namespace gamefam

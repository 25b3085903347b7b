#include "gamefam/model.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "gamefam/io.hpp"

namespace gamefam {

namespace {

Eigen::VectorXd input_row_ex_ante(const Eigen::VectorXd& sigma, double r) {
  Eigen::VectorXd x(sigma.size() + 1);
  x.head(sigma.size()) = sigma;
  x[sigma.size()] = r;
  return x;
}

Eigen::VectorXd input_row_interim(const Eigen::VectorXd& sigma, double r, const TypeDraw& t) {
  Eigen::VectorXd x(sigma.size() + 3);
  x.head(sigma.size()) = sigma;
  x[sigma.size()] = r;
  x[sigma.size() + 1] = t.quality;
  x[sigma.size() + 2] = t.valuation;
  return x;
}

}  // namespace

void dataset_matrices(const Dataset& d, ModelMode mode, Eigen::MatrixXd& X, Eigen::MatrixXd& Y,
                      std::vector<std::uint64_t>* origins) {
  if (d.pairs.empty()) throw std::invalid_argument("dataset_matrices: empty dataset");
  const bool interim = mode == ModelMode::Interim;
  if (interim && d.meta.mode != DatasetMode::Interim)
    throw std::invalid_argument("dataset_matrices: interim model needs an interim dataset");

  const Dataset* source = &d;
  Dataset collapsed;
  if (!interim && d.meta.mode == DatasetMode::Interim) {
    collapsed = to_ex_ante(d);
    source = &collapsed;
  }

  const int n_strats = source->n_strategies();
  const int in_dim = n_strats + (interim ? 3 : 1);
  const std::size_t n = source->example_count();
  X.resize(n, in_dim);
  Y.resize(n, n_strats);
  if (origins) origins->resize(n);
  std::size_t row = 0;
  for (const auto& pair : source->pairs) {
    for (const auto& obs : pair.obs) {
      X.row(row) = interim ? input_row_interim(pair.sigma, pair.r, obs.t).transpose()
                           : input_row_ex_ante(pair.sigma, pair.r).transpose();
      Y.row(row) = obs.payoffs.transpose();
      if (origins) (*origins)[row] = pair.origin;
      ++row;
    }
  }
}

Eigen::MatrixXd PayoffModel::predict_rows(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd Z = (X.rowwise() - in_mean.transpose()).array().rowwise() /
                      in_std.transpose().array();
  Eigen::MatrixXd out = net.forward(Z);
  out = (out.array().rowwise() * out_std.transpose().array()).rowwise() +
        out_mean.transpose().array();
  if (!out.allFinite()) throw std::runtime_error("model: non-finite prediction");
  return out;
}

Eigen::VectorXd PayoffModel::predict(const Eigen::VectorXd& sigma, double r) const {
  if (mode != ModelMode::ExAnte)
    throw std::invalid_argument("predict: interim model requires a deviator type");
  return predict_rows(input_row_ex_ante(sigma, r).transpose()).row(0);
}

Eigen::VectorXd PayoffModel::predict(const Eigen::VectorXd& sigma, double r,
                                     const TypeDraw& t) const {
  if (mode != ModelMode::Interim)
    throw std::invalid_argument("predict: ex ante model takes no deviator type");
  return predict_rows(input_row_interim(sigma, r, t).transpose()).row(0);
}

Eigen::MatrixXd PayoffModel::predict_types(const Eigen::VectorXd& sigma, double r,
                                           const std::vector<TypeDraw>& types) const {
  if (mode != ModelMode::Interim)
    throw std::invalid_argument("predict_types: model is not interim");
  Eigen::MatrixXd X(types.size(), sigma.size() + 3);
  for (std::size_t i = 0; i < types.size(); ++i)
    X.row(i) = input_row_interim(sigma, r, types[i]).transpose();
  return predict_rows(X);
}

std::vector<TypeDraw> sample_types(Rng& rng, int n, double theta_max) {
  std::vector<TypeDraw> out(n);
  for (auto& t : out) {
    t.quality = rng.uniform();
    t.valuation = rng.uniform(0.0, theta_max);
  }
  return out;
}

Eigen::VectorXd PayoffModel::marginalize(const Eigen::VectorXd& sigma, double r, int n,
                                         const Rng& rng) const {
  if (n < 1) throw std::invalid_argument("marginalize: n must be >= 1");
  Rng stream = rng;
  const auto types = sample_types(stream, n, theta_max);
  return marginalize_with(sigma, r, types);
}

Eigen::VectorXd PayoffModel::marginalize_with(const Eigen::VectorXd& sigma, double r,
                                              const std::vector<TypeDraw>& types) const {
  return predict_types(sigma, r, types).colwise().mean();
}

PayoffModel train_model(const Dataset& d, ModelMode mode, const RegressorSpec& spec,
                        TrainReport* report) {
  spec.validate();
  Eigen::MatrixXd X, Y;
  std::vector<std::uint64_t> origins;
  dataset_matrices(d, mode, X, Y, &origins);

  std::vector<int> train_rows, val_rows;
  for (std::size_t i = 0; i < origins.size(); ++i)
    (is_validation_pair(origins[i]) ? val_rows : train_rows).push_back(static_cast<int>(i));
  if (train_rows.empty()) throw std::invalid_argument("train_model: no training rows");

  Eigen::MatrixXd Xtr(train_rows.size(), X.cols()), Ytr(train_rows.size(), Y.cols());
  for (std::size_t i = 0; i < train_rows.size(); ++i) {
    Xtr.row(i) = X.row(train_rows[i]);
    Ytr.row(i) = Y.row(train_rows[i]);
  }
  Eigen::MatrixXd Xva(val_rows.size(), X.cols()), Yva(val_rows.size(), Y.cols());
  for (std::size_t i = 0; i < val_rows.size(); ++i) {
    Xva.row(i) = X.row(val_rows[i]);
    Yva.row(i) = Y.row(val_rows[i]);
  }

  PayoffModel model;
  model.mode = mode;
  model.n_strategies = static_cast<int>(Y.cols());
  model.spec = spec;
  model.strategy_set = d.meta.strategy_set;
  model.auction = d.meta.auction;
  model.theta_max = d.meta.auction.value("theta_max", 25.0);

  model.in_mean = Xtr.colwise().mean();
  model.in_std = ((Xtr.rowwise() - model.in_mean.transpose()).array().square().colwise().sum() /
                  Xtr.rows()).sqrt();
  model.out_mean = Ytr.colwise().mean();
  model.out_std = ((Ytr.rowwise() - model.out_mean.transpose()).array().square().colwise().sum() /
                   Ytr.rows()).sqrt();
  for (int i = 0; i < model.in_std.size(); ++i)
    if (model.in_std[i] < 1e-12) model.in_std[i] = 1.0;
  for (int i = 0; i < model.out_std.size(); ++i)
    if (model.out_std[i] < 1e-12) model.out_std[i] = 1.0;

  auto normalize_in = [&](Eigen::MatrixXd& M) {
    M = (M.rowwise() - model.in_mean.transpose()).array().rowwise() /
        model.in_std.transpose().array();
  };
  auto normalize_out = [&](Eigen::MatrixXd& M) {
    M = (M.rowwise() - model.out_mean.transpose()).array().rowwise() /
        model.out_std.transpose().array();
  };
  normalize_in(Xtr);
  normalize_out(Ytr);
  if (Xva.rows() > 0) {
    normalize_in(Xva);
    normalize_out(Yva);
  }

  Rng rng(spec.seed);
  Rng init_rng = rng.child("init");
  Rng shuffle_rng = rng.child("shuffle");
  Rng dropout_rng = rng.child("dropout");
  model.net = MlpNet(static_cast<int>(Xtr.cols()), spec.hidden, model.n_strategies,
                     spec.activation, init_rng);

  const int n = static_cast<int>(Xtr.rows());
  const int batch = std::min(spec.batch_size, n);
  auto grads = model.net.zero_gradients();

  // Adam state
  std::vector<Eigen::MatrixXd> mW, vW;
  std::vector<Eigen::VectorXd> mb, vb;
  for (int l = 0; l < model.net.layer_count(); ++l) {
    mW.push_back(Eigen::MatrixXd::Zero(model.net.weights()[l].rows(),
                                       model.net.weights()[l].cols()));
    vW.push_back(mW.back());
    mb.push_back(Eigen::VectorXd::Zero(model.net.biases()[l].size()));
    vb.push_back(mb.back());
  }
  const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  long step = 0;

  // MSE in original payoff units (targets here are normalized)
  auto eval_mse = [&](const Eigen::MatrixXd& Xs, const Eigen::MatrixXd& Ys) {
    if (Xs.rows() == 0) return 0.0;
    const Eigen::MatrixXd diff = ((model.net.forward(Xs) - Ys).array().rowwise() *
                                  model.out_std.transpose().array()).matrix();
    return diff.squaredNorm() / static_cast<double>(diff.size());
  };

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;

  double best_score = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_params = model.net.flat_params();
  int best_epoch = 0;
  int epochs_run = 0;
  const bool use_val = Xva.rows() > 0;
  const double initial_train = eval_mse(Xtr, Ytr);

  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    // Fisher-Yates with the dedicated stream
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[shuffle_rng.uniform_int(i + 1)]);

    for (int start = 0; start < n; start += batch) {
      const int bsize = std::min(batch, n - start);
      Eigen::MatrixXd Xb(bsize, Xtr.cols()), Yb(bsize, Ytr.cols());
      for (int i = 0; i < bsize; ++i) {
        Xb.row(i) = Xtr.row(order[start + i]);
        Yb.row(i) = Ytr.row(order[start + i]);
      }
      const double loss = model.net.mse_and_gradients(
          Xb, Yb, grads, spec.dropout, spec.dropout > 0 ? &dropout_rng : nullptr);
      if (!std::isfinite(loss))
        throw std::runtime_error("train_model: non-finite training loss at epoch " +
                                 std::to_string(epoch));
      ++step;
      const double corr =
          std::sqrt(1.0 - std::pow(beta2, step)) / (1.0 - std::pow(beta1, step));
      for (int l = 0; l < model.net.layer_count(); ++l) {
        if (spec.weight_decay > 0) grads.dW[l] += spec.weight_decay * model.net.weights()[l];
        mW[l] = beta1 * mW[l] + (1 - beta1) * grads.dW[l];
        vW[l] = beta2 * vW[l].array() + (1 - beta2) * grads.dW[l].array().square();
        model.net.weights()[l].array() -=
            spec.learning_rate * corr * mW[l].array() / (vW[l].array().sqrt() + adam_eps);
        mb[l] = beta1 * mb[l] + (1 - beta1) * grads.db[l];
        vb[l] = beta2 * vb[l].array() + (1 - beta2) * grads.db[l].array().square();
        model.net.biases()[l].array() -=
            spec.learning_rate * corr * mb[l].array() / (vb[l].array().sqrt() + adam_eps);
      }
    }
    epochs_run = epoch + 1;

    const double score = use_val ? eval_mse(Xva, Yva) : eval_mse(Xtr, Ytr);
    if (!std::isfinite(score))
      throw std::runtime_error("train_model: non-finite validation loss at epoch " +
                               std::to_string(epoch));
    if (score < best_score) {
      best_score = score;
      best_params = model.net.flat_params();
      best_epoch = epoch;
    } else if (epoch - best_epoch >= spec.patience) {
      break;
    }
  }
  model.net.set_flat_params(best_params);

  if (report) {
    report->initial_train_mse = initial_train;
    report->final_train_mse = eval_mse(Xtr, Ytr);
    report->best_val_mse = use_val ? best_score : 0.0;
    report->epochs_run = epochs_run;
  }
  return model;
}

void PayoffModel::save(const std::string& path) const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["mode"] = mode == ModelMode::Interim ? "interim" : "ex-ante";
  j["n_strategies"] = n_strategies;
  j["theta_max"] = theta_max;
  j["spec"] = spec.to_json();
  j["normalization"] = {
      {"in_mean", std::vector<double>(in_mean.begin(), in_mean.end())},
      {"in_std", std::vector<double>(in_std.begin(), in_std.end())},
      {"out_mean", std::vector<double>(out_mean.begin(), out_mean.end())},
      {"out_std", std::vector<double>(out_std.begin(), out_std.end())}};
  j["net"] = net.to_json();
  j["strategy_set"] = strategy_set;
  j["auction"] = auction;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << j.dump() << "\n";
}

PayoffModel PayoffModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  if (j.at("schema_version").get<int>() != kSchemaVersion)
    throw std::runtime_error("model schema version mismatch: " + path);
  PayoffModel m;
  m.mode = j.at("mode").get<std::string>() == "interim" ? ModelMode::Interim : ModelMode::ExAnte;
  m.n_strategies = j.at("n_strategies").get<int>();
  m.theta_max = j.at("theta_max").get<double>();
  m.spec = RegressorSpec::from_json(j.at("spec"));
  auto vec = [](const nlohmann::json& a) {
    const auto v = a.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()).eval();
  };
  m.in_mean = vec(j.at("normalization").at("in_mean"));
  m.in_std = vec(j.at("normalization").at("in_std"));
  m.out_mean = vec(j.at("normalization").at("out_mean"));
  m.out_std = vec(j.at("normalization").at("out_std"));
  m.net = MlpNet::from_json(j.at("net"));
  m.strategy_set = j.at("strategy_set");
  m.auction = j.at("auction");
  return m;
}

}  // namespace gamefam

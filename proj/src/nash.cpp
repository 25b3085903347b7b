#include "gamefam/nash.hpp"

#include <stdexcept>

#include "gamefam/game.hpp"

namespace gamefam {

std::string to_string(MixtureStatus s) {
  switch (s) {
    case MixtureStatus::Dead: return "dead";
    case MixtureStatus::NonConvergent: return "non-convergent";
    case MixtureStatus::Rejected: return "rejected";
    case MixtureStatus::Confirmed: return "confirmed";
  }
  return "?";
}

std::vector<Eigen::VectorXd> rd_starts(int n_strategies) {
  if (n_strategies < 1) throw std::invalid_argument("rd_starts: need at least one strategy");
  const int n = n_strategies;
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Constant(n, 1.0 / n));
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd s = Eigen::VectorXd::Constant(n, 1.0 / (n + 1));
    s[j] = 2.0 / (n + 1);
    starts.push_back(std::move(s));
  }
  return starts;
}

RdResult replicator_dynamics(const DevpayFn& devpay, Eigen::VectorXd start,
                             const RdParams& params) {
  RdResult res;
  Eigen::VectorXd sigma = std::move(start);
  for (int it = 0; it < params.max_iters; ++it) {
    const Eigen::VectorXd u = devpay(sigma);
    if (!u.allFinite())
      throw std::runtime_error("replicator_dynamics: non-finite deviation payoffs");
    if (u.cwiseAbs().maxCoeff() < params.dead_eps) {
      res.sigma = sigma;
      res.dead = true;
      res.iters = it;
      return res;
    }
    const double shift = u.minCoeff() - params.shift_delta;
    Eigen::VectorXd next = sigma.array() * (u.array() - shift);
    next /= next.sum();
    const double delta = (next - sigma).cwiseAbs().maxCoeff();
    sigma = std::move(next);
    res.iters = it + 1;
    if (delta < params.tol) {
      res.converged = true;
      break;
    }
  }
  res.sigma = sigma;
  return res;
}

Eigen::VectorXd mask_renormalize(const Eigen::VectorXd& sigma, double threshold) {
  Eigen::VectorXd masked = sigma;
  for (int j = 0; j < masked.size(); ++j)
    if (masked[j] < threshold) masked[j] = 0.0;
  const double total = masked.sum();
  if (total <= 0.0)
    throw std::invalid_argument("mask_renormalize: every entry below threshold");
  return masked / total;
}

CandidateEquilibrium classify(const Eigen::VectorXd& masked_sigma, double r,
                              const DevpayFn& model_devpay, const DevpayFn& oracle_devpay,
                              double eps) {
  CandidateEquilibrium cand;
  cand.sigma = masked_sigma;
  cand.r = r;
  cand.predicted_regret = regret(masked_sigma, model_devpay(masked_sigma));
  if (cand.predicted_regret > eps) {
    cand.status = MixtureStatus::NonConvergent;
    return cand;
  }
  cand.true_regret = regret(masked_sigma, oracle_devpay(masked_sigma));
  cand.status =
      *cand.true_regret <= eps ? MixtureStatus::Confirmed : MixtureStatus::Rejected;
  return cand;
}

std::vector<CandidateEquilibrium> dedup_candidates(std::vector<CandidateEquilibrium> candidates,
                                                   double tol) {
  std::vector<CandidateEquilibrium> out;
  for (auto& c : candidates) {
    bool merged = false;
    for (auto& kept : out) {
      if (kept.sigma.size() == c.sigma.size() &&
          (kept.sigma - c.sigma).cwiseAbs().maxCoeff() <= tol) {
        kept.basin_count += c.basin_count;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace gamefam

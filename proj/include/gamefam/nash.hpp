#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gamefam {

using DevpayFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

enum class MixtureStatus { Dead, NonConvergent, Rejected, Confirmed };

std::string to_string(MixtureStatus s);

struct CandidateEquilibrium {
  Eigen::VectorXd sigma;  // masked and renormalized
  double r = 0.0;
  double predicted_regret = 0.0;
  std::optional<double> true_regret;
  MixtureStatus status = MixtureStatus::NonConvergent;
  int basin_count = 1;  // RD starts that landed here
};

/// n+1 full-support starts: uniform, then for each strategy j the profile
/// with 2/(n+1) on j and 1/(n+1) elsewhere.
std::vector<Eigen::VectorXd> rd_starts(int n_strategies);

struct RdParams {
  int max_iters = 10000;
  double tol = 1e-8;          // infinity-norm change per iterate
  double shift_delta = 1e-6;  // keeps multipliers positive
  double dead_eps = 1e-6;     // max |u| below this marks a dead mixture
};

struct RdResult {
  Eigen::VectorXd sigma;
  bool dead = false;
  bool converged = false;
  int iters = 0;
};

/// Discrete replicator dynamics: sigma'_j ~ sigma_j * (u_j - w), with
/// w = min_j u_j - delta. Stops on the infinity-norm tolerance or when the
/// payoff vector is effectively zero (dead mixture).
RdResult replicator_dynamics(const DevpayFn& devpay, Eigen::VectorXd start,
                             const RdParams& params = {});

/// Zeroes entries below threshold and renormalizes. Throws when every entry
/// is below threshold.
Eigen::VectorXd mask_renormalize(const Eigen::VectorXd& sigma, double threshold = 0.01);

/// Candidate classification: predicted regret from the model first; the
/// oracle is consulted only when the candidate passes the model filter.
/// Both regrets are computed on the masked mixture.
CandidateEquilibrium classify(const Eigen::VectorXd& masked_sigma, double r,
                              const DevpayFn& model_devpay, const DevpayFn& oracle_devpay,
                              double eps = 0.01);

/// Merges mixtures within infinity-distance tol; basin counts accumulate.
std::vector<CandidateEquilibrium> dedup_candidates(std::vector<CandidateEquilibrium> candidates,
                                                   double tol = 1e-3);

}  // namespace gamefam

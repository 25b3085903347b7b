#include "gamefam/emd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gamefam/parallel.hpp"

namespace gamefam {

double SearchConfig::snap(double r) const {
  const double clamped = std::clamp(r, r_min, r_max);
  const double snapped = grid_step * std::llround(clamped / grid_step);
  return std::clamp(snapped, r_min, r_max);
}

double SearchConfig::draw_restart(Rng& rng) const {
  if (restart_dist == RestartDist::Uniform) return snap(rng.uniform(r_min, r_max));
  // bell-shaped over the bounds: truncated normal, resampled into range
  for (int tries = 0; tries < 256; ++tries) {
    const double r = rng.normal(bell_center, bell_sd);
    if (r >= r_min && r <= r_max) return snap(r);
  }
  return snap(bell_center);
}

double revenue_for_mixture(const StrategySet& set, const Eigen::VectorXd& sigma, double r,
                           int n_pure, int n_settings, const AuctionConfig& cfg,
                           const Rng& rng, bool exact, int threads) {
  const AuctionConfig inst = cfg.with_reserve(r);
  if (exact) {
    const auto profiles = enumerate_opponent_profiles(sigma, cfg.players);
    std::vector<double> means(profiles.size());
    parallel_for(static_cast<int>(profiles.size()), threads, [&](int i) {
      Rng stream = rng.child("rev-profile", i);
      const std::vector<int> profile = expand_profile(profiles[i].first);
      double total = 0.0;
      for (int s = 0; s < n_settings; ++s) {
        const auto setting = sample_setting(stream, cfg.players, cfg.theta_max);
        total += play_auction(set, profile, setting, inst, stream).revenue;
      }
      means[i] = total / n_settings;
    });
    double value = 0.0;
    for (std::size_t i = 0; i < profiles.size(); ++i) value += profiles[i].second * means[i];
    return value;
  }

  std::vector<double> means(n_pure);
  parallel_for(n_pure, threads, [&](int k) {
    Rng stream = rng.child("rev-pure", k);
    std::vector<int> profile(cfg.players);
    for (auto& id : profile) id = stream.categorical(sigma);
    double total = 0.0;
    for (int s = 0; s < n_settings; ++s) {
      const auto setting = sample_setting(stream, cfg.players, cfg.theta_max);
      total += play_auction(set, profile, setting, inst, stream).revenue;
    }
    means[k] = total / n_settings;
  });
  double value = 0.0;
  for (double m : means) value += m;
  return value / n_pure;
}

InstanceEvaluator::InstanceEvaluator(const PayoffModel& model, const StrategySet& set,
                                     const AuctionConfig& cfg, const SearchConfig& scfg,
                                     std::uint64_t base_seed)
    : model_(model), set_(set), cfg_(cfg), scfg_(scfg), base_(base_seed) {
  if (model_.n_strategies != set_.size())
    throw std::invalid_argument("InstanceEvaluator: model strategy count does not match set");
}

long InstanceEvaluator::key_of(double r) const {
  return std::llround(scfg_.snap(r) / scfg_.grid_step);
}

bool InstanceEvaluator::is_cached(double r) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.count(key_of(r)) > 0;
}

InstanceEvaluation InstanceEvaluator::compute_search(double r, int threads) const {
  const Rng inst_rng = base_.child("instance", key_of(r));
  InstanceEvaluation eval;
  eval.r = scfg_.snap(r);

  // Marginalization draws are fixed per instance so the deviation-payoff
  // map is deterministic within the evaluation.
  std::vector<TypeDraw> marg_types;
  if (model_.mode == ModelMode::Interim) {
    Rng t = inst_rng.child("marg-types");
    marg_types = sample_types(t, scfg_.marginalization_samples, model_.theta_max);
  }
  DevpayFn devpay = [&](const Eigen::VectorXd& sigma) {
    return model_.mode == ModelMode::Interim
               ? model_.marginalize_with(sigma, eval.r, marg_types)
               : model_.predict(sigma, eval.r);
  };

  std::vector<CandidateEquilibrium> raw;
  const auto starts = rd_starts(model_.n_strategies);
  eval.n_starts = static_cast<int>(starts.size());
  for (const auto& start : starts) {
    const RdResult rd = replicator_dynamics(devpay, start, scfg_.rd);
    if (rd.dead) {
      eval.dead++;
      continue;
    }
    const Eigen::VectorXd masked = mask_renormalize(rd.sigma, 0.01);
    CandidateEquilibrium cand;
    cand.sigma = masked;
    cand.r = eval.r;
    cand.predicted_regret = regret(masked, devpay(masked));
    if (cand.predicted_regret > scfg_.eps) {
      eval.non_convergent++;
      continue;
    }
    cand.status = MixtureStatus::Candidate;
    raw.push_back(std::move(cand));
  }
  eval.candidates = dedup_candidates(std::move(raw), scfg_.dedup_tol);

  if (!eval.candidates.empty()) {
    double total = 0.0;
    for (std::size_t i = 0; i < eval.candidates.size(); ++i)
      total += revenue_for_mixture(set_, eval.candidates[i].sigma, eval.r, scfg_.n_pure,
                                   scfg_.n_settings_revenue, cfg_,
                                   inst_rng.child("revenue", i), /*exact=*/false, threads);
    eval.revenue = total / eval.candidates.size();
    eval.n_revenue_samples =
        static_cast<long>(scfg_.n_pure) * scfg_.n_settings_revenue;
  }
  return eval;
}

InstanceEvaluation InstanceEvaluator::upgrade_final(const InstanceEvaluation& search_eval,
                                                    int threads) const {
  const Rng inst_rng = base_.child("instance", key_of(search_eval.r));
  InstanceEvaluation eval = search_eval;
  eval.revenue.reset();
  eval.n_revenue_samples = 0;

  for (std::size_t i = 0; i < eval.candidates.size(); ++i) {
    auto& cand = eval.candidates[i];
    const Eigen::VectorXd u = true_devpay(set_, cand.sigma, eval.r, scfg_.oracle_settings,
                                          cfg_, inst_rng.child("oracle", i), threads);
    cand.true_regret = regret(cand.sigma, u);
    cand.status = *cand.true_regret <= scfg_.eps ? MixtureStatus::Confirmed
                                                 : MixtureStatus::Rejected;
  }

  double total = 0.0;
  int confirmed = 0;
  for (std::size_t i = 0; i < eval.candidates.size(); ++i) {
    const auto& cand = eval.candidates[i];
    if (cand.status != MixtureStatus::Confirmed) continue;
    total += revenue_for_mixture(set_, cand.sigma, eval.r, 0, scfg_.n_settings_revenue, cfg_,
                                 inst_rng.child("exact-rev", i), /*exact=*/true, threads);
    ++confirmed;
  }
  if (confirmed > 0) {
    eval.revenue = total / confirmed;
    eval.n_revenue_samples = scfg_.n_settings_revenue;
  }
  return eval;
}

InstanceEvaluator::Entry* InstanceEvaluator::find(long key) {
  const auto it = cache_.find(key);
  return it == cache_.end() ? nullptr : &it->second;
}

InstanceEvaluation InstanceEvaluator::evaluate(double r, EvalMode mode) {
  const long key = key_of(r);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (Entry* e = find(key)) {
      if (mode == EvalMode::Search) return e->search;
      if (e->final) return *e->final;
    }
  }
  // compute outside the lock; keys are distinct across ensure() workers
  Entry fresh;
  bool have_search = false;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (Entry* e = find(key)) {
      fresh.search = e->search;
      have_search = true;
    }
  }
  if (!have_search) fresh.search = compute_search(r, scfg_.threads);
  if (mode == EvalMode::Final) fresh.final = upgrade_final(fresh.search, scfg_.threads);

  std::lock_guard<std::mutex> lock(mutex_);
  Entry* e = find(key);
  if (!e) {
    evals_++;
    e = &cache_[key];
    e->search = fresh.search;
  }
  if (mode == EvalMode::Final && !e->final) e->final = std::move(*fresh.final);
  return mode == EvalMode::Search ? e->search : *e->final;
}

void InstanceEvaluator::ensure(const std::vector<double>& rs, EvalMode mode) {
  std::vector<long> missing_keys;
  std::vector<double> missing_rs;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (double r : rs) {
      const long key = key_of(r);
      if (std::find(missing_keys.begin(), missing_keys.end(), key) != missing_keys.end())
        continue;
      Entry* e = find(key);
      if (e && (mode == EvalMode::Search || e->final)) continue;
      missing_keys.push_back(key);
      missing_rs.push_back(r);
    }
  }
  if (missing_rs.empty()) return;
  const int outer = std::min<int>(scfg_.threads, static_cast<int>(missing_rs.size()));
  SearchConfig inner_cfg = scfg_;
  // one level of parallelism only
  const int inner_threads = outer > 1 ? 1 : scfg_.threads;
  parallel_for(static_cast<int>(missing_rs.size()), outer, [&](int i) {
    const double r = missing_rs[i];
    Entry fresh;
    bool have_search = false;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (Entry* e = find(missing_keys[i])) {
        fresh.search = e->search;
        have_search = true;
      }
    }
    if (!have_search) fresh.search = compute_search(r, inner_threads);
    if (mode == EvalMode::Final) fresh.final = upgrade_final(fresh.search, inner_threads);
    std::lock_guard<std::mutex> lock(mutex_);
    Entry* e = find(missing_keys[i]);
    if (!e) {
      evals_++;
      e = &cache_[missing_keys[i]];
      e->search = fresh.search;
    }
    if (mode == EvalMode::Final && !e->final && fresh.final) e->final = std::move(*fresh.final);
  });
  (void)inner_cfg;
}

std::vector<double> make_grid(double r_min, double r_max, double step) {
  std::vector<double> grid;
  for (long k = std::llround(r_min / step); k * step <= r_max + 1e-12; ++k)
    grid.push_back(k * step);
  return grid;
}

GridResult grid_optimize(InstanceEvaluator& evaluator, const std::vector<double>& r_grid) {
  if (r_grid.empty()) throw std::invalid_argument("grid_optimize: empty grid");
  evaluator.ensure(r_grid, EvalMode::Final);
  GridResult res;
  res.curve.reserve(r_grid.size());
  bool found = false;
  for (double r : r_grid) {
    res.curve.push_back(evaluator.evaluate(r, EvalMode::Final));
    const auto& eval = res.curve.back();
    if (eval.revenue && (!found || *eval.revenue > res.max_revenue)) {
      res.max_revenue = *eval.revenue;
      res.max_r = eval.r;
      found = true;
    }
  }
  if (found) {
    const double floor = res.max_revenue - evaluator.config().tie_tol *
                                               std::max(res.max_revenue, 1e-12);
    for (const auto& eval : res.curve)
      if (eval.revenue && *eval.revenue >= floor) res.argmax_plateau.push_back(eval.r);
  }
  return res;
}

namespace {

struct Visited {
  double r;
  std::optional<double> revenue;
};

void note_visit(std::map<long, Visited>& visited, const InstanceEvaluator& ev,
                const InstanceEvaluation& eval) {
  // key by lattice position; revenue identical on revisit by construction
  visited.emplace(std::llround(eval.r / ev.config().grid_step), Visited{eval.r, eval.revenue});
}

/// Re-confirm the visited instances from the best search revenue downward
/// until one survives oracle confirmation.
void finish_search(SearchResult& res, InstanceEvaluator& evaluator,
                   const std::map<long, Visited>& visited) {
  std::vector<const Visited*> ranked;
  for (const auto& [key, v] : visited)
    if (v.revenue) ranked.push_back(&v);
  std::sort(ranked.begin(), ranked.end(),
            [](const Visited* a, const Visited* b) { return *a->revenue > *b->revenue; });
  for (const Visited* v : ranked) {
    const InstanceEvaluation fin = evaluator.evaluate(v->r, EvalMode::Final);
    if (res.best_search_revenue == std::nullopt) {
      res.best_r = v->r;
      res.best_search_revenue = v->revenue;
    }
    if (fin.revenue) {
      res.best_r = v->r;
      res.best_search_revenue = v->revenue;
      res.confirmed = fin;
      return;
    }
  }
}

}  // namespace

SearchResult hill_climb(InstanceEvaluator& evaluator, double r0, const SearchConfig& cfg,
                        Rng rng) {
  SearchResult res;
  res.algorithm = "hc";
  const long evals_before = evaluator.evaluations_performed();
  std::map<long, Visited> visited;

  double r = cfg.snap(r0);
  InstanceEvaluation cur = evaluator.evaluate(r, EvalMode::Search);
  note_visit(visited, evaluator, cur);
  res.steps.push_back({0, cur.r, cur.revenue, true});

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    std::vector<double> neighbors;
    for (double off : cfg.neighbor_offsets)
      for (double sgn : {1.0, -1.0}) {
        const double rn = cfg.snap(r + sgn * off);
        if (std::abs(rn - r) > 1e-12 &&
            std::find_if(neighbors.begin(), neighbors.end(), [&](double x) {
              return std::abs(x - rn) < 1e-12;
            }) == neighbors.end())
          neighbors.push_back(rn);
      }
    evaluator.ensure(neighbors, EvalMode::Search);

    std::vector<InstanceEvaluation> evals;
    for (double rn : neighbors) {
      evals.push_back(evaluator.evaluate(rn, EvalMode::Search));
      note_visit(visited, evaluator, evals.back());
      res.steps.push_back({iter, evals.back().r, evals.back().revenue, false});
    }

    // uphill set: strict improvements (any candidate instance beats a hole)
    std::vector<int> uphill;
    std::vector<double> weight;
    for (std::size_t i = 0; i < evals.size(); ++i) {
      if (!evals[i].revenue) continue;
      if (!cur.revenue) {
        uphill.push_back(static_cast<int>(i));
        weight.push_back(1.0);
      } else if (*evals[i].revenue > *cur.revenue) {
        uphill.push_back(static_cast<int>(i));
        weight.push_back(*evals[i].revenue - *cur.revenue);
      }
    }
    if (uphill.empty()) break;

    double total = 0.0;
    for (double w : weight) total += w;
    double pick = rng.uniform() * total;
    int chosen = uphill.back();
    for (std::size_t i = 0; i < uphill.size(); ++i) {
      pick -= weight[i];
      if (pick <= 0.0) {
        chosen = uphill[i];
        break;
      }
    }
    cur = evals[chosen];
    r = cur.r;
    res.steps.push_back({iter, cur.r, cur.revenue, true});
  }

  finish_search(res, evaluator, visited);
  res.instances_evaluated = evaluator.evaluations_performed() - evals_before;
  return res;
}

SearchResult simulated_annealing(InstanceEvaluator& evaluator, double r0,
                                 const SearchConfig& cfg, Rng rng) {
  SearchResult res;
  res.algorithm = "sa";
  const long evals_before = evaluator.evaluations_performed();
  std::map<long, Visited> visited;

  double r = cfg.snap(r0);
  InstanceEvaluation cur = evaluator.evaluate(r, EvalMode::Search);
  note_visit(visited, evaluator, cur);
  res.steps.push_back({0, cur.r, cur.revenue, true});

  double temp = cfg.initial_temp;
  if (temp <= 0.0) {
    // pilot evaluations set the revenue scale; they join the search history
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    if (cur.revenue) lo = hi = *cur.revenue;
    for (int i = 0; i < 5; ++i) {
      const double rp = cfg.draw_restart(rng);
      const InstanceEvaluation pe = evaluator.evaluate(rp, EvalMode::Search);
      note_visit(visited, evaluator, pe);
      if (pe.revenue) {
        lo = std::min(lo, *pe.revenue);
        hi = std::max(hi, *pe.revenue);
      }
    }
    const double scale = (hi > lo + 1e-9) ? hi - lo : std::max(std::abs(hi), 1.0);
    temp = std::max(0.1 * scale, 1e-6);
  }

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    const double off = cfg.neighbor_offsets[rng.uniform_int(
                           static_cast<int>(cfg.neighbor_offsets.size()))] *
                       (rng.bernoulli(0.5) ? 1.0 : -1.0);
    const double rn = cfg.snap(r + off);
    const InstanceEvaluation prop = evaluator.evaluate(rn, EvalMode::Search);
    note_visit(visited, evaluator, prop);

    bool accept = false;
    if (prop.revenue) {
      if (!cur.revenue || *prop.revenue > *cur.revenue) {
        accept = true;
      } else {
        accept = rng.uniform() < std::exp((*prop.revenue - *cur.revenue) / temp);
      }
    }
    res.steps.push_back({iter, prop.r, prop.revenue, accept});
    if (accept) {
      cur = prop;
      r = cur.r;
    }
    temp *= cfg.temp_decay;
  }

  finish_search(res, evaluator, visited);
  res.instances_evaluated = evaluator.evaluations_performed() - evals_before;
  return res;
}

nlohmann::json RoundReport::to_json() const {
  nlohmann::json j;
  j["round"] = round;
  j["aborted"] = aborted;
  if (aborted) {
    j["abort_reason"] = abort_reason;
    return j;
  }
  j["r_star"] = r_star;
  j["sigma_star"] = std::vector<double>(sigma_star.begin(), sigma_star.end());
  j["sigma_star_basin"] = sigma_star_basin;
  j["sigma_star_predicted_regret"] = sigma_star_predicted_regret;
  j["partition_cutoffs"] = partition_cutoffs;
  j["phi_assignment"] = phi_assignment;
  j["phi_predicted_payoff"] = phi_predicted_payoff;
  j["marginal_best_predicted"] = marginal_best_predicted;
  j["predicted_gain_pct"] =
      predicted_gain_pct ? nlohmann::json(*predicted_gain_pct) : nlohmann::json();
  j["phi_true_payoff"] = phi_true_payoff;
  j["marginal_best_true"] = marginal_best_true;
  j["true_gain_pct"] = true_gain_pct ? nlohmann::json(*true_gain_pct) : nlohmann::json();
  j["expanded_game"] = {{"predicted_regret_appended", expanded_predicted_regret_eq6},
                        {"predicted_regret_retrained", expanded_predicted_regret_model},
                        {"true_regret", expanded_true_regret},
                        {"regret_abs_error", regret_abs_error}};
  j["expected_revenue"] = expected_revenue;
  j["pairs_before"] = pairs_before;
  j["pairs_after"] = pairs_after;
  j["retrain_val_mse"] = retrain_val_mse;
  j["retrain_epochs"] = retrain_epochs;
  j["instances_evaluated"] = instances_evaluated;
  return j;
}

std::vector<RoundReport> iterate_emd(Dataset& data, StrategySet& set, PayoffModel& model,
                                     const IterationConfig& icfg, const Rng& rng) {
  if (model.mode != ModelMode::Interim)
    throw std::invalid_argument("iterate_emd: piecewise expansion needs an interim model");
  const AuctionConfig cfg = auction_from_json(data.meta.auction);

  const TypePartition partition = build_equiprobable_partition(
      icfg.partition_k, icfg.partition_samples, cfg.theta_max, rng.child("partition"));

  std::vector<RoundReport> reports;
  for (int round = 0; round < icfg.rounds; ++round) {
    RoundReport rep;
    rep.round = round;
    rep.pairs_before = static_cast<int>(data.pairs.size());
    rep.partition_cutoffs = partition.cutoffs;

    SearchConfig scfg = icfg.search;
    if (round > 0) scfg.restart_dist = RestartDist::Bell;

    InstanceEvaluator evaluator(model, set, cfg, scfg,
                                rng.child("round-eval", round).next_u64());
    Rng search_rng = rng.child("round-search", round);
    std::vector<SearchResult> searches;
    for (int rs = 0; rs < scfg.restarts; ++rs) {
      searches.push_back(hill_climb(evaluator, scfg.draw_restart(search_rng), scfg,
                                    search_rng.child("hc", rs)));
      searches.push_back(simulated_annealing(evaluator, scfg.draw_restart(search_rng), scfg,
                                             search_rng.child("sa", rs)));
    }
    rep.instances_evaluated = evaluator.evaluations_performed();

    // best reserve across every search by candidate-equilibrium revenue
    bool found = false;
    double best_rev = 0.0;
    for (const auto& sr : searches) {
      if (!sr.best_search_revenue) continue;
      if (!found || *sr.best_search_revenue > best_rev) {
        best_rev = *sr.best_search_revenue;
        rep.r_star = sr.best_r;
        found = true;
      }
    }
    if (!found) {
      rep.aborted = true;
      rep.abort_reason = "no candidate equilibrium at any evaluated reserve";
      reports.push_back(std::move(rep));
      return reports;
    }

    const InstanceEvaluation at_best = evaluator.evaluate(rep.r_star, EvalMode::Search);
    const CandidateEquilibrium* star = nullptr;
    for (const auto& cand : at_best.candidates)
      if (!star || cand.basin_count > star->basin_count) star = &cand;
    rep.sigma_star = star->sigma;
    rep.sigma_star_basin = star->basin_count;
    rep.sigma_star_predicted_regret = star->predicted_regret;

    // piecewise best response to the biggest-basin equilibrium
    const PiecewiseBestResponse pbr =
        piecewise_best_response(model, rep.sigma_star, rep.r_star, partition,
                                icfg.pbr_samples, rng.child("pbr", round));
    rep.phi_assignment = pbr.phi.assignment;
    rep.phi_predicted_payoff = pbr.predicted_payoff;
    rep.marginal_best_predicted = pbr.recombined_marginal.maxCoeff();
    rep.predicted_gain_pct =
        percentage_increase(pbr.predicted_payoff, rep.marginal_best_predicted);

    rep.phi_true_payoff =
        true_piecewise_payoff(set, pbr.phi, rep.sigma_star, rep.r_star,
                              icfg.true_eval_settings, cfg, rng.child("pw-true", round),
                              scfg.threads);
    const Eigen::VectorXd true_u =
        true_devpay(set, rep.sigma_star, rep.r_star, icfg.true_eval_settings, cfg,
                    rng.child("atomic-true", round), scfg.threads);
    rep.marginal_best_true = true_u.maxCoeff();
    rep.true_gain_pct = percentage_increase(rep.phi_true_payoff, rep.marginal_best_true);

    // expanded-game regret of sigma*, first through the appended payoff
    // route available before retraining
    Eigen::VectorXd sigma_ext(rep.sigma_star.size() + 1);
    sigma_ext.head(rep.sigma_star.size()) = rep.sigma_star;
    sigma_ext[rep.sigma_star.size()] = 0.0;
    {
      Eigen::VectorXd devpay_ext(pbr.recombined_marginal.size() + 1);
      devpay_ext.head(pbr.recombined_marginal.size()) = pbr.recombined_marginal;
      devpay_ext[pbr.recombined_marginal.size()] = pbr.predicted_payoff;
      rep.expanded_predicted_regret_eq6 = regret(sigma_ext, devpay_ext);
    }

    // grow the dataset and the strategy set, retrain
    data = augment_with_piecewise(data, pbr.phi, set);
    set.add_piecewise(pbr.phi);
    rep.pairs_after = static_cast<int>(data.pairs.size());

    std::vector<RegressorSpec> grid;
    grid.push_back(icfg.retrain_spec);
    if (icfg.tune) {
      RegressorSpec wide = icfg.retrain_spec;
      if (!wide.hidden.empty()) wide.hidden[0] *= 2;
      grid.push_back(wide);
    }
    PayoffModel best_model;
    TrainReport best_report;
    bool have_model = false;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      RegressorSpec spec = grid[gi];
      Rng seeder = rng.child("retrain", round * 16 + static_cast<int>(gi));
      spec.seed = seeder.next_u64();
      TrainReport tr;
      PayoffModel m = train_model(data, ModelMode::Interim, spec, &tr);
      if (!have_model || tr.best_val_mse < best_report.best_val_mse) {
        best_model = std::move(m);
        best_report = tr;
        have_model = true;
      }
    }
    model = std::move(best_model);
    rep.retrain_val_mse = best_report.best_val_mse;
    rep.retrain_epochs = best_report.epochs_run;

    // evaluate sigma* in the expanded instance with the retrained model and
    // the simulation oracle
    rep.expanded_predicted_regret_model =
        regret(sigma_ext, model.marginalize(sigma_ext, rep.r_star,
                                            scfg.marginalization_samples,
                                            rng.child("expanded-marg", round)));
    const Eigen::VectorXd expanded_u =
        true_devpay(set, sigma_ext, rep.r_star, icfg.true_eval_settings, cfg,
                    rng.child("expanded-true", round), scfg.threads);
    rep.expanded_true_regret = regret(sigma_ext, expanded_u);
    rep.regret_abs_error =
        std::abs(rep.expanded_predicted_regret_model - rep.expanded_true_regret);

    rep.expected_revenue =
        revenue_for_mixture(set, sigma_ext, rep.r_star, 0, icfg.true_eval_settings, cfg,
                            rng.child("round-rev", round), /*exact=*/true, scfg.threads);

    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace gamefam

#include "gamefam/dataset.hpp"

#include <fstream>
#include <stdexcept>

#include "gamefam/io.hpp"
#include "gamefam/parallel.hpp"

namespace gamefam {

std::size_t Dataset::example_count() const {
  std::size_t n = 0;
  for (const auto& p : pairs) n += p.obs.size();
  return n;
}

Dataset generate_dataset(const StrategySet& set, const AuctionConfig& cfg, int m, int o,
                         double r_min, double r_max, const Rng& rng, int threads) {
  if (m < 1 || o < 1) throw std::invalid_argument("generate_dataset: m and o must be >= 1");
  if (r_min > r_max) throw std::invalid_argument("generate_dataset: empty reserve range");
  cfg.validate();

  Dataset d;
  d.meta.mode = DatasetMode::Interim;
  d.meta.m = m;
  d.meta.o = o;
  d.meta.r_min = r_min;
  d.meta.r_max = r_max;
  d.meta.strategy_set = set.to_json();
  d.meta.auction = auction_to_json(cfg);
  d.pairs.resize(m);
  parallel_for(m, threads, [&](int k) {
    Rng stream = rng.child("pair", k);
    PairBlock& pair = d.pairs[k];
    pair.origin = k;
    pair.sigma = stream.simplex_uniform(set.size());
    pair.r = stream.uniform(r_min, r_max);
    pair.obs.reserve(o);
    for (int i = 0; i < o; ++i)
      pair.obs.push_back(sample_observation(set, pair.sigma, pair.r, cfg, stream));
  });
  return d;
}

Dataset to_ex_ante(const Dataset& d) {
  if (d.meta.mode != DatasetMode::Interim)
    throw std::invalid_argument("to_ex_ante: dataset is already ex ante");
  Dataset out;
  out.meta = d.meta;
  out.meta.mode = DatasetMode::ExAnte;
  out.pairs.reserve(d.pairs.size());
  for (const auto& pair : d.pairs) {
    if (pair.obs.empty()) throw std::invalid_argument("to_ex_ante: pair with no observations");
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(pair.obs.front().payoffs.size());
    for (const auto& obs : pair.obs) mean += obs.payoffs;
    mean /= static_cast<double>(pair.obs.size());
    PairBlock collapsed;
    collapsed.sigma = pair.sigma;
    collapsed.r = pair.r;
    collapsed.origin = pair.origin;
    Observation agg;
    agg.payoffs = std::move(mean);
    collapsed.obs.push_back(std::move(agg));
    out.pairs.push_back(std::move(collapsed));
  }
  return out;
}

Dataset augment_with_piecewise(const Dataset& d, const PiecewiseStrategy& phi,
                               const StrategySet& set) {
  if (d.meta.mode != DatasetMode::Interim)
    throw std::invalid_argument("augment_with_piecewise: dataset must be interim");
  const int n_old = set.size();
  for (int id : phi.assignment)
    if (id < 0 || id >= n_old)
      throw std::invalid_argument("augment_with_piecewise: phi references unknown strategy");
  const int phi_id = n_old;

  StrategySet expanded = set;
  expanded.add_piecewise(phi);

  Dataset out;
  out.meta = d.meta;
  out.meta.strategy_set = expanded.to_json();

  std::vector<PairBlock> new_pairs;
  for (const auto& pair : d.pairs) {
    if (static_cast<int>(pair.sigma.size()) != n_old)
      throw std::invalid_argument("augment_with_piecewise: sigma width does not match set");

    PairBlock ext = pair;
    ext.sigma.conservativeResize(n_old + 1);
    ext.sigma[n_old] = 0.0;

    // Relabeled profiles for this pair; empirical strategy counts feed the
    // synthetic mixture.
    Eigen::VectorXd strat_counts = Eigen::VectorXd::Zero(n_old + 1);
    std::vector<std::vector<int>> relabeled(pair.obs.size());
    bool phi_seen = false;
    for (std::size_t i = 0; i < pair.obs.size(); ++i) {
      const Observation& obs = pair.obs[i];
      if (obs.opp_types.size() != obs.opp_strats.size())
        throw std::invalid_argument("augment_with_piecewise: observation lacks opponent context");

      Eigen::VectorXd& target = ext.obs[i].payoffs;
      target.conservativeResize(n_old + 1);
      target[n_old] = target[phi.strategy_for(obs.t)];

      relabeled[i] = obs.opp_strats;
      for (std::size_t x = 0; x < relabeled[i].size(); ++x) {
        if (obs.opp_strats[x] == phi.strategy_for(obs.opp_types[x])) relabeled[i][x] = phi_id;
        strat_counts[relabeled[i][x]] += 1.0;
      }
      phi_seen = phi_seen || strat_counts[phi_id] > 0.0;
    }

    if (phi_seen) {
      PairBlock synth;
      synth.sigma = strat_counts / strat_counts.sum();
      synth.r = pair.r;
      synth.origin = pair.origin;
      synth.obs = ext.obs;  // extended targets, shared types and coins
      for (std::size_t i = 0; i < synth.obs.size(); ++i) synth.obs[i].opp_strats = relabeled[i];
      new_pairs.push_back(std::move(synth));
    }
    out.pairs.push_back(std::move(ext));
  }
  for (auto& np : new_pairs) out.pairs.push_back(std::move(np));
  out.meta.m = static_cast<int>(out.pairs.size());
  return out;
}

bool is_validation_pair(std::uint64_t origin) {
  // splitmix64 finalizer; decile 9 is validation
  std::uint64_t z = origin + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z % 10 == 9;
}

namespace {

nlohmann::json type_to_json(const TypeDraw& t) {
  return {{"q", t.quality}, {"v", t.valuation}};
}

TypeDraw type_from_json(const nlohmann::json& j) {
  return {j.at("q").get<double>(), j.at("v").get<double>()};
}

}  // namespace

void save_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  for (const auto& pair : d.pairs) {
    nlohmann::json j;
    j["sigma"] = std::vector<double>(pair.sigma.begin(), pair.sigma.end());
    j["r"] = pair.r;
    j["origin"] = pair.origin;
    auto& obs_arr = j["obs"] = nlohmann::json::array();
    for (const auto& obs : pair.obs) {
      nlohmann::json jo;
      jo["pay"] = std::vector<double>(obs.payoffs.begin(), obs.payoffs.end());
      if (d.meta.mode == DatasetMode::Interim) {
        jo["t"] = type_to_json(obs.t);
        jo["opp_t"] = nlohmann::json::array();
        for (const auto& t : obs.opp_types) jo["opp_t"].push_back(type_to_json(t));
        jo["opp_s"] = obs.opp_strats;
        jo["coins"] = obs.coins;
      }
      obs_arr.push_back(std::move(jo));
    }
    out << j.dump() << "\n";
  }
  out.close();

  nlohmann::json meta;
  meta["schema_version"] = d.meta.schema_version;
  meta["mode"] = d.meta.mode == DatasetMode::Interim ? "interim" : "ex-ante";
  meta["m"] = d.meta.m;
  meta["o"] = d.meta.o;
  meta["r_min"] = d.meta.r_min;
  meta["r_max"] = d.meta.r_max;
  meta["seed"] = d.meta.seed;
  meta["strategy_set"] = d.meta.strategy_set;
  meta["auction"] = d.meta.auction;
  std::ofstream mout(path + ".meta.json");
  if (!mout) throw std::runtime_error("cannot write dataset sidecar: " + path + ".meta.json");
  mout << meta.dump(2) << "\n";
}

Dataset load_dataset(const std::string& path) {
  std::ifstream min(path + ".meta.json");
  if (!min) throw std::runtime_error("cannot open dataset sidecar: " + path + ".meta.json");
  nlohmann::json meta;
  min >> meta;
  if (meta.at("schema_version").get<int>() != 1)
    throw std::runtime_error("dataset schema version mismatch: " + path);

  Dataset d;
  d.meta.schema_version = 1;
  d.meta.mode =
      meta.at("mode").get<std::string>() == "interim" ? DatasetMode::Interim : DatasetMode::ExAnte;
  d.meta.m = meta.at("m").get<int>();
  d.meta.o = meta.at("o").get<int>();
  d.meta.r_min = meta.at("r_min").get<double>();
  d.meta.r_max = meta.at("r_max").get<double>();
  d.meta.seed = meta.at("seed").get<std::uint64_t>();
  d.meta.strategy_set = meta.at("strategy_set");
  d.meta.auction = meta.at("auction");

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    PairBlock pair;
    const auto sig = j.at("sigma").get<std::vector<double>>();
    pair.sigma = Eigen::Map<const Eigen::VectorXd>(sig.data(), sig.size());
    pair.r = j.at("r").get<double>();
    pair.origin = j.at("origin").get<std::uint64_t>();
    for (const auto& jo : j.at("obs")) {
      Observation obs;
      const auto pay = jo.at("pay").get<std::vector<double>>();
      obs.payoffs = Eigen::Map<const Eigen::VectorXd>(pay.data(), pay.size());
      if (d.meta.mode == DatasetMode::Interim) {
        obs.t = type_from_json(jo.at("t"));
        for (const auto& jt : jo.at("opp_t")) obs.opp_types.push_back(type_from_json(jt));
        obs.opp_strats = jo.at("opp_s").get<std::vector<int>>();
        obs.coins = jo.at("coins").get<std::vector<std::uint8_t>>();
      }
      pair.obs.push_back(std::move(obs));
    }
    d.pairs.push_back(std::move(pair));
  }
  return d;
}

}  // namespace gamefam

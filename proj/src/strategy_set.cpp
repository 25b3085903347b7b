#include "gamefam/strategy_set.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gamefam {

void TypePartition::validate() const {
  if (theta_max <= 0) throw std::invalid_argument("partition: theta_max must be positive");
  double prev = 0.0;
  for (double c : cutoffs) {
    if (c <= prev || c >= theta_max)
      throw std::invalid_argument("partition: cutoffs must be strictly increasing in (0, theta_max)");
    prev = c;
  }
}

StrategySet::StrategySet(std::vector<AtomicStrategy> atomics) : atomics_(std::move(atomics)) {}

StrategySet StrategySet::preset(std::string_view name) {
  auto build = [](const std::vector<int>& offsets) {
    std::vector<AtomicStrategy> out;
    for (bool update : {false, true})
      for (int off : offsets) out.push_back({off, update});
    return StrategySet(out);
  };
  if (name == "paper10") return build({0, 2, 4, 6, 8});
  if (name == "paper6") return build({0, 4, 8});
  if (name == "desk3")
    return StrategySet({{0, false}, {4, true}, {8, false}});
  throw std::invalid_argument("unknown strategy-set preset: " + std::string(name));
}

StrategySet StrategySet::from_json(const nlohmann::json& j) {
  StrategySet set;
  std::set<std::pair<int, bool>> seen;
  for (const auto& a : j.at("atomic")) {
    AtomicStrategy s{a.at("offset").get<int>(), a.at("update").get<bool>()};
    if (s.offset < 0) throw std::invalid_argument("strategy set: offset must be non-negative");
    if (!seen.insert({s.offset, s.update}).second)
      throw std::invalid_argument("strategy set: duplicate atomic strategy");
    set.atomics_.push_back(s);
  }
  if (set.atomics_.empty()) throw std::invalid_argument("strategy set: no atomic strategies");
  if (j.contains("piecewise")) {
    for (const auto& p : j.at("piecewise")) {
      PiecewiseStrategy phi;
      phi.partition.cutoffs = p.at("cutoffs").get<std::vector<double>>();
      phi.partition.theta_max = p.value("theta_max", 25.0);
      phi.assignment = p.at("assignment").get<std::vector<int>>();
      set.add_piecewise(std::move(phi));
    }
  }
  return set;
}

nlohmann::json StrategySet::to_json() const {
  nlohmann::json j;
  j["atomic"] = nlohmann::json::array();
  for (const auto& a : atomics_)
    j["atomic"].push_back({{"offset", a.offset}, {"update", a.update}});
  if (!pieces_.empty()) {
    j["piecewise"] = nlohmann::json::array();
    for (const auto& p : pieces_)
      j["piecewise"].push_back({{"cutoffs", p.partition.cutoffs},
                                {"theta_max", p.partition.theta_max},
                                {"assignment", p.assignment}});
  }
  return j;
}

void StrategySet::add_piecewise(PiecewiseStrategy phi) {
  phi.partition.validate();
  if (static_cast<int>(phi.assignment.size()) != phi.partition.intervals())
    throw std::invalid_argument("strategy set: assignment size must match interval count");
  for (int id : phi.assignment)
    if (id < 0 || id >= size())
      throw std::invalid_argument("strategy set: piecewise assignment references unknown strategy");
  pieces_.push_back(std::move(phi));
}

const AtomicStrategy& StrategySet::resolve(int id, const TypeDraw& t) const {
  while (is_piecewise(id)) id = piecewise(id).strategy_for(t);
  return atomic(id);
}

std::string StrategySet::label(int id) const {
  std::ostringstream os;
  if (is_piecewise(id)) {
    os << "pw" << (id - atomic_count());
  } else {
    const auto& a = atomic(id);
    os << "off" << a.offset << (a.update ? "+br" : "");
  }
  return os.str();
}

StrategySet load_strategy_set(const std::string& name_or_path) {
  if (name_or_path == "paper10" || name_or_path == "paper6" || name_or_path == "desk3")
    return StrategySet::preset(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw std::runtime_error("cannot open strategy set file: " + name_or_path);
  nlohmann::json j;
  in >> j;
  return StrategySet::from_json(j);
}

}  // namespace gamefam

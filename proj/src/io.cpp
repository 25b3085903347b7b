#include "gamefam/io.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gamefam {

nlohmann::json auction_to_json(const AuctionConfig& cfg) {
  return {{"players", cfg.players},
          {"slots", cfg.slots},
          {"ctr", cfg.ctr},
          {"update_success_prob", cfg.update_success_prob},
          {"theta_max", cfg.theta_max},
          {"reserve", cfg.reserve}};
}

AuctionConfig auction_from_json(const nlohmann::json& j) {
  AuctionConfig cfg;
  cfg.players = j.at("players").get<int>();
  cfg.slots = j.at("slots").get<int>();
  cfg.ctr = j.at("ctr").get<std::vector<double>>();
  cfg.update_success_prob = j.at("update_success_prob").get<double>();
  cfg.theta_max = j.at("theta_max").get<double>();
  cfg.reserve = j.value("reserve", 0.0);
  cfg.validate();
  return cfg;
}

AuctionConfig load_auction_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  AuctionConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw std::runtime_error("config: expected `key = value`, got: " + line);
      continue;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "players") {
      cfg.players = std::stoi(value);
    } else if (key == "slots") {
      cfg.slots = std::stoi(value);
    } else if (key == "ctr") {
      cfg.ctr.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) cfg.ctr.push_back(std::stod(item));
    } else if (key == "update_success_prob") {
      cfg.update_success_prob = std::stod(value);
    } else if (key == "theta_max") {
      cfg.theta_max = std::stod(value);
    } else {
      throw std::runtime_error("config: unknown key: " + key);
    }
  }
  cfg.validate();
  return cfg;
}

void write_manifest(const std::string& out_base, const std::string& command,
                    const std::vector<std::string>& argv, const nlohmann::json& config,
                    std::uint64_t master_seed) {
  nlohmann::json m;
  m["command"] = command;
  m["argv"] = argv;
  m["config"] = config;
  m["master_seed"] = master_seed;
  m["versions"] = {{"gamefam", kVersion}, {"schema", kSchemaVersion}};
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  m["created"] = buf;
  std::ofstream out(out_base + ".manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest: " + out_base + ".manifest.json");
  out << m.dump(2) << "\n";
}

}  // namespace gamefam

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "gamefam/types.hpp"

namespace gamefam {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

nlohmann::json auction_to_json(const AuctionConfig& cfg);
AuctionConfig auction_from_json(const nlohmann::json& j);

/// Key-value config file (players, slots, ctr, update_success_prob,
/// theta_max). Lines are `key = value`; ctr is comma-separated. Unknown keys
/// are rejected.
AuctionConfig load_auction_config(const std::string& path);

/// Writes `<out_base>.manifest.json` describing a run: command, argv,
/// config snapshot, master seed, and versions.
void write_manifest(const std::string& out_base, const std::string& command,
                    const std::vector<std::string>& argv, const nlohmann::json& config,
                    std::uint64_t master_seed);

}  // namespace gamefam

#pragma once

#include <filesystem>
#include <vector>

#include "json.hpp"

#include "panic_lab/simengine.hpp"

namespace panic_lab::cli {

struct SimulateSpec {
  sim::SimConfig config;
  std::vector<sim::ShockEvent> shocks;
};

// Strict parse: unknown keys and wrong types raise InputError with a
// "config.<path>" prefix.
SimulateSpec parse_simulate_spec(const nlohmann::json& doc);
SimulateSpec load_simulate_spec(const std::filesystem::path& path);

// Fully resolved form, every field present. Parsing it yields the same spec.
nlohmann::json to_json(const SimulateSpec& spec);

}  // namespace panic_lab::cli

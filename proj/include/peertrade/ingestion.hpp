#pragma once

// Scenario I/O and synthetic data. Scenario files are tidy CSV, one row per
// (interval, prosumer) reading. The generator stands in for metered data:
// a truncated solar bell over daylight plus a seeded double-peak household
// demand curve, reproducible from the seed alone.

#include "peertrade/model.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace peertrade {

inline constexpr const char* kScenarioCsvHeader = "interval,prosumer_id,generation_kwh,demand_kwh";

enum class Season { Summer, Winter };

const char* to_string(Season season);
Season parse_season(const std::string& text);

struct ScenarioConfig {
    int prosumers = 5;
    int intervals = 96;
    int interval_minutes = 15;
    double capacity_kwp = 3.0; // installed solar per prosumer
    Season season = Season::Summer;
    std::uint64_t seed = 0;

    void validate() const;
};

// Parses a scenario CSV into validated, aligned profiles sorted by prosumer
// id. Errors carry the file, line and column of the first defect.
std::vector<EnergyProfile> load_profiles(const std::filesystem::path& path,
                                         int interval_minutes = 15);

void write_profiles(const std::filesystem::path& path,
                    const std::vector<EnergyProfile>& profiles);

// Deterministic synthetic scenario. Prosumer n's profile depends only on
// (seed, n), so growing the prosumer count extends a scenario without
// disturbing existing profiles.
std::vector<EnergyProfile> generate_synthetic(const ScenarioConfig& config);

// key=value generator config ('#' starts a comment). Keys: prosumers,
// intervals, interval_minutes, capacity_kwp, season, seed. Missing keys keep
// their defaults; unknown keys are rejected.
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

} // namespace peertrade

#pragma once

// Command implementations behind the peertrade front end. Each command takes
// a plain options struct and writes its report files into an output
// directory; errors surface as exceptions (the binary maps ValidationError to
// exit code 2, anything else to 1). All outputs are deterministic: machine
// CSVs use exact round-trip floats, human tables two decimals.

#include "peertrade/coalition.hpp"
#include "peertrade/ingestion.hpp"
#include "peertrade/market.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace peertrade::cli {

struct SimulateOptions {
    std::filesystem::path scenario;
    std::filesystem::path out_dir;
    PriceConfig prices;
    EmissionsConfig emissions;
};

struct CompareOptions {
    std::vector<std::filesystem::path> scenarios;
    std::filesystem::path out_dir;
    PriceConfig prices;
    EmissionsConfig emissions;
};

struct CoalitionOptions {
    std::filesystem::path scenario;
    std::size_t interval = 0;
    std::filesystem::path out_dir;
    PriceConfig prices;
    int core_cap = kCoalitionBruteForceCap;
};

struct GenerateOptions {
    ScenarioConfig config;
    std::filesystem::path out_path;
};

struct DailySummary {
    int day = 0; // 1-based
    double fit_cost_cents = 0.0;
    double p2p_cost_cents = 0.0;
    double cost_reduction_pct = 0.0;
    double fit_co2_kg = 0.0;
    double p2p_co2_kg = 0.0;
    double co2_reduction_pct = 0.0;
};

struct ScenarioComparison {
    std::string name;
    std::size_t prosumer_count = 0;
    std::size_t interval_count = 0;
    std::vector<ProsumerId> prosumers;
    std::vector<double> fit_cost_cents;  // per prosumer
    std::vector<double> p2p_cost_cents;  // per prosumer
    std::vector<double> savings_cents;   // FiT cost - P2P cost, per prosumer
    std::vector<double> p2p_co2_kg;      // per interval
    std::vector<double> fit_co2_kg;      // per interval
    double total_savings_cents = 0.0;
    double total_fit_co2_kg = 0.0;
    double total_p2p_co2_kg = 0.0;
    double co2_reduction_pct = 0.0;
    double cost_reduction_pct = 0.0;
    std::vector<DailySummary> days;
};

struct ScalingRow {
    std::string scenario;
    std::size_t prosumers = 0;
    double cost_savings_cents = 0.0;
    double co2_savings_kg = 0.0;
};

struct ComparisonReport {
    std::vector<ScenarioComparison> scenarios;
    // One row per scenario, sorted by prosumer count; only populated when the
    // compared scenarios differ in prosumer count.
    std::vector<ScalingRow> scaling;
};

struct SubsetRow {
    CoalitionMask mask = 0;
    std::vector<ProsumerId> members;
    double net_kwh = 0.0;
    double value_cents = 0.0;
    double settlement_cents = 0.0;
    double witness_cents = 0.0;
    bool settlement_violation = false;
};

struct CoalitionAnalysis {
    std::size_t interval = 0;
    std::vector<PlayerPosition> players; // non-idle prosumers only
    std::vector<ProsumerId> idle;        // excluded from the game
    std::optional<PriceQuote> quote;
    SuperadditivityReport superadditivity;
    Allocation settlement;
    CoreReport settlement_core;
    Allocation witness;
    CoreReport witness_core;
    std::vector<SubsetRow> subsets; // ascending mask order
};

// Builds the comparison for one scenario (pure; no I/O).
ScenarioComparison compare_scenario(std::string name, const std::vector<EnergyProfile>& profiles,
                                    const PriceConfig& prices, const EmissionsConfig& emissions);

// simulate: writes clearings.csv, summary.csv, co2_series.csv.
SimulationResult cmd_simulate(const SimulateOptions& options);

// compare: writes savings_per_prosumer.csv, daily_summary.csv, co2_series.csv,
// scaling.csv (multi-count runs only) and report.txt.
ComparisonReport cmd_compare(const CompareOptions& options);

// coalition: writes subsets.csv and coalition_report.txt for one interval.
CoalitionAnalysis cmd_coalition(const CoalitionOptions& options);

// generate: writes a synthetic scenario CSV.
void cmd_generate(const GenerateOptions& options);

} // namespace peertrade::cli

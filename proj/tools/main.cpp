// peertrade front end: simulate | compare | coalition | generate.
// Exit codes: 0 success, 1 runtime failure, 2 input validation failure.

#include "peertrade/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct PriceFlags {
    std::string prices; // "<sell>,<buy>" in cents/kWh
    double co2_factor = peertrade::EmissionsConfig{}.kg_per_kwh;
};

void add_price_flags(CLI::App* cmd, PriceFlags& flags) {
    cmd->add_option("--prices", flags.prices,
                    "Grid tariffs as <sell>,<buy> in cents/kWh (default 24.6,10)");
    cmd->add_option("--co2-factor", flags.co2_factor,
                    "Grid carbon intensity in kg CO2 per kWh (default 0.55)");
}

peertrade::PriceConfig parse_prices(const std::string& text) {
    peertrade::PriceConfig prices;
    if (!text.empty()) {
        const auto comma = text.find(',');
        if (comma == std::string::npos) {
            throw peertrade::ValidationError("--prices expects <sell>,<buy>, got '" + text + "'");
        }
        try {
            prices.grid_sell = std::stod(text.substr(0, comma));
            prices.grid_buy = std::stod(text.substr(comma + 1));
        } catch (const std::exception&) {
            throw peertrade::ValidationError("--prices expects two numbers, got '" + text + "'");
        }
    }
    prices.validate();
    return prices;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Peer-to-peer energy market simulator with mid-market-rate pricing,\n"
                 "feed-in-tariff baseline, CO2 accounting and coalition analysis"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Clear one scenario and write per-interval results");
    std::string sim_scenario;
    std::string sim_out = "out";
    PriceFlags sim_flags;
    simulate->add_option("scenario", sim_scenario, "Scenario CSV")->required();
    simulate->add_option("--out", sim_out, "Output directory (default ./out)");
    add_price_flags(simulate, sim_flags);

    // compare
    auto* compare = app.add_subcommand("compare", "Compare P2P against the FiT baseline");
    std::vector<std::string> cmp_scenarios;
    std::string cmp_out = "out";
    PriceFlags cmp_flags;
    compare->add_option("scenarios", cmp_scenarios, "One or more scenario CSVs")->required();
    compare->add_option("--out", cmp_out, "Output directory (default ./out)");
    add_price_flags(compare, cmp_flags);

    // coalition
    auto* coalition = app.add_subcommand("coalition", "Analyze the coalition game at one interval");
    std::string coal_scenario;
    std::string coal_out = "out";
    std::size_t coal_interval = 0;
    int coal_cap = peertrade::kCoalitionBruteForceCap;
    PriceFlags coal_flags;
    coalition->add_option("scenario", coal_scenario, "Scenario CSV")->required();
    coalition->add_option("--interval", coal_interval, "Interval index to analyze")->required();
    coalition->add_option("--core-cap", coal_cap,
                          "Maximum players for exhaustive subset checks (default 12)");
    coalition->add_option("--out", coal_out, "Output directory (default ./out)");
    add_price_flags(coalition, coal_flags);

    // generate
    auto* generate = app.add_subcommand("generate", "Write a deterministic synthetic scenario");
    std::string gen_out;
    std::string gen_config;
    std::string gen_season = "summer";
    peertrade::ScenarioConfig gen_defaults;
    int gen_prosumers = gen_defaults.prosumers;
    int gen_intervals = gen_defaults.intervals;
    int gen_interval_minutes = gen_defaults.interval_minutes;
    double gen_capacity = gen_defaults.capacity_kwp;
    std::uint64_t gen_seed = gen_defaults.seed;
    generate->add_option("--config", gen_config, "key=value generator config file");
    generate->add_option("--prosumers", gen_prosumers, "Prosumer count (default 5)");
    generate->add_option("--intervals", gen_intervals, "Horizon in intervals (default 96)");
    generate->add_option("--interval-minutes", gen_interval_minutes,
                         "Interval length in minutes (default 15)");
    generate->add_option("--capacity", gen_capacity, "Solar capacity in kWp (default 3.0)");
    generate->add_option("--season", gen_season, "summer or winter (default summer)");
    generate->add_option("--seed", gen_seed, "RNG seed (default 0)");
    generate->add_option("--out", gen_out, "Output scenario CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*simulate) {
            peertrade::cli::SimulateOptions options;
            options.scenario = sim_scenario;
            options.out_dir = sim_out;
            options.prices = parse_prices(sim_flags.prices);
            options.emissions.kg_per_kwh = sim_flags.co2_factor;
            options.emissions.validate();
            peertrade::cli::cmd_simulate(options);
        } else if (*compare) {
            peertrade::cli::CompareOptions options;
            options.scenarios.assign(cmp_scenarios.begin(), cmp_scenarios.end());
            options.out_dir = cmp_out;
            options.prices = parse_prices(cmp_flags.prices);
            options.emissions.kg_per_kwh = cmp_flags.co2_factor;
            options.emissions.validate();
            peertrade::cli::cmd_compare(options);
        } else if (*coalition) {
            peertrade::cli::CoalitionOptions options;
            options.scenario = coal_scenario;
            options.interval = coal_interval;
            options.out_dir = coal_out;
            options.prices = parse_prices(coal_flags.prices);
            options.core_cap = coal_cap;
            peertrade::cli::cmd_coalition(options);
        } else if (*generate) {
            peertrade::cli::GenerateOptions options;
            if (!gen_config.empty()) {
                options.config = peertrade::load_scenario_config(gen_config);
            }
            if (generate->count("--prosumers")) options.config.prosumers = gen_prosumers;
            if (generate->count("--intervals")) options.config.intervals = gen_intervals;
            if (generate->count("--interval-minutes"))
                options.config.interval_minutes = gen_interval_minutes;
            if (generate->count("--capacity")) options.config.capacity_kwp = gen_capacity;
            if (generate->count("--season"))
                options.config.season = peertrade::parse_season(gen_season);
            if (generate->count("--seed")) options.config.seed = gen_seed;
            options.config.validate();
            options.out_path = gen_out;
            peertrade::cli::cmd_generate(options);
        }
    } catch (const peertrade::ValidationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}

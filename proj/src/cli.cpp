#include "peertrade/cli.hpp"

#include "peertrade/format.hpp"
#include "peertrade/pricing.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace peertrade::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot open output file: " + path.string());
    }
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
    if (!out.flush()) {
        throw ValidationError("failed writing output file: " + path.string());
    }
}

std::string scenario_name(const std::filesystem::path& path, std::map<std::string, int>& used) {
    std::string stem = path.stem().string();
    if (stem.empty()) {
        stem = "scenario";
    }
    const int count = ++used[stem];
    if (count == 1) {
        return stem;
    }
    return stem + "#" + std::to_string(count);
}

double reduction_pct(double baseline, double actual) {
    if (baseline <= 1e-9) {
        return 0.0;
    }
    return (baseline - actual) / baseline * 100.0;
}

std::string join_ids(const std::vector<ProsumerId>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) {
            out += ';';
        }
        out += std::to_string(ids[i].value);
    }
    return out;
}

} // namespace

ScenarioComparison compare_scenario(std::string name, const std::vector<EnergyProfile>& profiles,
                                    const PriceConfig& prices, const EmissionsConfig& emissions) {
    const SimulationResult sim = simulate(profiles, prices, emissions);

    ScenarioComparison cmp;
    cmp.name = std::move(name);
    cmp.prosumer_count = profiles.size();
    cmp.interval_count = profiles.empty() ? 0 : profiles.front().intervals.size();
    for (const auto& profile : profiles) {
        cmp.prosumers.push_back(profile.prosumer);
    }
    cmp.fit_cost_cents = sim.fit_cost_cents;
    cmp.p2p_cost_cents = sim.p2p_cost_cents;
    cmp.savings_cents.resize(profiles.size());
    for (std::size_t n = 0; n < profiles.size(); ++n) {
        cmp.savings_cents[n] = sim.fit_cost_cents[n] - sim.p2p_cost_cents[n];
        cmp.total_savings_cents += cmp.savings_cents[n];
    }
    cmp.p2p_co2_kg = sim.p2p_co2_kg;
    cmp.fit_co2_kg = sim.fit_co2_kg;
    cmp.total_fit_co2_kg = sim.total_fit_co2_kg;
    cmp.total_p2p_co2_kg = sim.total_p2p_co2_kg;
    cmp.co2_reduction_pct = reduction_pct(sim.total_fit_co2_kg, sim.total_p2p_co2_kg);
    cmp.cost_reduction_pct = reduction_pct(sim.total_fit_cost_cents, sim.total_p2p_cost_cents);

    const int interval_minutes = profiles.empty() ? 15 : profiles.front().interval_minutes;
    const std::size_t per_day =
        std::max<std::size_t>(1, static_cast<std::size_t>(24 * 60 / interval_minutes));
    for (std::size_t start = 0; start < cmp.interval_count; start += per_day) {
        const std::size_t end = std::min(cmp.interval_count, start + per_day);
        DailySummary day;
        day.day = static_cast<int>(start / per_day) + 1;
        for (std::size_t t = start; t < end; ++t) {
            day.fit_co2_kg += sim.fit_co2_kg[t];
            day.p2p_co2_kg += sim.p2p_co2_kg[t];
            for (std::size_t n = 0; n < profiles.size(); ++n) {
                day.p2p_cost_cents -= sim.clearings[t].flows[n].cash_cents;
                day.fit_cost_cents -= sim.fit[t].flows[n].cash_cents;
            }
        }
        day.cost_reduction_pct = reduction_pct(day.fit_cost_cents, day.p2p_cost_cents);
        day.co2_reduction_pct = reduction_pct(day.fit_co2_kg, day.p2p_co2_kg);
        cmp.days.push_back(day);
    }
    return cmp;
}

SimulationResult cmd_simulate(const SimulateOptions& options) {
    const auto profiles = load_profiles(options.scenario);
    const SimulationResult sim = simulate(profiles, options.prices, options.emissions);

    std::filesystem::create_directories(options.out_dir);

    {
        const auto path = options.out_dir / "clearings.csv";
        auto out = open_output(path);
        out << "interval,prosumer_id,scenario,p_s_cents,p_b_cents,role,quantity_kwh,"
               "p2p_cash_cents,fit_cash_cents,grid_export_kwh,grid_import_kwh,grid_cash_cents\n";
        for (std::size_t t = 0; t < sim.clearings.size(); ++t) {
            const auto& clearing = sim.clearings[t];
            const auto& fit = sim.fit[t];
            for (std::size_t n = 0; n < clearing.flows.size(); ++n) {
                const auto& flow = clearing.flows[n];
                out << t << ',' << flow.id.value << ',';
                if (clearing.quote) {
                    out << to_string(clearing.quote->scenario) << ','
                        << format_double(clearing.quote->sell_cents) << ','
                        << format_double(clearing.quote->buy_cents) << ',';
                } else {
                    out << "none,,,";
                }
                out << to_string(flow.role) << ',' << format_double(flow.quantity_kwh) << ','
                    << format_double(flow.cash_cents) << ',' << format_double(fit.flows[n].cash_cents)
                    << ',' << format_double(clearing.grid_export_kwh) << ','
                    << format_double(clearing.grid_import_kwh) << ','
                    << format_double(clearing.grid_cash_cents) << "\n";
            }
        }
        finish_output(out, path);
    }

    {
        const auto path = options.out_dir / "summary.csv";
        auto out = open_output(path);
        out << "prosumer_id,p2p_cost_cents,fit_cost_cents,savings_cents\n";
        for (std::size_t n = 0; n < profiles.size(); ++n) {
            out << profiles[n].prosumer.value << ',' << format_double(sim.p2p_cost_cents[n]) << ','
                << format_double(sim.fit_cost_cents[n]) << ','
                << format_double(sim.fit_cost_cents[n] - sim.p2p_cost_cents[n]) << "\n";
        }
        finish_output(out, path);
    }

    {
        const auto path = options.out_dir / "co2_series.csv";
        auto out = open_output(path);
        out << "interval,p2p_kg,fit_kg\n";
        for (std::size_t t = 0; t < sim.p2p_co2_kg.size(); ++t) {
            out << t << ',' << format_double(sim.p2p_co2_kg[t]) << ','
                << format_double(sim.fit_co2_kg[t]) << "\n";
        }
        finish_output(out, path);
    }

    return sim;
}

ComparisonReport cmd_compare(const CompareOptions& options) {
    if (options.scenarios.empty()) {
        throw ValidationError("compare: at least one scenario file is required");
    }

    ComparisonReport report;
    std::map<std::string, int> used_names;
    for (const auto& path : options.scenarios) {
        const auto profiles = load_profiles(path);
        report.scenarios.push_back(compare_scenario(scenario_name(path, used_names), profiles,
                                                    options.prices, options.emissions));
    }

    bool counts_differ = false;
    for (const auto& cmp : report.scenarios) {
        if (cmp.prosumer_count != report.scenarios.front().prosumer_count) {
            counts_differ = true;
        }
    }
    if (counts_differ) {
        for (const auto& cmp : report.scenarios) {
            report.scaling.push_back({cmp.name, cmp.prosumer_count, cmp.total_savings_cents,
                                      cmp.total_fit_co2_kg - cmp.total_p2p_co2_kg});
        }
        std::sort(report.scaling.begin(), report.scaling.end(),
                  [](const ScalingRow& a, const ScalingRow& b) {
                      return std::tie(a.prosumers, a.scenario) < std::tie(b.prosumers, b.scenario);
                  });
    }

    std::filesystem::create_directories(options.out_dir);

    {
        const auto path = options.out_dir / "savings_per_prosumer.csv";
        auto out = open_output(path);
        out << "scenario,prosumer_id,fit_cost_cents,p2p_cost_cents,savings_cents\n";
        for (const auto& cmp : report.scenarios) {
            for (std::size_t n = 0; n < cmp.prosumer_count; ++n) {
                out << cmp.name << ',' << cmp.prosumers[n].value << ','
                    << format_double(cmp.fit_cost_cents[n]) << ','
                    << format_double(cmp.p2p_cost_cents[n]) << ','
                    << format_double(cmp.savings_cents[n]) << "\n";
            }
        }
        finish_output(out, path);
    }

    {
        const auto path = options.out_dir / "daily_summary.csv";
        auto out = open_output(path);
        out << "scenario,day,fit_cost_cents,p2p_cost_cents,cost_reduction_pct,"
               "fit_co2_kg,p2p_co2_kg,co2_reduction_pct\n";
        for (const auto& cmp : report.scenarios) {
            for (const auto& day : cmp.days) {
                out << cmp.name << ',' << day.day << ',' << format_double(day.fit_cost_cents) << ','
                    << format_double(day.p2p_cost_cents) << ','
                    << format_double(day.cost_reduction_pct) << ',' << format_double(day.fit_co2_kg)
                    << ',' << format_double(day.p2p_co2_kg) << ','
                    << format_double(day.co2_reduction_pct) << "\n";
            }
        }
        finish_output(out, path);
    }

    {
        const auto path = options.out_dir / "co2_series.csv";
        auto out = open_output(path);
        out << "scenario,interval,p2p_kg,fit_kg\n";
        for (const auto& cmp : report.scenarios) {
            for (std::size_t t = 0; t < cmp.p2p_co2_kg.size(); ++t) {
                out << cmp.name << ',' << t << ',' << format_double(cmp.p2p_co2_kg[t]) << ','
                    << format_double(cmp.fit_co2_kg[t]) << "\n";
            }
        }
        finish_output(out, path);
    }

    if (!report.scaling.empty()) {
        const auto path = options.out_dir / "scaling.csv";
        auto out = open_output(path);
        out << "scenario,prosumers,cost_savings_cents,co2_savings_kg\n";
        for (const auto& row : report.scaling) {
            out << row.scenario << ',' << row.prosumers << ','
                << format_double(row.cost_savings_cents) << ',' << format_double(row.co2_savings_kg)
                << "\n";
        }
        finish_output(out, path);
    }

    {
        const auto path = options.out_dir / "report.txt";
        auto out = open_output(path);
        out << "P2P vs feed-in-tariff comparison\n";
        out << "prices: grid sell " << format_fixed(options.prices.grid_sell) << " c/kWh, grid buy "
            << format_fixed(options.prices.grid_buy) << " c/kWh, CO2 factor "
            << format_fixed(options.emissions.kg_per_kwh) << " kg/kWh\n";
        for (const auto& cmp : report.scenarios) {
            out << "\nscenario " << cmp.name << " (" << cmp.prosumer_count << " prosumers, "
                << cmp.interval_count << " intervals)\n";
            out << "  cost savings per prosumer (cents):\n";
            for (std::size_t n = 0; n < cmp.prosumer_count; ++n) {
                out << "    " << cmp.prosumers[n].value << ": "
                    << format_fixed(cmp.savings_cents[n]) << "\n";
            }
            out << "  total cost savings: " << format_fixed(cmp.total_savings_cents) << " cents ($"
                << format_fixed(cmp.total_savings_cents / 100.0) << ")\n";
            out << "  cost reduction: " << format_fixed(cmp.cost_reduction_pct) << "%\n";
            out << "  CO2: P2P " << format_fixed(cmp.total_p2p_co2_kg) << " kg, FiT "
                << format_fixed(cmp.total_fit_co2_kg) << " kg, reduction "
                << format_fixed(cmp.co2_reduction_pct) << "%\n";
            out << "  per day:\n";
            for (const auto& day : cmp.days) {
                out << "    day " << day.day << ": cost reduction "
                    << format_fixed(day.cost_reduction_pct) << "%, CO2 reduction "
                    << format_fixed(day.co2_reduction_pct) << "%\n";
            }
        }
        if (!report.scaling.empty()) {
            out << "\nscaling (prosumers -> total savings)\n";
            for (const auto& row : report.scaling) {
                out << "  " << row.scenario << ": " << row.prosumers << " prosumers, $"
                    << format_fixed(row.cost_savings_cents / 100.0) << ", "
                    << format_fixed(row.co2_savings_kg) << " kg CO2\n";
            }
        }
        finish_output(out, path);
    }

    return report;
}

CoalitionAnalysis cmd_coalition(const CoalitionOptions& options) {
    const auto profiles = load_profiles(options.scenario);
    const std::size_t horizon = profiles.front().intervals.size();
    if (options.interval >= horizon) {
        std::ostringstream msg;
        msg << "coalition: interval " << options.interval << " out of range (scenario has "
            << horizon << " intervals)";
        throw ValidationError(msg.str());
    }

    CoalitionAnalysis analysis;
    analysis.interval = options.interval;

    CoalitionGame game;
    game.prices = options.prices;
    for (const auto& player : positions_at(profiles, options.interval)) {
        if (player.position.is_idle()) {
            analysis.idle.push_back(player.id);
        } else {
            game.players.push_back(player);
        }
    }
    analysis.players = game.players;

    if (game.players.size() > static_cast<std::size_t>(std::max(options.core_cap, 0))) {
        std::ostringstream msg;
        msg << "coalition: " << game.players.size()
            << " active prosumers at interval " << options.interval
            << " exceeds the brute-force cap of " << options.core_cap << "; not checked";
        throw ValidationError(msg.str());
    }

    double surplus = 0.0;
    double demand = 0.0;
    for (const auto& player : game.players) {
        surplus += player.position.surplus_kwh;
        demand += player.position.deficit_kwh;
    }
    analysis.quote = quote(options.prices, surplus, demand);

    analysis.superadditivity = check_superadditive(game, options.core_cap);
    analysis.settlement = settlement_allocation(game);
    analysis.settlement_core = check_core(game, analysis.settlement, options.core_cap);
    analysis.witness = core_witness(game);
    analysis.witness_core = check_core(game, analysis.witness, options.core_cap);

    const CoalitionMask grand = grand_coalition(game);
    for (CoalitionMask mask = 0; mask <= grand; ++mask) {
        SubsetRow row;
        row.mask = mask;
        for (std::size_t i = 0; i < game.players.size(); ++i) {
            if (mask & (CoalitionMask{1} << i)) {
                row.members.push_back(game.players[i].id);
                row.net_kwh += game.players[i].position.net_kwh();
                row.settlement_cents += analysis.settlement.payoff_cents[i];
                row.witness_cents += analysis.witness.payoff_cents[i];
            }
        }
        row.value_cents = coalition_value(game, mask);
        row.settlement_violation = row.settlement_cents < row.value_cents - kCoreToleranceCents;
        analysis.subsets.push_back(std::move(row));
        if (mask == grand) {
            break; // grand may be the max mask value; avoid wrap
        }
    }

    std::filesystem::create_directories(options.out_dir);

    {
        const auto path = options.out_dir / "subsets.csv";
        auto out = open_output(path);
        out << "subset_mask,members,net_kwh,value_cents,settlement_cents,witness_cents,"
               "settlement_violation\n";
        for (const auto& row : analysis.subsets) {
            out << row.mask << ',' << join_ids(row.members) << ',' << format_double(row.net_kwh)
                << ',' << format_double(row.value_cents) << ','
                << format_double(row.settlement_cents) << ',' << format_double(row.witness_cents)
                << ',' << (row.settlement_violation ? 1 : 0) << "\n";
        }
        finish_output(out, path);
    }

    {
        const auto path = options.out_dir / "coalition_report.txt";
        auto out = open_output(path);
        out << "coalition analysis, interval " << options.interval << "\n";
        out << "players (" << analysis.players.size() << "):";
        for (const auto& player : analysis.players) {
            out << " " << player.id.value << (player.position.surplus_kwh > 0.0 ? " sells " : " buys ")
                << format_fixed(player.position.surplus_kwh > 0.0 ? player.position.surplus_kwh
                                                                  : player.position.deficit_kwh, 3)
                << " kWh;";
        }
        out << "\n";
        if (!analysis.idle.empty()) {
            out << "idle prosumers excluded from the game: " << join_ids(analysis.idle) << "\n";
        }
        if (analysis.quote) {
            out << "quote: " << to_string(analysis.quote->scenario) << ", p_s "
                << format_fixed(analysis.quote->sell_cents) << " c/kWh, p_b "
                << format_fixed(analysis.quote->buy_cents) << " c/kWh\n";
        } else {
            out << "quote: none (no trade this interval)\n";
        }
        out << "superadditive: " << (analysis.superadditivity.holds ? "yes" : "NO") << "\n";
        if (analysis.superadditivity.counterexample) {
            const auto& ce = *analysis.superadditivity.counterexample;
            out << "  counterexample: v(" << ce.lhs << ")=" << format_fixed(ce.value_lhs) << ", v("
                << ce.rhs << ")=" << format_fixed(ce.value_rhs) << ", v(union)="
                << format_fixed(ce.value_union) << "\n";
        }
        out << "settlement allocation (cents):";
        for (std::size_t i = 0; i < analysis.players.size(); ++i) {
            out << " " << analysis.players[i].id.value << "="
                << format_fixed(analysis.settlement.payoff_cents[i]) << ";";
        }
        out << "\n";
        out << "settlement in core: " << (analysis.settlement_core.in_core ? "yes" : "no") << "\n";
        for (const auto& violation : analysis.settlement_core.violations) {
            std::vector<ProsumerId> members;
            for (std::size_t i = 0; i < analysis.players.size(); ++i) {
                if (violation.subset & (CoalitionMask{1} << i)) {
                    members.push_back(analysis.players[i].id);
                }
            }
            out << "  violated by {" << join_ids(members) << "}: allocated "
                << format_fixed(violation.allocated_cents) << " < value "
                << format_fixed(violation.value_cents) << "\n";
        }
        out << "core witness allocation (cents):";
        for (std::size_t i = 0; i < analysis.players.size(); ++i) {
            out << " " << analysis.players[i].id.value << "="
                << format_fixed(analysis.witness.payoff_cents[i]) << ";";
        }
        out << "\n";
        out << "witness in core: " << (analysis.witness_core.in_core ? "yes" : "no") << "\n";
        finish_output(out, path);
    }

    return analysis;
}

void cmd_generate(const GenerateOptions& options) {
    const auto profiles = generate_synthetic(options.config);
    if (options.out_path.has_parent_path()) {
        std::filesystem::create_directories(options.out_path.parent_path());
    }
    write_profiles(options.out_path, profiles);
}

} // namespace peertrade::cli

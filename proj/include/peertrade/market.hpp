#pragma once

// Per-interval clearing and settlement. Prosumers trade surplus among
// themselves at the mid-market quote first; the grid absorbs or supplies the
// community residual at its own tariffs. The feed-in-tariff baseline settles
// every prosumer against the grid individually.

#include "peertrade/model.hpp"
#include "peertrade/pricing.hpp"

#include <optional>
#include <vector>

namespace peertrade {

enum class TradeRole { Idle, Seller, Buyer };

const char* to_string(TradeRole role);

struct ProsumerFlow {
    ProsumerId id;
    TradeRole role = TradeRole::Idle;
    double quantity_kwh = 0.0; // surplus sold or deficit bought
    double cash_cents = 0.0;   // signed, positive = prosumer receives
};

struct IntervalClearing {
    std::size_t interval = 0;
    std::optional<PriceQuote> quote; // absent when every prosumer is idle
    std::vector<ProsumerFlow> flows; // one per prosumer, input order
    double total_surplus_kwh = 0.0;
    double total_demand_kwh = 0.0;
    double matched_kwh = 0.0;     // min(S, D), reporting only
    double grid_export_kwh = 0.0; // [S - D]+
    double grid_import_kwh = 0.0; // [D - S]+
    double grid_cash_cents = 0.0; // received by the grid; balances prosumer flows
};

// Feed-in-tariff settlement of the same interval: each prosumer nets its own
// meter, then exports at grid_buy or imports at grid_sell.
struct FitInterval {
    std::vector<ProsumerFlow> flows;
    double grid_export_kwh = 0.0; // sum of individual surpluses
    double grid_import_kwh = 0.0; // sum of individual deficits
    double grid_cash_cents = 0.0;
};

struct SimulationResult {
    std::vector<IntervalClearing> clearings;
    std::vector<FitInterval> fit;

    // Accumulated per-prosumer cost (positive = net expense), profile order.
    std::vector<double> p2p_cost_cents;
    std::vector<double> fit_cost_cents;

    // Grid-import emissions per interval and in total.
    std::vector<double> p2p_co2_kg;
    std::vector<double> fit_co2_kg;
    double total_p2p_co2_kg = 0.0;
    double total_fit_co2_kg = 0.0;
    double total_p2p_cost_cents = 0.0;
    double total_fit_cost_cents = 0.0;
};

IntervalClearing clear_interval(std::size_t interval, const std::vector<PlayerPosition>& positions,
                                const PriceConfig& prices);

FitInterval fit_interval(const std::vector<PlayerPosition>& positions, const PriceConfig& prices);

double grid_emissions_kg(double grid_import_kwh, const EmissionsConfig& emissions);

// Clears every interval under both schemes and accumulates costs and CO2.
// Deterministic: identical inputs produce identical results.
SimulationResult simulate(const std::vector<EnergyProfile>& profiles, const PriceConfig& prices,
                          const EmissionsConfig& emissions);

} // namespace peertrade

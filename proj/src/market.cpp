#include "peertrade/market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace peertrade {

const char* to_string(TradeRole role) {
    switch (role) {
    case TradeRole::Idle: return "idle";
    case TradeRole::Seller: return "seller";
    case TradeRole::Buyer: return "buyer";
    }
    return "unknown";
}

IntervalClearing clear_interval(std::size_t interval, const std::vector<PlayerPosition>& positions,
                                const PriceConfig& prices) {
    prices.validate();

    IntervalClearing clearing;
    clearing.interval = interval;
    clearing.flows.reserve(positions.size());

    double surplus = 0.0;
    double demand = 0.0;
    for (const auto& player : positions) {
        surplus += player.position.surplus_kwh;
        demand += player.position.deficit_kwh;
    }
    clearing.total_surplus_kwh = surplus;
    clearing.total_demand_kwh = demand;
    clearing.matched_kwh = std::min(surplus, demand);
    clearing.grid_export_kwh = std::max(0.0, surplus - demand);
    clearing.grid_import_kwh = std::max(0.0, demand - surplus);

    clearing.quote = quote(prices, surplus, demand);
    const double sell = clearing.quote ? clearing.quote->sell_cents : 0.0;
    const double buy = clearing.quote ? clearing.quote->buy_cents : 0.0;

    for (const auto& player : positions) {
        ProsumerFlow flow;
        flow.id = player.id;
        if (player.position.surplus_kwh > 0.0) {
            flow.role = TradeRole::Seller;
            flow.quantity_kwh = player.position.surplus_kwh;
            flow.cash_cents = sell * player.position.surplus_kwh;
        } else if (player.position.deficit_kwh > 0.0) {
            flow.role = TradeRole::Buyer;
            flow.quantity_kwh = player.position.deficit_kwh;
            flow.cash_cents = -buy * player.position.deficit_kwh;
        }
        clearing.flows.push_back(flow);
    }

    clearing.grid_cash_cents =
        prices.grid_sell * clearing.grid_import_kwh - prices.grid_buy * clearing.grid_export_kwh;
    return clearing;
}

FitInterval fit_interval(const std::vector<PlayerPosition>& positions, const PriceConfig& prices) {
    prices.validate();

    FitInterval result;
    result.flows.reserve(positions.size());
    for (const auto& player : positions) {
        ProsumerFlow flow;
        flow.id = player.id;
        if (player.position.surplus_kwh > 0.0) {
            flow.role = TradeRole::Seller;
            flow.quantity_kwh = player.position.surplus_kwh;
            flow.cash_cents = prices.grid_buy * player.position.surplus_kwh;
            result.grid_export_kwh += player.position.surplus_kwh;
        } else if (player.position.deficit_kwh > 0.0) {
            flow.role = TradeRole::Buyer;
            flow.quantity_kwh = player.position.deficit_kwh;
            flow.cash_cents = -prices.grid_sell * player.position.deficit_kwh;
            result.grid_import_kwh += player.position.deficit_kwh;
        }
        result.flows.push_back(flow);
    }
    result.grid_cash_cents =
        prices.grid_sell * result.grid_import_kwh - prices.grid_buy * result.grid_export_kwh;
    return result;
}

double grid_emissions_kg(double grid_import_kwh, const EmissionsConfig& emissions) {
    emissions.validate();
    if (!std::isfinite(grid_import_kwh) || grid_import_kwh < 0.0) {
        std::ostringstream msg;
        msg << "emissions: grid import must be finite and >= 0, got " << grid_import_kwh;
        throw ValidationError(msg.str());
    }
    return grid_import_kwh * emissions.kg_per_kwh;
}

SimulationResult simulate(const std::vector<EnergyProfile>& profiles, const PriceConfig& prices,
                          const EmissionsConfig& emissions) {
    prices.validate();
    emissions.validate();
    validate_profiles(profiles);

    const std::size_t horizon = profiles.empty() ? 0 : profiles.front().intervals.size();

    SimulationResult result;
    result.clearings.reserve(horizon);
    result.fit.reserve(horizon);
    result.p2p_co2_kg.reserve(horizon);
    result.fit_co2_kg.reserve(horizon);
    result.p2p_cost_cents.assign(profiles.size(), 0.0);
    result.fit_cost_cents.assign(profiles.size(), 0.0);

    for (std::size_t t = 0; t < horizon; ++t) {
        const auto positions = positions_at(profiles, t);
        auto clearing = clear_interval(t, positions, prices);
        auto fit = fit_interval(positions, prices);

        for (std::size_t n = 0; n < profiles.size(); ++n) {
            result.p2p_cost_cents[n] -= clearing.flows[n].cash_cents;
            result.fit_cost_cents[n] -= fit.flows[n].cash_cents;
        }

        const double p2p_kg = grid_emissions_kg(clearing.grid_import_kwh, emissions);
        const double fit_kg = grid_emissions_kg(fit.grid_import_kwh, emissions);
        result.p2p_co2_kg.push_back(p2p_kg);
        result.fit_co2_kg.push_back(fit_kg);
        result.total_p2p_co2_kg += p2p_kg;
        result.total_fit_co2_kg += fit_kg;

        result.clearings.push_back(std::move(clearing));
        result.fit.push_back(std::move(fit));
    }

    for (std::size_t n = 0; n < profiles.size(); ++n) {
        result.total_p2p_cost_cents += result.p2p_cost_cents[n];
        result.total_fit_cost_cents += result.fit_cost_cents[n];
    }
    return result;
}

} // namespace peertrade

#include "peertrade/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace peertrade {

const char* to_string(MarketScenario scenario) {
    switch (scenario) {
    case MarketScenario::Balanced: return "balanced";
    case MarketScenario::NetSurplus: return "net_surplus";
    case MarketScenario::NetDeficit: return "net_deficit";
    }
    return "unknown";
}

static void check_totals(double total_surplus_kwh, double total_demand_kwh) {
    if (!std::isfinite(total_surplus_kwh) || total_surplus_kwh < 0.0) {
        std::ostringstream msg;
        msg << "market totals: surplus must be finite and >= 0, got " << total_surplus_kwh;
        throw ValidationError(msg.str());
    }
    if (!std::isfinite(total_demand_kwh) || total_demand_kwh < 0.0) {
        std::ostringstream msg;
        msg << "market totals: demand must be finite and >= 0, got " << total_demand_kwh;
        throw ValidationError(msg.str());
    }
}

MarketScenario classify(double total_surplus_kwh, double total_demand_kwh) {
    check_totals(total_surplus_kwh, total_demand_kwh);
    const double gap = total_surplus_kwh - total_demand_kwh;
    if (gap > kBalanceToleranceKwh) {
        return MarketScenario::NetSurplus;
    }
    if (gap < -kBalanceToleranceKwh) {
        return MarketScenario::NetDeficit;
    }
    return MarketScenario::Balanced;
}

std::optional<PriceQuote> quote(const PriceConfig& prices, double total_surplus_kwh,
                                double total_demand_kwh) {
    prices.validate();
    const MarketScenario scenario = classify(total_surplus_kwh, total_demand_kwh);
    if (total_surplus_kwh == 0.0 && total_demand_kwh == 0.0) {
        return std::nullopt;
    }

    const double mid = prices.mid();
    PriceQuote result;
    result.mid_cents = mid;
    result.scenario = scenario;

    switch (scenario) {
    case MarketScenario::Balanced:
        result.sell_cents = mid;
        result.buy_cents = mid;
        break;
    case MarketScenario::NetSurplus: {
        const double residual = total_surplus_kwh - total_demand_kwh;
        const double sell = (mid * total_demand_kwh + prices.grid_buy * residual) / total_surplus_kwh;
        // Convex combination of mid and grid_buy; clamp float noise back in.
        result.sell_cents = std::clamp(sell, prices.grid_buy, mid);
        result.buy_cents = mid;
        break;
    }
    case MarketScenario::NetDeficit: {
        const double residual = total_demand_kwh - total_surplus_kwh;
        const double buy = (mid * total_surplus_kwh + prices.grid_sell * residual) / total_demand_kwh;
        result.sell_cents = mid;
        result.buy_cents = std::clamp(buy, mid, prices.grid_sell);
        break;
    }
    }
    return result;
}

} // namespace peertrade

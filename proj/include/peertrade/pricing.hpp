#pragma once

// Mid-market-rate price engine. The community trades internally at prices
// anchored to the midpoint of the grid tariffs; whichever side of the market
// is long gets its price pulled toward the matching grid tariff so that the
// community books balance against the grid exactly.

#include "peertrade/model.hpp"

#include <optional>

namespace peertrade {

enum class MarketScenario {
    Balanced,   // total surplus == total demand
    NetSurplus, // community exports the residual at grid_buy
    NetDeficit, // community imports the residual at grid_sell
};

const char* to_string(MarketScenario scenario);

struct PriceQuote {
    double sell_cents = 0.0; // p_s, paid to each seller per kWh
    double buy_cents = 0.0;  // p_b, charged to each buyer per kWh
    double mid_cents = 0.0;
    MarketScenario scenario = MarketScenario::Balanced;
};

// Classification tolerance around S == D, in kWh.
inline constexpr double kBalanceToleranceKwh = 1e-9;

// Buckets the aggregate market state by sign of S - D.
// Throws ValidationError on negative or non-finite totals.
MarketScenario classify(double total_surplus_kwh, double total_demand_kwh);

// Computes the interval quote from aggregate surplus S and demand D.
//
//   Balanced:   p_s = p_b = mid
//   NetSurplus: p_b = mid, p_s = (p_b*D + grid_buy*(S-D)) / S
//   NetDeficit: p_s = mid, p_b = (p_s*S + grid_sell*(D-S)) / D
//
// Returns nullopt when S == D == 0 (no market this interval). The result
// always satisfies grid_buy <= p_s <= mid <= p_b <= grid_sell.
std::optional<PriceQuote> quote(const PriceConfig& prices, double total_surplus_kwh,
                                double total_demand_kwh);

} // namespace peertrade

#pragma once

// Shared domain types: prosumer profiles, net meter positions, tariffs and
// the emissions factor. All quantities are kWh per interval, all money is
// in cents per kWh; the core never converts units.

#include "peertrade/errors.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace peertrade {

struct ProsumerId {
    std::uint32_t value = 0;

    auto operator<=>(const ProsumerId&) const = default;
};

struct IntervalReading {
    double generation_kwh = 0.0;
    double demand_kwh = 0.0;
};

struct EnergyProfile {
    ProsumerId prosumer;
    std::vector<IntervalReading> intervals;
    int interval_minutes = 15;
};

// Net meter position of one prosumer in one interval. At most one side is
// nonzero: surplus = [gen - dem]+, deficit = [dem - gen]+.
struct NetPosition {
    double surplus_kwh = 0.0;
    double deficit_kwh = 0.0;

    double net_kwh() const { return surplus_kwh - deficit_kwh; }
    bool is_idle() const { return surplus_kwh == 0.0 && deficit_kwh == 0.0; }
};

struct PlayerPosition {
    ProsumerId id;
    NetPosition position;
};

// Grid tariffs in cents/kWh. grid_sell is what prosumers pay the grid for
// imports, grid_buy is the feed-in tariff the grid pays for exports.
// Defaults follow retail prices in Brisbane, Australia.
struct PriceConfig {
    double grid_sell = 24.6;
    double grid_buy = 10.0;

    double mid() const { return 0.5 * (grid_sell + grid_buy); }

    // Requires grid_sell > grid_buy > 0.
    void validate() const;
};

// Carbon intensity of grid-supplied energy (natural-gas generation).
struct EmissionsConfig {
    double kg_per_kwh = 0.55;

    void validate() const;
};

// Derives the net position from metered generation and demand.
// Throws ValidationError on negative or non-finite input.
NetPosition net_position(double generation_kwh, double demand_kwh);

// Checks one scenario's profiles: every quantity finite and non-negative,
// all profiles the same length and interval resolution, ids unique.
// Error messages name the offending prosumer and interval.
void validate_profiles(const std::vector<EnergyProfile>& profiles);

// Net positions of all prosumers at one interval, in profile order.
// Profiles are assumed validated.
std::vector<PlayerPosition> positions_at(const std::vector<EnergyProfile>& profiles,
                                         std::size_t interval);

} // namespace peertrade

#include "peertrade/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace peertrade {

void PriceConfig::validate() const {
    if (!std::isfinite(grid_sell) || !std::isfinite(grid_buy)) {
        throw ValidationError("price config: tariffs must be finite");
    }
    if (!(grid_sell > grid_buy && grid_buy > 0.0)) {
        std::ostringstream msg;
        msg << "price config: requires grid_sell > grid_buy > 0, got grid_sell=" << grid_sell
            << " grid_buy=" << grid_buy;
        throw ValidationError(msg.str());
    }
}

void EmissionsConfig::validate() const {
    if (!std::isfinite(kg_per_kwh) || kg_per_kwh < 0.0) {
        std::ostringstream msg;
        msg << "emissions config: kg_per_kwh must be finite and >= 0, got " << kg_per_kwh;
        throw ValidationError(msg.str());
    }
}

NetPosition net_position(double generation_kwh, double demand_kwh) {
    if (!std::isfinite(generation_kwh) || generation_kwh < 0.0) {
        std::ostringstream msg;
        msg << "net position: generation must be finite and >= 0, got " << generation_kwh;
        throw ValidationError(msg.str());
    }
    if (!std::isfinite(demand_kwh) || demand_kwh < 0.0) {
        std::ostringstream msg;
        msg << "net position: demand must be finite and >= 0, got " << demand_kwh;
        throw ValidationError(msg.str());
    }
    return NetPosition{std::max(0.0, generation_kwh - demand_kwh),
                       std::max(0.0, demand_kwh - generation_kwh)};
}

void validate_profiles(const std::vector<EnergyProfile>& profiles) {
    if (profiles.empty()) {
        return;
    }
    std::set<std::uint32_t> seen_ids;
    const std::size_t horizon = profiles.front().intervals.size();
    const int resolution = profiles.front().interval_minutes;
    for (const auto& profile : profiles) {
        if (!seen_ids.insert(profile.prosumer.value).second) {
            std::ostringstream msg;
            msg << "profiles: duplicate prosumer id " << profile.prosumer.value;
            throw ValidationError(msg.str());
        }
        if (profile.interval_minutes <= 0) {
            std::ostringstream msg;
            msg << "prosumer " << profile.prosumer.value << ": interval length must be positive, got "
                << profile.interval_minutes;
            throw ValidationError(msg.str());
        }
        if (profile.interval_minutes != resolution) {
            std::ostringstream msg;
            msg << "prosumer " << profile.prosumer.value << ": interval length " << profile.interval_minutes
                << " differs from " << resolution << " used by prosumer " << profiles.front().prosumer.value;
            throw ValidationError(msg.str());
        }
        if (profile.intervals.size() != horizon) {
            std::ostringstream msg;
            msg << "prosumer " << profile.prosumer.value << ": has " << profile.intervals.size()
                << " intervals, expected " << horizon << " (ragged scenario)";
            throw ValidationError(msg.str());
        }
        for (std::size_t i = 0; i < profile.intervals.size(); ++i) {
            const auto& reading = profile.intervals[i];
            try {
                net_position(reading.generation_kwh, reading.demand_kwh);
            } catch (const ValidationError& err) {
                std::ostringstream msg;
                msg << "prosumer " << profile.prosumer.value << ", interval " << i << ": " << err.what();
                throw ValidationError(msg.str());
            }
        }
    }
}

std::vector<PlayerPosition> positions_at(const std::vector<EnergyProfile>& profiles,
                                         std::size_t interval) {
    std::vector<PlayerPosition> out;
    out.reserve(profiles.size());
    for (const auto& profile : profiles) {
        const auto& reading = profile.intervals.at(interval);
        out.push_back({profile.prosumer, net_position(reading.generation_kwh, reading.demand_kwh)});
    }
    return out;
}

} // namespace peertrade

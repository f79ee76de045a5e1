#include "peertrade/coalition.hpp"

#include "peertrade/pricing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace peertrade {

namespace {

void check_game(const CoalitionGame& game) {
    game.prices.validate();
    for (std::size_t i = 0; i < game.players.size(); ++i) {
        for (std::size_t j = i + 1; j < game.players.size(); ++j) {
            if (game.players[i].id == game.players[j].id) {
                std::ostringstream msg;
                msg << "coalition game: duplicate player id " << game.players[i].id.value;
                throw ValidationError(msg.str());
            }
        }
    }
}

void check_cap(const CoalitionGame& game, int cap) {
    if (cap < 0 || cap > 31) {
        std::ostringstream msg;
        msg << "coalition game: brute-force cap " << cap << " outside supported range [0, 31]";
        throw ValidationError(msg.str());
    }
    if (game.players.size() > static_cast<std::size_t>(cap)) {
        std::ostringstream msg;
        msg << "coalition game: " << game.players.size()
            << " players exceeds the brute-force cap of " << cap << "; not checked";
        throw ValidationError(msg.str());
    }
}

double value_of_net(const PriceConfig& prices, double net_kwh) {
    return prices.grid_buy * std::max(0.0, net_kwh) - prices.grid_sell * std::max(0.0, -net_kwh);
}

// net_kwh[mask] for every subset, built by peeling the lowest bit.
std::vector<double> subset_nets(const CoalitionGame& game) {
    const std::size_t count = game.players.size();
    std::vector<double> nets(std::size_t{1} << count, 0.0);
    for (CoalitionMask mask = 1; mask < nets.size(); ++mask) {
        const int low = std::countr_zero(mask);
        nets[mask] = nets[mask & (mask - 1)] + game.players[static_cast<std::size_t>(low)].position.net_kwh();
    }
    return nets;
}

double subset_sum(const Allocation& allocation, CoalitionMask mask) {
    double total = 0.0;
    for (std::size_t i = 0; i < allocation.payoff_cents.size(); ++i) {
        if (mask & (CoalitionMask{1} << i)) {
            total += allocation.payoff_cents[i];
        }
    }
    return total;
}

} // namespace

double coalition_value(const CoalitionGame& game, CoalitionMask subset) {
    check_game(game);
    if (game.players.size() > 31) {
        throw ValidationError("coalition game: more than 31 players not supported");
    }
    const CoalitionMask grand = grand_coalition(game);
    if (subset & ~grand) {
        std::ostringstream msg;
        msg << "coalition value: subset mask " << subset << " refers to players outside the game";
        throw ValidationError(msg.str());
    }
    double net = 0.0;
    for (std::size_t i = 0; i < game.players.size(); ++i) {
        if (subset & (CoalitionMask{1} << i)) {
            net += game.players[i].position.net_kwh();
        }
    }
    return value_of_net(game.prices, net);
}

double coalition_value(const CoalitionGame& game, const std::vector<ProsumerId>& subset) {
    CoalitionMask mask = 0;
    for (const auto& id : subset) {
        const auto it = std::find_if(game.players.begin(), game.players.end(),
                                     [&](const PlayerPosition& p) { return p.id == id; });
        if (it == game.players.end()) {
            std::ostringstream msg;
            msg << "coalition value: prosumer " << id.value << " is not a player in this game";
            throw ValidationError(msg.str());
        }
        mask |= CoalitionMask{1} << std::distance(game.players.begin(), it);
    }
    return coalition_value(game, mask);
}

CoalitionMask grand_coalition(const CoalitionGame& game) {
    if (game.players.empty()) {
        return 0;
    }
    return static_cast<CoalitionMask>((std::uint64_t{1} << game.players.size()) - 1);
}

SuperadditivityReport check_superadditive(const CoalitionGame& game, int cap) {
    check_game(game);
    check_cap(game, cap);

    const auto nets = subset_nets(game);
    const auto value = [&](CoalitionMask m) { return value_of_net(game.prices, nets[m]); };
    const CoalitionMask grand = grand_coalition(game);

    SuperadditivityReport report;
    for (CoalitionMask lhs = 1; lhs <= grand && grand != 0; ++lhs) {
        const CoalitionMask rest = grand & ~lhs;
        // Enumerate nonempty submasks of the complement.
        for (CoalitionMask rhs = rest; rhs != 0; rhs = (rhs - 1) & rest) {
            const double v_lhs = value(lhs);
            const double v_rhs = value(rhs);
            const double v_union = value(lhs | rhs);
            if (v_union < v_lhs + v_rhs - kCoreToleranceCents) {
                report.holds = false;
                report.counterexample = {lhs, rhs, v_lhs, v_rhs, v_union};
                return report;
            }
        }
    }
    return report;
}

Allocation settlement_allocation(const CoalitionGame& game) {
    check_game(game);

    double surplus = 0.0;
    double demand = 0.0;
    for (const auto& player : game.players) {
        surplus += player.position.surplus_kwh;
        demand += player.position.deficit_kwh;
    }
    const auto interval_quote = quote(game.prices, surplus, demand);
    const double sell = interval_quote ? interval_quote->sell_cents : 0.0;
    const double buy = interval_quote ? interval_quote->buy_cents : 0.0;

    Allocation allocation;
    allocation.payoff_cents.reserve(game.players.size());
    double total = 0.0;
    for (const auto& player : game.players) {
        const double payoff =
            sell * player.position.surplus_kwh - buy * player.position.deficit_kwh;
        allocation.payoff_cents.push_back(payoff);
        total += payoff;
    }

    const double grand_value = value_of_net(game.prices, surplus - demand);
    if (std::abs(total - grand_value) > 1e-6) {
        std::ostringstream msg;
        msg << "settlement allocation lost efficiency: payoffs sum to " << total
            << " but the grand coalition is worth " << grand_value;
        throw std::logic_error(msg.str());
    }
    return allocation;
}

CoreReport check_core(const CoalitionGame& game, const Allocation& allocation, int cap) {
    check_game(game);
    check_cap(game, cap);
    if (allocation.payoff_cents.size() != game.players.size()) {
        std::ostringstream msg;
        msg << "core check: allocation has " << allocation.payoff_cents.size()
            << " payoffs for " << game.players.size() << " players";
        throw ValidationError(msg.str());
    }

    const auto nets = subset_nets(game);
    const CoalitionMask grand = grand_coalition(game);

    const double grand_value = value_of_net(game.prices, game.players.empty() ? 0.0 : nets[grand]);
    if (std::abs(subset_sum(allocation, grand) - grand_value) > kCoreToleranceCents) {
        std::ostringstream msg;
        msg << "core check: allocation is not efficient (sums to " << subset_sum(allocation, grand)
            << ", grand coalition worth " << grand_value << ")";
        throw ValidationError(msg.str());
    }

    CoreReport report;
    for (CoalitionMask mask = 1; mask <= grand && grand != 0; ++mask) {
        const double value = value_of_net(game.prices, nets[mask]);
        const double allocated = subset_sum(allocation, mask);
        if (allocated < value - kCoreToleranceCents) {
            report.violations.push_back({mask, value, allocated});
        }
    }
    report.in_core = report.violations.empty();
    return report;
}

Allocation core_witness(const CoalitionGame& game) {
    check_game(game);

    double net = 0.0;
    for (const auto& player : game.players) {
        net += player.position.net_kwh();
    }

    double price = game.prices.mid();
    if (net > kBalanceToleranceKwh) {
        price = game.prices.grid_buy;
    } else if (net < -kBalanceToleranceKwh) {
        price = game.prices.grid_sell;
    }

    Allocation witness;
    witness.payoff_cents.reserve(game.players.size());
    for (const auto& player : game.players) {
        witness.payoff_cents.push_back(price * player.position.net_kwh());
    }
    return witness;
}

} // namespace peertrade

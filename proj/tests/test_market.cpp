#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "peertrade/market.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <numeric>

using namespace peertrade;
using test::near;

namespace {

std::vector<PlayerPosition> positions_from(std::initializer_list<double> nets) {
    std::vector<PlayerPosition> out;
    std::uint32_t id = 0;
    for (const double net : nets) {
        NetPosition position;
        if (net >= 0.0) {
            position.surplus_kwh = net;
        } else {
            position.deficit_kwh = -net;
        }
        out.push_back({ProsumerId{id++}, position});
    }
    return out;
}

double prosumer_cash_sum(const std::vector<ProsumerFlow>& flows) {
    return std::accumulate(flows.begin(), flows.end(), 0.0,
                           [](double acc, const ProsumerFlow& f) { return acc + f.cash_cents; });
}

} // namespace

TEST_CASE("clearing the net-surplus example") {
    const PriceConfig prices;
    const auto clearing = clear_interval(0, positions_from({2.0, 3.0, -2.0}), prices);

    REQUIRE(clearing.quote.has_value());
    CHECK(near(clearing.quote->sell_cents, 12.92));
    CHECK(near(clearing.quote->buy_cents, 17.3));

    REQUIRE(clearing.flows.size() == 3);
    CHECK(clearing.flows[0].role == TradeRole::Seller);
    CHECK(near(clearing.flows[0].cash_cents, 25.84));
    CHECK(near(clearing.flows[1].cash_cents, 38.76));
    CHECK(clearing.flows[2].role == TradeRole::Buyer);
    CHECK(near(clearing.flows[2].cash_cents, -34.60));

    CHECK(near(clearing.grid_export_kwh, 3.0));
    CHECK(clearing.grid_import_kwh == 0.0);
    CHECK(near(clearing.grid_cash_cents, -30.0)); // grid pays for the export
    CHECK(near(clearing.matched_kwh, 2.0));
    CHECK(near(prosumer_cash_sum(clearing.flows) + clearing.grid_cash_cents, 0.0));
}

TEST_CASE("clearing the net-deficit example") {
    const PriceConfig prices;
    const auto clearing = clear_interval(0, positions_from({2.0, -3.0, -2.0}), prices);

    REQUIRE(clearing.quote.has_value());
    CHECK(near(clearing.quote->sell_cents, 17.3));
    CHECK(near(clearing.quote->buy_cents, 21.68));

    CHECK(near(clearing.flows[0].cash_cents, 34.60));
    CHECK(near(clearing.flows[1].cash_cents, -65.04));
    CHECK(near(clearing.flows[2].cash_cents, -43.36));

    CHECK(clearing.grid_export_kwh == 0.0);
    CHECK(near(clearing.grid_import_kwh, 3.0));
    CHECK(near(clearing.grid_cash_cents, 73.80));
    CHECK(near(prosumer_cash_sum(clearing.flows) + clearing.grid_cash_cents, 0.0));
}

TEST_CASE("an all-idle interval clears empty") {
    const auto clearing = clear_interval(5, positions_from({0.0, 0.0}), PriceConfig{});
    CHECK_FALSE(clearing.quote.has_value());
    CHECK(clearing.grid_export_kwh == 0.0);
    CHECK(clearing.grid_import_kwh == 0.0);
    CHECK(clearing.grid_cash_cents == 0.0);
    for (const auto& flow : clearing.flows) {
        CHECK(flow.role == TradeRole::Idle);
        CHECK(flow.cash_cents == 0.0);
    }
}

TEST_CASE("feed-in-tariff settlement") {
    const PriceConfig prices;

    const auto seller = fit_interval(positions_from({2.0}), prices);
    CHECK(near(seller.flows[0].cash_cents, 20.0));
    CHECK(near(seller.grid_export_kwh, 2.0));

    const auto buyer = fit_interval(positions_from({-2.0}), prices);
    CHECK(near(buyer.flows[0].cash_cents, -49.2));
    CHECK(near(buyer.grid_import_kwh, 2.0));

    // FiT serves every deficit from the grid even while neighbors spill surplus.
    const auto mixed_fit = fit_interval(positions_from({2.0, 3.0, -2.0}), prices);
    const auto mixed_p2p = clear_interval(0, positions_from({2.0, 3.0, -2.0}), prices);
    CHECK(near(mixed_fit.grid_import_kwh, 2.0));
    CHECK(mixed_p2p.grid_import_kwh == 0.0);
}

TEST_CASE("grid emissions") {
    const EmissionsConfig emissions;
    CHECK(near(grid_emissions_kg(4.0, emissions), 2.2));
    CHECK(grid_emissions_kg(0.0, emissions) == 0.0);
    CHECK(near(grid_emissions_kg(1.0, emissions), 0.55));
    CHECK_THROWS_AS(grid_emissions_kg(-1.0, emissions), ValidationError);
}

TEST_CASE("randomized intervals: budget, energy and rationality") {
    test::TestRng rng(0x5eed0004);
    for (int i = 0; i < 500; ++i) {
        const auto prices = test::random_prices(rng);
        const auto positions = test::random_positions(rng, 1 + rng.integer(25));
        const auto clearing = clear_interval(0, positions, prices);
        const auto fit = fit_interval(positions, prices);

        // money conservation
        CHECK(near(prosumer_cash_sum(clearing.flows) + clearing.grid_cash_cents, 0.0));
        CHECK(near(prosumer_cash_sum(fit.flows) + fit.grid_cash_cents, 0.0));

        // energy balance around the matched quantity
        CHECK(near(clearing.total_surplus_kwh, clearing.matched_kwh + clearing.grid_export_kwh));
        CHECK(near(clearing.total_demand_kwh, clearing.matched_kwh + clearing.grid_import_kwh));
        CHECK(clearing.grid_export_kwh * clearing.grid_import_kwh == 0.0);

        // every prosumer does at least as well as under FiT
        bool has_seller = false;
        bool has_buyer = false;
        for (const auto& player : positions) {
            has_seller |= player.position.surplus_kwh > 0.0;
            has_buyer |= player.position.deficit_kwh > 0.0;
        }
        for (std::size_t n = 0; n < positions.size(); ++n) {
            const double p2p = clearing.flows[n].cash_cents;
            const double fit_cash = fit.flows[n].cash_cents;
            CHECK(p2p >= fit_cash - 1e-9);
            if (clearing.flows[n].role == TradeRole::Seller && has_buyer) {
                CHECK(p2p > fit_cash);
            }
            if (clearing.flows[n].role == TradeRole::Buyer && has_seller) {
                CHECK(p2p > fit_cash);
            }
        }

        // total community gain equals the tariff spread on the matched volume
        const double gain = prosumer_cash_sum(clearing.flows) - prosumer_cash_sum(fit.flows);
        CHECK(near(gain, (prices.grid_sell - prices.grid_buy) * clearing.matched_kwh, 1e-6));

        // the P2P scheme never imports more than FiT
        CHECK(clearing.grid_import_kwh <= fit.grid_import_kwh + 1e-12);
    }
}

TEST_CASE("night intervals emit the same CO2 under both schemes") {
    test::TestRng rng(0x5eed0005);
    const EmissionsConfig emissions;
    for (int i = 0; i < 200; ++i) {
        const auto prices = test::random_prices(rng);
        const std::size_t count = 1 + rng.integer(10);
        std::vector<PlayerPosition> positions;
        for (std::uint32_t n = 0; n < count; ++n) {
            // zero generation: every prosumer is a buyer or idle
            positions.push_back(
                {ProsumerId{n}, net_position(0.0, rng.chance(0.2) ? 0.0 : rng.uniform(0.0, 3.0))});
        }
        const auto clearing = clear_interval(0, positions, prices);
        const auto fit = fit_interval(positions, prices);
        CHECK(clearing.grid_import_kwh == fit.grid_import_kwh);
        CHECK(grid_emissions_kg(clearing.grid_import_kwh, emissions) ==
              grid_emissions_kg(fit.grid_import_kwh, emissions));
    }
}

namespace {

EnergyProfile profile_of(std::uint32_t id, std::vector<IntervalReading> readings) {
    EnergyProfile profile;
    profile.prosumer = ProsumerId{id};
    profile.intervals = std::move(readings);
    return profile;
}

} // namespace

TEST_CASE("a lone prosumer gains nothing from the P2P scheme") {
    std::vector<EnergyProfile> profiles{profile_of(0, {{1.0, 0.2}, {0.0, 1.5}, {0.3, 0.3}})};
    const auto result = simulate(profiles, PriceConfig{}, EmissionsConfig{});
    CHECK(near(result.p2p_cost_cents[0], result.fit_cost_cents[0]));
    CHECK(near(result.total_p2p_co2_kg, result.total_fit_co2_kg));
}

TEST_CASE("two-interval scenario accumulates the hand-settled intervals") {
    // interval 0 replays the net-surplus example, interval 1 the net-deficit one
    std::vector<EnergyProfile> profiles{profile_of(0, {{2.0, 0.0}, {2.0, 0.0}}),
                                        profile_of(1, {{3.0, 0.0}, {0.0, 3.0}}),
                                        profile_of(2, {{0.0, 2.0}, {0.0, 2.0}})};
    const auto result = simulate(profiles, PriceConfig{}, EmissionsConfig{});

    CHECK(near(result.p2p_cost_cents[0], -(25.84 + 34.60)));
    CHECK(near(result.p2p_cost_cents[1], -(38.76 - 65.04)));
    CHECK(near(result.p2p_cost_cents[2], -(-34.60 - 43.36)));
    CHECK(near(result.fit_cost_cents[0], -40.0));
    CHECK(near(result.fit_cost_cents[1], -(30.0 - 73.8)));
    CHECK(near(result.fit_cost_cents[2], 98.4));

    // totals reconcile with the per-interval parts
    double p2p_total = 0.0;
    for (const auto& clearing : result.clearings) {
        p2p_total -= prosumer_cash_sum(clearing.flows);
    }
    CHECK(near(p2p_total, result.total_p2p_cost_cents));
}

TEST_CASE("no buyer/seller overlap means no P2P advantage") {
    test::TestRng rng(0x5eed0006);
    for (int i = 0; i < 50; ++i) {
        // per interval, everyone is on the same side of the market
        const std::size_t prosumers = 2 + rng.integer(5);
        const std::size_t horizon = 1 + rng.integer(10);
        std::vector<EnergyProfile> profiles;
        std::vector<bool> interval_sells;
        for (std::size_t t = 0; t < horizon; ++t) {
            interval_sells.push_back(rng.chance(0.5));
        }
        for (std::uint32_t n = 0; n < prosumers; ++n) {
            std::vector<IntervalReading> readings;
            for (std::size_t t = 0; t < horizon; ++t) {
                const double amount = rng.chance(0.3) ? 0.0 : rng.uniform(0.0, 4.0);
                readings.push_back(interval_sells[t] ? IntervalReading{amount, 0.0}
                                                     : IntervalReading{0.0, amount});
            }
            profiles.push_back(profile_of(n, std::move(readings)));
        }
        const auto result = simulate(profiles, PriceConfig{}, EmissionsConfig{});
        for (std::size_t n = 0; n < prosumers; ++n) {
            CHECK(near(result.p2p_cost_cents[n], result.fit_cost_cents[n]));
        }
        CHECK(near(result.total_p2p_co2_kg, result.total_fit_co2_kg));
    }
}

TEST_CASE("relabeling prosumers permutes the outputs identically") {
    std::vector<EnergyProfile> profiles{profile_of(0, {{2.0, 0.0}, {0.0, 1.0}}),
                                        profile_of(1, {{3.0, 0.0}, {1.0, 0.5}}),
                                        profile_of(2, {{0.0, 2.0}, {0.5, 2.0}})};
    auto reversed = profiles;
    std::reverse(reversed.begin(), reversed.end());

    const auto a = simulate(profiles, PriceConfig{}, EmissionsConfig{});
    const auto b = simulate(reversed, PriceConfig{}, EmissionsConfig{});

    for (std::size_t n = 0; n < profiles.size(); ++n) {
        CHECK(a.p2p_cost_cents[n] == b.p2p_cost_cents[profiles.size() - 1 - n]);
        CHECK(a.fit_cost_cents[n] == b.fit_cost_cents[profiles.size() - 1 - n]);
    }
    CHECK(a.total_p2p_co2_kg == b.total_p2p_co2_kg);
}

TEST_CASE("simulation is deterministic") {
    std::vector<EnergyProfile> profiles{profile_of(0, {{2.0, 0.1}, {0.0, 1.0}}),
                                        profile_of(1, {{0.0, 2.0}, {1.5, 0.5}})};
    const auto a = simulate(profiles, PriceConfig{}, EmissionsConfig{});
    const auto b = simulate(profiles, PriceConfig{}, EmissionsConfig{});
    for (std::size_t n = 0; n < profiles.size(); ++n) {
        CHECK(a.p2p_cost_cents[n] == b.p2p_cost_cents[n]);
    }
    for (std::size_t t = 0; t < a.clearings.size(); ++t) {
        CHECK(a.p2p_co2_kg[t] == b.p2p_co2_kg[t]);
        CHECK(a.clearings[t].grid_cash_cents == b.clearings[t].grid_cash_cents);
    }
}

TEST_CASE("simulate propagates validation errors with context") {
    std::vector<EnergyProfile> profiles{profile_of(4, {{1.0, 0.0}, {-1.0, 0.0}})};
    CHECK_THROWS_WITH_AS(simulate(profiles, PriceConfig{}, EmissionsConfig{}),
                         doctest::Contains("prosumer 4, interval 1"), ValidationError);
}

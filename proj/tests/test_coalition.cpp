#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "peertrade/coalition.hpp"

#include "oracles.hpp"

#include <bit>
#include <numeric>

using namespace peertrade;
using test::near;

namespace {

CoalitionGame game_of(std::initializer_list<double> nets, PriceConfig prices = PriceConfig{}) {
    CoalitionGame game;
    game.prices = prices;
    std::uint32_t id = 0;
    for (const double net : nets) {
        NetPosition position;
        if (net >= 0.0) {
            position.surplus_kwh = net;
        } else {
            position.deficit_kwh = -net;
        }
        game.players.push_back({ProsumerId{id++}, position});
    }
    return game;
}

CoalitionGame random_game(test::TestRng& rng, std::size_t players) {
    CoalitionGame game;
    game.prices = test::random_prices(rng);
    game.players = test::random_positions(rng, players);
    return game;
}

} // namespace

TEST_CASE("coalition value follows the net position") {
    const auto game = game_of({3.0, -3.0, 1.5, -1.5});

    CHECK(near(coalition_value(game, CoalitionMask{0b0001}), 30.0));   // net +3 at 10 c/kWh
    CHECK(near(coalition_value(game, CoalitionMask{0b0010}), -73.8));  // net -3 at 24.6 c/kWh
    CHECK(near(coalition_value(game, CoalitionMask{0b0011}), 0.0));    // balanced
    CHECK(coalition_value(game, CoalitionMask{0}) == 0.0);             // empty coalition

    CHECK(near(coalition_value(game, {ProsumerId{0}, ProsumerId{3}}), 15.0)); // net +1.5
    CHECK_THROWS_WITH_AS(coalition_value(game, {ProsumerId{9}}),
                         doctest::Contains("not a player"), ValidationError);
}

TEST_CASE("coalition value is positively homogeneous and aggregate-only") {
    test::TestRng rng(0x5eed0007);
    for (int i = 0; i < 200; ++i) {
        auto game = random_game(rng, 2 + rng.integer(6));
        const auto grand = grand_coalition(game);
        const auto mask = static_cast<CoalitionMask>(rng.integer(grand + 1));
        const double base = coalition_value(game, mask);

        const double k = rng.uniform(0.1, 10.0);
        auto scaled = game;
        for (auto& player : scaled.players) {
            player.position.surplus_kwh *= k;
            player.position.deficit_kwh *= k;
        }
        CHECK(near(coalition_value(scaled, mask), k * base, 1e-6));

        // moving surplus between two members of the subset changes nothing
        if (game.players.size() >= 2 && (mask & 0b11) == 0b11) {
            auto shuffled = game;
            const double shift = shuffled.players[0].position.surplus_kwh;
            shuffled.players[0].position.surplus_kwh = 0.0;
            shuffled.players[1].position.surplus_kwh += shift;
            CHECK(near(coalition_value(shuffled, mask), base, 1e-6));
        }
    }
}

TEST_CASE("superadditivity holds and is checked exhaustively") {
    SUBCASE("hand case: a seller and a buyer gain by merging") {
        const auto game = game_of({2.0, -2.0});
        // v({s}) = 20, v({b}) = -49.2, v(union) = 0 >= -29.2
        CHECK(near(coalition_value(game, CoalitionMask{0b01}), 20.0));
        CHECK(near(coalition_value(game, CoalitionMask{0b10}), -49.2));
        CHECK(coalition_value(game, CoalitionMask{0b11}) == 0.0);
        CHECK(check_superadditive(game).holds);
    }

    SUBCASE("all-seller partitions are exactly additive") {
        const auto game = game_of({1.0, 2.0, 3.5});
        const double whole = coalition_value(game, CoalitionMask{0b111});
        const double split = coalition_value(game, CoalitionMask{0b001}) +
                             coalition_value(game, CoalitionMask{0b110});
        CHECK(near(whole, split));
        CHECK(check_superadditive(game).holds);
    }

    SUBCASE("randomized games pass") {
        test::TestRng rng(0x5eed0008);
        for (int i = 0; i < 50; ++i) {
            CHECK(check_superadditive(random_game(rng, 6)).holds);
        }
    }

    SUBCASE("the cap is enforced and named") {
        CoalitionGame game;
        for (std::uint32_t n = 0; n < 13; ++n) {
            game.players.push_back({ProsumerId{n}, {1.0, 0.0}});
        }
        CHECK_THROWS_WITH_AS(check_superadditive(game),
                             doctest::Contains("cap of 12"), ValidationError);
        CHECK_THROWS_WITH_AS(check_core(game, core_witness(game)),
                             doctest::Contains("cap of 12"), ValidationError);
        // a raised cap lifts the refusal
        CHECK(check_superadditive(game, 13).holds);
    }
}

TEST_CASE("settlement allocation matches the hand-settled examples") {
    SUBCASE("net surplus") {
        const auto game = game_of({2.0, 3.0, -2.0});
        const auto allocation = settlement_allocation(game);
        REQUIRE(allocation.payoff_cents.size() == 3);
        CHECK(near(allocation.payoff_cents[0], 25.84));
        CHECK(near(allocation.payoff_cents[1], 38.76));
        CHECK(near(allocation.payoff_cents[2], -34.60));
        const double total = std::accumulate(allocation.payoff_cents.begin(),
                                             allocation.payoff_cents.end(), 0.0);
        CHECK(near(total, 30.0)); // = v(grand)
    }

    SUBCASE("net deficit") {
        const auto game = game_of({2.0, -3.0, -2.0});
        const auto allocation = settlement_allocation(game);
        CHECK(near(allocation.payoff_cents[0], 34.60));
        CHECK(near(allocation.payoff_cents[1], -65.04));
        CHECK(near(allocation.payoff_cents[2], -43.36));
        const double total = std::accumulate(allocation.payoff_cents.begin(),
                                             allocation.payoff_cents.end(), 0.0);
        CHECK(near(total, -73.80));
    }

    SUBCASE("balanced") {
        const auto game = game_of({2.0, -2.0});
        const auto allocation = settlement_allocation(game);
        CHECK(near(allocation.payoff_cents[0], 34.60));
        CHECK(near(allocation.payoff_cents[1], -34.60));
    }

    SUBCASE("efficiency and individual rationality for random games") {
        test::TestRng rng(0x5eed0009);
        for (int i = 0; i < 200; ++i) {
            const auto game = random_game(rng, 1 + rng.integer(10));
            const auto allocation = settlement_allocation(game);
            const double total = std::accumulate(allocation.payoff_cents.begin(),
                                                 allocation.payoff_cents.end(), 0.0);
            CHECK(near(total, coalition_value(game, grand_coalition(game))));
            for (std::size_t n = 0; n < game.players.size(); ++n) {
                const auto singleton = static_cast<CoalitionMask>(CoalitionMask{1} << n);
                CHECK(allocation.payoff_cents[n] >= coalition_value(game, singleton) - 1e-9);
            }
        }
    }
}

TEST_CASE("core membership of the settlement allocation") {
    SUBCASE("the net-surplus example violates the core in two subsets") {
        const auto game = game_of({2.0, 3.0, -2.0});
        const auto allocation = settlement_allocation(game);
        const auto report = check_core(game, allocation);

        CHECK_FALSE(report.in_core);
        REQUIRE(report.violations.size() == 2);

        // {seller A, buyer C}: allocated -8.76 < value 0
        CHECK(report.violations[0].subset == CoalitionMask{0b101});
        CHECK(near(report.violations[0].allocated_cents, -8.76));
        CHECK(near(report.violations[0].value_cents, 0.0));

        // {seller B, buyer C}: allocated 4.16 < value 10
        CHECK(report.violations[1].subset == CoalitionMask{0b110});
        CHECK(near(report.violations[1].allocated_cents, 4.16));
        CHECK(near(report.violations[1].value_cents, 10.0));

        // singletons never violate: the settlement is individually rational
        for (const auto& violation : report.violations) {
            CHECK(std::popcount(violation.subset) > 1);
        }
    }

    SUBCASE("a balanced two-player game settles inside the core") {
        const auto game = game_of({2.0, -2.0});
        const auto report = check_core(game, settlement_allocation(game));
        CHECK(report.in_core);
        CHECK(report.violations.empty());
    }

    SUBCASE("rejects inefficient allocations") {
        const auto game = game_of({2.0, -2.0});
        Allocation bogus{{100.0, 0.0}};
        CHECK_THROWS_WITH_AS(check_core(game, bogus), doctest::Contains("efficient"),
                             ValidationError);
    }

    SUBCASE("rejects mismatched allocation size") {
        const auto game = game_of({2.0, -2.0});
        CHECK_THROWS_AS((check_core(game, Allocation{{0.0}})), ValidationError);
    }

    SUBCASE("agrees with the independent subset scan") {
        test::TestRng rng(0x5eed000a);
        for (int i = 0; i < 100; ++i) {
            const auto game = random_game(rng, 1 + rng.integer(8));
            const auto allocation = settlement_allocation(game);
            const auto report = check_core(game, allocation);
            const auto expected =
                test::oracle_core_violations(game, allocation, kCoreToleranceCents);
            REQUIRE(report.violations.size() == expected.size());
            for (std::size_t v = 0; v < expected.size(); ++v) {
                CHECK(report.violations[v].subset == expected[v]);
            }
            CHECK(report.in_core == expected.empty());
        }
    }
}

TEST_CASE("core witness") {
    SUBCASE("net-surplus example settles everyone at the feed-in price") {
        const auto game = game_of({2.0, 3.0, -2.0});
        const auto witness = core_witness(game);
        CHECK(near(witness.payoff_cents[0], 20.0));
        CHECK(near(witness.payoff_cents[1], 30.0));
        CHECK(near(witness.payoff_cents[2], -20.0));
        const auto report = check_core(game, witness);
        CHECK(report.in_core);
    }

    SUBCASE("balanced game settles at mid") {
        const auto game = game_of({2.0, -2.0});
        const auto witness = core_witness(game);
        CHECK(near(witness.payoff_cents[0], 34.60));
        CHECK(near(witness.payoff_cents[1], -34.60));
        CHECK(check_core(game, witness).in_core);
    }

    SUBCASE("all-seller game pays exactly the FiT revenue") {
        const auto game = game_of({1.0, 2.5});
        const auto witness = core_witness(game);
        CHECK(near(witness.payoff_cents[0], 10.0));
        CHECK(near(witness.payoff_cents[1], 25.0));
    }

    SUBCASE("always passes the core check on random games") {
        test::TestRng rng(0x5eed000b);
        for (int i = 0; i < 50; ++i) {
            const auto game = random_game(rng, 1 + rng.integer(10));
            const auto witness = core_witness(game);
            CHECK(check_core(game, witness).in_core);
            CHECK(test::oracle_core_violations(game, witness, kCoreToleranceCents).empty());
        }
    }
}

TEST_CASE("a game of idle players is trivial") {
    const auto game = game_of({0.0, 0.0, 0.0});
    CHECK(coalition_value(game, grand_coalition(game)) == 0.0);
    CHECK(check_superadditive(game).holds);
    const auto allocation = settlement_allocation(game);
    for (const double payoff : allocation.payoff_cents) {
        CHECK(payoff == 0.0);
    }
    CHECK(check_core(game, allocation).in_core);
}

TEST_CASE("duplicate player ids are rejected") {
    CoalitionGame game;
    game.players = {{ProsumerId{1}, {1.0, 0.0}}, {ProsumerId{1}, {0.0, 1.0}}};
    CHECK_THROWS_WITH_AS(check_superadditive(game), doctest::Contains("duplicate"),
                         ValidationError);
}

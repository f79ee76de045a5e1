#pragma once

// Canonical coalition game over one interval's buyers and sellers. The value
// of a coalition is what its aggregate net position is worth when traded with
// the grid alone. Stability checks are exact brute force over all subsets, so
// the player count is capped.

#include "peertrade/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace peertrade {

struct CoalitionGame {
    std::vector<PlayerPosition> players; // one interval; ids unique
    PriceConfig prices;
};

// Subsets are bitmasks over game.players (bit i = players[i]).
using CoalitionMask = std::uint32_t;

struct Allocation {
    std::vector<double> payoff_cents; // aligned with game.players; signed
};

struct CoreViolation {
    CoalitionMask subset = 0;
    double value_cents = 0.0;     // what the subset earns on its own
    double allocated_cents = 0.0; // what the allocation gives it
};

struct CoreReport {
    bool in_core = true;
    std::vector<CoreViolation> violations; // ascending mask order
};

struct SuperadditivityCounterexample {
    CoalitionMask lhs = 0;
    CoalitionMask rhs = 0;
    double value_lhs = 0.0;
    double value_rhs = 0.0;
    double value_union = 0.0;
};

struct SuperadditivityReport {
    bool holds = true;
    std::optional<SuperadditivityCounterexample> counterexample;
};

// Largest player count the exhaustive subset checks accept.
inline constexpr int kCoalitionBruteForceCap = 12;

// Below this margin in cents a subset shortfall counts as float noise,
// not an economic violation.
inline constexpr double kCoreToleranceCents = 1e-6;

// Characteristic function: with net = sum of (surplus - deficit) over the
// subset, returns grid_buy*[net]+ - grid_sell*[-net]+. Value of the empty
// coalition is 0.
double coalition_value(const CoalitionGame& game, CoalitionMask subset);

// Same, addressing players by id. Throws ValidationError on an unknown id.
double coalition_value(const CoalitionGame& game, const std::vector<ProsumerId>& subset);

CoalitionMask grand_coalition(const CoalitionGame& game);

// Exhaustively verifies value(S u T) >= value(S) + value(T) over every pair
// of disjoint subsets. Throws ValidationError above the cap.
SuperadditivityReport check_superadditive(const CoalitionGame& game,
                                          int cap = kCoalitionBruteForceCap);

// Payoffs realized by the mid-market settlement: p_s per surplus kWh sold,
// -p_b per deficit kWh bought. Always efficient (sums to the grand value).
Allocation settlement_allocation(const CoalitionGame& game);

// Enumerates all subsets and reports every one whose members are allocated
// less than they could earn alone. Requires an efficient allocation.
CoreReport check_core(const CoalitionGame& game, const Allocation& allocation,
                      int cap = kCoalitionBruteForceCap);

// Constructive core member: every player is settled at one common price,
// grid_buy when the grand coalition has net surplus, grid_sell when net
// deficit, mid when balanced. Passes check_core for every game.
Allocation core_witness(const CoalitionGame& game);

} // namespace peertrade

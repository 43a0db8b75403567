#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ccabc {

using CellState = std::uint16_t;

enum class Neighbourhood { moore9, vonneumann5 };

// k-state cyclic cellular automaton lattice. States advance cyclically
// 0 -> 1 -> ... -> k-1 -> 0; quiescent cells (state 0) fire when enough
// neighbours are non-zero.
struct Grid {
    int width = 0;
    int height = 0;
    int k = 2;  // state count, cells hold 0 .. k-1
    std::vector<CellState> cells;  // row-major
    std::int64_t generation = 0;

    CellState at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x]; }
    CellState& at(int x, int y) { return cells[static_cast<std::size_t>(y) * width + x]; }
    bool inside(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

struct RuleParams {
    int theta = 1;  // non-zero neighbours required to excite a quiescent cell
    Neighbourhood neighbourhood = Neighbourhood::moore9;
};

enum class SeedMode { primordial_soup, seeded_nuclei };

struct SeedSpec {
    SeedMode mode = SeedMode::primordial_soup;
    std::vector<std::pair<int, int>> positions;  // seeded_nuclei only
    std::uint64_t rng_seed = 0;
};

// primordial_soup fills cells uniformly at random over {0..k-1};
// seeded_nuclei sets listed positions to state 1, all others 0.
// Identical spec yields an identical grid.
Grid new_grid(int width, int height, int k, const SeedSpec& seed);

void validate_rules(const RuleParams& rules);

// One synchronous update of the whole lattice. Boundaries are absorbing
// (truncated neighbourhood, no wrap). Pure: the input grid is untouched.
Grid step(const Grid& grid, const RuleParams& rules);

// Max Chebyshev distance from origin to any non-zero cell reachable from
// origin through non-zero cells (8-connected). 0 when origin's component
// is empty/zero.
int front_distance(const Grid& grid, int origin_x, int origin_y);

// Plain-text dump, one row per line, states as base-36 digits (k <= 36).
std::string dump_grid(const Grid& grid);

}  // namespace ccabc

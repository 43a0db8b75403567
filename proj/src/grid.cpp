#include "ccabc/grid.hpp"

#include <stdexcept>
#include <string>

#include "ccabc/geometry.hpp"
#include "ccabc/rng.hpp"

namespace ccabc {

Grid new_grid(int width, int height, int k, const SeedSpec& seed) {
    if (width < 1 || height < 1) throw std::invalid_argument("grid: width and height must be >= 1");
    if (k < 2) throw std::invalid_argument("grid: k must be >= 2");

    Grid g;
    g.width = width;
    g.height = height;
    g.k = k;
    g.cells.assign(static_cast<std::size_t>(width) * height, 0);
    g.generation = 0;

    if (seed.mode == SeedMode::primordial_soup) {
        Rng rng(seed.rng_seed);
        for (auto& c : g.cells) c = static_cast<CellState>(rng.next_below(static_cast<std::uint64_t>(k)));
    } else {
        for (const auto& [x, y] : seed.positions) {
            if (!g.inside(x, y))
                throw std::invalid_argument("grid: seed position outside grid: (" + std::to_string(x) +
                                            "," + std::to_string(y) + ")");
            g.at(x, y) = 1;
        }
    }
    return g;
}

void validate_rules(const RuleParams& rules) {
    const int size = rules.neighbourhood == Neighbourhood::moore9 ? 9 : 5;
    if (rules.theta < 1) throw std::invalid_argument("rules: theta must be >= 1");
    if (rules.theta > size) throw std::invalid_argument("rules: theta exceeds neighbourhood size");
}

namespace {

// proper-neighbour offsets; the centre cell is quiescent when rule 3
// applies, so it never contributes to the count
constexpr int kMooreDx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kMooreDy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
constexpr int kVonDx[4] = {0, -1, 1, 0};
constexpr int kVonDy[4] = {-1, 0, 0, 1};

}  // namespace

Grid step(const Grid& grid, const RuleParams& rules) {
    validate_rules(rules);
    Grid out = grid;
    out.generation = grid.generation + 1;

    const int w = grid.width;
    const int h = grid.height;
    const CellState top = static_cast<CellState>(grid.k - 1);
    const int n_off = rules.neighbourhood == Neighbourhood::moore9 ? 8 : 4;
    const int* dxs = rules.neighbourhood == Neighbourhood::moore9 ? kMooreDx : kVonDx;
    const int* dys = rules.neighbourhood == Neighbourhood::moore9 ? kMooreDy : kVonDy;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const CellState s = grid.at(x, y);
            CellState next;
            if (s == 0) {
                int nonzero = 0;
                for (int i = 0; i < n_off; ++i) {
                    const int nx = x + dxs[i];
                    const int ny = y + dys[i];
                    if (nx >= 0 && nx < w && ny >= 0 && ny < h && grid.at(nx, ny) != 0) ++nonzero;
                }
                next = nonzero >= rules.theta ? 1 : 0;
            } else if (s == top) {
                next = 0;
            } else {
                next = static_cast<CellState>(s + 1);
            }
            out.at(x, y) = next;
        }
    }
    return out;
}

int front_distance(const Grid& grid, int origin_x, int origin_y) {
    if (!grid.inside(origin_x, origin_y))
        throw std::out_of_range("front_distance: origin outside grid: (" + std::to_string(origin_x) +
                                "," + std::to_string(origin_y) + ")");
    if (grid.at(origin_x, origin_y) == 0) return 0;

    const int w = grid.width;
    const int h = grid.height;
    std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
    std::vector<int> stack;
    stack.push_back(origin_y * w + origin_x);
    seen[static_cast<std::size_t>(origin_y) * w + origin_x] = 1;

    int extent = 0;
    while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int cx = idx % w;
        const int cy = idx / w;
        const int d = chebyshev(cx, cy, origin_x, origin_y);
        if (d > extent) extent = d;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const int nx = cx + dx;
                const int ny = cy + dy;
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
                if (seen[nidx] || grid.cells[nidx] == 0) continue;
                seen[nidx] = 1;
                stack.push_back(static_cast<int>(nidx));
            }
        }
    }
    return extent;
}

std::string dump_grid(const Grid& grid) {
    if (grid.k > 36) throw std::invalid_argument("dump_grid: base-36 dump requires k <= 36");
    static const char* digits = "0123456789abcdefghijklmnopqrstuvwxyz";
    std::string out;
    out.reserve(static_cast<std::size_t>(grid.height) * (grid.width + 1));
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) out.push_back(digits[grid.at(x, y)]);
        out.push_back('\n');
    }
    return out;
}

}  // namespace ccabc

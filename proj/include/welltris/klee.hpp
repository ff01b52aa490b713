#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "welltris/core.hpp"

namespace welltris {

using Rng = std::mt19937_64;

class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Slab extent removed from one dimension by simplification, in the coordinates
// that were current just before the removal.
struct SlabRemoval {
    std::size_t dim = 0;
    Coord lo = 0;
    Coord hi = 0;
};

// A recursion cell: its bounds plus the removals that produced them from the parent frame.
struct Cell {
    AxisBox bounds;
    std::vector<SlabRemoval> removed;

    // Maps a point of this cell back to the frame before the removals. Only valid
    // for points that were not inside a removed slab, which holds for uncovered points.
    void to_parent(Point& p) const;
};

struct SampleResult {
    Volume count = 0;
    std::vector<Point> points;  // in rank order
};

// Leaf threshold for the recursion.
inline constexpr std::size_t kLeafBoxes = 4;

// Number of lattice points of `space` covered by no box.
Volume measure(std::span<const AxisBox> boxes, const AxisBox& space);

// Same recursion as measure. Ranks (sorted, 1-based over the uncovered points in
// recursion order, offset by `before`) are turned into the uncovered points they
// address. Every rank must fall in (before, before + count].
SampleResult sample(std::span<const AxisBox> boxes, const AxisBox& space, std::span<const Volume> ranks,
                    Volume before = 0);

struct UncoveredDraw {
    Volume uncovered = 0;
    std::vector<Point> points;  // in draw order

    bool coverage_complete() const { return uncovered == 0; }
};

// k uncovered points drawn uniformly with replacement. Ranks are drawn from the
// RNG in sequence; returned points keep that draw order.
UncoveredDraw draw_uniform_uncovered(std::span<const AxisBox> boxes, const AxisBox& space, std::size_t k,
                                     Rng& rng);

// Uniform integer in [1, upper]; upper >= 1. Portable across standard libraries.
Volume uniform_rank(Rng& rng, Volume upper);

}  // namespace welltris

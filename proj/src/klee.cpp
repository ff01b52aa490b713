#include "welltris/klee.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace welltris {

namespace {

bool spans(const Interval& box_side, const Interval& cell_side) {
    return box_side.lo <= cell_side.lo && box_side.hi >= cell_side.hi;
}

// Volume of dims [from, d) of `cell` not covered by the union of `boxes` restricted to those dims.
Volume uncovered_tail(std::span<const AxisBox> boxes, const AxisBox& cell, std::size_t from) {
    Volume total = 1;
    for (std::size_t i = from; i < cell.dims(); ++i) total *= cell.sides[i].width();
    const std::size_t m = boxes.size();
    Volume covered_pos = 0;
    Volume covered_neg = 0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        Volume v = 1;
        for (std::size_t i = from; i < cell.dims() && v != 0; ++i) {
            Coord lo = cell.sides[i].lo;
            Coord hi = cell.sides[i].hi;
            for (std::size_t b = 0; b < m; ++b) {
                if (!(mask >> b & 1)) continue;
                lo = std::max(lo, boxes[b].sides[i].lo);
                hi = std::min(hi, boxes[b].sides[i].hi);
            }
            v = hi > lo ? v * (hi - lo) : 0;
        }
        if (std::popcount(mask) % 2 == 1)
            covered_pos += v;
        else
            covered_neg += v;
    }
    return total - (covered_pos - covered_neg);
}

// The rank-th (1-based) uncovered point of `cell` in lexicographic coordinate order.
// Boxes are clipped to the cell and few enough for inclusion-exclusion.
Point select_uncovered(std::span<const AxisBox> boxes, const AxisBox& cell, Volume rank) {
    const std::size_t d = cell.dims();
    Point p(d);
    std::vector<AxisBox> active(boxes.begin(), boxes.end());
    for (std::size_t dim = 0; dim < d; ++dim) {
        const Interval side = cell.sides[dim];
        std::vector<Coord> cuts{side.lo, side.hi};
        for (const auto& b : active) {
            cuts.push_back(std::clamp(b.sides[dim].lo, side.lo, side.hi));
            cuts.push_back(std::clamp(b.sides[dim].hi, side.lo, side.hi));
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

        bool placed = false;
        for (std::size_t c = 0; c + 1 < cuts.size() && !placed; ++c) {
            const Interval piece{cuts[c], cuts[c + 1]};
            std::vector<AxisBox> over;
            for (const auto& b : active)
                if (b.sides[dim].lo <= piece.lo && b.sides[dim].hi >= piece.hi) over.push_back(b);
            // Uncovered points of the remaining dims for any single coordinate in this piece.
            const Volume per_coord = uncovered_tail(over, cell, dim + 1);
            const Volume in_piece = per_coord * piece.width();
            if (rank > in_piece) {
                rank -= in_piece;
                continue;
            }
            p[dim] = piece.lo + static_cast<Coord>((rank - 1) / per_coord);
            rank = (rank - 1) % per_coord + 1;
            active = std::move(over);
            placed = true;
        }
        if (!placed) throw ConsistencyError("rank exceeds uncovered volume of leaf cell");
    }
    if (!active.empty() || rank != 1) throw ConsistencyError("leaf selection landed on a covered point");
    return p;
}

class Recursion {
public:
    Recursion(std::size_t dims, std::span<const Volume> ranks, std::vector<Point>* out)
        : dims_(dims), ranks_(ranks), out_(out) {}

    Volume run(std::vector<AxisBox> boxes, const AxisBox& cell, Volume before, std::size_t depth) {
        if (boxes.size() <= kLeafBoxes) return leaf(boxes, cell, before);

        Cell simplified{cell, {}};
        if (!simplify(boxes, simplified)) return 0;
        const std::size_t mark = out_ ? out_->size() : 0;
        Volume total = 0;
        if (boxes.size() <= kLeafBoxes) {
            total = leaf(boxes, simplified.bounds, before);
        } else {
            const auto [dim, at] = choose_cut(boxes, simplified.bounds, depth);
            AxisBox left = simplified.bounds;
            AxisBox right = simplified.bounds;
            left.sides[dim].hi = at;
            right.sides[dim].lo = at;
            const Volume v1 = run(clip_all(boxes, left), left, before, depth + 1);
            const Volume v2 = run(clip_all(boxes, right), right, before + v1, depth + 1);
            total = v1 + v2;
        }
        if (out_ && !simplified.removed.empty())
            for (std::size_t i = mark; i < out_->size(); ++i) simplified.to_parent((*out_)[i]);
        return total;
    }

private:
    Volume leaf(std::span<const AxisBox> boxes, const AxisBox& cell, Volume before) {
        const Volume uncovered = uncovered_tail(boxes, cell, 0);
        if (out_ && uncovered > 0) {
            auto lo = std::upper_bound(ranks_.begin(), ranks_.end(), before);
            auto hi = std::upper_bound(lo, ranks_.end(), before + uncovered);
            for (auto it = lo; it != hi; ++it) out_->push_back(select_uncovered(boxes, cell, *it - before));
        }
        return uncovered;
    }

    // Removes slab boxes and the extents they cover, repeating until no box is a slab
    // (a removal can turn a box into a new slab). Returns false if the cell is fully covered.
    bool simplify(std::vector<AxisBox>& boxes, Cell& cell) const {
        while (true) {
            std::vector<std::vector<Interval>> slabs(dims_);
            std::vector<AxisBox> kept;
            kept.reserve(boxes.size());
            bool any = false;
            for (auto& b : boxes) {
                std::size_t partial = 0;
                std::size_t partial_dim = 0;
                for (std::size_t i = 0; i < dims_; ++i) {
                    if (!spans(b.sides[i], cell.bounds.sides[i])) {
                        ++partial;
                        partial_dim = i;
                    }
                }
                if (partial == 0) return false;
                if (partial == 1) {
                    slabs[partial_dim].push_back(b.sides[partial_dim]);
                    any = true;
                } else {
                    kept.push_back(std::move(b));
                }
            }
            boxes = std::move(kept);
            if (!any) return true;

            for (std::size_t dim = 0; dim < dims_; ++dim) {
                auto& s = slabs[dim];
                if (s.empty()) continue;
                std::sort(s.begin(), s.end());
                std::vector<Interval> merged;
                for (const auto& iv : s) {
                    if (!merged.empty() && iv.lo <= merged.back().hi)
                        merged.back().hi = std::max(merged.back().hi, iv.hi);
                    else
                        merged.push_back(iv);
                }
                // Highest first, so each recorded interval is valid in the frame it is removed from.
                for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
                    const Coord a = it->lo;
                    const Coord b = it->hi;
                    const Coord w = b - a;
                    auto shift = [&](Coord x) { return x <= a ? x : (x >= b ? x - w : a); };
                    cell.bounds.sides[dim].hi -= w;
                    for (auto& box : boxes) {
                        box.sides[dim].lo = shift(box.sides[dim].lo);
                        box.sides[dim].hi = shift(box.sides[dim].hi);
                    }
                    cell.removed.push_back(SlabRemoval{dim, a, b});
                }
                if (cell.bounds.sides[dim].empty()) return false;
                std::erase_if(boxes, [&](const AxisBox& box) { return box.sides[dim].empty(); });
            }
        }
    }

    std::pair<std::size_t, Coord> choose_cut(std::span<const AxisBox> boxes, const AxisBox& cell,
                                             std::size_t depth) const {
        for (std::size_t step = 0; step < dims_; ++step) {
            const std::size_t dim = (depth + step) % dims_;
            const Interval side = cell.sides[dim];
            std::vector<Coord> interior;
            for (const auto& b : boxes) {
                if (b.sides[dim].lo > side.lo && b.sides[dim].lo < side.hi) interior.push_back(b.sides[dim].lo);
                if (b.sides[dim].hi > side.lo && b.sides[dim].hi < side.hi) interior.push_back(b.sides[dim].hi);
            }
            if (interior.empty()) continue;
            auto mid = interior.begin() + static_cast<std::ptrdiff_t>(interior.size() / 2);
            std::nth_element(interior.begin(), mid, interior.end());
            return {dim, *mid};
        }
        for (std::size_t step = 0; step < dims_; ++step) {
            const std::size_t dim = (depth + step) % dims_;
            const Interval side = cell.sides[dim];
            if (side.width() > 1) return {dim, side.lo + side.width() / 2};
        }
        throw ConsistencyError("cannot cut a single-point cell");
    }

    static std::vector<AxisBox> clip_all(std::span<const AxisBox> boxes, const AxisBox& cell) {
        std::vector<AxisBox> out;
        for (const auto& b : boxes) {
            AxisBox c = intersect(b, cell);
            if (!c.empty()) out.push_back(std::move(c));
        }
        return out;
    }

    std::size_t dims_;
    std::span<const Volume> ranks_;
    std::vector<Point>* out_;
};

}  // namespace

void Cell::to_parent(Point& p) const {
    for (auto it = removed.rbegin(); it != removed.rend(); ++it)
        if (p[it->dim] >= it->lo) p[it->dim] += it->hi - it->lo;
}

namespace {

Volume run_recursion(std::span<const AxisBox> boxes, const AxisBox& space, std::span<const Volume> ranks,
                     Volume before, std::vector<Point>* out) {
    if (space.empty()) return 0;
    std::vector<AxisBox> clipped;
    clipped.reserve(boxes.size());
    for (const auto& b : boxes) {
        if (b.dims() != space.dims()) throw SchemaError("box dimensionality does not match cell");
        AxisBox c = intersect(b, space);
        if (!c.empty()) clipped.push_back(std::move(c));
    }
    Recursion rec(space.dims(), ranks, out);
    return rec.run(std::move(clipped), space, before, 0);
}

}  // namespace

Volume measure(std::span<const AxisBox> boxes, const AxisBox& space) {
    return run_recursion(boxes, space, {}, 0, nullptr);
}

SampleResult sample(std::span<const AxisBox> boxes, const AxisBox& space, std::span<const Volume> ranks,
                    Volume before) {
    if (!std::is_sorted(ranks.begin(), ranks.end())) throw ConsistencyError("ranks must be sorted");
    SampleResult result;
    result.points.reserve(ranks.size());
    result.count = run_recursion(boxes, space, ranks, before, &result.points);
    if (!ranks.empty() && (ranks.front() <= before || ranks.back() > before + result.count))
        throw ConsistencyError("rank outside the uncovered volume of the cell");
    if (result.points.size() != ranks.size()) throw ConsistencyError("sampled point count differs from rank count");
    return result;
}

Volume uniform_rank(Rng& rng, Volume upper) {
    if (upper == 0) throw ConsistencyError("cannot draw a rank from an empty range");
    constexpr Volume kWord = Volume{1} << 64;
    if (upper <= kWord) {
        if (upper == kWord) return Volume{rng()} + 1;
        const std::uint64_t u = static_cast<std::uint64_t>(upper);
        const std::uint64_t threshold = (0 - u) % u;
        while (true) {
            const std::uint64_t x = rng();
            if (x >= threshold) return Volume{x % u} + 1;
        }
    }
    const Volume threshold = (Volume{0} - upper) % upper;
    while (true) {
        const Volume x = (Volume{rng()} << 64) | Volume{rng()};
        if (x >= threshold) return x % upper + 1;
    }
}

UncoveredDraw draw_uniform_uncovered(std::span<const AxisBox> boxes, const AxisBox& space, std::size_t k,
                                     Rng& rng) {
    UncoveredDraw draw;
    draw.uncovered = measure(boxes, space);
    if (draw.uncovered == 0 || k == 0) return draw;

    std::vector<Volume> ranks(k);
    for (auto& r : ranks) r = uniform_rank(rng, draw.uncovered);
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });
    std::vector<Volume> sorted(k);
    for (std::size_t i = 0; i < k; ++i) sorted[i] = ranks[order[i]];

    SampleResult s = sample(boxes, space, sorted, 0);
    if (s.count != draw.uncovered) throw ConsistencyError("measure and sample disagree on uncovered volume");
    draw.points.resize(k);
    for (std::size_t i = 0; i < k; ++i) draw.points[order[i]] = std::move(s.points[i]);
    return draw;
}

}  // namespace welltris

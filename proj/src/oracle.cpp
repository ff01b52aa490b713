#include "welltris/oracle.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace welltris::oracle {

namespace {

using PointSet = std::unordered_set<Point, PointHash>;

// Visits every lattice point of `space` in lexicographic order.
void for_each_point(const AxisBox& space, const std::function<void(const Point&)>& fn) {
    if (space.empty()) return;
    Point p(space.dims());
    for (std::size_t i = 0; i < space.dims(); ++i) p[i] = space.sides[i].lo;
    while (true) {
        fn(p);
        std::size_t i = space.dims();
        while (i > 0) {
            --i;
            if (++p[i] < space.sides[i].hi) break;
            p[i] = space.sides[i].lo;
            if (i == 0) return;
        }
        if (space.dims() == 0) return;
    }
}

void require_enumerable(const AxisBox& space, Volume limit, const char* what) {
    if (space.volume() > limit) throw OracleGuardError(std::string(what) + ": lattice too large to enumerate");
}

}  // namespace

JoinResult exact_join(const JoinSchema& schema, const std::vector<Relation>& relations, std::size_t max_rows) {
    const std::size_t d = schema.dims();
    std::vector<Point> partial{Point(d, 0)};
    std::vector<bool> bound(d, false);
    for (const auto& r : relations) {
        const auto& attrs = r.schema.attrs;
        std::vector<std::size_t> shared_pos;  // positions within the table row
        for (std::size_t i = 0; i < attrs.size(); ++i)
            if (bound[attrs[i]]) shared_pos.push_back(i);

        std::unordered_map<Point, std::vector<const Point*>, PointHash> by_key;
        for (const auto& row : r.rows) {
            Point key;
            for (auto i : shared_pos) key.push_back(row[i]);
            by_key[key].push_back(&row);
        }

        std::vector<Point> next;
        for (const auto& p : partial) {
            Point key;
            for (auto i : shared_pos) key.push_back(p[attrs[i]]);
            auto it = by_key.find(key);
            if (it == by_key.end()) continue;
            for (const Point* row : it->second) {
                Point q = p;
                for (std::size_t i = 0; i < attrs.size(); ++i) q[attrs[i]] = (*row)[i];
                next.push_back(std::move(q));
                if (next.size() > max_rows) throw OracleGuardError("exact join: intermediate result too large");
            }
        }
        partial = std::move(next);
        for (auto a : attrs) bound[a] = true;
    }
    if (relations.empty() || std::find(bound.begin(), bound.end(), false) != bound.end())
        throw SchemaError("relations do not cover every attribute");
    std::sort(partial.begin(), partial.end());
    return JoinResult{std::move(partial)};
}

JoinResult exact_join_enumerate(const JoinSchema& schema, const std::vector<Relation>& relations,
                                Volume max_points) {
    const AxisBox space = full_space(schema.dims(), schema.bits());
    require_enumerable(space, max_points, "exact join enumeration");
    std::vector<PointSet> sets;
    for (const auto& r : relations) sets.emplace_back(r.rows.begin(), r.rows.end());
    JoinResult out;
    for_each_point(space, [&](const Point& p) {
        for (std::size_t t = 0; t < relations.size(); ++t)
            if (!sets[t].contains(project(p, relations[t].schema))) return;
        out.rows.push_back(p);
    });
    return out;
}

Volume union_volume_grid(std::span<const AxisBox> boxes, const AxisBox& space) {
    require_enumerable(space, kMaxEnumeration, "grid marking");
    Volume covered = 0;
    for_each_point(space, [&](const Point& p) {
        for (const auto& b : boxes)
            if (b.contains(p)) {
                ++covered;
                return;
            }
    });
    return covered;
}

Volume union_volume_ie(std::span<const AxisBox> boxes, const AxisBox& space) {
    const bool ie_ok = boxes.size() <= kMaxInclusionExclusionBoxes;
    const bool grid_ok = space.volume() <= kMaxEnumeration;
    if (!ie_ok && !grid_ok) throw OracleGuardError("union volume: too many boxes for the lattice size");
    if (!ie_ok) return union_volume_grid(boxes, space);

    std::vector<AxisBox> clipped;
    for (const auto& b : boxes) clipped.push_back(intersect(b, space));
    // Signed accumulation over all nonempty intersections.
    Volume plus = 0;
    Volume minus = 0;
    std::function<void(std::size_t, const AxisBox&, bool)> rec = [&](std::size_t from, const AxisBox& cur,
                                                                     bool odd) {
        for (std::size_t j = from; j < clipped.size(); ++j) {
            AxisBox inter = intersect(cur, clipped[j]);
            if (inter.empty()) continue;
            (odd ? plus : minus) += inter.volume();
            rec(j + 1, inter, !odd);
        }
    };
    rec(0, space, true);
    const Volume ie = plus - minus;
    if (grid_ok) {
        const Volume grid = union_volume_grid(boxes, space);
        if (grid != ie) throw std::logic_error("union volume oracles disagree");
    }
    return ie;
}

std::vector<Point> uncovered_points(std::span<const AxisBox> boxes, const AxisBox& space) {
    require_enumerable(space, kMaxEnumeration, "uncovered enumeration");
    std::vector<Point> out;
    for_each_point(space, [&](const Point& p) {
        for (const auto& b : boxes)
            if (b.contains(p)) return;
        out.push_back(p);
    });
    return out;
}

std::vector<DyadicBox> maximal_dyadic_gap_boxes(const Relation& r) {
    const std::size_t d = r.schema.dims();
    const int L = r.bits;
    Volume per_dim = (Volume{1} << (L + 1)) - 1;
    Volume total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= per_dim;
    if (total > (Volume{1} << 22)) throw OracleGuardError("maximal dyadic gap boxes: too many dyadic boxes");

    std::unordered_set<DyadicBox, DyadicBoxHash> gaps;
    std::vector<Prefix> cur(d);
    std::function<void(std::size_t)> rec = [&](std::size_t dim) {
        if (dim == d) {
            DyadicBox b(L, cur);
            for (const auto& row : r.rows)
                if (dyadic_contains_point(b, row)) return;
            gaps.insert(std::move(b));
            return;
        }
        for (int len = 0; len <= L; ++len)
            for (Coord bits = 0; bits < (Coord{1} << len); ++bits) {
                cur[dim] = Prefix{bits, len};
                rec(dim + 1);
            }
    };
    rec(0);

    std::vector<DyadicBox> out;
    for (const auto& g : gaps) {
        // Every dyadic box containing g is spelled by a prefix of each of g's prefixes.
        bool maximal = true;
        std::vector<Prefix> anc(d);
        std::function<void(std::size_t, bool)> up = [&](std::size_t dim, bool strict) {
            if (!maximal) return;
            if (dim == d) {
                if (strict && gaps.contains(DyadicBox(L, anc))) maximal = false;
                return;
            }
            for (int len = 0; len <= g[dim].len; ++len) {
                anc[dim] = Prefix{g[dim].bits >> (g[dim].len - len), len};
                up(dim + 1, strict || len < g[dim].len);
            }
        };
        up(0, false);
        if (maximal) out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<AxisBox> maximal_gap_boxes(const std::vector<Point>& points, const AxisBox& space) {
    const std::size_t d = space.dims();
    Volume count = 1;
    for (const auto& s : space.sides) count *= Volume{s.width()} * (s.width() + 1) / 2;
    if (count > (Volume{1} << 22)) throw OracleGuardError("maximal gap boxes: too many candidate boxes");

    auto is_gap = [&](const AxisBox& b) {
        return std::none_of(points.begin(), points.end(), [&](const Point& p) { return b.contains(p); });
    };
    std::vector<AxisBox> out;
    AxisBox cur{std::vector<Interval>(d)};
    std::function<void(std::size_t)> rec = [&](std::size_t dim) {
        if (dim == d) {
            if (!is_gap(cur)) return;
            for (std::size_t i = 0; i < d; ++i) {
                AxisBox grown = cur;
                if (grown.sides[i].lo > space.sides[i].lo) {
                    --grown.sides[i].lo;
                    if (is_gap(grown)) return;
                }
                grown = cur;
                if (grown.sides[i].hi < space.sides[i].hi) {
                    ++grown.sides[i].hi;
                    if (is_gap(grown)) return;
                }
            }
            out.push_back(cur);
            return;
        }
        for (Coord lo = space.sides[dim].lo; lo < space.sides[dim].hi; ++lo)
            for (Coord hi = lo + 1; hi <= space.sides[dim].hi; ++hi) {
                cur.sides[dim] = Interval{lo, hi};
                rec(dim + 1);
            }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t min_cover_size(std::span<const AxisBox> candidates, const std::vector<Point>& target) {
    if (target.empty()) return 0;
    if (candidates.size() > kMaxCoverCandidates) throw OracleGuardError("min cover: too many candidates");

    // covers[c] = target indices inside candidate c; by_point[t] = candidates containing target t.
    std::vector<std::vector<std::size_t>> by_point(target.size());
    for (std::size_t c = 0; c < candidates.size(); ++c)
        for (std::size_t t = 0; t < target.size(); ++t)
            if (candidates[c].contains(target[t])) by_point[t].push_back(c);
    for (const auto& cs : by_point)
        if (cs.empty()) throw std::invalid_argument("min cover: a target point lies in no candidate");

    std::size_t best = candidates.size() + 1;
    std::vector<int> hits(target.size(), 0);
    std::function<void(std::size_t)> search = [&](std::size_t used) {
        if (used >= best) return;
        auto first = std::find(hits.begin(), hits.end(), 0);
        if (first == hits.end()) {
            best = used;
            return;
        }
        if (used + 1 >= best) return;
        // Some candidate containing the first uncovered point must be chosen.
        for (std::size_t c : by_point[static_cast<std::size_t>(first - hits.begin())]) {
            for (std::size_t t = 0; t < target.size(); ++t)
                if (candidates[c].contains(target[t])) ++hits[t];
            search(used + 1);
            for (std::size_t t = 0; t < target.size(); ++t)
                if (candidates[c].contains(target[t])) --hits[t];
        }
    };
    search(0);
    return best;
}

}  // namespace welltris::oracle

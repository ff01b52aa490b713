#include "welltris/gapbox.hpp"

#include <algorithm>
#include <unordered_set>

namespace welltris {

std::vector<DyadicBox> flip_neighbors(const DyadicBox& b) {
    std::vector<DyadicBox> out;
    for (std::size_t a = 0; a < b.dims(); ++a) {
        if (b[a].is_lambda()) continue;
        DyadicBox n = b;
        n[a].bits ^= 1;
        out.push_back(std::move(n));
    }
    return out;
}

std::vector<DyadicBox> construct_gap_boxes(const Relation& r) {
    const std::size_t d = r.schema.dims();
    if (r.rows.empty()) return {DyadicBox::whole(d, r.bits)};

    std::unordered_set<DyadicBox, DyadicBoxHash> containing;
    std::unordered_set<DyadicBox, DyadicBoxHash> flipped;
    for (const auto& row : r.rows) {
        if (row.size() != d) throw SchemaError("row arity does not match table '" + r.schema.name + "'");
        for_each_containing_dyadic(row, r.bits, [&](const DyadicBox& b) {
            if (!containing.insert(b).second) return;
            for (auto& n : flip_neighbors(b)) flipped.insert(std::move(n));
        });
    }

    std::vector<DyadicBox> out;
    for (const auto& b : flipped)
        if (!containing.contains(b)) out.push_back(b);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t gap_box_count_bound(const Relation& r) {
    std::size_t per_tuple = 1;
    for (std::size_t i = 0; i < r.schema.dims(); ++i) per_tuple *= static_cast<std::size_t>(r.bits + 1);
    return r.rows.size() * r.schema.dims() * per_tuple;
}

}  // namespace welltris

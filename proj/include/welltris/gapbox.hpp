#pragma once

#include <cstddef>
#include <vector>

#include "welltris/core.hpp"
#include "welltris/ingest.hpp"

namespace welltris {

// Table-local dyadic gap boxes covering every maximal dyadic gap box of `r`.
// For each tuple, all dyadic boxes containing it go into D; each such box with one
// non-lambda dimension's last bit flipped goes into D'. Returns D' \ D, sorted.
// An empty relation yields the single all-lambda box.
std::vector<DyadicBox> construct_gap_boxes(const Relation& r);

// Neighbors of `b` obtained by flipping the last bit of each non-lambda prefix.
std::vector<DyadicBox> flip_neighbors(const DyadicBox& b);

// |rows| * d_i * (L+1)^d_i; dominates the size of construct_gap_boxes for nonempty r.
std::size_t gap_box_count_bound(const Relation& r);

}  // namespace welltris

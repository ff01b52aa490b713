#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "welltris/core.hpp"
#include "welltris/ingest.hpp"

// Brute-force references for small instances. None of these approximate: when an
// instance is beyond a guard they throw OracleGuardError.
namespace welltris::oracle {

class OracleGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxJoinRows = std::size_t{1} << 22;
inline constexpr Volume kMaxEnumeration = Volume{1} << 20;
inline constexpr std::size_t kMaxInclusionExclusionBoxes = 20;
inline constexpr std::size_t kMaxCoverCandidates = 20;

struct JoinResult {
    std::vector<Point> rows;  // sorted
    std::size_t size() const { return rows.size(); }
};

// Hash join over shared attributes, table by table.
JoinResult exact_join(const JoinSchema& schema, const std::vector<Relation>& relations,
                      std::size_t max_rows = kMaxJoinRows);
// Checks every lattice point against every table.
JoinResult exact_join_enumerate(const JoinSchema& schema, const std::vector<Relation>& relations,
                                Volume max_points = kMaxEnumeration);

// |union(boxes) ∩ space|. Inclusion-exclusion when boxes <= 20, grid marking when
// |space| <= 2^20; both run and must agree when both are feasible.
Volume union_volume_ie(std::span<const AxisBox> boxes, const AxisBox& space);
Volume union_volume_grid(std::span<const AxisBox> boxes, const AxisBox& space);

// All lattice points of `space` outside every box, in lexicographic order.
std::vector<Point> uncovered_points(std::span<const AxisBox> boxes, const AxisBox& space);

// Every dyadic box containing no tuple and contained in no other such box.
std::vector<DyadicBox> maximal_dyadic_gap_boxes(const Relation& r);

// Maximal axis boxes of `space` that contain none of `points` (not restricted to dyadic).
std::vector<AxisBox> maximal_gap_boxes(const std::vector<Point>& points, const AxisBox& space);

// Fewest candidates whose union covers every target point (exact set cover).
std::size_t min_cover_size(std::span<const AxisBox> candidates, const std::vector<Point>& target);

}  // namespace welltris::oracle

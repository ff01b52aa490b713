#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "welltris/core.hpp"
#include "welltris/gap_box_index.hpp"
#include "welltris/klee.hpp"

namespace welltris {

class EmptyJoinError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EstimatorConfig {
    double epsilon = 0.5;
    double delta = 0.1;
    std::uint64_t seed = 0;
    std::optional<std::size_t> k_override;

    void validate() const;
};

struct Estimate {
    Volume value = 0;
    double epsilon = 0;
    double delta = 0;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;
    std::size_t boxes_in_e = 0;
    std::size_t samples_drawn = 0;
    std::size_t k_used = 0;
    // Largest number of boxes added to E by a single iteration.
    std::size_t max_boxes_added = 0;

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

// k = ceil((4 / epsilon) * (ln |B_d| + ln(1 / delta))), at least 1.
std::size_t sample_budget(double epsilon, double delta, double bd_count);

// Selected gap boxes: lifted global boxes for the measure engine plus a membership set.
class CoverState {
public:
    explicit CoverState(const GapBoxIndex& index);

    // Adds every box covering the point; returns how many were new.
    std::size_t add_covering(const std::vector<CoveringBox>& covering);

    const std::vector<AxisBox>& boxes() const { return boxes_; }
    const AxisBox& space() const { return space_; }
    std::size_t size() const { return boxes_.size(); }

    std::size_t iteration = 0;
    std::size_t samples_drawn = 0;

private:
    const GapBoxIndex* index_;
    AxisBox space_;
    std::vector<AxisBox> boxes_;
    std::unordered_set<DyadicBox, DyadicBoxHash> seen_;
};

// Sum over tables of (L+1)^d_i: the most boxes one point can pull into E.
std::size_t max_boxes_per_point(const GapBoxIndex& index);

Estimate estimate_join_size(const GapBoxIndex& index, const EstimatorConfig& cfg);

// True iff no stored gap box covers p.
bool is_join_row(const GapBoxIndex& index, const Point& p);

// q join rows drawn uniformly with replacement, in acceptance order.
// Throws EmptyJoinError if the join turns out to be empty.
std::vector<Point> sample_join_rows(const GapBoxIndex& index, std::size_t q, const EstimatorConfig& cfg);

}  // namespace welltris

#include "welltris/estimator.hpp"

#include <cmath>
#include <string>

namespace welltris {

void EstimatorConfig::validate() const {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (k_override && *k_override == 0) throw std::invalid_argument("k override must be positive");
}

std::size_t sample_budget(double epsilon, double delta, double bd_count) {
    if (!(epsilon > 0) || !(delta > 0 && delta <= 1) || !(bd_count >= 1))
        throw std::invalid_argument("invalid sample budget parameters");
    const double k = (4.0 / epsilon) * (std::log(bd_count) + std::log(1.0 / delta));
    // Absorb rounding in the logs so integral products do not round up an extra step.
    const double rounded = std::ceil(k - 1e-9);
    return rounded < 1 ? 1 : static_cast<std::size_t>(rounded);
}

CoverState::CoverState(const GapBoxIndex& index)
    : index_(&index), space_(full_space(index.dims(), index.bits())) {}

std::size_t CoverState::add_covering(const std::vector<CoveringBox>& covering) {
    std::size_t added = 0;
    for (const auto& c : covering) {
        DyadicBox global = index_->lift(c);
        if (!seen_.insert(global).second) continue;
        boxes_.push_back(dyadic_to_axis(global));
        ++added;
    }
    return added;
}

std::size_t max_boxes_per_point(const GapBoxIndex& index) {
    std::size_t total = 0;
    for (const auto& t : index.tables()) {
        std::size_t per = 1;
        for (std::size_t i = 0; i < t.dims(); ++i) per *= static_cast<std::size_t>(index.bits() + 1);
        total += per;
    }
    return total;
}

namespace {

Volume lattice_volume(const GapBoxIndex& index) {
    return full_space(index.dims(), index.bits()).volume();
}

// Grows E by the boxes covering `p`, checking the per-iteration bounds.
std::size_t grow(CoverState& state, const GapBoxIndex& index, const Point& p, std::size_t per_point_limit) {
    const std::size_t added = state.add_covering(index.covering_boxes(p));
    if (added == 0) throw ConsistencyError("a covered uncovered-sample added no new box");
    if (added > per_point_limit) throw ConsistencyError("iteration added more boxes than one point admits");
    ++state.iteration;
    if (state.iteration > index.box_count()) throw ConsistencyError("iteration count exceeded |B_d|");
    return added;
}

}  // namespace

Estimate estimate_join_size(const GapBoxIndex& index, const EstimatorConfig& cfg) {
    cfg.validate();
    Estimate est;
    est.epsilon = cfg.epsilon;
    est.delta = cfg.delta;
    est.seed = cfg.seed;

    const std::size_t bd = index.box_count();
    if (bd == 0) {
        est.value = lattice_volume(index);
        return est;
    }
    const std::size_t k = cfg.k_override.value_or(sample_budget(cfg.epsilon, cfg.delta, static_cast<double>(bd)));
    est.k_used = k;
    const std::size_t per_point_limit = max_boxes_per_point(index);

    CoverState state(index);
    Rng rng(cfg.seed);
    while (true) {
        UncoveredDraw draw = draw_uniform_uncovered(state.boxes(), state.space(), k, rng);
        if (draw.coverage_complete()) {
            est.value = 0;
            break;
        }
        state.samples_drawn += draw.points.size();
        const Point* covered = nullptr;
        for (const auto& p : draw.points) {
            if (index.covers(p)) {
                covered = &p;
                break;
            }
        }
        if (covered == nullptr) {
            est.value = draw.uncovered;
            break;
        }
        est.max_boxes_added = std::max(est.max_boxes_added, grow(state, index, *covered, per_point_limit));
    }
    est.iterations = state.iteration;
    est.boxes_in_e = state.size();
    est.samples_drawn = state.samples_drawn;
    return est;
}

bool is_join_row(const GapBoxIndex& index, const Point& p) { return !index.covers(p); }

std::vector<Point> sample_join_rows(const GapBoxIndex& index, std::size_t q, const EstimatorConfig& cfg) {
    cfg.validate();
    std::vector<Point> rows;
    if (q == 0) return rows;
    rows.reserve(q);
    const std::size_t per_point_limit = max_boxes_per_point(index);

    CoverState state(index);
    Rng rng(cfg.seed);
    while (rows.size() < q) {
        UncoveredDraw draw = draw_uniform_uncovered(state.boxes(), state.space(), q, rng);
        if (draw.coverage_complete()) throw EmptyJoinError("the join is empty");
        state.samples_drawn += draw.points.size();
        bool grew = false;
        for (auto& p : draw.points) {
            if (!index.covers(p)) {
                if (rows.size() < q) rows.push_back(std::move(p));
            } else if (!grew) {
                grow(state, index, p, per_point_limit);
                grew = true;
            }
        }
    }
    return rows;
}

}  // namespace welltris

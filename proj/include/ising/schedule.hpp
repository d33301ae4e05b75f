#pragma once

#include <array>
#include <vector>

#include "ising/lattice.hpp"

namespace ising {

// One step updates `row_count` consecutive rows of one sublattice; every
// same-color site in those rows gets its own lane for the step.
struct RowBlock {
    int row_begin;
    int row_count;
};

// Sweep order for a lattice of side L under a lane budget: per sublattice,
// rows are processed in blocks of floor(budget / (L/2)) rows (capped at L),
// covering each row exactly once. One full sweep (both colors) performs
// exactly one update trial per site.
class RowBlockSchedule {
public:
    RowBlockSchedule(int side, int lane_budget);

    int side() const noexcept { return side_; }
    int lane_budget() const noexcept { return lane_budget_; }
    int rows_per_step() const noexcept { return rows_per_step_; }
    int steps_per_sublattice() const noexcept { return int(steps_[0].size()); }
    // Largest lane index used in any step, plus one.
    int lanes_used() const noexcept { return rows_per_step_ * (side_ / 2); }

    const std::vector<RowBlock>& steps(Color c) const noexcept {
        return steps_[size_t(c)];
    }

private:
    int side_;
    int lane_budget_;
    int rows_per_step_;
    std::array<std::vector<RowBlock>, 2> steps_;
};

}  // namespace ising

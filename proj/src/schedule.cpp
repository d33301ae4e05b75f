#include "ising/schedule.hpp"

#include <stdexcept>
#include <string>

namespace ising {

RowBlockSchedule::RowBlockSchedule(int side, int lane_budget)
    : side_(side), lane_budget_(lane_budget) {
    if (side < 4 || side % 2 != 0)
        throw std::invalid_argument("schedule requires even side >= 4");
    if (lane_budget % 2 != 0)
        throw std::invalid_argument("lane budget must be even");
    const int half_row = side / 2;
    if (lane_budget < half_row)
        throw std::invalid_argument("lane budget " + std::to_string(lane_budget) +
                                    " below one row of " + std::to_string(half_row) +
                                    " sites (sub-row updates unsupported)");
    rows_per_step_ = std::min(side, lane_budget / half_row);
    for (int c = 0; c < 2; ++c) {
        for (int r = 0; r < side; r += rows_per_step_) {
            steps_[size_t(c)].push_back({r, std::min(rows_per_step_, side - r)});
        }
    }
}

}  // namespace ising

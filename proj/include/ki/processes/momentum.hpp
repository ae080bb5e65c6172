#pragma once

#include <cstddef>
#include <string>
#include <variant>

namespace ki {

struct NoAcceleration {};

/// lambda_j = (j-1)/(j+2)
struct OriginalSchedule {};

/**
 * lambda_j = theta_j (1/theta_{j-1} - 1) with theta_0 = 1 and
 * theta_{j+1} = (sqrt(theta_j^4 + 4 theta_j^2) - theta_j^2) / 2.
 * `theta_curr` holds theta_{j-1} before step j is taken.
 */
struct RecursiveSchedule {
    double theta_prev = 1.0;
    double theta_curr = 1.0;
};

struct ConstantSchedule {
    double c = 0.0;
};

using MomentumSchedule = std::variant<NoAcceleration, OriginalSchedule, RecursiveSchedule, ConstantSchedule>;

struct MomentumStep {
    double lambda;
    MomentumSchedule next;
};

/// Coefficient for driver iteration j >= 1 together with the advanced schedule state.
MomentumStep momentum_coefficient(const MomentumSchedule& schedule, std::size_t j);

double next_theta(double theta);

/// "none", "original", "recursive", "constant:<c>"
MomentumSchedule parse_schedule(const std::string& text);
std::string schedule_name(const MomentumSchedule& schedule);

bool is_accelerated(const MomentumSchedule& schedule);

}  // namespace ki

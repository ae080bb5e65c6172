#include "ki/processes/momentum.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ki {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

double next_theta(double theta) {
    const double t2 = theta * theta;
    return 0.5 * (std::sqrt(t2 * t2 + 4.0 * t2) - t2);
}

MomentumStep momentum_coefficient(const MomentumSchedule& schedule, std::size_t j) {
    if (j < 1) {
        throw std::invalid_argument("momentum_coefficient: iteration index starts at 1");
    }
    return std::visit(
        overloaded{
            [&](const NoAcceleration& s) { return MomentumStep{0.0, s}; },
            [&](const OriginalSchedule& s) {
                const double jd = static_cast<double>(j);
                return MomentumStep{(jd - 1.0) / (jd + 2.0), s};
            },
            [&](const RecursiveSchedule& s) {
                const double theta = next_theta(s.theta_curr);
                const double lambda = theta * (1.0 / s.theta_curr - 1.0);
                return MomentumStep{lambda, RecursiveSchedule{s.theta_curr, theta}};
            },
            [&](const ConstantSchedule& s) { return MomentumStep{s.c, s}; },
        },
        schedule);
}

MomentumSchedule parse_schedule(const std::string& text) {
    if (text == "none") return NoAcceleration{};
    if (text == "original") return OriginalSchedule{};
    if (text == "recursive") return RecursiveSchedule{};
    constexpr std::string_view prefix = "constant:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string value = text.substr(prefix.size());
        double c = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), c);
        if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
            throw std::invalid_argument("invalid constant schedule value '" + value + "'");
        }
        if (!(c >= 0.0 && c < 1.0)) {
            throw std::invalid_argument("constant momentum must lie in [0, 1), got " + value);
        }
        return ConstantSchedule{c};
    }
    throw std::invalid_argument("unknown schedule '" + text + "' (expected none, original, recursive, constant:<c>)");
}

std::string schedule_name(const MomentumSchedule& schedule) {
    return std::visit(overloaded{
                          [](const NoAcceleration&) { return std::string("none"); },
                          [](const OriginalSchedule&) { return std::string("original"); },
                          [](const RecursiveSchedule&) { return std::string("recursive"); },
                          [](const ConstantSchedule& s) {
                              std::ostringstream os;
                              os << "constant:" << s.c;
                              return os.str();
                          },
                      },
                      schedule);
}

bool is_accelerated(const MomentumSchedule& schedule) {
    return !std::holds_alternative<NoAcceleration>(schedule);
}

}  // namespace ki

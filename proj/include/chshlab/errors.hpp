#pragma once

#include <stdexcept>
#include <string>

namespace chshlab {

// Contract violations, named after the operations that raise them.

struct NegativeWeight final : std::invalid_argument {
    NegativeWeight() : std::invalid_argument("joint weight is negative") {}
};

struct ZeroTotal final : std::invalid_argument {
    ZeroTotal() : std::invalid_argument("all joint weights are zero") {}
};

struct ProbabilityOverflow final : std::domain_error {
    ProbabilityOverflow() : std::domain_error("p1 + p2 exceeds 1") {}
};

struct AmplitudeOverflow final : std::domain_error {
    AmplitudeOverflow() : std::domain_error("|a1 + a2| exceeds 1") {}
};

struct MalformedTargets final : std::invalid_argument {
    explicit MalformedTargets(const std::string& what) : std::invalid_argument(what) {}
};

struct EmptyCounts final : std::invalid_argument {
    EmptyCounts() : std::invalid_argument("trial counts hold zero trials") {}
};

}  // namespace chshlab

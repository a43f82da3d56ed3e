#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chshlab/classical.hpp"
#include "chshlab/errors.hpp"
#include "chshlab/outcomes.hpp"
#include "chshlab/quantum.hpp"
#include "chshlab/simplex.hpp"

namespace chshlab {

/// A joint distribution can over-satisfy the CHSH bound of 2 by at most
/// round-off; anything beyond this slack certifies infeasibility.
inline constexpr double chsh_screen_tol = 1e-9;

/// Largest phase-1 residual still attributed to round-off rather than to a
/// genuinely unsatisfiable marginal system.
inline constexpr double feasibility_residual_tol = 1e-7;

/// Incoherent counterpart of the two-stage emission picture: each fine-grained
/// history carries the square of its branch amplitude, so stages compose by
/// probability multiplication instead of amplitude multiplication.
inline JointDistribution16 cascade_joint(const DirectionConfig& c) {
    std::array<double, quadruple_count> w{};
    for (int i = 0; i < quadruple_count; ++i) {
        const double amp = branch_amplitude(c, OutcomeQuadruple::from_index(i));
        w[static_cast<std::size_t>(i)] = amp * amp;
    }
    return JointDistribution16::from_weights(w);
}

/// Side-by-side probabilities of one measured pair of signs at the unprimed
/// analyzers, under the coherent and the incoherent composition rules.
struct DiscrepancyReport {
    DirectionConfig config{};
    double quantum_p = 0.0;
    double cascade_p = 0.0;
    double delta = 0.0;
};

inline DiscrepancyReport discrepancy(const DirectionConfig& c, OutcomeSign q_a, OutcomeSign q_b) {
    DiscrepancyReport r;
    r.config = c;
    r.quantum_p = pair_probability(c, q_a, q_b);
    r.cascade_p = pair_marginal(cascade_joint(c), SettingPair::AB).entry(pair_index(q_a, q_b));
    r.delta = r.quantum_p - r.cascade_p;
    return r;
}

/// The four pair distributions a singlet run produces, one per setting.
inline std::array<PairDistribution, 4> quantum_pair_targets(const DirectionConfig& c) {
    std::array<PairDistribution, 4> targets{};
    for (SettingPair s : all_settings) {
        const double theta = c.relative_angle(s);
        PairDistribution t{s, 0.0, 0.0, 0.0, 0.0};
        for (OutcomeSign q1 : both_signs)
            for (OutcomeSign q2 : both_signs)
                t.entry(pair_index(q1, q2)) = pair_probability_closed(theta, q1, q2);
        targets[static_cast<std::size_t>(setting_index(s))] = t;
    }
    return targets;
}

enum class FeasibilityStatus { feasible, infeasible };

struct FeasibilityCertificate {
    enum class Kind { chsh_sign_pattern, solver_phase1 };
    Kind kind = Kind::chsh_sign_pattern;
    /// Signs applied to (AB, A'B, AB', A'B') in the violated combination.
    std::optional<std::string> sign_pattern;
    /// Violated combination's value for the sign-pattern kind; leftover
    /// artificial mass for the solver kind.
    std::optional<double> violation;
};

struct FeasibilityResult {
    FeasibilityStatus status = FeasibilityStatus::feasible;
    std::optional<JointDistribution16> witness;
    std::optional<FeasibilityCertificate> certificate;
};

namespace detail {

inline void validate_targets(std::span<const PairDistribution> targets) {
    if (targets.size() != 4) throw MalformedTargets{"expected one pair distribution per setting"};
    std::array<int, 4> seen{};
    for (const PairDistribution& t : targets) {
        for (int p = 0; p < 4; ++p) {
            if (!(t.entry(p) >= 0.0)) throw MalformedTargets{"pair probabilities must be non-negative"};
        }
        if (std::abs(t.sum() - 1.0) > mass_sum_tol)
            throw MalformedTargets{"pair probabilities must sum to 1 for setting " + std::string(setting_key(t.setting))};
        seen[static_cast<std::size_t>(setting_index(t.setting))] += 1;
    }
    for (SettingPair s : all_settings) {
        if (seen[static_cast<std::size_t>(setting_index(s))] != 1)
            throw MalformedTargets{"setting " + std::string(setting_key(s)) + " must appear exactly once"};
    }
}

/// The 8 sign assignments on the four correlators whose product is -1; any
/// joint distribution keeps every one of these combinations within [-2, 2].
inline constexpr std::array<unsigned, 8> odd_sign_masks{1u, 2u, 4u, 7u, 8u, 11u, 13u, 14u};

inline std::string sign_pattern_string(unsigned mask) {
    std::string pattern(4, '+');
    for (int i = 0; i < 4; ++i)
        if (mask & (1u << i)) pattern[static_cast<std::size_t>(i)] = '-';
    return pattern;
}

}  // namespace detail

/// Decides whether one joint distribution over the 16 quadruples can reproduce
/// all four target pair distributions at once. A violated CHSH combination is
/// a cheap certificate of impossibility; otherwise phase-1 simplex settles the
/// question either way, producing a witness distribution when feasible.
inline FeasibilityResult marginal_match_feasibility(std::span<const PairDistribution> targets) {
    detail::validate_targets(targets);

    std::array<double, 4> e{};
    for (const PairDistribution& t : targets) e[static_cast<std::size_t>(setting_index(t.setting))] = t.correlator();

    unsigned best_mask = detail::odd_sign_masks[0];
    double best_value = 0.0;
    bool first = true;
    for (unsigned mask : detail::odd_sign_masks) {
        double value = 0.0;
        for (int i = 0; i < 4; ++i)
            value += (mask & (1u << i)) ? -e[static_cast<std::size_t>(i)] : e[static_cast<std::size_t>(i)];
        if (first || value > best_value) {
            best_mask = mask;
            best_value = value;
            first = false;
        }
    }
    if (best_value > 2.0 + chsh_screen_tol) {
        FeasibilityResult r;
        r.status = FeasibilityStatus::infeasible;
        r.certificate = FeasibilityCertificate{FeasibilityCertificate::Kind::chsh_sign_pattern,
                                               detail::sign_pattern_string(best_mask), best_value};
        return r;
    }

    constexpr std::size_t rows = 17;
    constexpr std::size_t cols = quadruple_count;
    std::vector<double> a(rows * cols, 0.0);
    std::vector<double> b(rows, 0.0);
    std::size_t row = 0;
    for (const PairDistribution& t : targets) {
        for (OutcomeSign q1 : both_signs)
            for (OutcomeSign q2 : both_signs) {
                for (int q = 0; q < quadruple_count; ++q) {
                    const auto quad = OutcomeQuadruple::from_index(q);
                    const auto [first_sign, second_sign] = measured_pair(quad, t.setting);
                    if (first_sign == q1 && second_sign == q2) a[row * cols + static_cast<std::size_t>(q)] = 1.0;
                }
                b[row] = t.entry(pair_index(q1, q2));
                ++row;
            }
    }
    for (std::size_t q = 0; q < cols; ++q) a[row * cols + q] = 1.0;
    b[row] = 1.0;

    const Phase1Solution solution = phase1_simplex(rows, cols, std::move(a), std::move(b));
    if (solution.residual > feasibility_residual_tol) {
        FeasibilityResult r;
        r.status = FeasibilityStatus::infeasible;
        r.certificate = FeasibilityCertificate{FeasibilityCertificate::Kind::solver_phase1, std::nullopt,
                                               solution.residual};
        return r;
    }

    std::array<double, quadruple_count> w{};
    for (int q = 0; q < quadruple_count; ++q) w[static_cast<std::size_t>(q)] = solution.x[static_cast<std::size_t>(q)];
    FeasibilityResult r;
    r.status = FeasibilityStatus::feasible;
    r.witness = JointDistribution16::from_weights(w);
    return r;
}

/// The additive and the coherent "or" of the same pair of exclusive paths,
/// with the cross term accounting for their difference.
struct OrComparison {
    double kolmogorov = 0.0;
    double quantum = 0.0;
    double interference = 0.0;
};

inline OrComparison kolmogorov_vs_quantum_or(double a1, double a2) {
    OrComparison r;
    r.kolmogorov = kolmogorov_or(a1 * a1, a2 * a2);
    r.quantum = amplitude_or(a1, a2);
    r.interference = interference_term(a1, a2);
    return r;
}

}  // namespace chshlab

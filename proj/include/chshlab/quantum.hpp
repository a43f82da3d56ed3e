#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "chshlab/errors.hpp"
#include "chshlab/outcomes.hpp"

namespace chshlab {

/// Validation tolerance on the unit-norm invariant of amplitude vectors.
inline constexpr double norm_tol = 1e-12;

/// Slack allowed before a coherent sum of amplitudes refuses to exceed magnitude 1.
inline constexpr double amplitude_overflow_tol = 1e-12;

/// A polarizer orientation in the plane transverse to the photon pair axis.
/// Converts implicitly from a radian value; degrees only enter through the
/// named constructor.
struct Angle {
    double radians = 0.0;

    constexpr Angle(double radians = 0.0) : radians(radians) {}

    static constexpr Angle from_degrees(double deg) {
        return Angle{deg * std::numbers::pi / 180.0};
    }

    constexpr double degrees() const { return radians * 180.0 / std::numbers::pi; }
};

/// Difference of orientations, as the plain radian value theta_uv = u - v.
constexpr double operator-(Angle u, Angle v) { return u.radians - v.radians; }

/// The four polarizer orientations of a CHSH run: a, a' on photon 1 and b, b'
/// on photon 2. Correlations depend only on the differences exposed below.
struct DirectionConfig {
    Angle a{};
    Angle a_prime{};
    Angle b{};
    Angle b_prime{};

    constexpr double theta_ab() const { return a - b; }
    constexpr double theta_apb() const { return a_prime - b; }
    constexpr double theta_abp() const { return a - b_prime; }
    constexpr double theta_apbp() const { return a_prime - b_prime; }
    constexpr double theta_apa() const { return a_prime - a; }
    constexpr double theta_bpb() const { return b_prime - b; }

    constexpr double relative_angle(SettingPair s) const {
        switch (s) {
            case SettingPair::AB: return theta_ab();
            case SettingPair::ApB: return theta_apb();
            case SettingPair::ABp: return theta_abp();
            case SettingPair::ApBp: return theta_apbp();
        }
        throw std::invalid_argument("unknown setting pair");
    }
};

/// Two-photon polarization singlet amplitude on the pair (q1, q2), expressed
/// in bases whose orientations differ by theta.
inline double singlet_coefficient(OutcomeSign q1, OutcomeSign q2, Angle theta) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    if (q1 == q2) return std::cos(theta.radians) * inv_sqrt2;
    return (q1 == OutcomeSign::plus ? 1.0 : -1.0) * std::sin(theta.radians) * inv_sqrt2;
}

/// Coefficient of |new_sign> in the old basis vector |old_sign> when the
/// basis is rotated by theta, measured from the old axis to the new one.
inline double rotation_entry(OutcomeSign old_sign, OutcomeSign new_sign, Angle theta) {
    if (old_sign == new_sign) return std::cos(theta.radians);
    return (old_sign == OutcomeSign::plus ? 1.0 : -1.0) * std::sin(theta.radians);
}

/// Pure polarization state of the photon pair: four real amplitudes indexed by
/// the measured pair of signs, tagged with the basis label used for each photon.
class TwoPhotonKet {
public:
    TwoPhotonKet(const std::array<double, 4>& amplitudes, std::string basis_1, std::string basis_2)
        : amplitudes_(amplitudes), basis_1_(std::move(basis_1)), basis_2_(std::move(basis_2)) {
        double norm = 0.0;
        for (double amp : amplitudes_) norm += amp * amp;
        if (std::abs(norm - 1.0) > norm_tol) throw std::invalid_argument("ket amplitudes must have unit norm");
    }

    double amplitude(OutcomeSign q1, OutcomeSign q2) const {
        return amplitudes_[static_cast<std::size_t>(pair_index(q1, q2))];
    }

    const std::array<double, 4>& amplitudes() const { return amplitudes_; }
    const std::string& basis_1() const { return basis_1_; }
    const std::string& basis_2() const { return basis_2_; }

private:
    std::array<double, 4> amplitudes_;
    std::string basis_1_;
    std::string basis_2_;
};

/// The singlet state written in measurement bases separated by theta.
inline TwoPhotonKet singlet_ket(Angle theta, std::string basis_1 = "a'", std::string basis_2 = "b'") {
    std::array<double, 4> amps{};
    for (OutcomeSign q1 : both_signs)
        for (OutcomeSign q2 : both_signs)
            amps[static_cast<std::size_t>(pair_index(q1, q2))] = singlet_coefficient(q1, q2, theta);
    return TwoPhotonKet{amps, std::move(basis_1), std::move(basis_2)};
}

/// Re-expresses one photon's amplitudes in a basis rotated by theta away from
/// the current one.
inline TwoPhotonKet rotate_photon_basis(const TwoPhotonKet& ket, int photon, Angle theta,
                                        std::string new_basis = "?") {
    if (photon != 1 && photon != 2) throw std::invalid_argument("photon must be 1 or 2");
    std::array<double, 4> amps{};
    for (OutcomeSign q1 : both_signs) {
        for (OutcomeSign q2 : both_signs) {
            double sum = 0.0;
            for (OutcomeSign old_sign : both_signs) {
                if (photon == 1)
                    sum += rotation_entry(old_sign, q1, theta) * ket.amplitude(old_sign, q2);
                else
                    sum += rotation_entry(old_sign, q2, theta) * ket.amplitude(q1, old_sign);
            }
            amps[static_cast<std::size_t>(pair_index(q1, q2))] = sum;
        }
    }
    if (photon == 1) return TwoPhotonKet{amps, std::move(new_basis), ket.basis_2()};
    return TwoPhotonKet{amps, ket.basis_1(), std::move(new_basis)};
}

/// Amplitudes of the 16 fine-grained histories (q_a, q_a', q_b, q_b'): the pair
/// is emitted with definite primed signs, then each photon's sign is referred
/// to the unprimed analyzer. Squares of the coherent sums over the primed signs
/// form the measured pair distribution, which is what the norm check enforces.
class BranchAmplitudeTable {
public:
    explicit BranchAmplitudeTable(const std::array<double, quadruple_count>& amplitudes)
        : amplitudes_(amplitudes) {
        const double branch_bound = 1.0 / std::numbers::sqrt2 + amplitude_overflow_tol;
        double norm = 0.0;
        for (double amp : amplitudes_) {
            if (std::abs(amp) > branch_bound) throw AmplitudeOverflow{};
            norm += amp * amp;
        }
        if (std::abs(norm - 1.0) > norm_tol) throw std::invalid_argument("branch amplitudes must have unit norm");
    }

    double amplitude(const OutcomeQuadruple& q) const {
        return amplitudes_[static_cast<std::size_t>(q.index())];
    }

    const std::array<double, quadruple_count>& amplitudes() const { return amplitudes_; }

    /// Sum over the unobserved primed signs at fixed measured pair (q_a, q_b).
    double coherent_sum(OutcomeSign q_a, OutcomeSign q_b) const {
        double sum = 0.0;
        for (OutcomeSign q_ap : both_signs)
            for (OutcomeSign q_bp : both_signs)
                sum += amplitude(OutcomeQuadruple{q_a, q_ap, q_b, q_bp});
        return sum;
    }

private:
    std::array<double, quadruple_count> amplitudes_;
};

/// Branch amplitude of one history: the singlet coefficient of the emitted
/// primed pair times one basis-rotation entry per photon.
inline double branch_amplitude(const DirectionConfig& c, const OutcomeQuadruple& q) {
    return singlet_coefficient(q.q_a_prime, q.q_b_prime, c.theta_apbp()) *
           rotation_entry(q.q_a_prime, q.q_a, c.theta_apa()) *
           rotation_entry(q.q_b_prime, q.q_b, c.theta_bpb());
}

inline BranchAmplitudeTable branch_amplitudes(const DirectionConfig& c) {
    std::array<double, quadruple_count> amps{};
    for (int i = 0; i < quadruple_count; ++i)
        amps[static_cast<std::size_t>(i)] = branch_amplitude(c, OutcomeQuadruple::from_index(i));
    return BranchAmplitudeTable{amps};
}

/// Measured pair probability: square of the coherent sum over the primed signs.
inline double pair_probability(const BranchAmplitudeTable& table, OutcomeSign q_a, OutcomeSign q_b) {
    const double sum = table.coherent_sum(q_a, q_b);
    return sum * sum;
}

inline double pair_probability(const DirectionConfig& c, OutcomeSign q_a, OutcomeSign q_b) {
    return pair_probability(branch_amplitudes(c), q_a, q_b);
}

/// Closed form of the same probability: cos^2(theta)/2 for equal signs,
/// sin^2(theta)/2 for opposite signs, with theta the analyzer separation.
inline double pair_probability_closed(Angle theta, OutcomeSign q_a, OutcomeSign q_b) {
    const double c = (q_a == q_b) ? std::cos(theta.radians) : std::sin(theta.radians);
    return 0.5 * c * c;
}

/// Correlation of the two measured signs at analyzer separation theta.
inline double correlation_quantum(Angle theta) { return std::cos(2.0 * theta.radians); }

/// CHSH functional with the fixed sign pattern (+, +, -, +) on (AB, A'B, AB', A'B').
inline double chsh_quantum(const DirectionConfig& c) {
    return correlation_quantum(c.theta_ab()) + correlation_quantum(c.theta_apb()) -
           correlation_quantum(c.theta_abp()) + correlation_quantum(c.theta_apbp());
}

/// Probability of either of two mutually exclusive paths to the same outcome,
/// composed the coherent way: amplitudes add before squaring.
inline double amplitude_or(double a1, double a2) {
    const double sum = a1 + a2;
    if (std::abs(sum) > 1.0 + amplitude_overflow_tol) throw AmplitudeOverflow{};
    return sum * sum;
}

/// Cross term separating (a1 + a2)^2 from a1^2 + a2^2.
inline double interference_term(double a1, double a2) { return 2.0 * a1 * a2; }

struct ChshOptimum {
    DirectionConfig config{};
    double value = 0.0;
};

/// Deterministic maximization of the CHSH value over analyzer orientations,
/// with a fixed at 0 since only differences matter: exhaustive grid over
/// (a', b, b') followed by coordinate descent with a halving step.
inline ChshOptimum optimize_chsh(int grid_steps = 64, int refine_iters = 40) {
    if (grid_steps < 8) throw std::invalid_argument("grid_steps must be at least 8");
    if (refine_iters < 0) throw std::invalid_argument("refine_iters must be non-negative");

    const double step = std::numbers::pi / grid_steps;
    DirectionConfig best{};
    double best_value = chsh_quantum(best);
    for (int i = 0; i < grid_steps; ++i)
        for (int j = 0; j < grid_steps; ++j)
            for (int k = 0; k < grid_steps; ++k) {
                const DirectionConfig c{Angle{0.0}, Angle{i * step}, Angle{j * step}, Angle{k * step}};
                const double v = chsh_quantum(c);
                if (v > best_value) {
                    best = c;
                    best_value = v;
                }
            }

    double h = step;
    for (int iter = 0; iter < refine_iters; ++iter) {
        h *= 0.5;
        for (Angle DirectionConfig::*coord : {&DirectionConfig::a_prime, &DirectionConfig::b, &DirectionConfig::b_prime}) {
            for (double delta : {-h, h}) {
                DirectionConfig trial = best;
                (trial.*coord).radians += delta;
                const double v = chsh_quantum(trial);
                if (v > best_value) {
                    best = trial;
                    best_value = v;
                }
            }
        }
    }

    return ChshOptimum{best, chsh_quantum(best)};
}

}  // namespace chshlab

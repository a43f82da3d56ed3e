#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "chshlab/errors.hpp"
#include "chshlab/outcomes.hpp"
#include "chshlab/rng.hpp"

namespace chshlab {

/// Validation tolerance on the unit-sum invariant of probability vectors.
inline constexpr double mass_sum_tol = 1e-9;

/// Slack allowed before two probabilities refuse to add up to more than 1.
inline constexpr double probability_overflow_tol = 1e-12;

/// A probability distribution over the 16 outcome quadruples. One distribution
/// serves all four measurement contexts; entries are non-negative and sum to 1.
/// Constructors normalize exactly, so the invariants hold by construction.
class JointDistribution16 {
public:
    /// Normalizes non-negative weights (canonical quadruple order) to unit sum.
    static JointDistribution16 from_weights(const std::array<double, quadruple_count>& weights) {
        double total = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0)) throw NegativeWeight{};
            total += w;
        }
        if (total <= 0.0) throw ZeroTotal{};
        std::array<double, quadruple_count> mass{};
        for (int i = 0; i < quadruple_count; ++i) mass[i] = weights[i] / total;
        return JointDistribution16{mass};
    }

    double mass(int index) const { return mass_.at(static_cast<std::size_t>(index)); }
    double mass(const OutcomeQuadruple& q) const { return mass_[static_cast<std::size_t>(q.index())]; }
    const std::array<double, quadruple_count>& masses() const { return mass_; }

private:
    explicit JointDistribution16(const std::array<double, quadruple_count>& mass) : mass_(mass) {}
    std::array<double, quadruple_count> mass_;
};

inline JointDistribution16 joint_from_weights(const std::array<double, quadruple_count>& weights) {
    return JointDistribution16::from_weights(weights);
}

/// Point mass on a single quadruple: every variable takes a definite value.
inline JointDistribution16 deterministic_joint(const OutcomeQuadruple& q) {
    std::array<double, quadruple_count> w{};
    w[static_cast<std::size_t>(q.index())] = 1.0;
    return JointDistribution16::from_weights(w);
}

/// Normalized iid-uniform weights; identical seed gives a bit-identical result.
inline JointDistribution16 random_joint(std::uint64_t seed) {
    auto rng = seeded_engine(seed);
    std::array<double, quadruple_count> w{};
    for (double& wi : w) wi = unit_open_closed(rng);
    return JointDistribution16::from_weights(w);
}

/// Distribution of one measured pair of outcomes under a given setting.
struct PairDistribution {
    SettingPair setting = SettingPair::AB;
    double p_pp = 0.0;
    double p_pm = 0.0;
    double p_mp = 0.0;
    double p_mm = 0.0;

    double entry(int pair_idx) const {
        switch (pair_idx) {
            case 0: return p_pp;
            case 1: return p_pm;
            case 2: return p_mp;
            case 3: return p_mm;
        }
        throw std::invalid_argument("pair index out of range");
    }

    double& entry(int pair_idx) {
        switch (pair_idx) {
            case 0: return p_pp;
            case 1: return p_pm;
            case 2: return p_mp;
            case 3: return p_mm;
        }
        throw std::invalid_argument("pair index out of range");
    }

    double sum() const { return p_pp + p_pm + p_mp + p_mm; }

    /// Expectation of the product of the two measured signs.
    double correlator() const { return p_pp - p_pm - p_mp + p_mm; }
};

/// Sums the four quadruple masses consistent with each measured pair of outcomes.
inline PairDistribution pair_marginal(const JointDistribution16& d, SettingPair s) {
    PairDistribution m{s, 0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < quadruple_count; ++i) {
        const auto q = OutcomeQuadruple::from_index(i);
        const auto [first, second] = measured_pair(q, s);
        m.entry(pair_index(first, second)) += d.mass(i);
    }
    return m;
}

inline double correlator(const JointDistribution16& d, SettingPair s) {
    return pair_marginal(d, s).correlator();
}

struct CorrelatorSet {
    double e_ab = 0.0;
    double e_apb = 0.0;
    double e_abp = 0.0;
    double e_apbp = 0.0;
};

inline CorrelatorSet correlator_set(const JointDistribution16& d) {
    return CorrelatorSet{correlator(d, SettingPair::AB), correlator(d, SettingPair::ApB),
                         correlator(d, SettingPair::ABp), correlator(d, SettingPair::ApBp)};
}

/// CHSH functional with the fixed sign pattern (+, +, -, +) on (AB, A'B, AB', A'B').
inline double chsh(const JointDistribution16& d) {
    const auto e = correlator_set(d);
    return e.e_ab + e.e_apb - e.e_abp + e.e_apbp;
}

struct DeterministicChshExtremum {
    double value = 0.0;
    std::vector<OutcomeQuadruple> attained_at;
};

/// Extremum of the CHSH functional over the 16 deterministic strategies.
/// All arithmetic on point masses is exact, so `value` is exactly +/-2.
inline DeterministicChshExtremum max_chsh_deterministic(bool find_minimum = false) {
    DeterministicChshExtremum best;
    for (int i = 0; i < quadruple_count; ++i) {
        const auto q = OutcomeQuadruple::from_index(i);
        const double v = chsh(deterministic_joint(q));
        const bool better = find_minimum ? v < best.value : v > best.value;
        if (best.attained_at.empty() || better) {
            if (best.attained_at.empty() || v != best.value) best.attained_at.clear();
            best.value = v;
        }
        if (v == best.value) best.attained_at.push_back(q);
    }
    return best;
}

/// Additivity over mutually exclusive events.
inline double kolmogorov_or(double p1, double p2) {
    if (!(p1 >= 0.0) || !(p2 >= 0.0)) throw std::invalid_argument("probabilities must be non-negative");
    const double sum = p1 + p2;
    if (sum > 1.0 + probability_overflow_tol) throw ProbabilityOverflow{};
    return sum;
}

}  // namespace chshlab

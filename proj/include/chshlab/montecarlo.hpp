#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "chshlab/errors.hpp"
#include "chshlab/outcomes.hpp"
#include "chshlab/quantum.hpp"
#include "chshlab/rng.hpp"

namespace chshlab {

/// Trials per RNG block. Each block gets its own engine seeded from the run
/// seed and the block index, so results are independent of how blocks are
/// scheduled and depend only on (seed, trial count).
inline constexpr std::uint64_t trials_per_block = 65536;

/// Tallies from repeated sampling, over either the 4 measured pairs or the
/// 16 fine-grained quadruples, in canonical index order.
struct TrialCounts {
    enum class Kind { pair, quadruple };
    Kind kind = Kind::pair;
    std::uint64_t n = 0;
    std::vector<std::uint64_t> counts;

    static TrialCounts zero(Kind kind) {
        TrialCounts t;
        t.kind = kind;
        t.counts.assign(kind == Kind::pair ? 4 : static_cast<std::size_t>(quadruple_count), 0);
        return t;
    }
};

namespace detail {

template <std::size_t N>
inline std::size_t sample_categorical(const std::array<double, N>& probs, double u) {
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < N; ++i) {
        cumulative += probs[i];
        if (u < cumulative) return i;
    }
    return N - 1;
}

}  // namespace detail

/// Samples the pair of signs measured under setting s, n trials, one uniform
/// draw per trial. Bit-identical across runs for fixed (c, s, n, seed).
inline TrialCounts sample_pair_quantum(const DirectionConfig& c, SettingPair s, std::uint64_t n,
                                       std::uint64_t seed) {
    const Angle theta = c.relative_angle(s);
    std::array<double, 4> probs{};
    for (OutcomeSign q1 : both_signs)
        for (OutcomeSign q2 : both_signs)
            probs[static_cast<std::size_t>(pair_index(q1, q2))] = pair_probability_closed(theta, q1, q2);

    TrialCounts tally = TrialCounts::zero(TrialCounts::Kind::pair);
    tally.n = n;
    const std::uint64_t blocks = (n + trials_per_block - 1) / trials_per_block;
    for (std::uint64_t blk = 0; blk < blocks; ++blk) {
        auto rng = seeded_engine(derive_stream_seed(seed, blk));
        const std::uint64_t begin = blk * trials_per_block;
        const std::uint64_t end = begin + trials_per_block < n ? begin + trials_per_block : n;
        for (std::uint64_t t = begin; t < end; ++t)
            tally.counts[detail::sample_categorical(probs, unit_half_open(rng))] += 1;
    }
    return tally;
}

/// Samples the incoherent two-stage process directly: first the primed pair
/// from the squared emission coefficients, then each photon's unprimed sign
/// from the squared basis-rotation entries. Three uniform draws per trial.
inline TrialCounts sample_cascade(const DirectionConfig& c, std::uint64_t n, std::uint64_t seed) {
    std::array<double, 4> primed_probs{};
    for (OutcomeSign q1 : both_signs)
        for (OutcomeSign q2 : both_signs) {
            const double amp = singlet_coefficient(q1, q2, c.theta_apbp());
            primed_probs[static_cast<std::size_t>(pair_index(q1, q2))] = amp * amp;
        }
    const double keep_a = std::cos(c.theta_apa()) * std::cos(c.theta_apa());
    const double keep_b = std::cos(c.theta_bpb()) * std::cos(c.theta_bpb());

    TrialCounts tally = TrialCounts::zero(TrialCounts::Kind::quadruple);
    tally.n = n;
    const std::uint64_t blocks = (n + trials_per_block - 1) / trials_per_block;
    for (std::uint64_t blk = 0; blk < blocks; ++blk) {
        auto rng = seeded_engine(derive_stream_seed(seed, blk));
        const std::uint64_t begin = blk * trials_per_block;
        const std::uint64_t end = begin + trials_per_block < n ? begin + trials_per_block : n;
        for (std::uint64_t t = begin; t < end; ++t) {
            const std::size_t primed = detail::sample_categorical(primed_probs, unit_half_open(rng));
            const OutcomeSign q_ap = (primed & 2) ? OutcomeSign::minus : OutcomeSign::plus;
            const OutcomeSign q_bp = (primed & 1) ? OutcomeSign::minus : OutcomeSign::plus;
            const OutcomeSign q_a = unit_half_open(rng) < keep_a ? q_ap : flipped(q_ap);
            const OutcomeSign q_b = unit_half_open(rng) < keep_b ? q_bp : flipped(q_bp);
            tally.counts[static_cast<std::size_t>(OutcomeQuadruple{q_a, q_ap, q_b, q_bp}.index())] += 1;
        }
    }
    return tally;
}

/// Collapses quadruple tallies onto the pair measured under a given setting.
inline TrialCounts reduce_to_pair(const TrialCounts& tally, SettingPair s) {
    if (tally.kind != TrialCounts::Kind::quadruple)
        throw std::invalid_argument("only quadruple tallies can be reduced to a pair");
    TrialCounts reduced = TrialCounts::zero(TrialCounts::Kind::pair);
    reduced.n = tally.n;
    for (int i = 0; i < quadruple_count; ++i) {
        const auto q = OutcomeQuadruple::from_index(i);
        const auto [first, second] = measured_pair(q, s);
        reduced.counts[static_cast<std::size_t>(pair_index(first, second))] += tally.counts[static_cast<std::size_t>(i)];
    }
    return reduced;
}

struct EstimateWithError {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

/// Sample correlator of the two measured signs, with its standard error
/// sqrt((1 - value^2) / n) from the two-point distribution of the product.
inline EstimateWithError estimate_correlator(const TrialCounts& tally) {
    if (tally.kind != TrialCounts::Kind::pair)
        throw std::invalid_argument("correlator estimation expects pair tallies");
    if (tally.n == 0) throw EmptyCounts{};
    const double n = static_cast<double>(tally.n);
    const double value = (static_cast<double>(tally.counts[0]) - static_cast<double>(tally.counts[1]) -
                          static_cast<double>(tally.counts[2]) + static_cast<double>(tally.counts[3])) /
                         n;
    const double variance = 1.0 - value * value;
    EstimateWithError e;
    e.value = value;
    e.std_error = std::sqrt((variance > 0.0 ? variance : 0.0) / n);
    e.n = tally.n;
    return e;
}

enum class SamplingModel { quantum, cascade };

struct ChshEstimate {
    std::array<TrialCounts, 4> counts{};
    std::array<EstimateWithError, 4> correlators{};
    EstimateWithError chsh{};
};

/// Estimates all four correlators from independent per-setting runs and
/// combines them with the fixed sign pattern (+, +, -, +); the standard error
/// adds in quadrature. Setting index i runs on its own derived seed stream.
/// The cascade model samples quadruples and tallies the pair measured under
/// the setting at hand, so both models report per-setting pair counts.
inline ChshEstimate estimate_chsh(const DirectionConfig& c, SamplingModel model,
                                  std::uint64_t trials_per_setting, std::uint64_t seed) {
    ChshEstimate result;
    double value = 0.0;
    double variance = 0.0;
    for (SettingPair s : all_settings) {
        const auto i = static_cast<std::size_t>(setting_index(s));
        const std::uint64_t sub_seed = derive_stream_seed(seed, i);
        if (model == SamplingModel::quantum)
            result.counts[i] = sample_pair_quantum(c, s, trials_per_setting, sub_seed);
        else
            result.counts[i] = reduce_to_pair(sample_cascade(c, trials_per_setting, sub_seed), s);
        result.correlators[i] = estimate_correlator(result.counts[i]);
        const double sign = (s == SettingPair::ABp) ? -1.0 : 1.0;
        value += sign * result.correlators[i].value;
        variance += result.correlators[i].std_error * result.correlators[i].std_error;
    }
    result.chsh.value = value;
    result.chsh.std_error = std::sqrt(variance);
    result.chsh.n = trials_per_setting;
    return result;
}

}  // namespace chshlab

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace chshlab {

/// Binary polarization outcome: +1 along the analyzer axis, -1 perpendicular to it.
enum class OutcomeSign : int { plus = +1, minus = -1 };

constexpr int sign_value(OutcomeSign s) { return static_cast<int>(s); }

constexpr OutcomeSign flipped(OutcomeSign s) {
    return s == OutcomeSign::plus ? OutcomeSign::minus : OutcomeSign::plus;
}

constexpr char sign_char(OutcomeSign s) { return s == OutcomeSign::plus ? '+' : '-'; }

inline OutcomeSign sign_from_char(char c) {
    if (c == '+') return OutcomeSign::plus;
    if (c == '-') return OutcomeSign::minus;
    throw std::invalid_argument(std::string("outcome character must be '+' or '-', got '") + c + "'");
}

inline constexpr std::array<OutcomeSign, 2> both_signs{OutcomeSign::plus, OutcomeSign::minus};

inline constexpr int quadruple_count = 16;

/// One run's four results in the fixed component order (q_a, q_a', q_b, q_b').
struct OutcomeQuadruple {
    OutcomeSign q_a = OutcomeSign::plus;
    OutcomeSign q_a_prime = OutcomeSign::plus;
    OutcomeSign q_b = OutcomeSign::plus;
    OutcomeSign q_b_prime = OutcomeSign::plus;

    bool operator==(const OutcomeQuadruple&) const = default;

    /// Canonical index 0..15. q_a is the high bit; a set bit encodes minus,
    /// so index order matches lexicographic order of the "+/-" keys.
    constexpr int index() const {
        auto bit = [](OutcomeSign s) { return s == OutcomeSign::minus ? 1 : 0; };
        return bit(q_a) << 3 | bit(q_a_prime) << 2 | bit(q_b) << 1 | bit(q_b_prime);
    }

    static constexpr OutcomeQuadruple from_index(int i) {
        auto sign = [](int bit) { return bit ? OutcomeSign::minus : OutcomeSign::plus; };
        return OutcomeQuadruple{sign(i >> 3 & 1), sign(i >> 2 & 1), sign(i >> 1 & 1), sign(i & 1)};
    }

    /// Four-character key such as "++-+", components in canonical order.
    std::string key() const {
        return {sign_char(q_a), sign_char(q_a_prime), sign_char(q_b), sign_char(q_b_prime)};
    }

    static OutcomeQuadruple from_key(std::string_view k) {
        if (k.size() != 4) throw std::invalid_argument("quadruple key must have exactly 4 characters");
        return OutcomeQuadruple{sign_from_char(k[0]), sign_from_char(k[1]), sign_from_char(k[2]),
                                sign_from_char(k[3])};
    }
};

/// Which pair of observables a run actually measures.
enum class SettingPair { AB, ApB, ABp, ApBp };

inline constexpr std::array<SettingPair, 4> all_settings{SettingPair::AB, SettingPair::ApB,
                                                         SettingPair::ABp, SettingPair::ApBp};

constexpr int setting_index(SettingPair s) { return static_cast<int>(s); }

inline std::string_view setting_key(SettingPair s) {
    switch (s) {
        case SettingPair::AB: return "ab";
        case SettingPair::ApB: return "apb";
        case SettingPair::ABp: return "abp";
        case SettingPair::ApBp: return "apbp";
    }
    throw std::invalid_argument("unknown setting");
}

/// The two components of a quadruple the setting selects, photon 1 first.
constexpr std::pair<OutcomeSign, OutcomeSign> measured_pair(const OutcomeQuadruple& q, SettingPair s) {
    switch (s) {
        case SettingPair::AB: return {q.q_a, q.q_b};
        case SettingPair::ApB: return {q.q_a_prime, q.q_b};
        case SettingPair::ABp: return {q.q_a, q.q_b_prime};
        case SettingPair::ApBp: return {q.q_a_prime, q.q_b_prime};
    }
    return {q.q_a, q.q_b};
}

/// Canonical index of a measured pair: (+,+)=0, (+,-)=1, (-,+)=2, (-,-)=3.
constexpr int pair_index(OutcomeSign first, OutcomeSign second) {
    return (first == OutcomeSign::minus ? 2 : 0) + (second == OutcomeSign::minus ? 1 : 0);
}

inline std::string pair_key(int index) {
    if (index < 0 || index > 3) throw std::invalid_argument("pair index out of range");
    return {sign_char(index & 2 ? OutcomeSign::minus : OutcomeSign::plus),
            sign_char(index & 1 ? OutcomeSign::minus : OutcomeSign::plus)};
}

}  // namespace chshlab

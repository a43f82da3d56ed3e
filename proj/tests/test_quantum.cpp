#include <array>
#include <cmath>
#include <numbers>

#include <catch2/catch_amalgamated.hpp>

#include "chshlab/quantum.hpp"
#include "chshlab/rng.hpp"

using namespace chshlab;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

DirectionConfig canonical_config() {
    return DirectionConfig{Angle{0.0}, Angle{pi / 4}, Angle{pi / 8}, Angle{3 * pi / 8}};
}

DirectionConfig random_config(std::uint64_t seed) {
    auto rng = seeded_engine(seed);
    const double span = 2.0 * pi;
    return DirectionConfig{Angle{span * unit_half_open(rng)}, Angle{span * unit_half_open(rng)},
                           Angle{span * unit_half_open(rng)}, Angle{span * unit_half_open(rng)}};
}

}  // namespace

TEST_CASE("singlet_ket matches the small-angle closed forms") {
    const auto aligned = singlet_ket(Angle{0.0});
    REQUIRE_THAT(aligned.amplitude(OutcomeSign::plus, OutcomeSign::plus), WithinAbs(inv_sqrt2, 1e-15));
    REQUIRE_THAT(aligned.amplitude(OutcomeSign::plus, OutcomeSign::minus), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(aligned.amplitude(OutcomeSign::minus, OutcomeSign::plus), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(aligned.amplitude(OutcomeSign::minus, OutcomeSign::minus), WithinAbs(inv_sqrt2, 1e-15));

    const auto crossed = singlet_ket(Angle{pi / 2});
    REQUIRE_THAT(crossed.amplitude(OutcomeSign::plus, OutcomeSign::plus), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(crossed.amplitude(OutcomeSign::plus, OutcomeSign::minus), WithinAbs(inv_sqrt2, 1e-15));
    REQUIRE_THAT(crossed.amplitude(OutcomeSign::minus, OutcomeSign::plus), WithinAbs(-inv_sqrt2, 1e-15));
    REQUIRE_THAT(crossed.amplitude(OutcomeSign::minus, OutcomeSign::minus), WithinAbs(0.0, 1e-15));
}

TEST_CASE("singlet_ket has unit norm at any angle") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto rng = seeded_engine(seed);
        const auto ket = singlet_ket(Angle{4.0 * pi * (unit_half_open(rng) - 0.5)});
        double norm_sq = 0.0;
        for (OutcomeSign q1 : both_signs)
            for (OutcomeSign q2 : both_signs) {
                const double amp = ket.amplitude(q1, q2);
                norm_sq += amp * amp;
            }
        REQUIRE_THAT(norm_sq, WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("TwoPhotonKet rejects non-unit coefficient vectors") {
    REQUIRE_THROWS_AS(TwoPhotonKet(std::array<double, 4>{0.5, 0.0, 0.0, 0.5}, "x", "y"), std::invalid_argument);
}

TEST_CASE("rotate_photon_basis at angle zero is the identity") {
    const auto ket = singlet_ket(Angle{0.7});
    const auto same = rotate_photon_basis(ket, 1, Angle{0.0}, "a");
    for (OutcomeSign q1 : both_signs)
        for (OutcomeSign q2 : both_signs)
            REQUIRE(same.amplitude(q1, q2) == ket.amplitude(q1, q2));
}

TEST_CASE("rotate_photon_basis round-trips through the opposite angle") {
    const auto ket = singlet_ket(Angle{1.3});
    for (int photon : {1, 2}) {
        const auto there = rotate_photon_basis(ket, photon, Angle{0.45}, "mid");
        const auto back = rotate_photon_basis(there, photon, Angle{-0.45}, "orig");
        for (OutcomeSign q1 : both_signs)
            for (OutcomeSign q2 : both_signs)
                REQUIRE_THAT(back.amplitude(q1, q2), WithinAbs(ket.amplitude(q1, q2), 1e-14));
    }
}

TEST_CASE("rotating photon 1 matches the explicit coefficient expansion") {
    const std::array<std::pair<double, double>, 3> angle_pairs{{{0.3, 1.1}, {0.7, -0.4}, {2.0, 0.9}}};
    for (const auto& [theta_1, theta_2] : angle_pairs) {
        const auto rotated = rotate_photon_basis(singlet_ket(Angle{theta_1}), 1, Angle{theta_2}, "a");
        const double c1 = std::cos(theta_1), s1 = std::sin(theta_1);
        const double c2 = std::cos(theta_2), s2 = std::sin(theta_2);
        const double pp = inv_sqrt2 * (c1 * c2 + (-s1) * (-s2));
        const double pm = inv_sqrt2 * (s1 * c2 + c1 * (-s2));
        const double mp = inv_sqrt2 * (c1 * s2 + (-s1) * c2);
        const double mm = inv_sqrt2 * (s1 * s2 + c1 * c2);
        REQUIRE_THAT(rotated.amplitude(OutcomeSign::plus, OutcomeSign::plus), WithinAbs(pp, 1e-14));
        REQUIRE_THAT(rotated.amplitude(OutcomeSign::plus, OutcomeSign::minus), WithinAbs(pm, 1e-14));
        REQUIRE_THAT(rotated.amplitude(OutcomeSign::minus, OutcomeSign::plus), WithinAbs(mp, 1e-14));
        REQUIRE_THAT(rotated.amplitude(OutcomeSign::minus, OutcomeSign::minus), WithinAbs(mm, 1e-14));

        const auto reference = singlet_ket(Angle{theta_1 - theta_2});
        for (OutcomeSign q1 : both_signs)
            for (OutcomeSign q2 : both_signs)
                REQUIRE_THAT(rotated.amplitude(q1, q2), WithinAbs(reference.amplitude(q1, q2), 1e-14));
    }
}

TEST_CASE("rotating photon 2 applies the transfer matrix on the second slot") {
    const double theta_1 = 0.8, theta_2 = 0.25;
    const auto rotated = rotate_photon_basis(singlet_ket(Angle{theta_1}), 2, Angle{theta_2}, "b");
    const auto source = singlet_ket(Angle{theta_1});
    for (OutcomeSign q1 : both_signs)
        for (OutcomeSign q2 : both_signs) {
            double expected = 0.0;
            for (OutcomeSign old : both_signs)
                expected += source.amplitude(q1, old) * rotation_entry(old, q2, Angle{theta_2});
            REQUIRE_THAT(rotated.amplitude(q1, q2), WithinAbs(expected, 1e-14));
        }
    REQUIRE_THROWS_AS(rotate_photon_basis(source, 3, Angle{0.1}, "c"), std::invalid_argument);
}

TEST_CASE("branch amplitudes at aligned settings concentrate on the matched outcomes") {
    const auto table = branch_amplitudes(DirectionConfig{Angle{0.0}, Angle{0.0}, Angle{0.0}, Angle{0.0}});
    REQUIRE_THAT(table.amplitude(OutcomeQuadruple::from_key("++++")), WithinAbs(inv_sqrt2, 1e-15));
    REQUIRE_THAT(table.amplitude(OutcomeQuadruple::from_key("----")), WithinAbs(inv_sqrt2, 1e-15));
    double off_mass = 0.0;
    for (int i = 1; i < quadruple_count - 1; ++i) {
        const double amp = table.amplitude(OutcomeQuadruple::from_index(i));
        off_mass += amp * amp;
    }
    REQUIRE_THAT(off_mass, WithinAbs(0.0, 1e-24));
}

TEST_CASE("branch amplitudes match the closed products of three factors") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto c = random_config(seed);
        const auto table = branch_amplitudes(c);
        const double t1 = c.theta_apbp(), t2 = c.theta_apa(), t3 = c.theta_bpb();
        const double c1 = std::cos(t1), s1 = std::sin(t1);
        const double c2 = std::cos(t2), s2 = std::sin(t2);
        const double c3 = std::cos(t3), s3 = std::sin(t3);
        REQUIRE_THAT(table.amplitude(OutcomeQuadruple::from_key("++++")),
                     WithinAbs(inv_sqrt2 * c1 * c2 * c3, 1e-14));
        REQUIRE_THAT(table.amplitude(OutcomeQuadruple::from_key("+++-")),
                     WithinAbs(inv_sqrt2 * -s1 * c2 * s3, 1e-14));
        REQUIRE_THAT(table.amplitude(OutcomeQuadruple::from_key("+-++")),
                     WithinAbs(inv_sqrt2 * s1 * s2 * c3, 1e-14));
        REQUIRE_THAT(table.amplitude(OutcomeQuadruple::from_key("+-+-")),
                     WithinAbs(inv_sqrt2 * c1 * s2 * s3, 1e-14));
    }
}

TEST_CASE("BranchAmplitudeTable enforces its invariants") {
    std::array<double, quadruple_count> oversized{};
    oversized[0] = 0.8;
    oversized[15] = 0.6;
    REQUIRE_THROWS_AS(BranchAmplitudeTable(oversized), AmplitudeOverflow);

    std::array<double, quadruple_count> short_norm{};
    short_norm[0] = 0.5;
    REQUIRE_THROWS_AS(BranchAmplitudeTable(short_norm), std::invalid_argument);
}

TEST_CASE("pair_probability sums amplitudes before squaring") {
    const DirectionConfig aligned{Angle{0.0}, Angle{0.0}, Angle{0.0}, Angle{0.0}};
    REQUIRE_THAT(pair_probability(aligned, OutcomeSign::plus, OutcomeSign::plus), WithinAbs(0.5, 1e-15));

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto c = random_config(seed);
        double total = 0.0;
        for (OutcomeSign q_a : both_signs)
            for (OutcomeSign q_b : both_signs) {
                const double p = pair_probability(c, q_a, q_b);
                REQUIRE_THAT(p, WithinAbs(pair_probability_closed(Angle{c.theta_ab()}, q_a, q_b), 1e-12));
                total += p;
            }
        REQUIRE_THAT(total, WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("pair_probability does not depend on the intermediate bases") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto rng = seeded_engine(seed + 7000);
        const Angle a{2.0 * pi * unit_half_open(rng)};
        const Angle b{2.0 * pi * unit_half_open(rng)};
        const DirectionConfig first{a, Angle{2.0 * pi * unit_half_open(rng)}, b,
                                    Angle{2.0 * pi * unit_half_open(rng)}};
        const DirectionConfig second{a, Angle{2.0 * pi * unit_half_open(rng)}, b,
                                     Angle{2.0 * pi * unit_half_open(rng)}};
        for (OutcomeSign q_a : both_signs)
            for (OutcomeSign q_b : both_signs)
                REQUIRE_THAT(pair_probability(first, q_a, q_b),
                             WithinAbs(pair_probability(second, q_a, q_b), 1e-12));
    }
}

TEST_CASE("pair_probability at a 45 degree separation is one quarter") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto rng = seeded_engine(seed + 400);
        const DirectionConfig c{Angle{0.0}, Angle{2.0 * pi * unit_half_open(rng)}, Angle{pi / 4},
                                Angle{2.0 * pi * unit_half_open(rng)}};
        REQUIRE_THAT(pair_probability(c, OutcomeSign::plus, OutcomeSign::plus), WithinAbs(0.25, 1e-12));
    }
}

TEST_CASE("correlation_quantum follows the doubled-angle cosine") {
    REQUIRE(correlation_quantum(Angle{0.0}) == 1.0);
    REQUIRE_THAT(correlation_quantum(Angle{pi / 4}), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(correlation_quantum(Angle{pi / 8}), WithinAbs(std::numbers::sqrt2 / 2.0, 1e-15));

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto rng = seeded_engine(seed + 900);
        const Angle theta{4.0 * pi * (unit_half_open(rng) - 0.5)};
        double expectation = 0.0;
        for (OutcomeSign q_a : both_signs)
            for (OutcomeSign q_b : both_signs)
                expectation += sign_value(q_a) * sign_value(q_b) * pair_probability_closed(theta, q_a, q_b);
        REQUIRE_THAT(correlation_quantum(theta), WithinAbs(expectation, 1e-12));
    }
}

TEST_CASE("chsh_quantum at the canonical settings reaches two root two") {
    REQUIRE_THAT(chsh_quantum(canonical_config()), WithinAbs(2.0 * std::numbers::sqrt2, 1e-12));
    REQUIRE(chsh_quantum(DirectionConfig{Angle{0.3}, Angle{0.3}, Angle{0.3}, Angle{0.3}}) == 2.0);
    REQUIRE_THAT(chsh_quantum(DirectionConfig{Angle{0.0}, Angle{0.0}, Angle{pi / 4}, Angle{pi / 4}}),
                 WithinAbs(0.0, 1e-15));
}

TEST_CASE("chsh_quantum never exceeds the quantum ceiling") {
    for (std::uint64_t seed = 0; seed < 10000; ++seed)
        REQUIRE(std::abs(chsh_quantum(random_config(seed))) <= 2.0 * std::numbers::sqrt2 + 1e-9);
}

TEST_CASE("amplitude_or squares the coherent sum") {
    REQUIRE(amplitude_or(0.6, 0.0) == 0.36);
    REQUIRE(amplitude_or(0.5, 0.5) == 1.0);
    REQUIRE(amplitude_or(0.5, -0.5) == 0.0);
    REQUIRE_THROWS_AS(amplitude_or(inv_sqrt2, inv_sqrt2), AmplitudeOverflow);
}

TEST_CASE("interference_term is the cross term of the squared sum") {
    for (double a1 : {-0.7, -0.3, 0.0, 0.2, 0.6})
        for (double a2 : {-0.7, -0.3, 0.0, 0.2, 0.6}) {
            REQUIRE(interference_term(a1, a2) == 2.0 * a1 * a2);
            if (std::abs(a1 + a2) <= 1.0)
                REQUIRE_THAT(amplitude_or(a1, a2), WithinAbs(a1 * a1 + a2 * a2 + interference_term(a1, a2), 1e-15));
        }
}

TEST_CASE("optimize_chsh recovers the maximal violation from defaults") {
    const auto best = optimize_chsh();
    REQUIRE_THAT(best.value, WithinAbs(2.0 * std::numbers::sqrt2, 1e-6));
    REQUIRE(chsh_quantum(best.config) == best.value);
}

TEST_CASE("optimize_chsh with a coarse grid stays below the ceiling") {
    const auto coarse = optimize_chsh(8, 0);
    REQUIRE(coarse.value <= 2.0 * std::numbers::sqrt2 + 1e-12);
    REQUIRE(chsh_quantum(coarse.config) == coarse.value);
}

TEST_CASE("optimize_chsh validates its resolution arguments") {
    REQUIRE_THROWS_AS(optimize_chsh(7, 10), std::invalid_argument);
    REQUIRE_THROWS_AS(optimize_chsh(16, -1), std::invalid_argument);
}

TEST_CASE("Angle converts between degrees and radians") {
    REQUIRE_THAT(Angle::from_degrees(45.0).radians, WithinAbs(pi / 4, 1e-15));
    REQUIRE_THAT(Angle::from_degrees(67.5).degrees(), WithinAbs(67.5, 1e-12));
    REQUIRE(Angle{pi}.radians == pi);
}

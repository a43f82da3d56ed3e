#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "chshlab/analysis.hpp"
#include "chshlab/classical.hpp"
#include "chshlab/montecarlo.hpp"
#include "chshlab/outcomes.hpp"
#include "chshlab/quantum.hpp"
#include "chshlab/serialize.hpp"

namespace chshlab {

/// Report assembly shared by the command-line tool and the acceptance checks.
/// Every emitter is a pure function of its inputs with canonical key order and
/// fixed float formatting, so identical inputs give byte-identical reports.

namespace detail {

/// Settings in the lexicographic order of their keys: ab, abp, apb, apbp.
inline constexpr std::array<SettingPair, 4> settings_by_key{SettingPair::AB, SettingPair::ABp,
                                                            SettingPair::ApB, SettingPair::ApBp};

}  // namespace detail

inline std::string chsh_quantum_report(const DirectionConfig& c) {
    JsonObject correlators;
    for (SettingPair s : detail::settings_by_key)
        correlators.number(setting_key(s), correlation_quantum(c.relative_angle(s)));
    return JsonObject{}
        .raw("angles_rad", direction_config_to_json(c))
        .string("command", "chsh")
        .raw("correlators", correlators.str())
        .string("model", "quantum")
        .number("value", chsh_quantum(c))
        .str();
}

inline std::string chsh_classical_max_report() {
    const DeterministicChshExtremum best = max_chsh_deterministic();
    JsonArray maximizers;
    for (const OutcomeQuadruple& q : best.attained_at) maximizers.raw("\"" + json_escape(q.key()) + "\"");
    return JsonObject{}
        .string("command", "chsh")
        .raw("maximizers", maximizers.str())
        .string("model", "classical-max")
        .number("value", best.value)
        .str();
}

inline std::string certify_report(const DirectionConfig& c, const FeasibilityResult& r) {
    JsonObject obj;
    obj.raw("angles_rad", direction_config_to_json(c));
    if (r.certificate) obj.raw("certificate", feasibility_certificate_to_json(*r.certificate));
    obj.string("command", "certify");
    obj.string("status", r.status == FeasibilityStatus::feasible ? "Feasible" : "Infeasible");
    if (r.witness) obj.raw("witness", joint_to_json(*r.witness));
    return obj.str();
}

inline std::string certify_summary(const FeasibilityResult& r) {
    if (r.status == FeasibilityStatus::feasible) return "Feasible\n";
    std::string line = "Infeasible";
    if (r.certificate) {
        line += r.certificate->kind == FeasibilityCertificate::Kind::chsh_sign_pattern
                    ? " certificate ChshSignPattern"
                    : " certificate SolverPhase1";
        if (r.certificate->sign_pattern) line += " pattern " + *r.certificate->sign_pattern;
        if (r.certificate->violation) line += " violation " + format_double17(*r.certificate->violation);
    }
    line += '\n';
    return line;
}

inline std::string model_name(SamplingModel model) {
    return model == SamplingModel::quantum ? "quantum" : "cascade";
}

inline std::string simulate_report_json(const DirectionConfig& c, SamplingModel model,
                                        std::uint64_t trials_per_setting, std::uint64_t seed,
                                        const ChshEstimate& estimate) {
    JsonObject correlators;
    JsonObject counts;
    for (SettingPair s : detail::settings_by_key) {
        const auto i = static_cast<std::size_t>(setting_index(s));
        correlators.raw(setting_key(s), estimate_to_json(estimate.correlators[i]));
        counts.raw(setting_key(s), trial_counts_to_json(estimate.counts[i]));
    }
    return JsonObject{}
        .raw("angles_rad", direction_config_to_json(c))
        .raw("chsh", estimate_to_json(estimate.chsh))
        .string("command", "simulate")
        .raw("correlators", correlators.str())
        .raw("counts", counts.str())
        .string("model", model_name(model))
        .integer("seed", seed)
        .integer("trials_per_setting", trials_per_setting)
        .str();
}

inline std::string simulate_counts_csv(const ChshEstimate& estimate) {
    std::string out = "setting,outcome,count\n";
    for (SettingPair s : all_settings) {
        const auto i = static_cast<std::size_t>(setting_index(s));
        const TrialCounts& tally = estimate.counts[i];
        for (std::size_t outcome = 0; outcome < tally.counts.size(); ++outcome) {
            out += csv_field(setting_key(s));
            out += ',';
            out += csv_field(outcome_label(tally, outcome));
            out += ',';
            out += std::to_string(tally.counts[outcome]);
            out += '\n';
        }
    }
    return out;
}

inline std::string simulate_summary(SamplingModel model, const ChshEstimate& estimate) {
    return "model " + model_name(model) + " chsh " + format_double17(estimate.chsh.value) + " stderr " +
           format_double17(estimate.chsh.std_error) + " trials_per_setting " +
           std::to_string(estimate.chsh.n) + "\n";
}

enum class SweepParameter { a, a_prime, b, b_prime };

inline Angle DirectionConfig::* sweep_member(SweepParameter p) {
    switch (p) {
        case SweepParameter::a: return &DirectionConfig::a;
        case SweepParameter::a_prime: return &DirectionConfig::a_prime;
        case SweepParameter::b: return &DirectionConfig::b;
        case SweepParameter::b_prime: return &DirectionConfig::b_prime;
    }
    throw std::invalid_argument("unknown sweep parameter");
}

struct SweepSpec {
    SweepParameter param = SweepParameter::a;
    double from_rad = 0.0;
    double to_rad = 0.0;
    int steps = 2;
    /// Re-tie a' = a and b' = b at every grid point, collapsing both
    /// basis rotations to the identity.
    bool tie_primes = false;
    DirectionConfig base{};
};

struct SweepRow {
    double angle_rad = 0.0;
    double quantum_p_pp = 0.0;
    double cascade_p_pp = 0.0;
    double delta = 0.0;
    double correlator = 0.0;
};

inline std::vector<SweepRow> sweep_rows(const SweepSpec& spec) {
    if (spec.steps < 2) throw std::invalid_argument("sweep needs at least 2 steps");
    if (!std::isfinite(spec.from_rad) || !std::isfinite(spec.to_rad))
        throw std::invalid_argument("sweep range must be finite");
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(spec.steps));
    for (int i = 0; i < spec.steps; ++i) {
        const double angle =
            spec.from_rad + (spec.to_rad - spec.from_rad) * static_cast<double>(i) / (spec.steps - 1);
        DirectionConfig c = spec.base;
        (c.*sweep_member(spec.param)).radians = angle;
        if (spec.tie_primes) {
            c.a_prime = c.a;
            c.b_prime = c.b;
        }
        const DiscrepancyReport d = discrepancy(c, OutcomeSign::plus, OutcomeSign::plus);
        rows.push_back(SweepRow{angle, d.quantum_p, d.cascade_p, d.delta, correlation_quantum(c.theta_ab())});
    }
    return rows;
}

inline std::string sweep_csv(const SweepSpec& spec) {
    std::string out = "angle_rad,quantum_p_pp,cascade_p_pp,delta,correlator\n";
    for (const SweepRow& row : sweep_rows(spec)) {
        out += format_double17(row.angle_rad);
        out += ',';
        out += format_double17(row.quantum_p_pp);
        out += ',';
        out += format_double17(row.cascade_p_pp);
        out += ',';
        out += format_double17(row.delta);
        out += ',';
        out += format_double17(row.correlator);
        out += '\n';
    }
    return out;
}

inline std::string optimize_report(const ChshOptimum& best, int grid_steps, int refine_iters) {
    const DirectionConfig& c = best.config;
    const std::string config_deg = JsonObject{}
                                       .number("a", c.a.degrees())
                                       .number("a_prime", c.a_prime.degrees())
                                       .number("b", c.b.degrees())
                                       .number("b_prime", c.b_prime.degrees())
                                       .str();
    return JsonObject{}
        .string("command", "optimize")
        .raw("config_deg", config_deg)
        .raw("config_rad", direction_config_to_json(c))
        .integer("grid_steps", grid_steps)
        .integer("refine_iters", refine_iters)
        .number("value", best.value)
        .str();
}

}  // namespace chshlab

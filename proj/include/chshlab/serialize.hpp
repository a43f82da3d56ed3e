#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>

#include <json.hpp>

#include "chshlab/analysis.hpp"
#include "chshlab/classical.hpp"
#include "chshlab/montecarlo.hpp"
#include "chshlab/outcomes.hpp"
#include "chshlab/quantum.hpp"

namespace chshlab {

/// Shortest-faithful decimal rendering at 17 significant digits: enough to
/// round-trip any double, independent of locale, identical on every platform.
inline std::string format_double17(double value) {
    if (value == 0.0) value = 0.0;
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
    if (result.ec != std::errc{}) throw std::runtime_error("failed to format double");
    return std::string(buffer, result.ptr);
}

inline std::string json_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char ch : text) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    constexpr char hex[] = "0123456789abcdef";
                    out += "\\u00";
                    out += hex[(static_cast<unsigned char>(ch) >> 4) & 0xF];
                    out += hex[static_cast<unsigned char>(ch) & 0xF];
                } else {
                    out += ch;
                }
                break;
        }
    }
    return out;
}

/// RFC 4180 quoting: fields containing separators, quotes, or line breaks are
/// quoted with embedded quotes doubled.
inline std::string csv_field(std::string_view text) {
    const bool needs_quoting = text.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quoting) return std::string(text);
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

/// Minimal JSON emitters. Keys are appended in call order; every builder in
/// this library appends them in lexicographic order so output is canonical.
class JsonObject {
public:
    JsonObject& raw(std::string_view key, std::string_view json_value) {
        if (!body_.empty()) body_ += ',';
        body_ += '"';
        body_ += json_escape(key);
        body_ += "\":";
        body_ += json_value;
        return *this;
    }

    JsonObject& number(std::string_view key, double value) { return raw(key, format_double17(value)); }
    JsonObject& integer(std::string_view key, std::uint64_t value) { return raw(key, std::to_string(value)); }
    JsonObject& integer(std::string_view key, int value) { return raw(key, std::to_string(value)); }

    JsonObject& string(std::string_view key, std::string_view value) {
        return raw(key, "\"" + json_escape(value) + "\"");
    }

    std::string str() const { return "{" + body_ + "}"; }

private:
    std::string body_;
};

class JsonArray {
public:
    JsonArray& raw(std::string_view json_value) {
        if (!body_.empty()) body_ += ',';
        body_ += json_value;
        return *this;
    }

    JsonArray& number(double value) { return raw(format_double17(value)); }

    std::string str() const { return "[" + body_ + "]"; }

private:
    std::string body_;
};

inline std::string joint_to_json(const JointDistribution16& d) {
    JsonObject obj;
    for (int i = 0; i < quadruple_count; ++i)
        obj.number(OutcomeQuadruple::from_index(i).key(), d.mass(i));
    return obj.str();
}

inline JointDistribution16 joint_from_json(const std::string& text) {
    const nlohmann::json parsed = nlohmann::json::parse(text);
    if (!parsed.is_object()) throw std::invalid_argument("joint distribution must be a JSON object");
    if (parsed.size() != static_cast<std::size_t>(quadruple_count))
        throw std::invalid_argument("joint distribution must have exactly 16 entries");
    std::array<double, quadruple_count> w{};
    double total = 0.0;
    for (int i = 0; i < quadruple_count; ++i) {
        const std::string key = OutcomeQuadruple::from_index(i).key();
        const auto it = parsed.find(key);
        if (it == parsed.end()) throw std::invalid_argument("missing joint entry " + key);
        if (!it->is_number()) throw std::invalid_argument("joint entry " + key + " must be a number");
        w[static_cast<std::size_t>(i)] = it->get<double>();
        total += w[static_cast<std::size_t>(i)];
    }
    if (std::abs(total - 1.0) > mass_sum_tol) throw std::invalid_argument("joint masses must sum to 1");
    return JointDistribution16::from_weights(w);
}

inline std::string direction_config_to_json(const DirectionConfig& c) {
    return JsonObject{}
        .number("a", c.a.radians)
        .number("a_prime", c.a_prime.radians)
        .number("b", c.b.radians)
        .number("b_prime", c.b_prime.radians)
        .str();
}

inline DirectionConfig direction_config_from_json(const std::string& text) {
    const nlohmann::json parsed = nlohmann::json::parse(text);
    if (!parsed.is_object()) throw std::invalid_argument("direction config must be a JSON object");
    DirectionConfig c;
    constexpr std::array<std::pair<const char*, Angle DirectionConfig::*>, 4> members{
        {{"a", &DirectionConfig::a},
         {"a_prime", &DirectionConfig::a_prime},
         {"b", &DirectionConfig::b},
         {"b_prime", &DirectionConfig::b_prime}}};
    for (const auto& [key, member] : members) {
        const auto it = parsed.find(key);
        if (it == parsed.end() || !it->is_number())
            throw std::invalid_argument(std::string("direction config needs numeric entry ") + key);
        (c.*member).radians = it->get<double>();
    }
    return c;
}

inline std::string feasibility_certificate_to_json(const FeasibilityCertificate& cert) {
    JsonObject obj;
    obj.string("kind", cert.kind == FeasibilityCertificate::Kind::chsh_sign_pattern ? "ChshSignPattern"
                                                                                    : "SolverPhase1");
    if (cert.sign_pattern) obj.string("sign_pattern", *cert.sign_pattern);
    if (cert.violation) obj.number("violation", *cert.violation);
    return obj.str();
}

inline std::string feasibility_to_json(const FeasibilityResult& r) {
    JsonObject obj;
    if (r.certificate) obj.raw("certificate", feasibility_certificate_to_json(*r.certificate));
    obj.string("status", r.status == FeasibilityStatus::feasible ? "Feasible" : "Infeasible");
    if (r.witness) obj.raw("witness", joint_to_json(*r.witness));
    return obj.str();
}

inline std::string outcome_label(const TrialCounts& tally, std::size_t index) {
    if (tally.kind == TrialCounts::Kind::pair) return pair_key(static_cast<int>(index));
    return OutcomeQuadruple::from_index(static_cast<int>(index)).key();
}

inline std::string trial_counts_to_json(const TrialCounts& tally) {
    JsonObject counts;
    for (std::size_t i = 0; i < tally.counts.size(); ++i) counts.integer(outcome_label(tally, i), tally.counts[i]);
    return JsonObject{}
        .raw("counts", counts.str())
        .string("kind", tally.kind == TrialCounts::Kind::pair ? "pair" : "quadruple")
        .integer("n", tally.n)
        .str();
}

inline std::string trial_counts_to_csv(const TrialCounts& tally) {
    std::string out = "outcome,count\n";
    for (std::size_t i = 0; i < tally.counts.size(); ++i) {
        out += csv_field(outcome_label(tally, i));
        out += ',';
        out += std::to_string(tally.counts[i]);
        out += '\n';
    }
    return out;
}

inline std::string estimate_to_json(const EstimateWithError& e) {
    return JsonObject{}
        .integer("n", e.n)
        .number("stderr", e.std_error)
        .number("value", e.value)
        .str();
}

}  // namespace chshlab

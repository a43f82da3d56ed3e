#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chshlab/chshlab.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_infeasible = 3;
constexpr int exit_io = 4;

chshlab::DirectionConfig parse_angles(const std::vector<double>& deg, const std::vector<double>& rad) {
    if (deg.empty() && rad.empty())
        throw std::invalid_argument("exactly one of --deg or --rad is required");
    const bool use_deg = !deg.empty();
    const std::vector<double>& values = use_deg ? deg : rad;
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("angles must be finite");
    }
    const auto make = [use_deg](double v) {
        return use_deg ? chshlab::Angle::from_degrees(v) : chshlab::Angle{v};
    };
    return chshlab::DirectionConfig{make(values[0]), make(values[1]), make(values[2]), make(values[3])};
}

double to_radians(double value, bool use_deg) {
    if (!std::isfinite(value)) throw std::invalid_argument("sweep range must be finite");
    return use_deg ? chshlab::Angle::from_degrees(value).radians : value;
}

void require_format(const std::string& format, const std::string& supported) {
    if (format != supported)
        throw std::invalid_argument("format '" + format + "' is not supported here; use " + supported);
}

/// Writes the report to the output path, or to stdout when no path is given;
/// the summary, when present, goes to stdout only alongside a file report.
int emit(std::string report, const std::string& out_path, const std::string& summary) {
    if (!report.empty() && report.back() != '\n') report += '\n';
    if (out_path.empty()) {
        std::cout << report;
        return exit_ok;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot open output path: " << out_path << '\n';
        return exit_io;
    }
    file << report;
    file.close();
    if (file.fail()) {
        std::cerr << "error: failed writing output path: " << out_path << '\n';
        return exit_io;
    }
    std::cout << summary;
    return exit_ok;
}

struct ChshArgs {
    bool quantum = false;
    bool classical_max = false;
    std::vector<double> deg;
    std::vector<double> rad;
    std::string out;
    std::string format = "json";
};

int run_chsh(const ChshArgs& args) {
    if (args.quantum == args.classical_max)
        throw std::invalid_argument("exactly one of --quantum or --classical-max is required");
    require_format(args.format, "json");
    if (args.classical_max) return emit(chshlab::chsh_classical_max_report(), args.out, "");
    const chshlab::DirectionConfig c = parse_angles(args.deg, args.rad);
    return emit(chshlab::chsh_quantum_report(c), args.out, "");
}

struct CertifyArgs {
    std::vector<double> deg;
    std::vector<double> rad;
    std::string out;
    std::string format = "json";
};

int run_certify(const CertifyArgs& args) {
    require_format(args.format, "json");
    const chshlab::DirectionConfig c = parse_angles(args.deg, args.rad);
    const auto targets = chshlab::quantum_pair_targets(c);
    const chshlab::FeasibilityResult result = chshlab::marginal_match_feasibility(targets);
    const int rc = emit(chshlab::certify_report(c, result), args.out, chshlab::certify_summary(result));
    if (rc != exit_ok) return rc;
    return result.status == chshlab::FeasibilityStatus::infeasible ? exit_infeasible : exit_ok;
}

struct SimulateArgs {
    std::vector<double> deg;
    std::vector<double> rad;
    std::string model = "quantum";
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
};

int run_simulate(const SimulateArgs& args) {
    const chshlab::DirectionConfig c = parse_angles(args.deg, args.rad);
    const chshlab::SamplingModel model =
        args.model == "cascade" ? chshlab::SamplingModel::cascade : chshlab::SamplingModel::quantum;
    const chshlab::ChshEstimate estimate = chshlab::estimate_chsh(c, model, args.trials, args.seed);
    const std::string summary = chshlab::simulate_summary(model, estimate);
    if (args.format == "csv") return emit(chshlab::simulate_counts_csv(estimate), args.out, summary);
    return emit(chshlab::simulate_report_json(c, model, args.trials, args.seed, estimate), args.out, summary);
}

struct SweepArgs {
    std::string param;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
    bool tie_primes = false;
    std::vector<double> deg;
    std::vector<double> rad;
    std::string out;
    std::string format = "csv";
};

int run_sweep(const SweepArgs& args) {
    require_format(args.format, "csv");
    chshlab::SweepSpec spec;
    if (args.param == "a")
        spec.param = chshlab::SweepParameter::a;
    else if (args.param == "a_prime")
        spec.param = chshlab::SweepParameter::a_prime;
    else if (args.param == "b")
        spec.param = chshlab::SweepParameter::b;
    else if (args.param == "b_prime")
        spec.param = chshlab::SweepParameter::b_prime;
    else
        throw std::invalid_argument("--param must be one of a, a_prime, b, b_prime");
    spec.base = parse_angles(args.deg, args.rad);
    const bool use_deg = !args.deg.empty();
    spec.from_rad = to_radians(args.from, use_deg);
    spec.to_rad = to_radians(args.to, use_deg);
    spec.steps = args.steps;
    spec.tie_primes = args.tie_primes;
    return emit(chshlab::sweep_csv(spec), args.out, "");
}

struct OptimizeArgs {
    int grid_steps = 64;
    int refine_iters = 40;
    std::string out;
    std::string format = "json";
};

int run_optimize(const OptimizeArgs& args) {
    require_format(args.format, "json");
    const chshlab::ChshOptimum best = chshlab::optimize_chsh(args.grid_steps, args.refine_iters);
    return emit(chshlab::optimize_report(best, args.grid_steps, args.refine_iters), args.out, "");
}

void add_angle_options(CLI::App* cmd, std::vector<double>& deg, std::vector<double>& rad) {
    auto* deg_opt = cmd->add_option("--deg", deg, "Angles a a' b b' in degrees")->expected(4);
    auto* rad_opt = cmd->add_option("--rad", rad, "Angles a a' b b' in radians")->expected(4);
    deg_opt->excludes(rad_opt);
    rad_opt->excludes(deg_opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CHSH toolkit: quantum two-photon correlations vs classical joint distributions"};
    app.require_subcommand(1);

    ChshArgs chsh_args;
    auto* chsh_cmd = app.add_subcommand("chsh", "Evaluate the CHSH combination of correlators");
    chsh_cmd->add_flag("--quantum", chsh_args.quantum, "Singlet-state correlators at the given angles");
    chsh_cmd->add_flag("--classical-max", chsh_args.classical_max,
                       "Maximum over deterministic joint outcome assignments");
    add_angle_options(chsh_cmd, chsh_args.deg, chsh_args.rad);
    chsh_cmd->add_option("--out", chsh_args.out, "Write the report to this path instead of stdout");
    chsh_cmd->add_option("--format", chsh_args.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));

    CertifyArgs certify_args;
    auto* certify_cmd = app.add_subcommand(
        "certify", "Decide whether one joint distribution can reproduce the four quantum pair marginals");
    add_angle_options(certify_cmd, certify_args.deg, certify_args.rad);
    certify_cmd->add_option("--out", certify_args.out, "Write the report to this path instead of stdout");
    certify_cmd->add_option("--format", certify_args.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));

    SimulateArgs simulate_args;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of the CHSH value");
    add_angle_options(simulate_cmd, simulate_args.deg, simulate_args.rad);
    simulate_cmd->add_option("--model", simulate_args.model, "Sampling model")
        ->check(CLI::IsMember({"quantum", "cascade"}));
    simulate_cmd->add_option("--trials", simulate_args.trials, "Trials per setting")
        ->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", simulate_args.seed, "Run seed");
    simulate_cmd->add_option("--out", simulate_args.out, "Write the report to this path instead of stdout");
    simulate_cmd->add_option("--format", simulate_args.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate pair probabilities over a grid of one angle");
    sweep_cmd->add_option("--param", sweep_args.param, "Angle to sweep: a, a_prime, b, b_prime")->required();
    sweep_cmd->add_option("--from", sweep_args.from, "Grid start, in the unit of --deg/--rad")->required();
    sweep_cmd->add_option("--to", sweep_args.to, "Grid end, in the unit of --deg/--rad")->required();
    sweep_cmd->add_option("--steps", sweep_args.steps, "Number of grid points (at least 2)")->required();
    sweep_cmd->add_flag("--tie-primes", sweep_args.tie_primes, "Re-tie a' = a and b' = b at every grid point");
    add_angle_options(sweep_cmd, sweep_args.deg, sweep_args.rad);
    sweep_cmd->add_option("--out", sweep_args.out, "Write the CSV to this path instead of stdout");
    sweep_cmd->add_option("--format", sweep_args.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));

    OptimizeArgs optimize_args;
    auto* optimize_cmd = app.add_subcommand("optimize", "Search analyzer angles maximizing the CHSH value");
    optimize_cmd->add_option("--grid-steps", optimize_args.grid_steps, "Grid resolution per angle");
    optimize_cmd->add_option("--refine-iters", optimize_args.refine_iters, "Coordinate descent rounds");
    optimize_cmd->add_option("--out", optimize_args.out, "Write the report to this path instead of stdout");
    optimize_cmd->add_option("--format", optimize_args.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*chsh_cmd) return run_chsh(chsh_args);
        if (*certify_cmd) return run_certify(certify_args);
        if (*simulate_cmd) return run_simulate(simulate_args);
        if (*sweep_cmd) return run_sweep(sweep_args);
        if (*optimize_cmd) return run_optimize(optimize_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

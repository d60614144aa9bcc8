#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jsc/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Joint spectral radius and subradius bounds for matrix sets with invariant cones"};
    app.set_version_flag("--version", std::string(jsc::tool_version));

    std::string command;
    std::string norm = "two";
    std::string format = "human";
    std::string cone;
    std::string out;
    jsc::JobSpec job;

    app.add_option("command", command, "bounds | subradius | kron | trace-seq | cone-check | perturb | verify")
        ->required()
        ->check(CLI::IsMember({"bounds", "subradius", "kron", "trace-seq", "cone-check", "perturb", "verify"}));
    app.add_option("input", job.input, "matrix set file")->required();
    app.add_option("--t-max", job.t_max, "longest product length")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--k-max", job.k_max, "largest Kronecker power")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--tol", job.tol, "interval tolerance")->capture_default_str();
    app.add_option("--norm", norm, "operator norm for upper bounds")
        ->capture_default_str()
        ->check(CLI::IsMember({"two", "one", "inf"}));
    app.add_option("--deltas", job.deltas, "perturbation radii, decreasing")->delimiter(',')->capture_default_str();
    app.add_option("--trials", job.trials, "perturbation trials per radius")->capture_default_str();
    app.add_option("--seed", job.seed, "random seed")->capture_default_str();
    app.add_option("--budget", job.budget, "maximum number of products to enumerate")->capture_default_str();
    app.add_option("--dim-cap", job.dim_cap, "largest dimension, including Kronecker lifts")->capture_default_str();
    app.add_option("--cone", cone, "use this cone instead of the one in the file")->check(CLI::IsMember({"orthant"}));
    app.add_flag("--positive", job.preserve_positivity, "keep perturbed entries positive");
    app.add_option("--beta-samples", job.beta_samples, "lines sampled when estimating beta")->capture_default_str();
    app.add_option("--out", out, "write the report to this path");
    app.add_option("--format", format, "report format")
        ->capture_default_str()
        ->check(CLI::IsMember({"human", "machine"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : jsc::exit_code::validation;
    }

    job.command = jsc::parse_command(command);
    job.norm = jsc::parse_norm_kind(norm);
    job.format = jsc::parse_output_format(format);
    if (!cone.empty()) job.cone = cone;
    if (!out.empty()) job.out = out;
    return jsc::run(job);
}

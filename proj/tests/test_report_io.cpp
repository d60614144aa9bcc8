#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "jsc/report_io.hpp"

using namespace jsc;

namespace {

std::string data_file(const std::string& name) { return std::string(JSC_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Document run_job(Command cmd, const std::string& file, std::size_t t_max = 4) {
    JobSpec job;
    job.command = cmd;
    job.input = "data/" + file;
    job.t_max = t_max;
    job.k_max = 2;
    job.trials = 3;
    job.deltas = {0.1, 0.01};
    job.beta_samples = 200;
    job.format = OutputFormat::machine;
    return execute(job, parse_input_file(data_file(file)));
}

void expect_round_trip(const Document& doc) {
    const auto text = emit_machine(doc);
    const auto back = parse_machine(text);
    EXPECT_EQ(back, doc);
    EXPECT_EQ(emit_machine(back), text);
}

} // namespace

TEST(FormatDouble, ShortestExactForms) {
    EXPECT_EQ(io::format_double(1.0), "1.0");
    EXPECT_EQ(io::format_double(-3.0), "-3.0");
    EXPECT_EQ(io::format_double(0.5), "0.5");
    EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(io::format_double(1e300), "1.0000000000000001e+300");
    EXPECT_EQ(std::stod(io::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(MachineFormat, EveryCommandRoundTrips) {
    expect_round_trip(run_job(Command::bounds, "kron_c.txt"));
    expect_round_trip(run_job(Command::subradius, "sigma_limit.txt"));
    expect_round_trip(run_job(Command::subradius, "sigma_k3.txt", 8));
    expect_round_trip(run_job(Command::kron, "kron_b.txt"));
    expect_round_trip(run_job(Command::trace_seq, "odd_even.txt"));
    expect_round_trip(run_job(Command::cone_check, "wedge.txt"));
    expect_round_trip(run_job(Command::cone_check, "rotation.txt"));
    expect_round_trip(run_job(Command::perturb, "positive_pair.txt"));
    expect_round_trip(run_job(Command::verify, "positive_pair.txt"));
}

TEST(MachineFormat, NonFiniteAndUndefinedValues) {
    auto doc = run_job(Command::bounds, "odd_even.txt");
    doc.bounds->upper_jsr[0].value = std::numeric_limits<double>::infinity();
    doc.bounds->lower_jsr_rho[0].value = -std::numeric_limits<double>::infinity();
    doc.bounds->lower_jsr_trace[0].value = std::nullopt;
    expect_round_trip(doc);
    const auto text = emit_machine(doc);
    EXPECT_NE(text.find("\"inf\""), std::string::npos);
    EXPECT_NE(text.find("\"-inf\""), std::string::npos);
    EXPECT_NE(text.find("null"), std::string::npos);

    doc.bounds->upper_jsr[1].value = std::numeric_limits<double>::quiet_NaN();
    const auto back = parse_machine(emit_machine(doc));
    ASSERT_TRUE(back.bounds->upper_jsr[1].value.has_value());
    EXPECT_TRUE(std::isnan(*back.bounds->upper_jsr[1].value));
}

TEST(MachineFormat, UnusedSectionsAreNull) {
    const auto doc = run_job(Command::trace_seq, "odd_even.txt");
    const auto j = Json::parse(emit_machine(doc));
    EXPECT_EQ(j["schema"], "jsc-report/1");
    EXPECT_EQ(j["tool_version"], tool_version);
    EXPECT_TRUE(j["bounds"].is_null());
    EXPECT_TRUE(j["verify"].is_null());
    EXPECT_FALSE(j["trace_sequence"].is_null());
}

TEST(MachineFormat, EmptyRadiiOmitPerturbationSection) {
    JobSpec job;
    job.command = Command::perturb;
    job.deltas = {};
    const auto doc = execute(job, parse_input_file(data_file("positive_pair.txt")));
    EXPECT_FALSE(doc.perturbation.has_value());
    ASSERT_EQ(doc.warnings.size(), 1U);
    expect_round_trip(doc);
}

TEST(MachineFormat, RejectsForeignDocuments) {
    EXPECT_THROW(parse_machine("{"), ValidationError);
    EXPECT_THROW(parse_machine("[]"), ValidationError);
    auto j = Json::parse(emit_machine(run_job(Command::bounds, "odd_even.txt")));
    j["schema"] = "jsc-report/2";
    EXPECT_THROW(parse_machine(j.dump()), ValidationError);
}

TEST(MachineFormat, MatchesGoldenFile) {
    // Hand-audited: every even-length product of the odd/even pair has spectral radius 1.
    const auto doc = run_job(Command::bounds, "odd_even.txt");
    const auto golden = slurp(std::string(JSC_GOLDEN_DIR) + "/odd_even_bounds.json");
    ASSERT_FALSE(golden.empty());
    auto expected = parse_machine(golden);
    auto actual = doc;
    // the golden was produced with the CLI defaults for the unused options
    actual.job.k_max = expected.job.k_max;
    actual.job.trials = expected.job.trials;
    actual.job.deltas = expected.job.deltas;
    actual.job.beta_samples = expected.job.beta_samples;
    EXPECT_EQ(actual, expected);
    EXPECT_EQ(emit_machine(actual), golden);
    EXPECT_EQ(expected.bounds->best_interval_jsr.lower, 1.0);
    EXPECT_EQ(expected.bounds->best_interval_jsr.upper, 1.0);
}

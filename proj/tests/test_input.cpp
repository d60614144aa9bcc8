#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "jsc/input.hpp"

using namespace jsc;

namespace {

std::string data_file(const std::string& name) { return std::string(JSC_DATA_DIR) + "/" + name; }

std::size_t parse_error_line(const std::string& text) {
    try {
        parse_input_string(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST(ParseInput, MinimalSet) {
    const auto in = parse_input_string("dim 2\nmatrices 2\n0 1\n0 0\n0 0\n1 0\n");
    EXPECT_EQ(in.sigma.size(), 2U);
    EXPECT_EQ(in.sigma.dim(), 2U);
    EXPECT_EQ(in.sigma[0](0, 1), 1.0);
    EXPECT_EQ(in.sigma[1](1, 0), 1.0);
    EXPECT_FALSE(in.cone.has_value());
    EXPECT_FALSE(in.inner_cone.has_value());
}

TEST(ParseInput, CommentsBlankLinesAndCones) {
    const auto in = parse_input_string(
        "# header\n\ndim 2   # size\nmatrices 1\n  2\t1 \n1 2\n\ncone generators 2\n1 2\n2 1\ninner_cone orthant\n");
    ASSERT_TRUE(in.cone.has_value());
    EXPECT_EQ(in.cone->generators().size(), 2U);
    EXPECT_FALSE(in.cone->is_orthant());
    ASSERT_TRUE(in.inner_cone.has_value());
    EXPECT_TRUE(in.inner_cone->is_orthant());
}

TEST(ParseInput, RationalsAreExactlyRounded) {
    const auto in = parse_input_string("dim 1\nmatrices 3\n-1/3\n7/2\n+0.1\n");
    EXPECT_EQ(in.sigma[0](0, 0), -1.0 / 3.0);
    EXPECT_EQ(in.sigma[1](0, 0), 3.5);
    EXPECT_EQ(in.sigma[2](0, 0), 0.1);
    EXPECT_EQ(parse_number("1e-3", 1), 1e-3);
    EXPECT_THROW(parse_number("1/0", 4), ParseError);
    EXPECT_THROW(parse_number("1/2/3", 4), ParseError);
    EXPECT_THROW(parse_number("9007199254740993/1", 4), ParseError);
    EXPECT_THROW(parse_number("abc", 4), ParseError);
    EXPECT_THROW(parse_number("inf", 4), ParseError);
}

TEST(ParseInput, WrongRowLengthIsValidationError) {
    // a 2x3 "matrix" declared as dim 2
    const std::string text = "dim 2\nmatrices 1\n1 2 3\n4 5 6\n";
    try {
        parse_input_string(text);
        FAIL() << "expected ValidationError";
    } catch (const ParseError&) {
        FAIL() << "row-length mismatch should not be a ParseError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("expected 2"), std::string::npos) << e.what();
    }
}

TEST(ParseInput, ErrorsCarryLineNumbers) {
    EXPECT_EQ(parse_error_line("dims 2\n"), 1U);
    EXPECT_EQ(parse_error_line("dim 2\n\n# c\nmatrix 1\n"), 4U);
    EXPECT_EQ(parse_error_line("dim 0\nmatrices 1\n"), 1U);
    EXPECT_EQ(parse_error_line("dim 1\nmatrices 1\nx\n"), 3U);
    EXPECT_EQ(parse_error_line("dim 1\nmatrices 1\n1\ncone orthant\ncone orthant\n"), 5U);
    EXPECT_EQ(parse_error_line("dim 1\nmatrices 1\n1\nfoo\n"), 4U);
    EXPECT_EQ(parse_error_line("dim 1\nmatrices 2\n1\n"), 4U);
    EXPECT_EQ(parse_error_line("dim 1\nmatrices 1\n1\ncone sideways\n"), 4U);
}

TEST(ParseInput, BadConeGenerators) {
    EXPECT_THROW(parse_input_string("dim 2\nmatrices 1\n1 0\n0 1\ncone generators 1\n0 0\n"), ValidationError);
    EXPECT_THROW(parse_input_string("dim 2\nmatrices 1\n1 0\n0 1\ncone generators 1\n1\n"), ValidationError);
}

TEST(ParseInput, MissingFile) {
    EXPECT_THROW(parse_input_file(data_file("does_not_exist.txt")), ValidationError);
}

TEST(ParseInput, EveryShippedDataFileParses) {
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(JSC_DATA_DIR)) {
        if (entry.path().extension() != ".txt") continue;
        EXPECT_NO_THROW(parse_input_file(entry.path().string())) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 10U);
    const auto k3 = parse_input_file(data_file("sigma_k3.txt"));
    EXPECT_EQ(k3.sigma[1](1, 0), -1.0 / 3.0);
    const auto wedge = parse_input_file(data_file("wedge.txt"));
    ASSERT_TRUE(wedge.inner_cone.has_value());
    EXPECT_EQ(wedge.inner_cone->generators().size(), 1U);
}

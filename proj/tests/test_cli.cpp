#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "wavecascade/config.hpp"
#include "wavecascade/runner.hpp"

using namespace wavecascade;

TEST_CASE("config round trip is idempotent") {
    const SolveConfig c0 = paper_example_config();
    const std::string s1 = serialize_config(c0);
    const SolveConfig c1 = parse_config(s1);
    const std::string s2 = serialize_config(c1);
    CHECK(s1 == s2);
    const SolveConfig c2 = parse_config(s2);
    CHECK(serialize_config(c2) == s2);
}

TEST_CASE("config validation catches bad inputs") {
    SolveConfig c = paper_example_config();
    c.N = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = paper_example_config();
    c.k_values = {-3.0};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = paper_example_config();
    c.elements.clear();
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"elements\":[{\"type\":\"nope\"}]}"),
                    ConfigError);
}

TEST_CASE("k range expansion") {
    const SolveConfig c = parse_config(R"({
      "N": 2,
      "k": {"min": 1.0, "max": 2.0, "step": 0.5},
      "elements": [
        {"type": "block", "u_range": [0, 5],
         "map": {"kind": "straight", "width": 0.2, "u0": 0, "z0": [0, 0]}}
      ]
    })");
    REQUIRE(c.k_values.size() == 3);
    CHECK(c.k_values[1] == doctest::Approx(1.5));
}

TEST_CASE("single straight block sweep: P = 1 for all k") {
    SolveConfig c = parse_config(R"({
      "N": 4,
      "du": 0.05,
      "k": {"list": [2.0, 7.0, 12.0]},
      "elements": [
        {"type": "block", "u_range": [0, 5],
         "map": {"kind": "straight", "width": 0.2, "u0": 0, "z0": [0, 0]}}
      ]
    })");
    std::ostringstream csv, err;
    cmd_solve(c, csv, err);
    CHECK(err.str().empty());
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);  // header
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double P = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(P == doctest::Approx(1.0).epsilon(1e-5));
    }
    CHECK(rows == 3);
}

TEST_CASE("sweep output is byte-identical across reruns") {
    SolveConfig c = paper_example_lossless_config();
    c.N = 4;
    c.du = 0.05;
    c.k_values = {2.0, 4.0};
    std::ostringstream a, b, err;
    cmd_solve(c, a, err);
    cmd_solve(c, b, err);
    CHECK(a.str() == b.str());
    CHECK(!a.str().empty());
}

TEST_CASE("materialize inserts zero-length connectors between adjacent blocks") {
    SolveConfig c = parse_config(R"({
      "N": 2,
      "k": {"list": [5.0]},
      "elements": [
        {"type": "block", "u_range": [0, 3],
         "map": {"kind": "straight", "width": 0.2, "u0": 0, "z0": [0, 0]}},
        {"type": "block", "u_range": [0, 3],
         "map": {"kind": "straight", "width": 0.2, "u0": 0, "z0": [0.6, 0]}}
      ]
    })");
    const Materialized m = materialize(c);
    REQUIRE(m.guides.size() == 1);
    CHECK(m.guides[0].length == 0.0);
    CHECK(m.guides[0].width == doctest::Approx(0.2));
}

TEST_CASE("structure must not start or end with a connector") {
    SolveConfig c = parse_config(R"({
      "N": 2,
      "k": {"list": [5.0]},
      "elements": [
        {"type": "straight_guide", "width": 0.2, "length": 1.0},
        {"type": "block", "u_range": [0, 3],
         "map": {"kind": "straight", "width": 0.2, "u0": 0, "z0": [0, 0]}}
      ]
    })");
    CHECK_THROWS_AS(materialize(c), ConfigError);
}

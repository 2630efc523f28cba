#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wavecascade/geometry.hpp"

namespace wavecascade {

struct BlockElement {
    ConformalMap map;
    std::vector<AdmittanceSegment> admittance;
    double u_left = 0.0, u_right = 0.0;
};

using Element = std::variant<BlockElement, StraightGuide>;

struct SolveConfig {
    std::size_t N = 10;
    double du = 0.01;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    std::vector<double> k_values;
    std::vector<Complex> incident;       // padded/truncated to N at use
    std::vector<Element> elements;
    std::string out_dir = "out";

    void validate() const;               // throws ConfigError
};

SolveConfig parse_config(const std::string& json_text);
SolveConfig load_config(const std::string& path);
std::string serialize_config(const SolveConfig& cfg);

/// The built-in example geometry: narrow-to-wide transition, straight middle
/// piece (length derived from the two map anchors), 135-degree bend; absorbing
/// patches beta = 0.5+0.5i on the upper wall of both curved blocks.
SolveConfig paper_example_config();

/// Same geometry with a purely reactive wall (beta = 0.5i): lossless variant.
SolveConfig paper_example_lossless_config();

}  // namespace wavecascade

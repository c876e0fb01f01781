#ifndef VARREG_CONFIG_HPP
#define VARREG_CONFIG_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace varreg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fully validated run description parsed from INI-style text:
// [section] headers, key = value pairs, # comments, quoted expressions.
struct RunConfig {
    // [problem]
    int order = 1;
    double a = 0.0, b = 1.0;
    std::string lagrangian; // expression text (validated by parse())

    // [boundary]
    std::map<int, double> left, right; // order:value pairs

    // [discretization]
    int degree = 12;
    int panels = 32;
    int nodes = 5;
    int grid = 1025;

    // [solver]
    double tol = 1e-10;
    int max_iter = 100;

    // [mollify]
    std::vector<double> widths = {0.25, 0.125, 0.0625, 0.03125};
    double box_lo = -2.0, box_hi = 2.0;

    // [output]
    std::string directory = ".";
    std::vector<std::string> formats = {"csv"};
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

} // namespace varreg

#endif

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace subcalc {

struct GridSpec {
    double lo = 0.0, hi = 0.0;
    int n = 0;  // 0 = unset
    bool log_spaced = false;

    static GridSpec parse(const std::string& s);  // "lo:hi:n[:log]"
    std::vector<double> points() const;
    bool set() const { return n > 0; }
};

struct RunConfig {
    std::string model;  // inline family spec or @path to a model-spec file
    std::string cmd;
    GridSpec t_grid, x_grid, y_grid;
    std::uint64_t seed = 0;
    std::string out;            // output path; empty = stdout
    std::string method = "best";
    double tol = 1e-10;
};

// Executes one command; returns the process exit status (0 ok, 2 config
// error, 3 numeric failure).  Errors print one machine-parsable line to err.
int run(const RunConfig& config, std::ostream& err);

// argv-style front end used by the binary.
int run_cli(const std::vector<std::string>& args, std::ostream& err);

}  // namespace subcalc

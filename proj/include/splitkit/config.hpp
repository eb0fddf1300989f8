#pragma once

#include <cstdint>
#include <string>

namespace splitkit {

/// Runtime knobs shared by the CLI and the experiment drivers. Tolerances
/// and thresholds are experiment parameters, not code constants.
struct Config {
    int schema_version = 1;

    std::uint64_t seed = 20250601;

    double feasibility_tol = 1e-10;    ///< residual below this counts as a numeric zero
    double infeasibility_floor = 1e-4; ///< residual floor that supports an "infeasible" verdict

    int starts_e1 = 200;
    int starts_e2 = 500;
    int starts_e3 = 500;
    int starts_recovery = 64; ///< positive-scheme recovery runs
    int nm_max_evals = 2000;  ///< simplex budget per start

    int threads = 0; ///< 0 = hardware concurrency

    double tau0 = 0.1; ///< coarsest step of the default tau grid
    int tau_count = 6;

    int stiff_grid = 64;

    /// truncation/order-check caps, clamped to the module limits
    int cap_autonomous = 8;
    int cap_k1 = 10;
    int cap_k2 = 8;

    std::string format = "text"; ///< text | json | csv

    /// Loads a JSON config file and overlays it on the defaults.
    static Config load_file(const std::string &path);
    static Config from_json_text(const std::string &text);
    std::string to_json_text() const;
};

} // namespace splitkit

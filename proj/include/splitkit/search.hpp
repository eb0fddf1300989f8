#pragma once

#include "splitkit/config.hpp"
#include "splitkit/order.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace splitkit {

struct SlotConstraint {
    bool nonneg = false;
};

/// Positivity-constrained least-squares search over a scheme shape:
/// minimize the squared norm of the order-condition residual at
/// target_order. Constrained slots are parametrized as squares, so the
/// optimizer itself is unconstrained. Deterministic given the seed.
struct SearchProblem {
    Pattern pattern;
    int target_order = 2;
    std::vector<SlotConstraint> constraints; ///< one per slot
    Model model = Model::Autonomous;
    int starts = 100;
    std::uint64_t seed = 0;
    int max_evals_per_start = 2000;
    double feasibility_tol = 1e-10;
};

/// Exact verification record for a rationalized coefficient vector.
struct SymbolicConfirmation {
    std::vector<Rational> coefficients;
    int achieved_order = 0;
    bool at_least = false;
    bool confirmed = false; ///< achieved order >= target at exact coefficients
};

struct SearchResult {
    std::vector<double> best_coeffs; ///< slot values (not the squared parameters)
    double best_residual = 0.0;      ///< Euclidean norm, exact-path evaluation
    bool feasible = false;           ///< best_residual < feasibility_tol
    std::vector<std::pair<int, double>> per_start; ///< (start index, final residual)
    std::optional<SymbolicConfirmation> symbolic_confirmation;
    /// sign of each best coefficient: -1, 0, +1 (zeros flagged separately,
    /// mirroring the strictly-negative vs non-positive distinction)
    std::vector<int> sign_pattern;
};

SearchResult search(const SearchProblem &problem);

/// One search branch inside a feasibility experiment.
struct BranchReport {
    std::string label;
    std::string pattern_desc;
    int target_order = 0;
    Model model = Model::Autonomous;
    int starts = 0;
    std::uint64_t seed = 0;
    bool constrained = true;
    std::string expectation; ///< "infeasible" | "feasible" | "informational"
    SearchResult result;
    double min_a = 0.0; ///< most negative A-flow coefficient of the best point
    double min_b = 0.0;
    std::string verdict; ///< "infeasible" | "feasible" | "ambiguous" | "informational"
    bool expectation_met = true;
    double runtime_seconds = 0.0;
};

struct ExperimentReport {
    std::string name;
    std::string caveat;
    std::vector<BranchReport> branches;
    bool expectations_met = true;
};

/// name in {"E1_classical_p3", "E2_generalized_p5", "E3_cf_p6"}.
ExperimentReport feasibility_experiment(const std::string &name, const Config &config);

/// JSON form of an experiment report (schema_version tagged).
std::string experiment_report_json(const ExperimentReport &report);

/// First confirmed scheme of an experiment report, if any (used to feed the
/// stiff demo with the E1 unconstrained find).
std::optional<Scheme> confirmed_scheme_of(const ExperimentReport &report);

} // namespace splitkit

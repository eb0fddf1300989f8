#pragma once

#include "splitkit/schemes.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace splitkit {

/// Linear test problem: either u' = (A + B) u or the polynomial-in-t model
/// u' = (sum_m t^m H_m) u.
struct LinearProblem {
    enum class Kind { Autonomous, PolynomialT };

    Kind kind = Kind::Autonomous;
    Eigen::MatrixXd A, B;           ///< autonomous splitting parts
    std::vector<Eigen::MatrixXd> H; ///< polynomial model, H[0..k]
    Eigen::VectorXd u0;
    double t_end = 1.0;

    static LinearProblem autonomous(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::VectorXd u0,
                                    double t_end);
    static LinearProblem polynomial_t(std::vector<Eigen::MatrixXd> h, Eigen::VectorXd u0,
                                      double t_end);

    int dimension() const { return static_cast<int>(u0.size()); }
    int max_t_power() const { return static_cast<int>(H.size()) - 1; }
};

/// Matrix exponential (scaling-and-squaring Pade). Throws on non-square or
/// non-finite input.
Eigen::MatrixXd expm(const Eigen::MatrixXd &m);

/// One step of the composition from time t0 with step size tau. Generalized
/// B-flow factors exponentiate b*tau*B + c*tau^3*[B,[B,A]] (or the two
/// separate exponentials); on polynomial problems A-flow factors use the
/// frozen H(s) and the commutator part maps to 2*c*tau^3*H2 (k = 2).
Eigen::VectorXd apply_scheme(const Scheme &scheme, const LinearProblem &prob, double tau,
                             const Eigen::VectorXd &u, double t0 = 0.0);

/// CF stages on the k=1 polynomial problem: expm(a*tau*H(t0) + c*tau^2*H1).
Eigen::VectorXd apply_scheme(const CFScheme &scheme, const LinearProblem &prob, double tau,
                             const Eigen::VectorXd &u, double t0 = 0.0);

/// Exact solution at time t: expm for autonomous problems, composed
/// truncated-Taylor substeps (re-centered, <= 20 terms, local error below
/// 1e-14 relative) for polynomial ones. n_sub_override forces the substep
/// count (0 = automatic); used to test the oracle's self-convergence.
Eigen::VectorXd reference_solution(const LinearProblem &prob, double t, int n_sub_override = 0);

struct OrderEstimate {
    double slope = 0.0;
    std::vector<std::pair<double, double>> errors; ///< (tau, relative error)
    std::vector<int> fit_range;                    ///< indices entering the fit
};

using AnyScheme = std::variant<Scheme, CFScheme>;

/// Global-error convergence slope on a geometric tau grid (ratio 2, >= 4
/// sizes). Points below the 1e-11 roundoff floor or above 0.1 are excluded
/// from the fit; fewer than 3 usable points is an error.
OrderEstimate estimate_order(const AnyScheme &scheme, const LinearProblem &prob,
                             std::span<const double> taus);

/// Default grid 0.1 * 2^-j, j = 0..count-1.
std::vector<double> default_tau_grid(int count = 6, double tau0 = 0.1);

struct StiffReport {
    std::string scheme_name;
    int grid_size = 0;
    double tau = 0.01;
    int steps = 100;
    double max_norm_ratio = 0.0; ///< max over steps of |u|/|u0|
    bool blowup = false;         ///< max_norm_ratio > 1e3
    double min_a = 0.0;          ///< most negative A-flow coefficient
};

/// Runs the scheme on the 1D heat semidiscretization
/// A = (n+1)^2 tridiag(1,-2,1) with a bounded diagonal potential B,
/// tau = 0.01, 100 steps. Both flows are dissipative, so growth isolates
/// the effect of negative A-flow coefficients.
StiffReport stiff_demo(const Scheme &scheme, int grid_size);

/// Seeded dense test problems: entries uniform in [-1,1], matrices scaled
/// to unit spectral norm, u0 normalized.
LinearProblem seeded_autonomous_problem(std::uint64_t seed, int dim = 6);
LinearProblem seeded_polynomial_problem(std::uint64_t seed, int k, int dim = 6);

/// The five fixed ensemble seeds used by tests and the CLI.
std::span<const std::uint64_t> ensemble_seeds();

} // namespace splitkit

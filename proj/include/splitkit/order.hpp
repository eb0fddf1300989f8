#pragma once

#include "splitkit/schemes.hpp"

#include <span>
#include <string>
#include <vector>

namespace splitkit {

/// Which exact propagator a scheme is compared against.
enum class Model { Autonomous, NonAutoK1, NonAutoK2 };

std::string model_name(Model model);
const Alphabet &model_alphabet(Model model);

/// Largest max_check order_of accepts per model.
int order_check_cap(Model model);

/// Result of a symbolic order determination. The defect lists every
/// nonvanishing word coefficient of degree achieved_order + 1; it is empty
/// iff the check ran out of degrees (at_least set).
struct OrderReport {
    int achieved_order = 0;
    bool at_least = false;
    Model model = Model::Autonomous;
    std::vector<std::pair<std::string, Rational>> defect;
};

/// exp(A + B) truncated: every word of length n has coefficient 1/n!.
Series exact_series_autonomous(int max_degree);

/// Propagator series of u' = (sum_m t^m H_m) u as a graded series with
/// H_m carrying grade m+1; T_0 = 1 and n T_n = sum_{m+j=n-1} T_j H_m
/// (words accumulate on the right, matching the first-acting-leftmost
/// product convention). Homogeneity of every T_n is checked internally.
Series exact_series_polynomial_t(int model_max_t_power, int max_degree);

OrderReport order_of(const Scheme &scheme, Model model, int max_check);
OrderReport order_of(const CFScheme &scheme, Model model, int max_check); ///< k1 only

/// Flattened defect coefficients (exact, converted to double at the end)
/// for all words of degree 1..target_order in canonical order. Entry 0.0
/// iff the exact rational defect vanishes; the doubles are exact images of
/// the rationals only up to double rounding, but zeroness is exact.
std::vector<double> residual(const Pattern &pattern, std::span<const double> coeffs,
                             int target_order, Model model);

namespace detail {

/// Coefficient-generic exact series; the double instantiation backs the
/// numeric search objective.
template <class R> BasicSeries<R> exact_series_for(Model model, const WordTablePtr &table);

/// Compile a pattern at generic coefficients in the given model.
template <class R>
BasicSeries<R> compile_pattern(const Pattern &pattern, std::span<const R> coeffs, Model model,
                               const WordTablePtr &table);

} // namespace detail

} // namespace splitkit

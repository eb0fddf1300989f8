#pragma once

#include "splitkit/series.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace splitkit {

enum class FactorKind { AFlow, BFlow };

/// Where a B-flow factor's commutator part lives: one exponential of
/// b*B + c*[B,[B,A]] (combined) or two adjacent exponentials (separate).
enum class Placement { Combined, Separate };

/// One exponential factor of a splitting composition. A-flow factors carry
/// only a; B-flow factors carry (b, c) where c scales the tau^3 [B,[B,A]]
/// exponent of generalized schemes.
struct Factor {
    FactorKind kind = FactorKind::AFlow;
    Rational a{0};
    Rational b{0};
    Rational c{0};
    Placement placement = Placement::Combined;

    static Factor A(Rational a_coeff);
    static Factor B(Rational b_coeff, Rational c_coeff = Rational(0),
                    Placement placement = Placement::Combined);

    friend bool operator==(const Factor &, const Factor &) = default;
};

/// A splitting method as an ordered factor list. Convention: the list is in
/// printed product order, so the LAST element acts first on the state.
struct Scheme {
    std::string name;
    std::vector<Factor> factors;
    std::optional<int> claimed_order;

    bool classical() const; ///< all commutator coefficients zero

    friend bool operator==(const Scheme &, const Scheme &) = default;
};

/// Stage of a commutator-free integrator for u' = (H0 + t H1) u: one
/// exponential of a*tau*H0 + c*tau^2*H1. Same list convention as Scheme:
/// the last stage acts first.
struct CFStage {
    Rational a{0};
    Rational c{0};

    friend bool operator==(const CFStage &, const CFStage &) = default;
};

struct CFScheme {
    std::string name;
    std::vector<CFStage> stages;

    friend bool operator==(const CFScheme &, const CFScheme &) = default;
};

/// Throws std::invalid_argument when a structural invariant is broken
/// (no factors; claimed_order >= 1 with coefficient sums != 1).
void validate_scheme(const Scheme &scheme);

/// Named schemes: "lie_trotter", "strang", "chin".
Scheme catalog_get(const std::string &name);
std::vector<std::string> catalog_names();

/// Scheme file syntax error with 1-based position information.
struct ParseError : std::runtime_error {
    ParseError(const std::string &message, int line_, int column_)
        : std::runtime_error(message), line(line_), column(column_)
    {
    }
    int line;
    int column;
};

/// Parses the JSON scheme document format. Fraction strings ("1/6"),
/// decimal strings, and JSON numbers are all read exactly.
Scheme parse_scheme(const std::string &document);

/// Canonical serialization; parse(serialize(s)) == s and the byte form is
/// stable under round-trips.
std::string serialize_scheme(const Scheme &scheme);

// -- compilation to series ---------------------------------------------------

/// Product of the factor exponentials over {A:1, B:1}, truncated at
/// max_degree. Word convention (pinned by tests): the first-acting factor
/// is the LEFTMOST letter block, so lie_trotter compiles to exp(A)exp(B).
Series compile_autonomous(const Scheme &scheme, int max_degree);

/// Series of the lower-component propagator when the scheme runs on the
/// autonomous reformulation of u' = H(t)u, H(t) = sum_{m<=k} t^m H_m,
/// started at t = 0. k = model_max_t_power in {1, 2}; generator grades are
/// H_m -> m+1. B-flow factors advance the time shift; for k = 2 their
/// commutator part contributes exp(2c*H2).
Series compile_nonautonomous(const Scheme &scheme, int model_max_t_power, int max_degree);

/// Product of CF-stage exponentials exp(a*H0 + c*H1) over {H0:1, H1:2}.
Series compile_cf(const CFScheme &scheme, int max_degree);

/// Rewrites a classical scheme as a commutator-free integrator for the
/// k = 1 model: stage j gets a_j and c_j = a_j * (sum of b over B-flow
/// factors applied before that A-flow factor). The formula is validated by
/// the exact series identity compile_nonautonomous == compile_cf.
CFScheme to_commutator_free(const Scheme &scheme);

// -- coefficient patterns (shared by order analysis and search) --------------

/// Factor shape whose coefficients come from a slot vector. Slot index -1
/// means the coefficient is fixed at zero.
struct PatternFactor {
    FactorKind kind = FactorKind::AFlow;
    int a_slot = -1;
    int b_slot = -1;
    int c_slot = -1;
    Placement placement = Placement::Combined;
};

struct SchemePattern {
    std::vector<PatternFactor> factors; ///< same order convention as Scheme
    int slot_count = 0;

    Scheme instantiate(std::span<const Rational> coeffs) const;
};

/// CF shape with stages (a_i, c_i); slot layout: stage i in APPLICATION
/// order owns slots (2i, 2i+1) for (a, c).
struct CFPattern {
    int num_stages = 0;

    int slot_count() const { return 2 * num_stages; }
    CFScheme instantiate(std::span<const Rational> coeffs) const;
};

using Pattern = std::variant<SchemePattern, CFPattern>;

int pattern_slot_count(const Pattern &pattern);

/// Eq.-(2)-shaped classical alternation with the given number of stages;
/// slots in application order: a_1, b_1, a_2, b_2, ...
SchemePattern classical_pattern(int stages);

/// Generalized alternation: every B-flow factor carries a free c slot with
/// the given placement; slots per stage: a_j, b_j, c_j.
SchemePattern generalized_pattern(int stages, Placement placement);

/// The Chin shape B A B(c) A B; slots in application order:
/// b_1, a_1, b_2, c_2, a_2, b_3.
SchemePattern chin_shape_pattern();

/// The Strang shape A B A; slots: a_1, b_1, a_2.
SchemePattern strang_shape_pattern();

CFPattern cf_pattern(int stages);

// -- internal: coefficient-generic compilation (double = search fast path) ---

namespace detail {

template <class R> struct FactorView {
    FactorKind kind;
    R a, b, c;
    Placement placement;
};

template <class R>
BasicSeries<R> compile_autonomous_factors(std::span<const FactorView<R>> factors,
                                          const WordTablePtr &table);

template <class R>
BasicSeries<R> compile_nonautonomous_factors(std::span<const FactorView<R>> factors, int k,
                                             const WordTablePtr &table);

template <class R>
BasicSeries<R> compile_cf_stages(std::span<const std::pair<R, R>> stages,
                                 const WordTablePtr &table);

std::vector<FactorView<Rational>> factor_views(const Scheme &scheme);

template <class R>
std::vector<FactorView<R>> pattern_views(const SchemePattern &pattern, std::span<const R> coeffs);

} // namespace detail

} // namespace splitkit

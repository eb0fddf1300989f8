#include "splitkit/schemes.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace splitkit {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Basic types

Factor Factor::A(Rational a_coeff)
{
    Factor f;
    f.kind = FactorKind::AFlow;
    f.a = std::move(a_coeff);
    return f;
}

Factor Factor::B(Rational b_coeff, Rational c_coeff, Placement placement)
{
    Factor f;
    f.kind = FactorKind::BFlow;
    f.b = std::move(b_coeff);
    f.c = std::move(c_coeff);
    f.placement = placement;
    return f;
}

bool Scheme::classical() const
{
    return std::all_of(factors.begin(), factors.end(),
                       [](const Factor &f) { return f.c == 0; });
}

void validate_scheme(const Scheme &scheme)
{
    if (scheme.factors.empty())
        throw std::invalid_argument("scheme '" + scheme.name + "' has no factors");
    for (const auto &f : scheme.factors) {
        if (f.kind == FactorKind::AFlow && (f.b != 0 || f.c != 0))
            throw std::invalid_argument("A-flow factor carries B-flow coefficients");
        if (f.kind == FactorKind::BFlow && f.a != 0)
            throw std::invalid_argument("B-flow factor carries an A-flow coefficient");
    }
    if (scheme.claimed_order && *scheme.claimed_order >= 1) {
        Rational sum_a(0), sum_b(0);
        for (const auto &f : scheme.factors) {
            sum_a += f.a;
            sum_b += f.b;
        }
        if (sum_a != 1 || sum_b != 1)
            throw std::invalid_argument(
                "scheme '" + scheme.name + "' claims order >= 1 but consistency sums are "
                + to_string(sum_a) + ", " + to_string(sum_b) + " (expected 1, 1)");
    }
}

// ---------------------------------------------------------------------------
// Catalog

Scheme catalog_get(const std::string &name)
{
    Scheme s;
    s.name = name;
    if (name == "lie_trotter") {
        s.factors = {Factor::B(Rational(1)), Factor::A(Rational(1))};
        s.claimed_order = 1;
    } else if (name == "strang") {
        s.factors = {Factor::A(Rational(1, 2)), Factor::B(Rational(1)),
                     Factor::A(Rational(1, 2))};
        s.claimed_order = 2;
    } else if (name == "chin") {
        s.factors = {Factor::B(Rational(1, 6)), Factor::A(Rational(1, 2)),
                     Factor::B(Rational(2, 3), Rational(-1, 72), Placement::Combined),
                     Factor::A(Rational(1, 2)), Factor::B(Rational(1, 6))};
        s.claimed_order = 4;
    } else {
        throw std::invalid_argument("unknown catalog scheme '" + name + "'");
    }
    validate_scheme(s);
    return s;
}

std::vector<std::string> catalog_names() { return {"lie_trotter", "strang", "chin"}; }

// ---------------------------------------------------------------------------
// Parse / serialize

namespace {

std::pair<int, int> line_col_of_offset(const std::string &text, size_t offset)
{
    int line = 1, col = 1;
    for (size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

Rational coeff_from_json(const ordered_json &v, const std::string &path)
{
    if (v.is_string())
        return rational_from_string(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(static_cast<long>(v.get<long long>()));
    if (v.is_number_float())
        return rational_from_double(v.get<double>());
    throw std::invalid_argument(path + ": coefficient must be a number or a string");
}

void require_keys(const ordered_json &obj, const std::vector<std::string> &allowed,
                  const std::string &path)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw std::invalid_argument(path + ": unexpected field '" + it.key() + "'");
    }
}

} // namespace

Scheme parse_scheme(const std::string &document)
{
    ordered_json j;
    try {
        j = ordered_json::parse(document);
    } catch (const nlohmann::json::parse_error &e) {
        auto [line, col] = line_col_of_offset(document, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream msg;
        msg << "scheme file syntax error at line " << line << ", column " << col;
        throw ParseError(msg.str(), line, col);
    }

    if (!j.is_object())
        throw std::invalid_argument("scheme document: top level must be an object");
    require_keys(j, {"name", "claimed_order", "factors"}, "scheme document");

    Scheme s;
    if (!j.contains("name") || !j["name"].is_string())
        throw std::invalid_argument("scheme document: missing string field 'name'");
    s.name = j["name"].get<std::string>();

    if (j.contains("claimed_order") && !j["claimed_order"].is_null()) {
        if (!j["claimed_order"].is_number_integer())
            throw std::invalid_argument("claimed_order: must be an integer or null");
        s.claimed_order = j["claimed_order"].get<int>();
        if (*s.claimed_order < 1)
            throw std::invalid_argument("claimed_order: must be >= 1");
    }

    if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
        throw std::invalid_argument("scheme document: 'factors' must be a non-empty array");

    int idx = 0;
    for (const auto &fj : j["factors"]) {
        std::string path = "factors[" + std::to_string(idx) + "]";
        if (!fj.is_object() || !fj.contains("kind") || !fj["kind"].is_string())
            throw std::invalid_argument(path + ": each factor needs a string 'kind'");
        std::string kind = fj["kind"].get<std::string>();
        if (kind == "A") {
            require_keys(fj, {"kind", "a"}, path);
            if (!fj.contains("a"))
                throw std::invalid_argument(path + ": A-flow factor needs field 'a'");
            s.factors.push_back(Factor::A(coeff_from_json(fj["a"], path + ".a")));
        } else if (kind == "B") {
            require_keys(fj, {"kind", "b", "c", "placement"}, path);
            if (!fj.contains("b"))
                throw std::invalid_argument(path + ": B-flow factor needs field 'b'");
            Rational b = coeff_from_json(fj["b"], path + ".b");
            Rational c(0);
            if (fj.contains("c"))
                c = coeff_from_json(fj["c"], path + ".c");
            Placement placement = Placement::Combined;
            if (fj.contains("placement")) {
                std::string p = fj["placement"].get<std::string>();
                if (p == "combined")
                    placement = Placement::Combined;
                else if (p == "separate")
                    placement = Placement::Separate;
                else
                    throw std::invalid_argument(path + ": placement must be 'combined' or 'separate'");
            }
            s.factors.push_back(Factor::B(std::move(b), std::move(c), placement));
        } else {
            throw std::invalid_argument(path + ": kind must be 'A' or 'B'");
        }
        ++idx;
    }

    validate_scheme(s);
    return s;
}

std::string serialize_scheme(const Scheme &scheme)
{
    ordered_json j;
    j["name"] = scheme.name;
    if (scheme.claimed_order)
        j["claimed_order"] = *scheme.claimed_order;
    else
        j["claimed_order"] = nullptr;
    j["factors"] = ordered_json::array();
    for (const auto &f : scheme.factors) {
        ordered_json fj;
        if (f.kind == FactorKind::AFlow) {
            fj["kind"] = "A";
            fj["a"] = to_string(f.a);
        } else {
            fj["kind"] = "B";
            fj["b"] = to_string(f.b);
            if (f.c != 0) {
                fj["c"] = to_string(f.c);
                fj["placement"] = f.placement == Placement::Combined ? "combined" : "separate";
            }
        }
        j["factors"].push_back(fj);
    }
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Compilation

namespace detail {

namespace {

/// [B,[B,A]] expanded in the word basis: BBA - 2BAB + ABB. Empty series if
/// degree 3 exceeds the truncation (the commutator then contributes nothing).
template <class R> BasicSeries<R> commutator_exponent(const WordTablePtr &t, int ia, int ib)
{
    BasicSeries<R> c(t);
    auto set = [&](std::initializer_list<int> letters, int value) {
        Word w;
        for (int l : letters)
            w.letters.push_back(static_cast<std::uint8_t>(l));
        w.degree = static_cast<int>(w.letters.size());
        int idx = t->index_of(w);
        if (idx >= 0)
            c.set_coeff(idx, R(value));
    };
    if (t->max_degree() >= 3) {
        set({ib, ib, ia}, 1);
        set({ib, ia, ib}, -2);
        set({ia, ib, ib}, 1);
    }
    return c;
}

template <class R> bool is_zero_coeff(const R &v) { return v == 0; }

} // namespace

template <class R>
BasicSeries<R> compile_autonomous_factors(std::span<const FactorView<R>> factors,
                                          const WordTablePtr &table)
{
    const Alphabet &al = table->alphabet();
    int ia = al.index_of("A"), ib = al.index_of("B");
    if (ia < 0 || ib < 0)
        throw std::invalid_argument("compile_autonomous: table alphabet must contain A and B");

    const BasicSeries<R> comm = commutator_exponent<R>(table, ia, ib);
    auto result = BasicSeries<R>::constant(table, R(1));
    // factors arrive in application order; first-acting lands leftmost
    for (const auto &f : factors) {
        if (f.kind == FactorKind::AFlow) {
            if (!is_zero_coeff(f.a))
                result = mul(result, exp(BasicSeries<R>::generator_term(table, ia, f.a)));
        } else {
            auto b_part = BasicSeries<R>::generator_term(table, ib, f.b);
            if (f.placement == Placement::Combined) {
                BasicSeries<R> expo = b_part + comm * f.c;
                if (!expo.is_zero())
                    result = mul(result, exp(expo));
            } else {
                // Eq.-(5) ordering: the B exponential acts before the
                // commutator exponential.
                if (!is_zero_coeff(f.b))
                    result = mul(result, exp(b_part));
                if (!is_zero_coeff(f.c)) {
                    BasicSeries<R> cc = comm * f.c;
                    if (!cc.is_zero())
                        result = mul(result, exp(cc));
                }
            }
        }
    }
    return result;
}

template <class R>
BasicSeries<R> compile_nonautonomous_factors(std::span<const FactorView<R>> factors, int k,
                                             const WordTablePtr &table)
{
    if (k != 1 && k != 2)
        throw std::invalid_argument("compile_nonautonomous: model_max_t_power must be 1 or 2");
    const Alphabet &al = table->alphabet();
    int i0 = al.index_of("H0"), i1 = al.index_of("H1");
    int i2 = k == 2 ? al.index_of("H2") : -1;
    if (i0 < 0 || i1 < 0 || (k == 2 && i2 < 0))
        throw std::invalid_argument("compile_nonautonomous: table alphabet mismatch for k");

    auto result = BasicSeries<R>::constant(table, R(1));
    R sigma(0); // accumulated time shift in units of tau
    for (const auto &f : factors) {
        if (f.kind == FactorKind::AFlow) {
            if (is_zero_coeff(f.a))
                continue;
            // frozen flow of u' = H(sigma*tau) u over a*tau
            BasicSeries<R> expo = BasicSeries<R>::generator_term(table, i0, f.a);
            R c1 = f.a * sigma;
            if (!is_zero_coeff(c1))
                expo += BasicSeries<R>::generator_term(table, i1, c1);
            if (k == 2) {
                R c2 = f.a * sigma * sigma;
                if (!is_zero_coeff(c2))
                    expo += BasicSeries<R>::generator_term(table, i2, c2);
            }
            result = mul(result, exp(expo));
        } else {
            sigma = sigma + f.b;
            if (k == 2 && !is_zero_coeff(f.c)) {
                // [D_B,[D_B,D_A]] maps to H''(s) = 2 H2
                R c2 = R(2) * f.c;
                result = mul(result, exp(BasicSeries<R>::generator_term(table, i2, c2)));
            }
        }
    }
    return result;
}

template <class R>
BasicSeries<R> compile_cf_stages(std::span<const std::pair<R, R>> stages,
                                 const WordTablePtr &table)
{
    const Alphabet &al = table->alphabet();
    int i0 = al.index_of("H0"), i1 = al.index_of("H1");
    if (i0 < 0 || i1 < 0)
        throw std::invalid_argument("compile_cf: table alphabet must contain H0 and H1");
    auto result = BasicSeries<R>::constant(table, R(1));
    for (const auto &[a, c] : stages) { // application order
        BasicSeries<R> expo(table);
        if (!is_zero_coeff(a))
            expo += BasicSeries<R>::generator_term(table, i0, a);
        if (!is_zero_coeff(c))
            expo += BasicSeries<R>::generator_term(table, i1, c);
        if (!expo.is_zero())
            result = mul(result, exp(expo));
    }
    return result;
}

std::vector<FactorView<Rational>> factor_views(const Scheme &scheme)
{
    std::vector<FactorView<Rational>> out;
    out.reserve(scheme.factors.size());
    for (auto it = scheme.factors.rbegin(); it != scheme.factors.rend(); ++it)
        out.push_back({it->kind, it->a, it->b, it->c, it->placement});
    return out;
}

template <class R>
std::vector<FactorView<R>> pattern_views(const SchemePattern &pattern, std::span<const R> coeffs)
{
    if (static_cast<int>(coeffs.size()) != pattern.slot_count)
        throw std::invalid_argument("pattern coefficient vector has wrong dimension");
    std::vector<FactorView<R>> out;
    out.reserve(pattern.factors.size());
    auto slot = [&](int i) { return i < 0 ? R(0) : coeffs[static_cast<size_t>(i)]; };
    for (auto it = pattern.factors.rbegin(); it != pattern.factors.rend(); ++it)
        out.push_back({it->kind, slot(it->a_slot), slot(it->b_slot), slot(it->c_slot),
                       it->placement});
    return out;
}

template BasicSeries<Rational>
compile_autonomous_factors(std::span<const FactorView<Rational>>, const WordTablePtr &);
template BasicSeries<double> compile_autonomous_factors(std::span<const FactorView<double>>,
                                                        const WordTablePtr &);
template BasicSeries<Rational>
compile_nonautonomous_factors(std::span<const FactorView<Rational>>, int, const WordTablePtr &);
template BasicSeries<double> compile_nonautonomous_factors(std::span<const FactorView<double>>,
                                                           int, const WordTablePtr &);
template BasicSeries<Rational>
compile_cf_stages(std::span<const std::pair<Rational, Rational>>, const WordTablePtr &);
template BasicSeries<double> compile_cf_stages(std::span<const std::pair<double, double>>,
                                               const WordTablePtr &);
template std::vector<FactorView<Rational>> pattern_views(const SchemePattern &,
                                                         std::span<const Rational>);
template std::vector<FactorView<double>> pattern_views(const SchemePattern &,
                                                       std::span<const double>);

} // namespace detail

Series compile_autonomous(const Scheme &scheme, int max_degree)
{
    validate_scheme(scheme);
    auto table = WordTable::get(Alphabet::ab(), max_degree);
    auto views = detail::factor_views(scheme);
    return detail::compile_autonomous_factors<Rational>(views, table);
}

Series compile_nonautonomous(const Scheme &scheme, int model_max_t_power, int max_degree)
{
    validate_scheme(scheme);
    if (model_max_t_power != 1 && model_max_t_power != 2)
        throw std::invalid_argument("compile_nonautonomous: model_max_t_power must be 1 or 2");
    const Alphabet &al = model_max_t_power == 1 ? Alphabet::k1() : Alphabet::k2();
    auto table = WordTable::get(al, max_degree);
    auto views = detail::factor_views(scheme);
    return detail::compile_nonautonomous_factors<Rational>(views, model_max_t_power, table);
}

Series compile_cf(const CFScheme &scheme, int max_degree)
{
    if (scheme.stages.empty())
        throw std::invalid_argument("CF scheme has no stages");
    auto table = WordTable::get(Alphabet::k1(), max_degree);
    std::vector<std::pair<Rational, Rational>> stages;
    stages.reserve(scheme.stages.size());
    for (auto it = scheme.stages.rbegin(); it != scheme.stages.rend(); ++it)
        stages.push_back({it->a, it->c});
    return detail::compile_cf_stages<Rational>(stages, table);
}

CFScheme to_commutator_free(const Scheme &scheme)
{
    validate_scheme(scheme);
    if (!scheme.classical())
        throw std::invalid_argument("to_commutator_free: scheme must be classical (all c = 0)");

    std::vector<CFStage> chronological;
    Rational sigma(0);
    for (auto it = scheme.factors.rbegin(); it != scheme.factors.rend(); ++it) {
        if (it->kind == FactorKind::BFlow)
            sigma += it->b;
        else
            chronological.push_back(CFStage{it->a, it->a * sigma});
    }
    if (chronological.empty())
        throw std::invalid_argument("to_commutator_free: scheme has no A-flow factors");

    CFScheme cf;
    cf.name = scheme.name.empty() ? "cf" : scheme.name + "-cf";
    cf.stages.assign(chronological.rbegin(), chronological.rend());
    return cf;
}

// ---------------------------------------------------------------------------
// Patterns

Scheme SchemePattern::instantiate(std::span<const Rational> coeffs) const
{
    if (static_cast<int>(coeffs.size()) != slot_count)
        throw std::invalid_argument("pattern coefficient vector has wrong dimension");
    Scheme s;
    s.name = "pattern";
    auto slot = [&](int i) { return i < 0 ? Rational(0) : coeffs[static_cast<size_t>(i)]; };
    for (const auto &pf : factors) {
        if (pf.kind == FactorKind::AFlow)
            s.factors.push_back(Factor::A(slot(pf.a_slot)));
        else
            s.factors.push_back(Factor::B(slot(pf.b_slot), slot(pf.c_slot), pf.placement));
    }
    return s;
}

CFScheme CFPattern::instantiate(std::span<const Rational> coeffs) const
{
    if (static_cast<int>(coeffs.size()) != slot_count())
        throw std::invalid_argument("pattern coefficient vector has wrong dimension");
    CFScheme cf;
    cf.name = "cf-pattern";
    // slots are in application order; the stage list stores last-acts-first
    for (int i = num_stages - 1; i >= 0; --i)
        cf.stages.push_back(
            CFStage{coeffs[static_cast<size_t>(2 * i)], coeffs[static_cast<size_t>(2 * i + 1)]});
    return cf;
}

int pattern_slot_count(const Pattern &pattern)
{
    if (std::holds_alternative<SchemePattern>(pattern))
        return std::get<SchemePattern>(pattern).slot_count;
    return std::get<CFPattern>(pattern).slot_count();
}

SchemePattern classical_pattern(int stages)
{
    if (stages < 1)
        throw std::invalid_argument("classical_pattern: stages must be >= 1");
    SchemePattern p;
    // application order: A(a_1), B(b_1), ..., A(a_s), B(b_s)
    std::vector<PatternFactor> app;
    for (int j = 0; j < stages; ++j) {
        app.push_back({FactorKind::AFlow, 2 * j, -1, -1, Placement::Combined});
        app.push_back({FactorKind::BFlow, -1, 2 * j + 1, -1, Placement::Combined});
    }
    p.factors.assign(app.rbegin(), app.rend());
    p.slot_count = 2 * stages;
    return p;
}

SchemePattern generalized_pattern(int stages, Placement placement)
{
    if (stages < 1)
        throw std::invalid_argument("generalized_pattern: stages must be >= 1");
    SchemePattern p;
    std::vector<PatternFactor> app;
    for (int j = 0; j < stages; ++j) {
        app.push_back({FactorKind::AFlow, 3 * j, -1, -1, Placement::Combined});
        app.push_back({FactorKind::BFlow, -1, 3 * j + 1, 3 * j + 2, placement});
    }
    p.factors.assign(app.rbegin(), app.rend());
    p.slot_count = 3 * stages;
    return p;
}

SchemePattern chin_shape_pattern()
{
    SchemePattern p;
    std::vector<PatternFactor> app = {
        {FactorKind::BFlow, -1, 0, -1, Placement::Combined},
        {FactorKind::AFlow, 1, -1, -1, Placement::Combined},
        {FactorKind::BFlow, -1, 2, 3, Placement::Combined},
        {FactorKind::AFlow, 4, -1, -1, Placement::Combined},
        {FactorKind::BFlow, -1, 5, -1, Placement::Combined},
    };
    p.factors.assign(app.rbegin(), app.rend());
    p.slot_count = 6;
    return p;
}

SchemePattern strang_shape_pattern()
{
    SchemePattern p;
    std::vector<PatternFactor> app = {
        {FactorKind::AFlow, 0, -1, -1, Placement::Combined},
        {FactorKind::BFlow, -1, 1, -1, Placement::Combined},
        {FactorKind::AFlow, 2, -1, -1, Placement::Combined},
    };
    p.factors.assign(app.rbegin(), app.rend());
    p.slot_count = 3;
    return p;
}

CFPattern cf_pattern(int stages)
{
    if (stages < 1)
        throw std::invalid_argument("cf_pattern: stages must be >= 1");
    return CFPattern{stages};
}

} // namespace splitkit

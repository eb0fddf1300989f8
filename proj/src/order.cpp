#include "splitkit/order.hpp"

#include <stdexcept>

namespace splitkit {

std::string model_name(Model model)
{
    switch (model) {
    case Model::Autonomous:
        return "autonomous";
    case Model::NonAutoK1:
        return "nonautonomous-k1";
    case Model::NonAutoK2:
        return "nonautonomous-k2";
    }
    return "?";
}

const Alphabet &model_alphabet(Model model)
{
    switch (model) {
    case Model::Autonomous:
        return Alphabet::ab();
    case Model::NonAutoK1:
        return Alphabet::k1();
    case Model::NonAutoK2:
        return Alphabet::k2();
    }
    throw std::logic_error("model_alphabet: bad model");
}

int order_check_cap(Model model)
{
    switch (model) {
    case Model::Autonomous:
        return 8; // 2^(N+1) words
    case Model::NonAutoK1:
        return 10;
    case Model::NonAutoK2:
        return 8;
    }
    return 0;
}

namespace detail {

namespace {

template <class R> R inv_int(long n) { return R(1) / R(n); }

template <class R> BasicSeries<R> exact_autonomous_impl(const WordTablePtr &t)
{
    BasicSeries<R> s(t);
    std::vector<R> inv_factorial;
    inv_factorial.push_back(R(1));
    R fact(1);
    for (int n = 1; n <= t->max_degree(); ++n) {
        fact = fact * R(n);
        inv_factorial.push_back(R(1) / fact);
    }
    for (int i = 0; i < t->word_count(); ++i) {
        size_t len = t->word(i).letters.size();
        s.set_coeff(i, inv_factorial[len]); // grade-1 letters: length == degree
    }
    return s;
}

template <class R> BasicSeries<R> exact_polynomial_t_impl(int k, const WordTablePtr &t)
{
    const Alphabet &al = t->alphabet();
    std::vector<int> idx;
    for (int m = 0; m <= k; ++m) {
        int i = al.index_of("H" + std::to_string(m));
        if (i < 0)
            throw std::invalid_argument("exact_series_polynomial_t: alphabet lacks H"
                                        + std::to_string(m));
        idx.push_back(i);
    }

    std::vector<BasicSeries<R>> parts;
    parts.push_back(BasicSeries<R>::constant(t, R(1)));
    BasicSeries<R> result = parts[0];
    for (int n = 1; n <= t->max_degree(); ++n) {
        BasicSeries<R> tn(t);
        for (int m = 0; m <= k; ++m) {
            int j = n - 1 - m;
            if (j < 0)
                continue;
            tn += mul(parts[static_cast<size_t>(j)],
                      BasicSeries<R>::generator_term(t, idx[static_cast<size_t>(m)], R(1)));
        }
        tn *= inv_int<R>(n);
        for (const auto &[widx, c] : tn.terms()) {
            if (t->degree(widx) != n)
                throw std::logic_error("exact_series_polynomial_t: T_n not homogeneous");
        }
        parts.push_back(tn);
        result += tn;
    }
    return result;
}

} // namespace

template <class R> BasicSeries<R> exact_series_for(Model model, const WordTablePtr &table)
{
    switch (model) {
    case Model::Autonomous:
        return exact_autonomous_impl<R>(table);
    case Model::NonAutoK1:
        return exact_polynomial_t_impl<R>(1, table);
    case Model::NonAutoK2:
        return exact_polynomial_t_impl<R>(2, table);
    }
    throw std::logic_error("exact_series_for: bad model");
}

template <class R>
BasicSeries<R> compile_pattern(const Pattern &pattern, std::span<const R> coeffs, Model model,
                               const WordTablePtr &table)
{
    if (std::holds_alternative<SchemePattern>(pattern)) {
        const auto &sp = std::get<SchemePattern>(pattern);
        auto views = pattern_views<R>(sp, coeffs);
        switch (model) {
        case Model::Autonomous:
            return compile_autonomous_factors<R>(views, table);
        case Model::NonAutoK1:
            return compile_nonautonomous_factors<R>(views, 1, table);
        case Model::NonAutoK2:
            return compile_nonautonomous_factors<R>(views, 2, table);
        }
        throw std::logic_error("compile_pattern: bad model");
    }
    const auto &cp = std::get<CFPattern>(pattern);
    if (model != Model::NonAutoK1)
        throw std::invalid_argument("CF patterns are only defined in the nonautonomous-k1 model");
    if (static_cast<int>(coeffs.size()) != cp.slot_count())
        throw std::invalid_argument("pattern coefficient vector has wrong dimension");
    std::vector<std::pair<R, R>> stages;
    stages.reserve(static_cast<size_t>(cp.num_stages));
    for (int i = 0; i < cp.num_stages; ++i)
        stages.push_back({coeffs[static_cast<size_t>(2 * i)],
                          coeffs[static_cast<size_t>(2 * i + 1)]});
    return compile_cf_stages<R>(stages, table);
}

template BasicSeries<Rational> exact_series_for(Model, const WordTablePtr &);
template BasicSeries<double> exact_series_for(Model, const WordTablePtr &);
template BasicSeries<Rational> compile_pattern(const Pattern &, std::span<const Rational>, Model,
                                               const WordTablePtr &);
template BasicSeries<double> compile_pattern(const Pattern &, std::span<const double>, Model,
                                             const WordTablePtr &);

} // namespace detail

Series exact_series_autonomous(int max_degree)
{
    auto t = WordTable::get(Alphabet::ab(), max_degree);
    return detail::exact_autonomous_impl<Rational>(t);
}

Series exact_series_polynomial_t(int model_max_t_power, int max_degree)
{
    if (model_max_t_power != 1 && model_max_t_power != 2)
        throw std::invalid_argument("exact_series_polynomial_t: model_max_t_power must be 1 or 2");
    const Alphabet &al = model_max_t_power == 1 ? Alphabet::k1() : Alphabet::k2();
    auto t = WordTable::get(al, max_degree);
    return detail::exact_polynomial_t_impl<Rational>(model_max_t_power, t);
}

namespace {

OrderReport report_from_defect(const Series &compiled, const Series &exact, Model model,
                               int max_check)
{
    Series diff = compiled - exact;
    const auto &t = compiled.table();
    OrderReport rep;
    rep.model = model;
    for (int d = 1; d <= max_check + 1; ++d) {
        Series part = diff.degree_part(d);
        if (!part.is_zero()) {
            rep.achieved_order = d - 1;
            rep.at_least = false;
            for (const auto &[idx, c] : part.terms())
                rep.defect.push_back({t->word_name(idx), c});
            return rep;
        }
    }
    rep.achieved_order = max_check;
    rep.at_least = true;
    return rep;
}

void check_max(Model model, int max_check)
{
    if (max_check < 1)
        throw std::invalid_argument("order_of: max_check must be >= 1");
    if (max_check > order_check_cap(model))
        throw std::invalid_argument("order_of: max_check " + std::to_string(max_check)
                                    + " exceeds cap for model " + model_name(model));
}

} // namespace

OrderReport order_of(const Scheme &scheme, Model model, int max_check)
{
    check_max(model, max_check);
    const int n = max_check + 1;
    Series compiled = model == Model::Autonomous
                          ? compile_autonomous(scheme, n)
                          : compile_nonautonomous(scheme, model == Model::NonAutoK1 ? 1 : 2, n);
    auto t = compiled.table();
    return report_from_defect(compiled, detail::exact_series_for<Rational>(model, t), model,
                              max_check);
}

OrderReport order_of(const CFScheme &scheme, Model model, int max_check)
{
    if (model != Model::NonAutoK1)
        throw std::invalid_argument("order_of: CF schemes only support the nonautonomous-k1 model");
    check_max(model, max_check);
    Series compiled = compile_cf(scheme, max_check + 1);
    auto t = compiled.table();
    return report_from_defect(compiled, detail::exact_series_for<Rational>(model, t), model,
                              max_check);
}

std::vector<double> residual(const Pattern &pattern, std::span<const double> coeffs,
                             int target_order, Model model)
{
    if (target_order < 1 || target_order > order_check_cap(model))
        throw std::invalid_argument("residual: target_order out of range for model");
    if (static_cast<int>(coeffs.size()) != pattern_slot_count(pattern))
        throw std::invalid_argument("residual: coefficient vector has wrong dimension");

    std::vector<Rational> exact_coeffs;
    exact_coeffs.reserve(coeffs.size());
    for (double x : coeffs)
        exact_coeffs.push_back(rational_from_double(x));

    auto table = WordTable::get(model_alphabet(model), target_order);
    Series compiled =
        detail::compile_pattern<Rational>(pattern, exact_coeffs, model, table);
    Series diff = compiled - detail::exact_series_for<Rational>(model, table);

    std::vector<double> out;
    out.reserve(static_cast<size_t>(table->word_count() - 1));
    for (int i = 1; i < table->word_count(); ++i)
        out.push_back(to_double(diff.coeff(i)));
    return out;
}

} // namespace splitkit

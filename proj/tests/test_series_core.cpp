#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "naive_algebra.hpp"
#include "splitkit/rng.hpp"
#include "splitkit/series.hpp"

#include <string>
#include <vector>

using namespace splitkit;

namespace {

// Bridge: compare an engine series against a naive-oracle polynomial.
naive::NPoly to_naive(const Series &s)
{
    naive::NPoly p;
    for (const auto &[idx, c] : s.terms()) {
        const Word &w = s.table()->word(idx);
        naive::NWord nw(w.letters.begin(), w.letters.end());
        p[nw] = c;
    }
    return p;
}

std::vector<int> grades_of(const Alphabet &a)
{
    std::vector<int> g;
    for (const auto &gen : a.generators())
        g.push_back(gen.grade);
    return g;
}

// Seeded random series with dyadic coefficients on a random subset of words.
Series random_series(WordTablePtr t, Rng &rng, bool unit_constant = false,
                     bool zero_constant = false)
{
    Series s(t);
    for (int i = 0; i < t->word_count(); ++i) {
        if (rng.uniform() < 0.4) {
            Rational c(rng.uniform_int(-64, 64), 16);
            c.canonicalize();
            s.set_coeff(i, c);
        }
    }
    if (unit_constant)
        s.set_coeff(0, Rational(1));
    if (zero_constant)
        s.set_coeff(0, Rational(0));
    return s;
}

Series gen(WordTablePtr t, const char *name)
{
    int idx = t->alphabet().index_of(name);
    REQUIRE(idx >= 0);
    return Series::generator_term(t, idx, Rational(1));
}

} // namespace

TEST_CASE("enumerate_words: degree-0 alphabet AB")
{
    auto words = enumerate_words(Alphabet::ab(), 0);
    CHECK(words.size() == 1);
    CHECK(words[0].letters.empty());
}

TEST_CASE("enumerate_words: AB up to degree 2")
{
    auto t = WordTable::get(Alphabet::ab(), 2);
    REQUIRE(t->word_count() == 7);
    std::vector<std::string> names;
    for (int i = 0; i < t->word_count(); ++i)
        names.push_back(t->word_name(i));
    CHECK(names == std::vector<std::string>{"1", "A", "B", "AA", "AB", "BA", "BB"});
}

TEST_CASE("enumerate_words: graded alphabet {H0:1,H1:2} to degree 3")
{
    // Oracle: brute-force enumeration respecting grades, done independently.
    auto t = WordTable::get(Alphabet::k1(), 3);
    REQUIRE(t->word_count() == 7);
    std::vector<std::string> names;
    for (int i = 0; i < t->word_count(); ++i)
        names.push_back(t->word_name(i));
    CHECK(names
          == std::vector<std::string>{"1", "H0", "H0H0", "H1", "H0H0H0", "H0H1", "H1H0"});
    for (int i = 0; i < t->word_count(); ++i) {
        int d = 0;
        for (auto l : t->word(i).letters)
            d += t->alphabet()[l].grade;
        CHECK(d == t->degree(i));
    }
}

TEST_CASE("enumerate_words: input validation")
{
    CHECK_THROWS_AS(enumerate_words(Alphabet::ab(), -1), std::invalid_argument);
    Alphabet empty{std::vector<Generator>{}};
    CHECK_THROWS_AS(enumerate_words(empty, 2), std::invalid_argument);
    CHECK(enumerate_words(empty, 0).size() == 1);
    CHECK_THROWS_AS(WordTable::get(Alphabet::ab(), 11), std::invalid_argument);
}

TEST_CASE("alphabet validation")
{
    CHECK_THROWS_AS(Alphabet({{"A", 1}, {"A", 2}}), std::invalid_argument);
    CHECK_THROWS_AS(Alphabet({{"A", 0}}), std::invalid_argument);
}

TEST_CASE("mul: distributivity example (1+A)(1+B)")
{
    auto t = WordTable::get(Alphabet::ab(), 2);
    Series one = Series::constant(t, Rational(1));
    Series x = one + gen(t, "A");
    Series y = one + gen(t, "B");
    Series p = mul(x, y);
    CHECK(p.coeff(0) == Rational(1));
    CHECK(p.coeff(t->index_of(Word{{0}, 1})) == Rational(1));     // A
    CHECK(p.coeff(t->index_of(Word{{1}, 1})) == Rational(1));     // B
    CHECK(p.coeff(t->index_of(Word{{0, 1}, 2})) == Rational(1));  // AB
    CHECK(p.coeff(t->index_of(Word{{1, 0}, 2})) == Rational(0));  // BA
    CHECK(p.terms().size() == 4);
}

TEST_CASE("mul: identity and mismatch errors")
{
    auto t = WordTable::get(Alphabet::ab(), 3);
    Rng rng(7);
    Series x = random_series(t, rng);
    Series one = Series::constant(t, Rational(1));
    CHECK(mul(x, one) == x);
    CHECK(mul(one, x) == x);

    auto t4 = WordTable::get(Alphabet::ab(), 4);
    Series y(t4);
    CHECK_THROWS_AS(mul(x, y), std::invalid_argument);
    auto tk = WordTable::get(Alphabet::k1(), 3);
    Series z(tk);
    CHECK_THROWS_AS(mul(x, z), std::invalid_argument);
}

TEST_CASE("mul: associativity on seeded random series, vs naive oracle")
{
    auto t = WordTable::get(Alphabet::ab(), 4);
    auto grades = grades_of(t->alphabet());
    Rng rng(20240811);
    for (int rep = 0; rep < 20; ++rep) {
        Series x = random_series(t, rng);
        Series y = random_series(t, rng);
        Series z = random_series(t, rng);
        CHECK(mul(mul(x, y), z) == mul(x, mul(y, z)));
        // independent check of the product itself
        auto nref = naive::nmul(to_naive(x), to_naive(y), grades, 4);
        CHECK(to_naive(mul(x, y)) == nref);
        // distributivity
        CHECK(mul(x, y + z) == mul(x, y) + mul(x, z));
    }
}

TEST_CASE("grading: homogeneous products stay homogeneous and bounded")
{
    auto t = WordTable::get(Alphabet::k1(), 6);
    Series h0 = gen(t, "H0");
    Series h1 = gen(t, "H1");
    Series p = mul(h1, mul(h1, h0)); // degree 2+2+1
    for (const auto &[idx, c] : p.terms())
        CHECK(t->degree(idx) == 5);
    Rng rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        Series x = random_series(t, rng);
        Series sq = mul(x, x);
        for (const auto &[idx, c] : sq.terms())
            CHECK(t->degree(idx) <= 6);
    }
}

TEST_CASE("commutator: examples")
{
    auto t = WordTable::get(Alphabet::ab(), 3);
    Series a = gen(t, "A");
    Series b = gen(t, "B");

    CHECK(commutator(a, a).is_zero());

    Series ab = commutator(a, b);
    CHECK(ab.coeff(t->index_of(Word{{0, 1}, 2})) == Rational(1));
    CHECK(ab.coeff(t->index_of(Word{{1, 0}, 2})) == Rational(-1));
    CHECK(ab.terms().size() == 2);

    // [B,[B,A]] = BBA - 2BAB + ABB, the exponent used by generalized schemes.
    // Oracle: naive expansion.
    Series bba = commutator(b, commutator(b, a));
    auto grades = grades_of(t->alphabet());
    naive::NPoly nb{{{1}, Rational(1)}};
    naive::NPoly na{{{0}, Rational(1)}};
    auto inner = naive::nadd(naive::nmul(nb, na, grades, 3),
                             naive::nscale(naive::nmul(na, nb, grades, 3), Rational(-1)));
    auto nref = naive::nadd(naive::nmul(nb, inner, grades, 3),
                            naive::nscale(naive::nmul(inner, nb, grades, 3), Rational(-1)));
    CHECK(to_naive(bba) == nref);
    CHECK(bba.coeff(t->index_of(Word{{1, 1, 0}, 3})) == Rational(1));  // BBA
    CHECK(bba.coeff(t->index_of(Word{{1, 0, 1}, 3})) == Rational(-2)); // BAB
    CHECK(bba.coeff(t->index_of(Word{{0, 1, 1}, 3})) == Rational(1));  // ABB
}

TEST_CASE("commutator: antisymmetry and bilinearity on random triples")
{
    auto t = WordTable::get(Alphabet::ab(), 4);
    Rng rng(99);
    for (int rep = 0; rep < 10; ++rep) {
        Series x = random_series(t, rng);
        Series y = random_series(t, rng);
        Series z = random_series(t, rng);
        CHECK(commutator(x, x).is_zero());
        CHECK(commutator(x, y) == Series(t) - commutator(y, x));
        Rational s(3, 2);
        CHECK(commutator(x * s + y, z) == commutator(x, z) * s + commutator(y, z));
    }
}

TEST_CASE("exp: scalar pattern and domain errors")
{
    auto t = WordTable::get(Alphabet::ab(), 6);
    Series a = gen(t, "A");
    Series e = exp(a);
    Rational fact(1);
    for (int k = 0; k <= 6; ++k) {
        if (k > 0)
            fact *= k;
        Word w;
        w.letters.assign(static_cast<size_t>(k), std::uint8_t(0));
        w.degree = k;
        CHECK(e.coeff(t->index_of(w)) == Rational(1) / fact);
    }
    CHECK(exp(Series(t)) == Series::constant(t, Rational(1)));
    Series bad = Series::constant(t, Rational(1, 3));
    CHECK_THROWS_AS(exp(bad), std::domain_error);
}

TEST_CASE("log: examples and domain errors")
{
    auto t = WordTable::get(Alphabet::ab(), 5);
    Series one = Series::constant(t, Rational(1));
    CHECK(log(one).is_zero());
    Series a = gen(t, "A");
    CHECK(log(exp(a)) == a);
    CHECK_THROWS_AS(log(Series(t)), std::domain_error);
    CHECK_THROWS_AS(log(a), std::domain_error);
}

TEST_CASE("log(exp(A)exp(B)) degree-2 part is (1/2)[A,B]")
{
    // Leading Baker-Campbell-Hausdorff term; oracle = naive composition.
    auto t = WordTable::get(Alphabet::ab(), 4);
    Series a = gen(t, "A");
    Series b = gen(t, "B");
    Series z = log(mul(exp(a), exp(b)));
    Series deg2 = z.degree_part(2);
    Series expected = commutator(a, b) * Rational(1, 2);
    CHECK(deg2 == expected);

    auto grades = grades_of(t->alphabet());
    auto nz = naive::nlog(naive::nmul(naive::nexp(to_naive(a), grades, 4),
                                      naive::nexp(to_naive(b), grades, 4), grades, 4),
                          grades, 4);
    CHECK(to_naive(z) == nz);
}

TEST_CASE("exp/log round-trip on seeded random series")
{
    auto t = WordTable::get(Alphabet::ab(), 4);
    Rng rng(5150);
    for (int rep = 0; rep < 20; ++rep) {
        Series u = random_series(t, rng, /*unit_constant=*/true);
        CHECK(exp(log(u)) == u);
        Series x = random_series(t, rng, false, /*zero_constant=*/true);
        CHECK(log(exp(x)) == x);
    }
}

TEST_CASE("series storage stays canonical")
{
    auto t = WordTable::get(Alphabet::ab(), 3);
    Rng rng(1);
    Series x = random_series(t, rng);
    Series y = x - x;
    CHECK(y.is_zero());
    CHECK(y.terms().empty());
    x.set_coeff(2, Rational(0));
    for (const auto &[idx, c] : x.terms())
        CHECK(c != 0);
    // terms sorted by canonical word index
    for (size_t i = 1; i < x.terms().size(); ++i)
        CHECK(x.terms()[i - 1].first < x.terms()[i].first);
}

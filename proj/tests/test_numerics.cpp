#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "splitkit/numerics.hpp"
#include "splitkit/order.hpp"
#include "splitkit/rng.hpp"

using namespace splitkit;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Classical 3-stage order-3 composition (Ruth 1983); has negative
// coefficients in both flows, as any real order-3 scheme must.
Scheme ruth3()
{
    return Scheme{"ruth3",
                  {Factor::A(Rational(1)), Factor::B(Rational(-1, 24)),
                   Factor::A(Rational(-2, 3)), Factor::B(Rational(3, 4)),
                   Factor::A(Rational(2, 3)), Factor::B(Rational(7, 24))},
                  std::nullopt};
}

} // namespace

TEST_CASE("expm: identity and diagonal cases")
{
    MatrixXd z = MatrixXd::Zero(4, 4);
    CHECK((expm(z) - MatrixXd::Identity(4, 4)).norm() == 0.0);

    VectorXd lam(3);
    lam << -1.0, 0.5, 2.0;
    MatrixXd d = lam.asDiagonal();
    MatrixXd e = expm(d);
    for (int i = 0; i < 3; ++i)
        CHECK(e(i, i) == doctest::Approx(std::exp(lam(i))).epsilon(1e-14));
    CHECK(std::abs(e(0, 1)) < 1e-300);
}

TEST_CASE("expm: inverse property on seeded random matrices")
{
    Rng rng(314159);
    for (int rep = 0; rep < 5; ++rep) {
        MatrixXd m(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                m(i, j) = rng.uniform(-1.0, 1.0);
        m *= 2.0 / m.norm(); // ||M|| <= 2
        MatrixXd prod = expm(m) * expm(-m);
        CHECK((prod - MatrixXd::Identity(6, 6)).norm() < 1e-12);
    }
}

TEST_CASE("expm: rejects bad input")
{
    CHECK_THROWS_AS(expm(MatrixXd::Zero(2, 3)), std::invalid_argument);
    MatrixXd bad = MatrixXd::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(expm(bad), std::invalid_argument);
}

TEST_CASE("apply_scheme: exact on commuting matrices")
{
    VectorXd da(5), db(5), u0(5);
    Rng rng(77);
    for (int i = 0; i < 5; ++i) {
        da(i) = rng.uniform(-1.0, 1.0);
        db(i) = rng.uniform(-1.0, 1.0);
        u0(i) = rng.uniform(-1.0, 1.0);
    }
    auto prob = LinearProblem::autonomous(MatrixXd(da.asDiagonal()), MatrixXd(db.asDiagonal()),
                                          u0, 1.0);
    double tau = 0.37;
    VectorXd exact = expm(tau * (prob.A + prob.B)) * u0;
    for (const auto &name : catalog_names()) {
        VectorXd u = apply_scheme(catalog_get(name), prob, tau, u0);
        CHECK((u - exact).norm() / exact.norm() < 1e-12);
    }
}

TEST_CASE("apply_scheme: CF single stage on polynomial problem")
{
    auto prob = seeded_polynomial_problem(1, 1);
    CFScheme one{"one", {CFStage{Rational(1), Rational(0)}}};
    double tau = 0.25;
    VectorXd u = apply_scheme(one, prob, tau, prob.u0);
    VectorXd want = expm(tau * prob.H[0]) * prob.u0;
    CHECK((u - want).norm() < 1e-14);

    auto aprob = seeded_autonomous_problem(1);
    CHECK_THROWS_AS(apply_scheme(one, aprob, tau, aprob.u0), std::invalid_argument);
    CHECK_THROWS_AS(apply_scheme(one, prob, -0.1, prob.u0), std::invalid_argument);
}

TEST_CASE("reference_solution: degenerate and self-convergence checks")
{
    auto prob = seeded_polynomial_problem(42, 1);
    CHECK((reference_solution(prob, 0.0) - prob.u0).norm() == 0.0);

    // H1 = 0 reduces to expm(t H0)
    LinearProblem degenerate = prob;
    degenerate.H[1].setZero();
    VectorXd got = reference_solution(degenerate, 1.0);
    VectorXd want = expm(degenerate.H[0]) * degenerate.u0;
    CHECK((got - want).norm() / want.norm() < 1e-13);

    // halving the substep size moves the answer by < 1e-12 relative
    VectorXd r1 = reference_solution(prob, 1.0, 4);
    VectorXd r2 = reference_solution(prob, 1.0, 8);
    CHECK((r1 - r2).norm() / r2.norm() < 1e-12);

    CHECK_THROWS_AS(reference_solution(prob, -1.0), std::invalid_argument);
}

TEST_CASE("estimate_order: strang and chin slopes on a seeded problem")
{
    auto prob = seeded_autonomous_problem(11);
    auto taus = default_tau_grid();

    auto strang = estimate_order(catalog_get("strang"), prob, taus);
    CHECK(strang.slope == doctest::Approx(2.0).epsilon(0.1));

    auto chin = estimate_order(catalog_get("chin"), prob, taus);
    CHECK(chin.slope == doctest::Approx(4.0).epsilon(0.05));

    // negative control: chin with c zeroed drops to order 2
    Scheme chin0 = catalog_get("chin");
    for (auto &f : chin0.factors)
        f.c = 0;
    auto c0 = estimate_order(chin0, prob, taus);
    CHECK(c0.slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("estimate_order: CF transform of strang keeps order 2 on the k1 model")
{
    auto prob = seeded_polynomial_problem(22, 1);
    CFScheme cf = to_commutator_free(catalog_get("strang"));
    auto est = estimate_order(cf, prob, default_tau_grid());
    CHECK(est.slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("estimate_order: validation and filtering errors")
{
    auto prob = seeded_autonomous_problem(33);
    std::vector<double> few{0.1, 0.05, 0.025};
    CHECK_THROWS_AS(estimate_order(AnyScheme{catalog_get("strang")}, prob, few),
                    std::invalid_argument);
    std::vector<double> not_geometric{0.1, 0.05, 0.03, 0.02};
    CHECK_THROWS_AS(estimate_order(AnyScheme{catalog_get("strang")}, prob, not_geometric),
                    std::invalid_argument);

    // commuting problem: scheme is exact, every error sits under the
    // roundoff floor, so no usable points remain
    VectorXd d = VectorXd::Ones(4);
    auto commuting = LinearProblem::autonomous(MatrixXd(d.asDiagonal()),
                                               MatrixXd((-2.0 * d).asDiagonal()),
                                               VectorXd::Ones(4), 1.0);
    CHECK_THROWS_AS(estimate_order(AnyScheme{catalog_get("strang")}, commuting,
                                   default_tau_grid()),
                    std::runtime_error);
}

TEST_CASE("symbolic and empirical orders agree on seeded classical schemes")
{
    Rng rng(606060);
    auto prob = seeded_autonomous_problem(44);
    auto taus = default_tau_grid();
    int tested = 0;
    for (int rep = 0; rep < 10; ++rep) {
        int stages = static_cast<int>(rng.uniform_int(1, 3));
        std::vector<Factor> app;
        Rational suma(0), sumb(0);
        for (int j = 0; j < stages; ++j) {
            Rational a(rng.uniform_int(-8, 8), 8);
            Rational b(rng.uniform_int(-8, 8), 8);
            a.canonicalize();
            b.canonicalize();
            if (j == stages - 1) { // normalize so the scheme is consistent
                a = Rational(1) - suma;
                b = Rational(1) - sumb;
            }
            suma += a;
            sumb += b;
            app.push_back(Factor::A(a));
            app.push_back(Factor::B(b));
        }
        Scheme s;
        s.name = "rnd";
        s.factors.assign(app.rbegin(), app.rend());
        OrderReport rep_sym = order_of(s, Model::Autonomous, 4);
        auto est = estimate_order(s, prob, taus);
        CHECK(std::lround(est.slope) == rep_sym.achieved_order);
        ++tested;
    }
    CHECK(tested == 10);
}

TEST_CASE("stiff_demo: positive schemes stay bounded, ruth3 blows up")
{
    // n = 64: fine enough that a negative A-flow coefficient amplifies the
    // highest heat modes past what the potential coupling costs
    StiffReport strang = stiff_demo(catalog_get("strang"), 64);
    CHECK(!strang.blowup);
    CHECK(strang.max_norm_ratio < 10.0);

    StiffReport chin = stiff_demo(catalog_get("chin"), 64);
    CHECK(!chin.blowup);

    StiffReport ruth = stiff_demo(ruth3(), 64);
    CHECK(ruth.min_a < 0.0);
    CHECK(ruth.blowup);
    CHECK(ruth.max_norm_ratio > 1e3);

    CHECK_THROWS_AS(stiff_demo(catalog_get("strang"), 8), std::invalid_argument);
}

TEST_CASE("ruth3 control: symbolic order 3")
{
    OrderReport rep = order_of(ruth3(), Model::Autonomous, 4);
    CHECK(rep.achieved_order == 3);
}

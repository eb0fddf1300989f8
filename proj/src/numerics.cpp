#include "splitkit/numerics.hpp"

#include "splitkit/rng.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace splitkit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Problems

LinearProblem LinearProblem::autonomous(MatrixXd a, MatrixXd b, VectorXd u0, double t_end)
{
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("LinearProblem: A and B must be square of equal size");
    if (u0.size() != a.rows())
        throw std::invalid_argument("LinearProblem: u0 length must match matrix dimension");
    LinearProblem p;
    p.kind = Kind::Autonomous;
    p.A = std::move(a);
    p.B = std::move(b);
    p.u0 = std::move(u0);
    p.t_end = t_end;
    return p;
}

LinearProblem LinearProblem::polynomial_t(std::vector<MatrixXd> h, VectorXd u0, double t_end)
{
    if (h.empty() || h.size() > 3)
        throw std::invalid_argument("LinearProblem: polynomial model needs H0..Hk with k in {0,1,2}");
    for (const auto &m : h)
        if (m.rows() != m.cols() || m.rows() != h[0].rows())
            throw std::invalid_argument("LinearProblem: H matrices must be square of equal size");
    if (u0.size() != h[0].rows())
        throw std::invalid_argument("LinearProblem: u0 length must match matrix dimension");
    LinearProblem p;
    p.kind = Kind::PolynomialT;
    p.H = std::move(h);
    p.u0 = std::move(u0);
    p.t_end = t_end;
    return p;
}

// ---------------------------------------------------------------------------
// expm

MatrixXd expm(const MatrixXd &m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("expm: matrix must be square");
    if (!m.allFinite())
        throw std::invalid_argument("expm: matrix has non-finite entries");
    return m.exp();
}

// ---------------------------------------------------------------------------
// Scheme application

namespace {

/// H(s) for the polynomial model.
MatrixXd h_at(const LinearProblem &prob, double s)
{
    MatrixXd out = prob.H[0];
    double p = 1.0;
    for (size_t m = 1; m < prob.H.size(); ++m) {
        p *= s;
        out += p * prob.H[m];
    }
    return out;
}

/// Factor maps of one scheme step, in application order, paired with the
/// shift bookkeeping for polynomial problems.
std::vector<MatrixXd> scheme_step_ops(const Scheme &scheme, const LinearProblem &prob,
                                      double tau, double t0)
{
    std::vector<MatrixXd> ops;
    if (prob.kind == LinearProblem::Kind::Autonomous) {
        const MatrixXd &A = prob.A;
        const MatrixXd &B = prob.B;
        MatrixXd K;
        bool have_k = false;
        for (auto it = scheme.factors.rbegin(); it != scheme.factors.rend(); ++it) {
            if (it->kind == FactorKind::AFlow) {
                ops.push_back(expm(to_double(it->a) * tau * A));
            } else {
                double b = to_double(it->b), c = to_double(it->c);
                if (c != 0.0 && !have_k) {
                    MatrixXd BA = B * A - A * B;
                    K = B * BA - BA * B; // [B,[B,A]]
                    have_k = true;
                }
                if (it->placement == Placement::Combined) {
                    MatrixXd expo = b * tau * B;
                    if (c != 0.0)
                        expo += c * tau * tau * tau * K;
                    ops.push_back(expm(expo));
                } else {
                    ops.push_back(expm(b * tau * B)); // B part acts first
                    if (c != 0.0)
                        ops.push_back(expm(c * tau * tau * tau * K));
                }
            }
        }
        return ops;
    }

    const int k = prob.max_t_power();
    double s = t0;
    for (auto it = scheme.factors.rbegin(); it != scheme.factors.rend(); ++it) {
        if (it->kind == FactorKind::AFlow) {
            ops.push_back(expm(to_double(it->a) * tau * h_at(prob, s)));
        } else {
            s += to_double(it->b) * tau;
            double c = to_double(it->c);
            if (c != 0.0 && k >= 2) {
                // [B,[B,A]] promotes to H''(s) = 2 H2
                ops.push_back(expm(2.0 * c * tau * tau * tau * prob.H[2]));
            }
            // for k <= 1 the commutator flow is the identity
        }
    }
    return ops;
}

std::vector<MatrixXd> cf_step_ops(const CFScheme &scheme, const LinearProblem &prob, double tau,
                                  double t0)
{
    if (prob.kind != LinearProblem::Kind::PolynomialT || prob.max_t_power() != 1)
        throw std::invalid_argument(
            "apply_scheme: CF schemes apply only to polynomial problems with k = 1");
    // re-center at t0: H(t0 + s) = (H0 + t0 H1) + s H1
    MatrixXd h0 = prob.H[0] + t0 * prob.H[1];
    const MatrixXd &h1 = prob.H[1];
    std::vector<MatrixXd> ops;
    for (auto it = scheme.stages.rbegin(); it != scheme.stages.rend(); ++it)
        ops.push_back(expm(to_double(it->a) * tau * h0 + to_double(it->c) * tau * tau * h1));
    return ops;
}

void check_step_args(const LinearProblem &prob, double tau, const VectorXd &u)
{
    if (!(tau > 0.0))
        throw std::invalid_argument("apply_scheme: tau must be positive");
    if (u.size() != prob.dimension())
        throw std::invalid_argument("apply_scheme: state dimension mismatch");
}

} // namespace

VectorXd apply_scheme(const Scheme &scheme, const LinearProblem &prob, double tau,
                      const VectorXd &u, double t0)
{
    validate_scheme(scheme);
    check_step_args(prob, tau, u);
    VectorXd out = u;
    for (const auto &op : scheme_step_ops(scheme, prob, tau, t0))
        out = op * out;
    return out;
}

VectorXd apply_scheme(const CFScheme &scheme, const LinearProblem &prob, double tau,
                      const VectorXd &u, double t0)
{
    if (scheme.stages.empty())
        throw std::invalid_argument("apply_scheme: CF scheme has no stages");
    check_step_args(prob, tau, u);
    VectorXd out = u;
    for (const auto &op : cf_step_ops(scheme, prob, tau, t0))
        out = op * out;
    return out;
}

// ---------------------------------------------------------------------------
// Reference solution

namespace {

constexpr int kTaylorTerms = 20;

VectorXd taylor_substep(const LinearProblem &prob, double t_center, double h, const VectorXd &u)
{
    const int k = prob.max_t_power();
    // re-centered coefficients of H(t_center + s) as a polynomial in s
    std::vector<MatrixXd> ht;
    ht.push_back(h_at(prob, t_center));
    if (k >= 1) {
        MatrixXd d1 = prob.H[1];
        if (k >= 2)
            d1 += 2.0 * t_center * prob.H[2];
        ht.push_back(d1);
    }
    if (k >= 2)
        ht.push_back(prob.H[2]);

    std::vector<VectorXd> w;
    w.push_back(u);
    VectorXd acc = u;
    std::vector<double> hpow{h};
    for (int m = 1; m <= k; ++m)
        hpow.push_back(hpow.back() * h);
    for (int n = 1; n <= kTaylorTerms; ++n) {
        VectorXd wn = VectorXd::Zero(u.size());
        for (int m = 0; m <= k; ++m) {
            int j = n - 1 - m;
            if (j < 0)
                continue;
            wn += hpow[static_cast<size_t>(m)] * (ht[static_cast<size_t>(m)] * w[static_cast<size_t>(j)]);
        }
        wn /= static_cast<double>(n);
        w.push_back(wn);
        acc += wn;
        if (wn.norm() <= 1e-18 * acc.norm())
            break;
    }
    return acc;
}

} // namespace

VectorXd reference_solution(const LinearProblem &prob, double t, int n_sub_override)
{
    if (t < 0.0)
        throw std::invalid_argument("reference_solution: t must be >= 0");
    if (t == 0.0)
        return prob.u0;
    if (prob.kind == LinearProblem::Kind::Autonomous)
        return expm(t * (prob.A + prob.B)) * prob.u0;

    double nrm = 0.0;
    double tp = 1.0;
    for (size_t m = 0; m < prob.H.size(); ++m) {
        nrm += prob.H[m].norm() * tp;
        tp *= std::max(1.0, t);
    }
    int n_sub = std::max(1, static_cast<int>(std::ceil(t * nrm / 0.5)));
    if (n_sub_override > 0)
        n_sub = n_sub_override;
    double h = t / n_sub;
    VectorXd u = prob.u0;
    for (int i = 0; i < n_sub; ++i)
        u = taylor_substep(prob, i * h, h, u);
    return u;
}

// ---------------------------------------------------------------------------
// Order estimation

std::vector<double> default_tau_grid(int count, double tau0)
{
    std::vector<double> taus;
    double t = tau0;
    for (int i = 0; i < count; ++i, t /= 2.0)
        taus.push_back(t);
    return taus;
}

OrderEstimate estimate_order(const AnyScheme &scheme, const LinearProblem &prob,
                             std::span<const double> taus)
{
    if (taus.size() < 4)
        throw std::invalid_argument("estimate_order: need at least 4 step sizes");
    for (size_t i = 1; i < taus.size(); ++i)
        if (std::abs(taus[i - 1] / taus[i] - 2.0) > 1e-9)
            throw std::invalid_argument("estimate_order: tau grid must be geometric with ratio 2");

    VectorXd ref = reference_solution(prob, prob.t_end);
    double ref_norm = ref.norm();

    OrderEstimate est;
    for (double tau : taus) {
        int n = std::max(1, static_cast<int>(std::llround(prob.t_end / tau)));
        double tau_eff = prob.t_end / n;
        VectorXd u = prob.u0;
        if (prob.kind == LinearProblem::Kind::Autonomous
            && std::holds_alternative<Scheme>(scheme)) {
            // factor maps are step-independent; build the step operator once
            auto ops = scheme_step_ops(std::get<Scheme>(scheme), prob, tau_eff, 0.0);
            MatrixXd step = MatrixXd::Identity(prob.dimension(), prob.dimension());
            for (const auto &op : ops)
                step = op * step;
            for (int i = 0; i < n; ++i)
                u = step * u;
        } else {
            for (int i = 0; i < n; ++i) {
                double t0 = i * tau_eff;
                u = std::holds_alternative<Scheme>(scheme)
                        ? apply_scheme(std::get<Scheme>(scheme), prob, tau_eff, u, t0)
                        : apply_scheme(std::get<CFScheme>(scheme), prob, tau_eff, u, t0);
            }
        }
        double err = (u - ref).norm() / ref_norm;
        est.errors.push_back({tau_eff, err});
    }

    for (size_t i = 0; i < est.errors.size(); ++i) {
        double e = est.errors[i].second;
        if (e > 1e-11 && e < 0.1)
            est.fit_range.push_back(static_cast<int>(i));
    }
    if (est.fit_range.size() < 3)
        throw std::runtime_error("estimate_order: fewer than 3 usable points after filtering");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i : est.fit_range) {
        double x = std::log(est.errors[static_cast<size_t>(i)].first);
        double y = std::log(est.errors[static_cast<size_t>(i)].second);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = static_cast<double>(est.fit_range.size());
    est.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return est;
}

// ---------------------------------------------------------------------------
// Stiff demonstration

StiffReport stiff_demo(const Scheme &scheme, int grid_size)
{
    if (grid_size < 16)
        throw std::invalid_argument("stiff_demo: grid_size must be >= 16");
    const int n = grid_size;
    const double scale = static_cast<double>((n + 1)) * (n + 1);
    MatrixXd A = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        A(i, i) = -2.0 * scale;
        if (i > 0)
            A(i, i - 1) = scale;
        if (i + 1 < n)
            A(i, i + 1) = scale;
    }
    MatrixXd B = MatrixXd::Zero(n, n);
    VectorXd u0(n);
    for (int i = 0; i < n; ++i) {
        double x = static_cast<double>(i + 1) / (n + 1);
        B(i, i) = -4.0 * x * (1.0 - x); // bounded dissipative potential
        u0(i) = std::sin(M_PI * x);
    }

    StiffReport rep;
    rep.scheme_name = scheme.name;
    rep.grid_size = n;
    rep.tau = 0.01;
    rep.steps = 100;
    rep.min_a = 0.0;
    for (const auto &f : scheme.factors)
        if (f.kind == FactorKind::AFlow)
            rep.min_a = std::min(rep.min_a, to_double(f.a));

    LinearProblem prob = LinearProblem::autonomous(A, B, u0, 1.0);
    auto ops = scheme_step_ops(scheme, prob, rep.tau, 0.0);
    double u0n = u0.norm();
    VectorXd u = u0;
    rep.max_norm_ratio = 1.0;
    for (int s = 0; s < rep.steps; ++s) {
        for (const auto &op : ops)
            u = op * u;
        double r = u.norm() / u0n;
        if (!std::isfinite(r)) {
            rep.max_norm_ratio = std::numeric_limits<double>::infinity();
            break;
        }
        rep.max_norm_ratio = std::max(rep.max_norm_ratio, r);
        if (r > 1e12)
            break; // already clearly unstable; avoid overflow
    }
    rep.blowup = !(rep.max_norm_ratio <= 1e3);
    return rep;
}

// ---------------------------------------------------------------------------
// Seeded problems

namespace {

MatrixXd seeded_unit_norm_matrix(Rng &rng, int dim)
{
    MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            m(i, j) = rng.uniform(-1.0, 1.0);
    Eigen::JacobiSVD<MatrixXd> svd(m);
    double smax = svd.singularValues()(0);
    if (smax > 0)
        m /= smax;
    return m;
}

VectorXd seeded_unit_vector(Rng &rng, int dim)
{
    VectorXd v(dim);
    for (int i = 0; i < dim; ++i)
        v(i) = rng.uniform(-1.0, 1.0);
    double n = v.norm();
    if (n > 0)
        v /= n;
    return v;
}

} // namespace

LinearProblem seeded_autonomous_problem(std::uint64_t seed, int dim)
{
    Rng rng(seed);
    MatrixXd a = seeded_unit_norm_matrix(rng, dim);
    MatrixXd b = seeded_unit_norm_matrix(rng, dim);
    VectorXd u0 = seeded_unit_vector(rng, dim);
    return LinearProblem::autonomous(std::move(a), std::move(b), std::move(u0), 1.0);
}

LinearProblem seeded_polynomial_problem(std::uint64_t seed, int k, int dim)
{
    if (k < 1 || k > 2)
        throw std::invalid_argument("seeded_polynomial_problem: k must be 1 or 2");
    Rng rng(seed ^ 0xABCDEF12345ull);
    std::vector<MatrixXd> h;
    for (int m = 0; m <= k; ++m)
        h.push_back(seeded_unit_norm_matrix(rng, dim));
    VectorXd u0 = seeded_unit_vector(rng, dim);
    return LinearProblem::polynomial_t(std::move(h), std::move(u0), 1.0);
}

std::span<const std::uint64_t> ensemble_seeds()
{
    static const std::uint64_t seeds[5] = {11, 22, 33, 44, 55};
    return seeds;
}

} // namespace splitkit

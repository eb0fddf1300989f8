#include "splitkit/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace splitkit {

Rational rational_from_double(double x)
{
    if (!std::isfinite(x))
        throw std::invalid_argument("rational_from_double: value is not finite");
    return Rational(x); // mpq_set_d is exact for finite doubles
}

double to_double(const Rational &q) { return q.get_d(); }

namespace {

bool all_digits(const std::string &s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

} // namespace

Rational rational_from_string(const std::string &text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += c;
    if (s.empty())
        throw std::invalid_argument("rational_from_string: empty string");

    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = (s[0] == '-');
        s = s.substr(1);
    }

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw std::invalid_argument("rational_from_string: bad fraction '" + text + "'");
        Rational q{mpz_class(num), mpz_class(den)};
        if (q.get_den() == 0)
            throw std::invalid_argument("rational_from_string: zero denominator in '" + text + "'");
        q.canonicalize();
        return negative ? Rational(-q) : q;
    }

    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty())
            ip = "0";
        if (fp.empty())
            fp = "0";
        if (!all_digits(ip) || !all_digits(fp))
            throw std::invalid_argument("rational_from_string: bad decimal '" + text + "'");
        mpz_class den10 = 1;
        for (size_t i = 0; i < fp.size(); ++i)
            den10 *= 10;
        Rational q(mpz_class(ip) * den10 + mpz_class(fp), den10);
        q.canonicalize();
        return negative ? Rational(-q) : q;
    }

    if (!all_digits(s))
        throw std::invalid_argument("rational_from_string: bad integer '" + text + "'");
    Rational q{mpz_class(s)};
    return negative ? Rational(-q) : q;
}

std::string to_string(const Rational &q) { return q.get_str(); }

std::optional<Rational> rationalize(double x, unsigned long max_den)
{
    if (!std::isfinite(x))
        return std::nullopt;
    Rational target = rational_from_double(x);
    mpz_class cap(max_den);

    // Continued-fraction convergents p_k/q_k of the exact target.
    mpz_class p_prev = 0, q_prev = 1; // h_{-2}/k_{-2}
    mpz_class p_cur = 1, q_cur = 0;   // h_{-1}/k_{-1}; first step yields a0/1
    Rational rem = target;
    while (true) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), rem.get_num().get_mpz_t(), rem.get_den().get_mpz_t());
        mpz_class p_next = a * p_cur + p_prev;
        mpz_class q_next = a * q_cur + q_prev;
        if (q_next > cap)
            break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        Rational frac = rem - Rational(a);
        if (frac == 0)
            break;
        rem = Rational(1) / frac;
    }
    if (q_cur == 0)
        return std::nullopt;
    Rational out(p_cur, q_cur);
    out.canonicalize();
    return out;
}

Rational simplest_in_interval(const Rational &lo, const Rational &hi)
{
    if (lo > hi)
        throw std::invalid_argument("simplest_in_interval: empty interval");
    if (lo <= 0 && 0 <= hi)
        return Rational(0);
    if (hi < 0) {
        Rational r = simplest_in_interval(-hi, -lo);
        return -r;
    }
    // 0 < lo <= hi. Walk the Stern-Brocot tree iteratively: strip integer
    // parts, recurse on the reciprocal of the fractional interval.
    std::vector<mpz_class> cf;
    Rational a = lo, b = hi;
    while (true) {
        mpz_class fa;
        mpz_fdiv_q(fa.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
        // smallest integer >= a
        mpz_class ca = fa;
        if (Rational(fa) != a)
            ca = fa + 1;
        if (Rational(ca) <= b) {
            cf.push_back(ca);
            break;
        }
        cf.push_back(fa);
        a -= Rational(fa);
        b -= Rational(fa);
        // now 0 < a < 1 (a cannot be 0 here, else ceil == floor branch hit)
        Rational na = Rational(1) / b, nb = Rational(1) / a;
        a = na;
        b = nb;
    }
    // Rebuild the fraction from the continued-fraction digits.
    Rational r(cf.back());
    for (auto it = cf.rbegin() + 1; it != cf.rend(); ++it)
        r = Rational(*it) + Rational(1) / r;
    return r;
}

} // namespace splitkit

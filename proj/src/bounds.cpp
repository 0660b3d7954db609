#include "stretch/bounds.hpp"

#include <cfenv>
#include <cmath>
#include <numeric>
#include <regex>

#include "stretch/errors.hpp"
#include "stretch/lifting.hpp"

namespace stretch {

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational parse_rational(const std::string& text) {
    static const std::regex pattern(R"(^\s*(\d+)\s*(?:/\s*(\d+))?\s*$)");
    std::smatch match;
    if (!std::regex_match(text, match, pattern))
        throw PreconditionError("expected a non-negative rational p/q, got '" + text + "'");
    Rational r;
    try {
        r.num = std::stoll(match[1].str());
        r.den = match[2].matched ? std::stoll(match[2].str()) : 1;
    } catch (const std::out_of_range&) {
        throw PreconditionError("rational out of range: '" + text + "'");
    }
    if (r.den == 0) throw PreconditionError("rational with zero denominator: '" + text + "'");
    std::int64_t d = std::gcd(r.num, r.den);
    if (d > 1) {
        r.num /= d;
        r.den /= d;
    }
    return r;
}

long double g_prime_real(int g, int m) {
    if (g < 1 || m < 1) throw PreconditionError("g_prime_real: g and m must be >= 1");
    const long double gl = g, ml = m;
    const long double h = gl * (1.0L + ml / std::sqrt(gl) + 1.0L / gl);
    return h + std::sqrt(h);
}

namespace {

long double slack(int g, int m) { return static_cast<long double>(m) * std::sqrt(static_cast<long double>(g)) + 2.0L; }

}  // namespace

long double optimum_lower_bound(const Rational& u, int g, int m, bool ceil_gprime) {
    const long double gp = ceil_gprime ? static_cast<long double>(compute_g_prime_int(g, m)) : g_prime_real(g, m);
    return (u.value() - slack(g, m) / g) * (static_cast<long double>(g) / gp);
}

Interval sandwich_interval(const Rational& l, int g, int m) {
    const long double gp = compute_g_prime_int(g, m);
    const long double lo = l.value();
    const long double hi = (lo + slack(g, m) / gp) * (gp / g);
    return {lo, hi};
}

BoundReport optimum_bound_report(const Rational& u, int g, int m, bool ceil_gprime) {
    BoundReport r;
    r.m = m;
    r.g = g;
    r.input = u;
    r.g_prime_real = g_prime_real(g, m);
    r.g_prime_int = compute_g_prime_int(g, m);
    r.derived_lo = optimum_lower_bound(u, g, m, ceil_gprime);
    return r;
}

BoundReport sandwich_report(const Rational& l, int g, int m) {
    BoundReport r;
    r.m = m;
    r.g = g;
    r.input = l;
    r.g_prime_real = g_prime_real(g, m);
    r.g_prime_int = compute_g_prime_int(g, m);
    Interval iv = sandwich_interval(l, g, m);
    r.derived_lo = iv.lo;
    r.derived_hi = iv.hi;
    return r;
}

std::string render_decimal(long double x, int places) {
    long double scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    const int saved = std::fegetround();
    std::fesetround(FE_TONEAREST);  // ties go to even
    long long q = std::llrint(x * scale);
    std::fesetround(saved);
    const bool negative = q < 0;
    unsigned long long mag = negative ? static_cast<unsigned long long>(-q) : static_cast<unsigned long long>(q);
    const auto iscale = static_cast<unsigned long long>(scale);
    std::string frac = std::to_string(mag % iscale);
    std::string out = (negative ? "-" : "") + std::to_string(mag / iscale);
    if (places > 0) out += "." + std::string(static_cast<size_t>(places) - frac.size(), '0') + frac;
    return out;
}

}  // namespace stretch

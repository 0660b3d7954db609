#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace stretch {

/// Non-negative exact rational p/q.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    long double value() const { return static_cast<long double>(num) / static_cast<long double>(den); }
    std::string str() const;
};

/// Parses "p/q" or an integer "p". Decimal notation is rejected so that
/// inputs stay exact. Throws PreconditionError.
Rational parse_rational(const std::string& text);

/// Enlarged offline bin size g(1 + m/sqrt(g) + 1/g) + sqrt(g(1 + m/sqrt(g) + 1/g)).
long double g_prime_real(int g, int m);

/// Lower bound on the optimal stretching factor implied by an upper-game
/// value u at granularity g: (u - (m sqrt(g) + 2)/g) * g / g'. Uses the real
/// g' unless `ceil_gprime` is set. May be negative.
long double optimum_lower_bound(const Rational& u, int g, int m, bool ceil_gprime = false);

struct Interval {
    long double lo;
    long double hi;
};

/// Sandwich around the optimal stretching factor from the lower-game value l
/// at the integer granularity g' = ceil(g_prime_real(g, m)):
/// [l, (l + (m sqrt(g) + 2)/g') * g'/g].
Interval sandwich_interval(const Rational& l, int g, int m);

struct BoundReport {
    int m = 0;
    int g = 0;
    Rational input;
    long double g_prime_real = 0;
    int g_prime_int = 0;
    std::optional<long double> derived_lo;
    std::optional<long double> derived_hi;
};

BoundReport optimum_bound_report(const Rational& u, int g, int m, bool ceil_gprime = false);
BoundReport sandwich_report(const Rational& l, int g, int m);

/// Fixed-point rendering rounded half-even.
std::string render_decimal(long double x, int places = 4);

}  // namespace stretch

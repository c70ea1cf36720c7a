#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "heyde/errors.hpp"

namespace heyde {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// "p/q" with both parts printed in lowest terms.
inline std::string format_fraction(const Rational& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "p/q" or a bare integer "p" (optional leading '-'). Throws SchemaError
/// on malformed text or a zero denominator.
inline Rational parse_fraction(std::string_view text) {
    auto parse_int = [&](std::string_view s) -> BigInt {
        std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
        if (s.size() == start) throw SchemaError("malformed fraction \"" + std::string(text) + "\"");
        for (std::size_t i = start; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw SchemaError("malformed fraction \"" + std::string(text) + "\"");
        }
        return BigInt(std::string(s));
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    const BigInt num = parse_int(text.substr(0, slash));
    const BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw SchemaError("zero denominator in fraction \"" + std::string(text) + "\"");
    return Rational(num, den);
}

/// Best rational approximation p/q of x with q <= max_denominator, by
/// continued-fraction convergents and semiconvergents.
inline Rational best_rational_approximation(double x, std::int64_t max_denominator) {
    const bool negative = x < 0;
    double v = std::fabs(x);
    // h/k are convergents, seeded with 0/1 and 1/0.
    std::int64_t h_prev = 0, h = 1, k_prev = 1, k = 0;
    double frac = v;
    std::int64_t best_h = static_cast<std::int64_t>(std::llround(v));
    std::int64_t best_k = 1;
    for (int iter = 0; iter < 64; ++iter) {
        const double a_real = std::floor(frac);
        if (a_real > 1e15) break;
        const auto a = static_cast<std::int64_t>(a_real);
        const std::int64_t h_next = a * h + h_prev;
        const std::int64_t k_next = a * k + k_prev;
        if (k_next > max_denominator) {
            // Largest admissible semiconvergent.
            const std::int64_t t = (max_denominator - k_prev) / k;
            const std::int64_t hs = t * h + h_prev;
            const std::int64_t ks = t * k + k_prev;
            const double err_conv = std::fabs(v - static_cast<double>(h) / static_cast<double>(k));
            const double err_semi = ks > 0 ? std::fabs(v - static_cast<double>(hs) / static_cast<double>(ks)) : INFINITY;
            if (err_semi < err_conv) {
                best_h = hs;
                best_k = ks;
            } else {
                best_h = h;
                best_k = k;
            }
            break;
        }
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        best_h = h;
        best_k = k;
        const double rem = frac - a_real;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
    }
    Rational r(best_h, best_k);
    return negative ? Rational(-r) : r;
}

/// Snaps x to the best rational with denominator <= max_denominator when that
/// rational lies within tolerance of x.
inline std::optional<Rational> snap_rational(double x, double tolerance = 1e-9,
                                             std::int64_t max_denominator = 1'000'000) {
    Rational r = best_rational_approximation(x, max_denominator);
    if (std::fabs(to_double(r) - x) <= tolerance) return r;
    return std::nullopt;
}

}  // namespace heyde

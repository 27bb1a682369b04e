#pragma once

// One-sided rational approximation by walking the Stern-Brocot tree, which
// visits every continued-fraction convergent and semiconvergent of x.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "entbat/errors.hpp"

namespace entbat {

struct Fraction {
    std::int64_t p = 0;
    std::int64_t q = 1;

    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
};

struct RationalApproximation {
    Fraction fraction;
    /// True when x is recognized as a fraction p/q with q <= max_den; that
    /// fraction is returned.
    bool exact = false;
};

/// Every real x has fractions with |x - p/q| < 1/q^2, so a match is only
/// taken as exact when it is much closer than that: within both `exact_tol`
/// and kExactnessMargin / q^2.
inline constexpr double kExactnessMargin = 1e-6;

/// Largest fraction p/q <= x with q <= max_den, unless an exact match is
/// found first. Requires finite x >= 0.
inline RationalApproximation lower_rational(double x, std::int64_t max_den = 1'000'000, double exact_tol = 1e-12) {
    if (!std::isfinite(x) || x < 0.0) throw DomainError("rational approximation needs a finite x >= 0");
    if (max_den < 1) throw DomainError("denominator bound must be >= 1");
    using LD = long double;
    const LD xv = x;
    auto close = [&](const Fraction& f) {
        const LD q = f.q;
        return std::abs(static_cast<LD>(f.p) / q - xv) <= std::min<LD>(exact_tol, kExactnessMargin / (q * q));
    };
    // p - x q, the signed distance scaled by q.
    auto excess = [&](std::int64_t p, std::int64_t q) { return static_cast<LD>(p) - xv * static_cast<LD>(q); };

    auto steps = [&](LD ratio) {
        return static_cast<std::int64_t>(std::clamp<LD>(std::floor(ratio), 1, static_cast<LD>(max_den)));
    };

    const auto fl = static_cast<std::int64_t>(std::floor(x));
    Fraction lo{fl, 1}, hi{fl + 1, 1};
    if (close(lo)) return {lo, true};
    if (close(hi)) return {hi, true};

    for (;;) {
        const std::int64_t mq = lo.q + hi.q;
        if (mq > max_den) break;
        if (excess(lo.p + hi.p, mq) <= 0) {
            // Move lo toward x: lo + k*hi stays <= x for k <= kmax.
            auto k = steps(-excess(lo.p, lo.q) / excess(hi.p, hi.q));
            while (k > 1 && excess(lo.p + k * hi.p, lo.q + k * hi.q) > 0) --k;
            k = std::min(k, (max_den - lo.q) / hi.q);
            lo = {lo.p + k * hi.p, lo.q + k * hi.q};
            if (close(lo)) return {lo, true};
        } else {
            // Move hi toward x: hi + k*lo stays > x for k <= kmax.
            auto k = steps(excess(hi.p, hi.q) / -excess(lo.p, lo.q));
            while (k > 1 && excess(hi.p + k * lo.p, hi.q + k * lo.q) <= 0) --k;
            k = std::min(k, (max_den - hi.q) / lo.q);
            hi = {hi.p + k * lo.p, hi.q + k * lo.q};
            if (close(hi)) return {hi, true};
        }
    }
    return {lo, false};
}

} // namespace entbat

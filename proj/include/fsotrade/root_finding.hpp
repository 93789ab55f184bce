#pragma once

#include <cmath>
#include <cstddef>
#include <optional>

#include "fsotrade/errors.hpp"

namespace fsotrade {

struct BisectionOptions {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    std::size_t max_iter = 200;
};

/// Bisection for a sign change of `f` on [lo, hi]. Requires f(lo) > 0 and
/// f(hi) <= 0; the returned bracket keeps that orientation.
struct Bracket {
    double lo;
    double hi;
    double mid() const { return 0.5 * (lo + hi); }
};

template <class F>
Bracket bisect(F&& f, double lo, double hi, const BisectionOptions& opt = {}) {
    for (std::size_t i = 0; i < opt.max_iter; ++i) {
        const double width = hi - lo;
        if (width <= opt.abs_tol || width <= opt.rel_tol * std::abs(hi)) break;
        const double m = lo + 0.5 * width;
        if (m <= lo || m >= hi) break;  // bracket at floating-point resolution
        if (f(m) > 0.0) {
            lo = m;
        } else {
            hi = m;
        }
    }
    return {lo, hi};
}

/// Grows `hi` geometrically from `start` until `pred(hi)` is true.
/// Returns nullopt if `max_doublings` is exhausted.
template <class Pred>
std::optional<double> expand_upper(Pred&& pred, double start, std::size_t max_doublings = 200) {
    double hi = start;
    for (std::size_t i = 0; i < max_doublings; ++i) {
        if (pred(hi)) return hi;
        hi *= 2.0;
    }
    return std::nullopt;
}

}  // namespace fsotrade

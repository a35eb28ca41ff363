#pragma once

#include <cmath>
#include <vector>

#include "cjoint/errors.hpp"

namespace cjoint {

struct GoldenSectionResult {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
    /// Bracket width after each iteration, starting with the initial width.
    std::vector<double> bracket_widths;
};

/// Minimise a unimodal function on [lo, hi] until the bracket is narrower
/// than `tol`. Throws ConvergenceError if `max_iter` is exhausted first.
template <typename Fn>
GoldenSectionResult golden_section_minimize(Fn &&fn, double lo, double hi, double tol,
                                            int max_iter = 200) {
    constexpr double inv_phi = 0.6180339887498949; // (sqrt(5) - 1) / 2
    GoldenSectionResult out;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = fn(c);
    double fd = fn(d);
    out.bracket_widths.push_back(b - a);
    while (b - a > tol) {
        if (out.iterations >= max_iter) {
            throw ConvergenceError("golden-section search did not reach the requested bracket width");
        }
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = fn(d);
        }
        ++out.iterations;
        out.bracket_widths.push_back(b - a);
    }
    if (fc <= fd) {
        out.x = c;
        out.value = fc;
    } else {
        out.x = d;
        out.value = fd;
    }
    return out;
}

} // namespace cjoint

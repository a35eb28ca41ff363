// Frequency-domain Volterra kernels of the cubic oscillator and output spectra
// for line-spectrum (Dirac comb) inputs.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cjoint/errors.hpp"
#include "cjoint/harmonic_balance.hpp"

namespace cjoint {

using cplx = std::complex<double>;

/// First-order kernel H1(jw) = 1 / (k - w^2 + j zeta w).
inline cplx h1(double omega, const DuffingCoeffs &c) {
    const cplx den(c.k - omega * omega, c.zeta * omega);
    if (den == cplx(0.0, 0.0)) {
        throw ResonanceSingularity("h1: undamped resonance, k - w^2 + j zeta w = 0");
    }
    return 1.0 / den;
}

struct KernelContext {
    DuffingCoeffs coeffs;
    int max_order = 7;
};

inline void validate_order(int max_order) {
    if (max_order != 1 && max_order != 3 && max_order != 5 && max_order != 7) {
        throw std::invalid_argument("volterra: max_order must be one of 1, 3, 5, 7");
    }
}

namespace detail {

inline cplx kernel_impl(std::span<const double> w, const DuffingCoeffs &c) {
    const std::size_t n = w.size();
    if (n == 1) return h1(w[0], c);
    if (n % 2 == 0) return {0.0, 0.0};
    double sum = 0.0;
    for (double x : w) sum += x;
    const cplx outer = h1(sum, c);
    switch (n) {
    case 3:
        return -c.a * outer * h1(w[0], c) * h1(w[1], c) * h1(w[2], c);
    case 5:
        return -3.0 * c.a * outer * h1(w[0], c) * h1(w[1], c) * kernel_impl(w.subspan(2, 3), c);
    case 7:
        return -3.0 * c.a * outer *
               (h1(w[0], c) * h1(w[1], c) * kernel_impl(w.subspan(2, 5), c) +
                h1(w[0], c) * kernel_impl(w.subspan(1, 3), c) * kernel_impl(w.subspan(4, 3), c));
    default:
        throw std::invalid_argument("volterra: kernels are defined up to order 7");
    }
}

} // namespace detail

/// Order-n kernel H_n(j w1, ..., j wn) from the recursions
///
///   H3 = -a   H1(sum) H1(w1) H1(w2) H1(w3)
///   H5 = -3a  H1(sum) H1(w1) H1(w2) H3(w3:5)
///   H7 = -3a  H1(sum) [H1(w1) H1(w2) H5(w3:7) + H1(w1) H3(w2:4) H3(w5:7)]
///
/// Even orders vanish. The kernels are not symmetrised, so the value depends
/// on argument order; only sums over all argument tuples are symmetric.
inline cplx kernel(int order, std::span<const double> freqs, const KernelContext &ctx) {
    validate_order(ctx.max_order);
    if (order < 1) throw std::invalid_argument("kernel: order must be >= 1");
    if (order > ctx.max_order) throw std::invalid_argument("kernel: order exceeds max_order");
    if (freqs.size() != static_cast<std::size_t>(order)) {
        throw std::invalid_argument("kernel: need exactly `order` frequencies");
    }
    return detail::kernel_impl(freqs, ctx.coeffs);
}

/// Closed-form single-tone response at +Omega.
struct SingleToneResponse {
    cplx Y;                       ///< output line at +Omega
    double amplitude = 0.0;       ///< first-harmonic amplitude [rad]
    std::array<cplx, 4> orders{}; ///< contributions of orders 1, 3, 5, 7
};

/// Maps |Y(Omega)| to the time-domain first-harmonic amplitude: A = c |Y| / pi.
/// Fixed by the linear limit, where A must equal Q0 |H1(Omega)|.
inline constexpr double kAmplitudeCalibration = 1.0;

/// Output line at +Omega for Q0 sin(Omega t + phi), truncated at `max_order`.
///
/// The input lines are X(+1) = -j pi Q0 e^{j phi} and X(-1) = conj(X(+1)).
/// This is the enumeration over all index tuples collapsed by hand; with
/// p = H1(W), m = H1(-W), p3 = H1(3W), m3 = H1(-3W) and the prefactor j pi / 64:
///
///   order 1:  -64 Q0 p
///   order 3:   48 a Q0^3 m p^3
///   order 5:  -12 a^2 Q0^5 m^2 p^4 (p3 + 6p + 3m)
///   order 7:    3 a^3 Q0^7 m^3 p^5 (2 p3 m3 + 6 p3 m + 6 p3^2 + 3 m3 m
///                                   + 15 p3 p + 45 p^2 + 45 m p + 18 m^2)
inline SingleToneResponse single_tone_response(const DuffingCoeffs &c, const Forcing &f, int max_order = 7) {
    validate_order(max_order);
    if (!(f.Q0 >= 0.0)) throw std::invalid_argument("single_tone_response: Q0 must be >= 0");
    if (!(f.Omega > 0.0)) throw std::invalid_argument("single_tone_response: Omega must be > 0");

    const double W = f.Omega;
    const double a = c.a;
    const double Q = f.Q0;
    const cplx p = h1(W, c);
    const cplx m = h1(-W, c);
    const cplx pre = cplx(0.0, std::numbers::pi / 64.0) * std::polar(1.0, f.phi);

    SingleToneResponse out;
    out.orders[0] = pre * (-64.0 * Q * p);
    if (max_order >= 3) {
        out.orders[1] = pre * (48.0 * a * std::pow(Q, 3) * m * p * p * p);
    }
    if (max_order >= 5) {
        const cplx p3 = h1(3.0 * W, c);
        const cplx m3 = h1(-3.0 * W, c);
        const cplx m2 = m * m;
        const cplx p4 = p * p * p * p;
        out.orders[2] = pre * (-12.0 * a * a * std::pow(Q, 5) * m2 * p4 * (p3 + 6.0 * p + 3.0 * m));
        if (max_order >= 7) {
            const cplx group = 2.0 * p3 * m3 + 6.0 * p3 * m + 6.0 * p3 * p3 + 3.0 * m3 * m + 15.0 * p3 * p +
                               45.0 * p * p + 45.0 * m * p + 18.0 * m2;
            out.orders[3] = pre * (3.0 * a * a * a * std::pow(Q, 7) * m2 * m * p4 * p * group);
        }
    }
    for (const auto &o : out.orders) out.Y += o;
    out.amplitude = kAmplitudeCalibration * std::abs(out.Y) / std::numbers::pi;
    return out;
}

/// One line of a Dirac-comb spectrum: X delta(w - l Omega).
struct SpectrumLine {
    int harmonic_index = 0;
    double frequency = 0.0; ///< l * Omega [rad/s]
    cplx X;
};

struct OutputSpectrum {
    double base_frequency = 0.0;
    std::vector<SpectrumLine> lines; ///< sum over orders, ascending index
    std::map<int, std::vector<SpectrumLine>> per_order_contributions;

    /// Line at harmonic `index`, zero when absent.
    cplx line(int index) const {
        for (const auto &l : lines) {
            if (l.harmonic_index == index) return l.X;
        }
        return {0.0, 0.0};
    }
};

/// Input lines for Q0 sin(Omega t + phi): X(+-1) = -+ j pi Q0 e^{+-j phi}.
inline std::vector<SpectrumLine> single_tone_lines(const Forcing &f) {
    const cplx x_pos = cplx(0.0, -std::numbers::pi * f.Q0) * std::polar(1.0, f.phi);
    return {SpectrumLine{-1, -f.Omega, std::conj(x_pos)}, SpectrumLine{1, f.Omega, x_pos}};
}

inline constexpr std::uint64_t kMaxVolterraTuples = 10'000'000;

/// Output spectrum of the truncated Volterra series for a real line-spectrum input.
///
///   Y_i = (2 pi)^(1-i) sum_{l1..li} H_i(Omega l1, ..., Omega li) X_l1 ... X_li
///         delta(w - Omega (l1 + ... + li))
///
/// Tuples run over the non-zero input lines in ascending harmonic order, so
/// the floating-point summation order does not depend on the input order.
inline OutputSpectrum multi_tone_spectrum(const DuffingCoeffs &c, std::span<const SpectrumLine> input,
                                          int max_order = 7) {
    validate_order(max_order);
    OutputSpectrum out;

    std::vector<SpectrumLine> active;
    for (const auto &l : input) {
        if (l.X != cplx(0.0, 0.0)) active.push_back(l);
    }
    std::sort(active.begin(), active.end(),
              [](const SpectrumLine &x, const SpectrumLine &y) { return x.harmonic_index < y.harmonic_index; });
    for (std::size_t i = 1; i < active.size(); ++i) {
        if (active[i].harmonic_index == active[i - 1].harmonic_index) {
            throw std::invalid_argument("multi_tone_spectrum: duplicate harmonic index");
        }
    }
    if (active.empty()) return out;

    // Base frequency and conjugate symmetry.
    for (const auto &l : active) {
        if (l.harmonic_index != 0) {
            out.base_frequency = l.frequency / l.harmonic_index;
            break;
        }
    }
    for (const auto &l : active) {
        const double expected = out.base_frequency * l.harmonic_index;
        if (std::abs(l.frequency - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
            throw std::invalid_argument("multi_tone_spectrum: line frequencies are not multiples of one base");
        }
        const auto mirror = std::find_if(active.begin(), active.end(), [&](const SpectrumLine &o) {
            return o.harmonic_index == -l.harmonic_index;
        });
        const double tol = 1e-12 * std::abs(l.X);
        if (mirror == active.end() || std::abs(mirror->X - std::conj(l.X)) > tol) {
            throw std::invalid_argument("multi_tone_spectrum: input is not conjugate-symmetric (not a real signal)");
        }
    }

    const std::size_t n_active = active.size();
    std::uint64_t total = 0;
    for (int order = 1; order <= max_order; order += 2) {
        std::uint64_t count = 1;
        for (int i = 0; i < order; ++i) {
            count *= n_active;
            if (count > kMaxVolterraTuples) break;
        }
        total += count;
        if (total > kMaxVolterraTuples) {
            throw std::invalid_argument("multi_tone_spectrum: tuple count exceeds the 1e7 cap");
        }
    }

    std::map<int, cplx> totals;
    std::vector<double> freqs;
    std::vector<std::size_t> idx;
    for (int order = 1; order <= max_order; order += 2) {
        const double scale = std::pow(2.0 * std::numbers::pi, 1 - order);
        std::map<int, cplx> acc;
        idx.assign(order, 0);
        freqs.assign(order, 0.0);
        while (true) {
            int index_sum = 0;
            cplx product(1.0, 0.0);
            for (int i = 0; i < order; ++i) {
                const auto &l = active[idx[i]];
                freqs[i] = l.frequency;
                index_sum += l.harmonic_index;
                product *= l.X;
            }
            acc[index_sum] += detail::kernel_impl(freqs, c) * product;

            int pos = order - 1;
            while (pos >= 0 && ++idx[pos] == n_active) {
                idx[pos] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
        auto &contrib = out.per_order_contributions[order];
        for (const auto &[index, value] : acc) {
            const cplx y = scale * value;
            contrib.push_back(SpectrumLine{index, index * out.base_frequency, y});
            totals[index] += y;
        }
    }
    for (const auto &[index, value] : totals) {
        out.lines.push_back(SpectrumLine{index, index * out.base_frequency, value});
    }
    return out;
}

} // namespace cjoint

// Envelope and harmonic-content extraction from uniformly sampled signals.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace cjoint {

struct SampledSignal {
    std::vector<double> samples;
    double dt = 0.0; ///< sample spacing [s]

    double duration() const { return dt * static_cast<double>(samples.size()); }
};

inline constexpr std::size_t kMinSignalLength = 16;

inline void validate(const SampledSignal &sig) {
    if (sig.samples.size() < kMinSignalLength) {
        throw std::invalid_argument("sampled signal: need at least 16 samples");
    }
    if (!(sig.dt > 0.0)) throw std::invalid_argument("sampled signal: dt must be > 0");
}

/// Build a SampledSignal from explicit sample times, rejecting non-uniform grids.
inline SampledSignal make_uniform_signal(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size()) throw std::invalid_argument("sampled signal: size mismatch");
    if (times.size() < kMinSignalLength) throw std::invalid_argument("sampled signal: need at least 16 samples");
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(dt > 0.0)) throw std::invalid_argument("sampled signal: times must increase");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (std::abs((times[i] - times[i - 1]) - dt) > 1e-6 * dt) {
            throw std::invalid_argument("sampled signal: non-uniform sampling");
        }
    }
    return SampledSignal{std::vector<double>(values.begin(), values.end()), dt};
}

namespace fft {

using cplx = std::complex<double>;

/// DFT of any length; `inverse` applies e^{+j...} and 1/N.
inline std::vector<cplx> dft(std::vector<cplx> x, bool inverse = false) {
    const std::size_t n = x.size();
    if (n == 0) return x;
    // The planner is not thread-safe; execution is.
    static std::mutex planner;
    auto *data = reinterpret_cast<fftw_complex *>(x.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner);
        plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw std::runtime_error("fft: planning failed");
    fftw_execute(plan);
    {
        std::lock_guard lock(planner);
        fftw_destroy_plan(plan);
    }
    if (inverse) {
        for (auto &v : x) v /= static_cast<double>(n);
    }
    return x;
}

} // namespace fft

/// Modulus of the discrete analytic signal.
///
/// Negative-frequency bins are zeroed and positive ones doubled; DC and (for
/// even lengths) Nyquist are kept. The construction treats the record as
/// periodic, so callers should discard ~10% at each end unless the record
/// spans whole periods of the content.
inline std::vector<double> analytic_envelope(const SampledSignal &sig) {
    validate(sig);
    const std::size_t n = sig.samples.size();
    std::vector<fft::cplx> x(sig.samples.begin(), sig.samples.end());
    x = fft::dft(std::move(x), false);
    const std::size_t half = n / 2;
    for (std::size_t k = 1; k < n; ++k) {
        if (k < (n + 1) / 2) {
            x[k] *= 2.0;
        } else if (n % 2 == 0 && k == half) {
            // Nyquist bin kept as is.
        } else {
            x[k] = 0.0;
        }
    }
    x = fft::dft(std::move(x), true);
    std::vector<double> env(n);
    for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(x[i]);
    return env;
}

inline constexpr double kGuardFraction = 0.1;

/// Drop `fraction` of the samples at each end.
inline std::span<const double> interior(std::span<const double> v, double fraction = kGuardFraction) {
    const auto guard = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(v.size())));
    if (2 * guard >= v.size()) throw std::invalid_argument("interior: guard bands cover the whole record");
    return v.subspan(guard, v.size() - 2 * guard);
}

inline double median(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty input");
    std::vector<double> tmp(v.begin(), v.end());
    const std::size_t mid = tmp.size() / 2;
    std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid), tmp.end());
    double m = tmp[mid];
    if (tmp.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid)));
    }
    return m;
}

/// Amplitudes of harmonics 1..n of `Omega` by direct correlation,
/// 2 |sum x_i e^{-j m Omega t_i}| / N.
///
/// The record must span an integer number of fundamental periods (within
/// 0.1%); no window is applied.
inline std::vector<double> harmonic_amplitudes(const SampledSignal &sig, double Omega, int n) {
    validate(sig);
    if (!(Omega > 0.0)) throw std::invalid_argument("harmonic_amplitudes: Omega must be > 0");
    if (n < 1) throw std::invalid_argument("harmonic_amplitudes: need n >= 1");
    const double periods = sig.duration() * Omega / (2.0 * std::numbers::pi);
    const double whole = std::round(periods);
    if (whole < 1.0 || std::abs(periods - whole) > 1e-3 * whole) {
        throw std::invalid_argument("harmonic_amplitudes: record does not span an integer number of periods");
    }
    const auto count = static_cast<double>(sig.samples.size());
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = 0; i < sig.samples.size(); ++i) {
            const double t = sig.dt * static_cast<double>(i);
            acc += sig.samples[i] * std::polar(1.0, -m * Omega * t);
        }
        out[static_cast<std::size_t>(m - 1)] = 2.0 * std::abs(acc) / count;
    }
    return out;
}

} // namespace cjoint

#pragma once

// Independent test oracles. These deliberately avoid the library's own code
// paths: metrics are recomputed from raw (actual, predicted) pairs, and the
// Student-t tail probability comes from adaptive quadrature of the density.

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace upm::oracle {

using Pairs = std::vector<std::pair<int, int>>;  // (actual, predicted)

inline double accuracy_pct(const Pairs& pairs) {
    std::int64_t correct = 0;
    for (const auto& [a, p] : pairs)
        if (a == p) ++correct;
    return 100.0 * static_cast<double>(correct) / static_cast<double>(pairs.size());
}

inline double weighted_f1_pct(const Pairs& pairs) {
    const double n = static_cast<double>(pairs.size());
    double acc = 0.0;
    for (int c = 0; c < 2; ++c) {
        std::int64_t tp = 0, actual_c = 0, predicted_c = 0;
        for (const auto& [a, p] : pairs) {
            if (a == c) ++actual_c;
            if (p == c) ++predicted_c;
            if (a == c && p == c) ++tp;
        }
        const double precision = predicted_c > 0 ? static_cast<double>(tp) / predicted_c : 0.0;
        const double recall = actual_c > 0 ? static_cast<double>(tp) / actual_c : 0.0;
        const double f1 =
            precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        acc += (static_cast<double>(actual_c) / n) * f1;
    }
    return 100.0 * acc;
}

inline double cohen_kappa(const Pairs& pairs) {
    const double n = static_cast<double>(pairs.size());
    std::int64_t agree = 0;
    double pe = 0.0;
    for (const auto& [a, p] : pairs)
        if (a == p) ++agree;
    for (int c = 0; c < 2; ++c) {
        std::int64_t actual_c = 0, predicted_c = 0;
        for (const auto& [a, p] : pairs) {
            if (a == c) ++actual_c;
            if (p == c) ++predicted_c;
        }
        pe += (static_cast<double>(actual_c) / n) * (static_cast<double>(predicted_c) / n);
    }
    const double po = static_cast<double>(agree) / n;
    if (pe >= 1.0) return po >= 1.0 ? 1.0 : 0.0;
    return (po - pe) / (1.0 - pe);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double both = left + right;
    if (depth <= 0 || std::fabs(both - whole) < 15.0 * tol)
        return both + (both - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

/// Two-tailed Student-t p-value by adaptive Simpson quadrature of the
/// density, the unbounded tail mapped through s = |t| + u/(1-u).
inline double student_t_two_tailed_p_quadrature(double t, int df) {
    const double nu = static_cast<double>(df);
    const double log_c = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                         0.5 * std::log(nu * 3.14159265358979323846);
    const double c = std::exp(log_c);
    const double big_t = std::fabs(t);
    auto density = [&](double s) { return c * std::pow(1.0 + s * s / nu, -(nu + 1.0) / 2.0); };
    auto g = [&](double u) {
        const double one_minus = 1.0 - u;
        const double s = big_t + u / one_minus;
        return density(s) / (one_minus * one_minus);
    };
    const double u_hi = 1.0 - 1e-10;
    const double body = integrate(g, 0.0, u_hi, 1e-12);
    // Analytic bound on the clipped tail beyond s(u_hi) ~ 1e10; < 1e-10.
    const double s_hi = big_t + u_hi / (1.0 - u_hi);
    const double tail = c * std::pow(nu, (nu + 1.0) / 2.0) * std::pow(s_hi, -nu) / nu;
    const double p = 2.0 * (body + tail);
    return p > 1.0 ? 1.0 : p;
}

}  // namespace upm::oracle

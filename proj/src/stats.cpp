#include "upm/stats.hpp"

#include <cmath>
#include <string>

#include "upm/errors.hpp"

namespace upm {
namespace {

// Continued fraction for the incomplete beta, modified Lentz evaluation.
// Converges fast for x < (a+1)/(a+b+2); callers switch via symmetry.
double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 600; ++m) {
        const double m2 = 2.0 * m;
        double coef = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + coef * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + coef / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        coef = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + coef * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + coef / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw NumericError("incomplete beta requires positive parameters");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, int df) {
    if (df < 1) throw NumericError("degrees of freedom must be >= 1");
    if (t == 0.0) return 1.0;
    const double nu = static_cast<double>(df);
    const double x = nu / (nu + t * t);
    return regularized_incomplete_beta(nu / 2.0, 0.5, x);
}

double student_t_critical(double alpha_two_tailed, int df) {
    if (df < 1) throw NumericError("degrees of freedom must be >= 1");
    if (!(alpha_two_tailed > 0.0 && alpha_two_tailed < 1.0))
        throw NumericError("alpha must be in (0, 1)");
    double lo = 0.0;
    double hi = 2.0;
    while (student_t_two_tailed_p(hi, df) > alpha_two_tailed) {
        hi *= 2.0;
        if (hi > 1e12) throw NumericError("t critical value search failed to bracket");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_two_tailed_p(mid, df) > alpha_two_tailed)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

SampleSummary summarize(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    if (n < 2) throw DataError("summarize requires at least 2 values, got " + std::to_string(n));
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    SampleSummary s;
    s.n = n;
    s.mean = mean;
    s.sd = std::sqrt(ss / (n - 1));
    s.se = s.sd / std::sqrt(static_cast<double>(n));
    return s;
}

TTestResult one_sample_t(const std::vector<double>& values, double mu0) {
    const SampleSummary s = summarize(values);
    if (s.sd <= 0.0) throw NumericError("one-sample t undefined for zero variance");
    TTestResult r;
    r.test_value = mu0;
    r.df = s.n - 1;
    r.mean_difference = s.mean - mu0;
    r.t = r.mean_difference / s.se;
    r.p_two_tailed = student_t_two_tailed_p(r.t, r.df);
    const double tcrit = student_t_critical(0.05, r.df);
    r.ci_lower = r.mean_difference - tcrit * s.se;
    r.ci_upper = r.mean_difference + tcrit * s.se;
    return r;
}

}  // namespace upm

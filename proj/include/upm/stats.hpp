#pragma once

#include <vector>

namespace upm {

/// Sample summary with n-1 denominator sd, matching the "One-Sample
/// Statistics" table layout (N, Mean, Std. Deviation, Std. Error Mean).
struct SampleSummary {
    int n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
};

/// One-sample two-tailed t-test against mu0, matching the "One-Sample Test"
/// table layout (t, df, Sig. 2-tailed, Mean Difference, 95% CI).
struct TTestResult {
    double test_value = 0.0;
    double t = 0.0;
    int df = 0;
    double p_two_tailed = 1.0;
    double mean_difference = 0.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
};

/// Throws DataError for n < 2.
SampleSummary summarize(const std::vector<double>& values);

/// Throws DataError for n < 2 and NumericError for zero variance.
TTestResult one_sample_t(const std::vector<double>& values, double mu0);

/// Two-tailed Student-t tail probability via the regularized incomplete
/// beta function: p = I_{df/(df+t^2)}(df/2, 1/2). Absolute error < 1e-10.
double student_t_two_tailed_p(double t, int df);

/// Upper critical value t* with P(|T| > t*) = alpha, found by bisection on
/// the implemented CDF (one numeric source of truth for p and CI).
double student_t_critical(double alpha_two_tailed, int df);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace upm

#ifndef LEXCONTRAST_DISTRIBUTIONS_HPP
#define LEXCONTRAST_DISTRIBUTIONS_HPP

// Distribution functions for the test kernels: Student t, F, chi-square and the
// standard normal. Everything is built on the regularized incomplete beta and
// gamma functions evaluated by continued fractions (modified Lentz).
//
// Each CDF comes with its upper tail computed directly rather than as 1 - cdf,
// so p-values around 1e-16 stay meaningful.

#include <lexcontrast/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace lexcontrast::dist {

/// Lower and upper regularized tail of a distribution at one point.
struct Tails {
    double lower;
    double upper;
};

/// ln Γ(x) for x > 0 (Lanczos, g = 7). Reentrant, unlike ::lgamma.
inline double log_gamma(double x)
{
    static constexpr std::array<double, 9> coef{
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5)
        return std::log(std::numbers::pi / std::abs(std::sin(std::numbers::pi * x))) - log_gamma(1.0 - x);
    x -= 1.0;
    double a = coef[0];
    double t = x + 7.5;
    for (int i = 1; i < 9; ++i)
        a += coef[i] / (x + i);
    return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

namespace detail {

inline constexpr int max_iterations = 100000;
inline constexpr double tiny = 1e-300;
inline constexpr double eps = 1e-16;

// Continued fraction for I_x(a, b) (Numerical Recipes form, modified Lentz).
inline double beta_continued_fraction(double a, double b, double x)
{
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny)
        d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iterations; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps)
            return h;
    }
    throw NumericalError("incomplete beta: continued fraction did not converge");
}

} // namespace detail

/// Regularized incomplete beta I_x(a, b) and its complement.
inline Tails incomplete_beta(double a, double b, double x)
{
    if (!(a > 0) || !(b > 0))
        throw NumericalError("incomplete beta: parameters must be positive");
    if (x <= 0)
        return {0.0, 1.0};
    if (x >= 1)
        return {1.0, 0.0};
    double log_front = log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        double lower = front * detail::beta_continued_fraction(a, b, x) / a;
        return {lower, 1.0 - lower};
    }
    double upper = front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
    return {1.0 - upper, upper};
}

/// Regularized incomplete gamma P(a, x) and Q(a, x).
inline Tails incomplete_gamma(double a, double x)
{
    if (!(a > 0))
        throw NumericalError("incomplete gamma: shape must be positive");
    if (x <= 0)
        return {0.0, 1.0};
    double log_front = -x + a * std::log(x) - log_gamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int n = 0; n < detail::max_iterations; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * detail::eps) {
                double lower = sum * std::exp(log_front);
                return {lower, 1.0 - lower};
            }
        }
        throw NumericalError("incomplete gamma: series did not converge");
    }
    double b = x + 1.0 - a;
    double c = 1.0 / detail::tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= detail::max_iterations; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < detail::tiny)
            d = detail::tiny;
        c = b + an / c;
        if (std::abs(c) < detail::tiny)
            c = detail::tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < detail::eps) {
            double upper = std::exp(log_front) * h;
            return {1.0 - upper, upper};
        }
    }
    throw NumericalError("incomplete gamma: continued fraction did not converge");
}

/// Student t with `df` degrees of freedom.
inline Tails students_t(double t, double df)
{
    if (!(df > 0))
        throw NumericalError("t distribution: df must be positive");
    if (std::isinf(t))
        return t > 0 ? Tails{1.0, 0.0} : Tails{0.0, 1.0};
    double x = df / (df + t * t);
    double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x).lower; // P(T > |t|)
    return t >= 0 ? Tails{1.0 - tail, tail} : Tails{tail, 1.0 - tail};
}

/// Two-sided p-value P(|T| >= |t|).
inline double students_t_two_tailed(double t, double df)
{
    if (std::isinf(t))
        return 0.0;
    return incomplete_beta(0.5 * df, 0.5, df / (df + t * t)).lower;
}

/// F distribution with (d1, d2) degrees of freedom.
inline Tails fisher_f(double f, double d1, double d2)
{
    if (!(d1 > 0) || !(d2 > 0))
        throw NumericalError("F distribution: dfs must be positive");
    if (f <= 0)
        return {0.0, 1.0};
    if (std::isinf(f))
        return {1.0, 0.0};
    // upper tail as I_{d2/(d2+d1 f)}(d2/2, d1/2)
    double x = d2 / (d2 + d1 * f);
    auto t = incomplete_beta(0.5 * d2, 0.5 * d1, x);
    return {t.upper, t.lower};
}

inline Tails chi_square(double x, double k)
{
    if (!(k > 0))
        throw NumericalError("chi-square distribution: df must be positive");
    if (std::isinf(x))
        return {1.0, 0.0};
    return incomplete_gamma(0.5 * k, 0.5 * std::max(x, 0.0));
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Standard normal quantile: Acklam's rational approximation refined by one Halley step.
inline double normal_quantile(double p)
{
    if (!(p > 0 && p < 1))
        throw NumericalError("normal quantile: probability must lie in (0, 1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= 1 - p_low) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        double q = std::sqrt(-2 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
    return x - u / (1 + x * u / 2);
}

/// Chi-square quantile by bracketing and bisection on the CDF.
inline double chi_square_quantile(double p, double k)
{
    if (!(p > 0 && p < 1))
        throw NumericalError("chi-square quantile: probability must lie in (0, 1)");
    double lo = 0.0, hi = std::max(1.0, k);
    while (chi_square(hi, k).lower < p)
        hi *= 2.0;
    for (int i = 0; i < 400 && hi - lo > 1e-14 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        if (chi_square(mid, k).lower < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace lexcontrast::dist

#endif

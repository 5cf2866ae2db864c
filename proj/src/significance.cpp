#include "protoguard/significance.hpp"

#include <cmath>
#include <stdexcept>

namespace pg {

namespace {

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

// Abramowitz & Stegun 26.2.17, |error| < 7.5e-8.
double normal_upper(double z) {
    if (z < 0.0) return 1.0 - normal_upper(-z);
    double t = 1.0 / (1.0 + 0.2316419 * z);
    double poly = t * (0.319381530 +
               t * (-0.356563782 +
               t * (1.781477937 +
               t * (-1.821255978 +
               t * 1.330274429))));
    return normal_pdf(z) * poly;
}

}  // namespace

double upper_tail_prob(long n1, long n, double p) {
    if (p <= 0.0 || p >= 1.0) throw std::runtime_error("upper_tail_prob: p outside (0,1)");
    double mean = static_cast<double>(n) * p;
    double var = static_cast<double>(n) * p * (1.0 - p);
    if (var <= 0.0) throw std::runtime_error("upper_tail_prob: zero variance");
    double z = (static_cast<double>(n1) - mean) / std::sqrt(var);
    return normal_upper(z);
}

double binomial_tail_exact(long n1, long n, double p) {
    if (n < 0 || n > 1000) throw std::runtime_error("binomial_tail_exact: n outside [0,1000]");
    if (n1 <= 0) return 1.0;
    if (n1 > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double lp = std::log(p);
    double lq = std::log1p(-p);
    double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    double sum = 0.0;
    for (long j = n; j >= n1; --j) {
        double lterm = lgn - std::lgamma(static_cast<double>(j) + 1.0) -
                       std::lgamma(static_cast<double>(n - j) + 1.0) +
                       static_cast<double>(j) * lp + static_cast<double>(n - j) * lq;
        sum += std::exp(lterm);
    }
    if (sum > 1.0) sum = 1.0;
    if (sum < 0.0) sum = 0.0;
    return sum;
}

double significance_tail(long n1, long n, double p) {
    if (n <= 1000) return binomial_tail_exact(n1, n, p);
    return upper_tail_prob(n1, n, p);
}

bool pattern_significant(long k, long n, double p, double alpha) {
    if (k <= 1) return false;
    if (p >= 1.0) return false;
    return significance_tail(k - 1, n, p) < alpha;
}

double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (a <= 0.0) return 0.0;
    double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        for (int i = 1; i < 10000; ++i) {
            term *= x / (a + i);
            sum += term;
            if (term < sum * 1e-15) break;
        }
        double p_lower = sum * std::exp(-x + a * std::log(x) - lg);
        return 1.0 - p_lower;
    }
    double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

double normal_quantile(double alpha) {
    if (alpha <= 0.0 || alpha >= 1.0) throw std::runtime_error("normal_quantile: alpha outside (0,1)");
    if (alpha == 0.5) return 0.0;
    if (alpha > 0.5) return -normal_quantile(1.0 - alpha);
    double t = std::sqrt(-2.0 * std::log(alpha));
    double z = t - (2.515517 + t * (0.802853 + t * 0.010328)) /
                   (1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308)));
    for (int i = 0; i < 2; ++i) {
        z += (normal_upper(z) - alpha) / normal_pdf(z);
    }
    return z;
}

double chi_squared_threshold(int df, double alpha) {
    if (df < 1) throw std::runtime_error("chi_squared_threshold: df < 1");
    if (alpha <= 0.0 || alpha >= 1.0) throw std::runtime_error("chi_squared_threshold: alpha outside (0,1)");
    double z = normal_quantile(alpha);
    double n = static_cast<double>(df);
    double cube = 1.0 - 2.0 / (9.0 * n) + z * std::sqrt(2.0 / (9.0 * n));
    double x = n * cube * cube * cube;
    if (x < 0.0) x = 1e-12;
    if (df > 8) return x;

    // Low df: refine against the exact tail by bisection.
    double a = n / 2.0;
    auto tail = [&](double v) { return gamma_q(a, v / 2.0); };
    double lo = x / 2.0;
    double hi = x * 2.0 + 1.0;
    while (tail(lo) < alpha) lo /= 2.0;
    while (tail(hi) > alpha) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (tail(mid) > alpha) lo = mid; else hi = mid;
        if (hi - lo < 1e-12 * hi) break;
    }
    return 0.5 * (lo + hi);
}

}

#pragma once

namespace pg {

// P(X >= n1) for X ~ Binomial(n, p), normal approximation.
// Throws if p is outside (0,1) or the variance is zero.
double upper_tail_prob(long n1, long n, double p);

// Exact P(X >= n1) for X ~ Binomial(n, p). Requires 0 <= n <= 1000.
double binomial_tail_exact(long n1, long n, double p);

// Tail used for significance decisions: exact for n <= 1000, normal above.
double significance_tail(long n1, long n, double p);

// True iff observing k or more successes out of n at base rate p is
// surprising at level alpha. k <= 1 is never significant; p >= 1 never is.
bool pattern_significant(long k, long n, double p, double alpha);

// Upper critical value x with P(Chi2_df >= x) = alpha.
double chi_squared_threshold(int df, double alpha);

// z with P(Z >= z) = alpha for standard normal Z, alpha in (0,1).
double normal_quantile(double alpha);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

}

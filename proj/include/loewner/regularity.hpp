#pragma once

#include <cstdint>
#include <vector>

#include "loewner/reports.hpp"
#include "loewner/tip.hpp"
#include "loewner/tracer.hpp"

namespace loewner {

enum class FitKind { Function, Derivative };

// Log-log modulus-of-continuity regression over dyadic lags. Samples must sit
// on a uniform grid with at least 2^8 points; the two coarsest and two finest
// dyadic levels are dropped (discretization bias contaminates the extremes).
// Throws std::runtime_error when fewer than 4 levels remain.
HolderFit holder_fit(const std::vector<double>& t, const std::vector<Complex>& f,
                     FitKind kind = FitKind::Function);

// N midpoint-random drivers in X_sigma (plus the spiral boundary member and
// its mirror), each traced at n nodes; asserts the per-sample box bounds of
// the time-1 tip with tolerance 5 n^{-1/2} and reports diam(E_sigma)/sigma.
VerificationReport e_sigma_sample(double sigma, int N, int n, std::uint64_t seed);

// sup|gamma1 - gamma2| / sup|lambda1 - lambda2| on a shared n-grid. Pass if
// the ratio is at most `cap` (a generous stability cap, not the paper's
// unnamed constant). Degenerate pairs (sup|dlambda| < 1e-12) report exact
// equality instead of a ratio.
VerificationReport lipschitz_ratio(const DrivingFunction& lambda1,
                                   const DrivingFunction& lambda2, int n, double cap = 100.0);

// Two drivers equal to lambda_base on [0,s], then diverging by +-M u^{1/2+delta};
// fits log|gamma1(s+eps) - gamma2(s+eps)| against log eps over dyadic eps.
// Throws on fit quality below r^2 = 0.95.
HolderFit common_past_divergence(const DrivingFunction& lambda_base, double s, double delta,
                                 int N_eps, int n, double M_pert = 0.5);

// Samples C^beta drivers (weierstrass; integrated weierstrass for beta > 1)
// and fits the slit regularity the matching theorem predicts:
//   beta in (1/2, 1]  : exponent of Gamma'        ~ beta - 1/2
//   beta in (1, 3/2)  : exponent of gamma' on [a,T] ~ beta - 1/2
//   beta = 3/2        : |dGamma'| <= N h max(1, log 1/h) modulus fit
//   beta in (3/2, 2]  : exponent of gamma'' on [a,T] ~ beta - 3/2
VerificationReport gain_experiment(double beta, double M, const std::vector<std::uint64_t>& seeds,
                                   int n, double band = 0.07);

// Table of sqrt(eps) g_s'(gamma(s+eps)) for eps = 2^{-j}; asserts Cauchy decay
// of successive differences (early ratios >= 1.5) and the final value within
// 2% of sqrt(s) e^{-L(s)}.
VerificationReport gprime_limit_check(const DrivingFunction& lambda, double s, int j_max);

// N random pairs in X_sigma plus the constant-translation pair: every ratio
// at most `cap`, stable within 5% under n -> 2n, translation ratio 1 +- 1e-6.
VerificationReport lipschitz_experiment(double sigma, int N, int n, std::uint64_t seed,
                                        double cap = 100.0);

// lambda(t) - gamma(t) against int_0^t 2/gamma(t-u,t) du on a graded mesh;
// pass when the relative error is at most 2%.
VerificationReport tip_identity_check(const DrivingFunction& lambda, double t, int n_quad,
                                      int n_tip = 0);

} // namespace loewner

#pragma once

namespace pmcdm {

inline constexpr double kProbitClampLow = 1e-12;
inline constexpr double kProbitClampHigh = 1.0 - 1e-12;

// Standard normal density, CDF and upper-tail probability.
double normal_pdf(double x);
double normal_cdf(double x);
double normal_sf(double x);

// Quantile of the standard normal for p in (0,1), no clamping.
// Wichura's AS 241 (PPND16), relative accuracy about 1e-16.
double normal_quantile(double p);

// Mastery scale -> Gaussian scale. Inputs are clamped to
// [kProbitClampLow, kProbitClampHigh] so boundary scores stay finite.
double probit(double u);

// Gaussian scale -> mastery scale (the standard normal CDF).
double probit_inv(double x);

}  // namespace pmcdm

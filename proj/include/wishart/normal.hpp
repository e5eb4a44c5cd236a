#pragma once

namespace wishart {

// Standard normal distribution function.
double normal_cdf(double x);

// Standard normal density.
double normal_pdf(double x);

// Inverse of normal_cdf on (0, 1). Wichura's algorithm AS 241 (PPND16),
// accurate to full double precision.
double normal_quantile(double p);

}  // namespace wishart

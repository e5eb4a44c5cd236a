#pragma once

#include <optional>

#include "wishart/ext_real.hpp"
#include "wishart/model.hpp"
#include "wishart/optim.hpp"

namespace wishart {

// Limiting Laplace exponent over horizon T:
//   Lambda(theta) = T (r theta^T 1 - alpha/2 tr(b + phi^{1/2}(theta)))
// on U, +infinity outside.
struct LambdaEval {
    ExtReal value;
    Vec theta;
    double horizon = 0.0;
};

LambdaEval lambda(const ModelParams& params, double horizon, const Vec& theta);

// Analytic gradient, valid strictly inside U:
//   d_j Lambda = T (r - alpha/4 tr(phi^{-1/2} d_j phi)),
//   d_j phi = a (e_j e_j^T - theta e_j^T - e_j theta^T) a^T.
// Throws OnBoundaryError when phi(theta) is nearly singular.
Vec grad_lambda(const ModelParams& params, double horizon, const Vec& theta);

// Fenchel-Legendre transform sup_lambda <lambda, y> - Lambda(lambda) at
// horizon 1, optionally restricted to a box of lambda bounds.
struct RateEval {
    Vec y;
    double value = 0.0;
    Vec argmax_lambda;
    bool converged = false;
};

RateEval rate_function(const ModelParams& params, const Vec& y,
                       const std::optional<Box>& constraint_box = std::nullopt);

// Slope constants that split the long-maturity smile into regimes:
// x* = grad Lambda(0), x~*_j = d_j Lambda(e_j), with
// beta* = max_j x*_j < 0 < beta^* = min_j x~*_j <= beta~* = max_j x~*_j.
struct RegimeConstants {
    Vec x_star;
    Vec x_tilde_star;
    double beta_star = 0.0;
    double beta_hat_star = 0.0;
    double beta_tilde_star = 0.0;
};

// Requires r = 0; uses horizon 1.
RegimeConstants regime_constants(const ModelParams& params);

// Lambda(base + s * dir) at horizon 1, with the same domain convention.
ExtReal lambda_line(const ModelParams& params, const Vec& base, const Vec& dir, double s);

}  // namespace wishart

#pragma once

#include <optional>

#include "wishart/ext_real.hpp"
#include "wishart/model.hpp"
#include "wishart/sim.hpp"

namespace wishart {

enum class PayoffKind { kBasketPut, kBasketCall };

struct PayoffSpec {
    PayoffKind kind = PayoffKind::kBasketPut;
    double strike = 0.0;
    Vec omega;

    static PayoffSpec basket_put(double strike, Vec omega);
    static PayoffSpec basket_call(double strike, Vec omega);

    // (K - omega^T e^y)_+ for the put, reversed for the call.
    double operator()(const Vec& y_terminal) const;
};

// Convex conjugate of the basket-put log-payoff:
//   +infinity when any theta_k >= 0, otherwise
//   -(1 - sum theta) log((1 - sum theta)/K) - sum theta_k log(-theta_k/omega_k).
ExtReal h_hat_basket_put(const Vec& theta, double strike, const Vec& omega);

// d_k H^ = log((1 - sum theta)/K) - log(-theta_k/omega_k), valid on the
// strictly negative orthant.
Vec h_hat_basket_put_gradient(const Vec& theta, double strike, const Vec& omega);

// Minimizer of H^(theta) + Lambda(theta) over U intersected with the
// negative orthant: the asymptotically optimal tilt for the basket put.
struct ThetaStar {
    Vec theta;
    double objective = 0.0;
    bool converged = false;
};

ThetaStar theta_star(const ModelParams& params, double horizon, const PayoffSpec& payoff);

// Pathwise Radon-Nikodym weight dP/dP_theta evaluated at the terminal
// log-price: exp(log E[e^{theta^T Y_T}] - theta^T y).
double is_weight(const ModelParams& params, const Vec& theta, double horizon,
                 const Vec& y_terminal);

struct McResult {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double variance = 0.0;  // per-path variance of the discounted values
    int n_paths = 0;
    MeasureSpec measure;
    double wall_time = 0.0;  // seconds
};

// Discounted Monte Carlo price: plain estimator without a tilt, weighted
// estimator under P_theta with one.
McResult price(const ModelParams& params, const PayoffSpec& payoff, const PathConfig& cfg,
               const std::optional<Vec>& tilt = std::nullopt);

struct VarianceRatioResult {
    double ratio = 0.0;         // Var_P[payoff] / Var_{P_theta}[weight * payoff]
    double ratio_stderr = 0.0;  // batch-means uncertainty, 10 batches
    McResult plain;
    McResult tilted;
};

// Plain and tilted runs use independent sub-seeds derived from cfg.seed.
VarianceRatioResult variance_ratio(const ModelParams& params, const PayoffSpec& payoff,
                                   const PathConfig& cfg, const Vec& theta);

}  // namespace wishart

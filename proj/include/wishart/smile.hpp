#pragma once

#include "wishart/ldp.hpp"
#include "wishart/model.hpp"

namespace wishart {

// Strike regimes of the long-maturity basket smile, split by the constants
// beta* < 0 < beta^* <= beta~* of RegimeConstants.
enum class Regime {
    kPut,          // y <= beta*
    kCoveredCall,  // beta* < y < beta^*
    kPlateau,      // beta^* < y < beta~*
    kCall,         // y >= beta~*
};

const char* regime_name(Regime r);

struct SmilePoint {
    double y = 0.0;  // renormalized log-strike, k = y T
    Regime regime = Regime::kPut;
    double big_l = 0.0;
    double sigma_inf = 0.0;
    int xi = 1;
    int eta = 1;
};

struct BsQuote {
    double maturity = 0.0;
    double log_strike = 0.0;
    double sigma = 0.0;
    double price = 0.0;
    bool is_call = true;
};

// Exponential decay rate of the relevant option-price quantity at
// renormalized strike y, together with the regime it was computed in.
// Requires r = 0. Throws PlateauRegimeError inside [beta^*, beta~*] and
// DegenerateYError within 1e-9 of x~*_i or a regime boundary.
std::pair<double, Regime> big_l(const ModelParams& params, double y);
std::pair<double, Regime> big_l(const ModelParams& params, const RegimeConstants& rc, double y);

// Limiting implied volatility sqrt(2) (xi sqrt(L+y) + eta sqrt(L)) with the
// regime sign table (-1,1) / (1,1) / (1,-1). Not defined on the plateau.
SmilePoint sigma_infinity(const ModelParams& params, double y);
SmilePoint sigma_infinity(const ModelParams& params, const RegimeConstants& rc, double y);

// Limit of the basket call price: sum_i omega_i 1{x~*_i > y}.
double c_infinity(const ModelParams& params, double y);
double c_infinity(const ModelParams& params, const RegimeConstants& rc, double y);

// Plateau smile with its maturity correction:
// sqrt(2 y) + N^{-1}(C_inf(y)) / sqrt(T). Requires beta^* < y < beta~* and
// C_inf strictly inside (0, 1).
double plateau_sigma(const ModelParams& params, double y, double maturity);

// Every regime, plateau included (where sigma_inf = sqrt(2 y) and L = 0).
SmilePoint smile_point(const ModelParams& params, const RegimeConstants& rc, double y);

// Black-Scholes on a unit forward: call = N(d1) - e^k N(d2) with
// d_{1,2} = (-k +- sigma^2 T / 2) / (sigma sqrt(T)); put by parity.
double bs_price(double maturity, double log_strike, double sigma, bool is_call);

// Inverse of bs_price in sigma on [1e-8, 10], bisection-safeguarded Newton.
// Throws OutOfBoundsError when the price sits outside the no-arbitrage range
// or beyond the sigma bracket.
double bs_implied_vol(double maturity, double log_strike, double price, bool is_call);

}  // namespace wishart

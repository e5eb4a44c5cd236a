#include "wishart/smile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wishart/normal.hpp"
#include "wishart/optim.hpp"

namespace wishart {

namespace {

constexpr double kBoundaryTol = 1e-9;

void reject_degenerate(const RegimeConstants& rc, double y) {
    for (double xt : rc.x_tilde_star) {
        if (std::abs(y - xt) <= kBoundaryTol) {
            throw DegenerateYError("y coincides with a slope constant x~*_i");
        }
    }
    if (std::abs(y - rc.beta_star) <= kBoundaryTol) {
        throw DegenerateYError("y sits on the regime boundary beta*");
    }
}

Regime classify(const RegimeConstants& rc, double y) {
    if (y <= rc.beta_star) return Regime::kPut;
    if (y < rc.beta_hat_star) return Regime::kCoveredCall;
    if (y < rc.beta_tilde_star) return Regime::kPlateau;
    return Regime::kCall;
}

// inf over s of -s y + Lambda(base + s e_i), restricted to the segment of
// the domain along the ray.
double inner_inf(const ModelParams& params, double y, const Vec& base, int i) {
    const int n = params.n;
    Vec dir(n, 0.0);
    dir[i] = 1.0;
    const auto [lo, hi] = domain_interval(params, base, dir);
    auto g = [&](double s) {
        return -s * y + lambda_line(params, base, dir, s).value_or_inf();
    };
    return golden_min(g, lo, hi).second;
}

}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::kPut: return "put";
        case Regime::kCoveredCall: return "covered_call";
        case Regime::kPlateau: return "plateau";
        case Regime::kCall: return "call";
    }
    return "?";
}

std::pair<double, Regime> big_l(const ModelParams& params, double y) {
    return big_l(params, regime_constants(params), y);
}

std::pair<double, Regime> big_l(const ModelParams& params, const RegimeConstants& rc, double y) {
    reject_degenerate(rc, y);
    const Regime regime = classify(rc, y);
    const int n = params.n;

    switch (regime) {
        case Regime::kPut: {
            // L = -y - inf_{lambda <= 0} { Lambda(lambda) - y <lambda, 1> }
            Box box = Box::unbounded(n);
            box.upper.assign(n, 0.0);
            const RateEval rate = rate_function(params, Vec(n, y), box);
            if (!rate.converged) throw NotConvergedError("put-regime infimum did not converge");
            return {-y + rate.value, regime};
        }
        case Regime::kCoveredCall: {
            // L = -y - max_i inf_s { -s y + Lambda(s e_i) }
            double best = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < n; ++i) best = std::max(best, inner_inf(params, y, Vec(n, 0.0), i));
            return {-y - best, regime};
        }
        case Regime::kCall: {
            // L = -max_{i,j} inf_s { -s y + Lambda(s e_i + e_j) }
            double best = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                Vec base(n, 0.0);
                base[j] = 1.0;
                for (int i = 0; i < n; ++i) best = std::max(best, inner_inf(params, y, base, i));
            }
            return {-best, regime};
        }
        case Regime::kPlateau:
            throw PlateauRegimeError("y lies in the plateau regime");
    }
    throw Error("unreachable");
}

SmilePoint sigma_infinity(const ModelParams& params, double y) {
    return sigma_infinity(params, regime_constants(params), y);
}

SmilePoint sigma_infinity(const ModelParams& params, const RegimeConstants& rc, double y) {
    const auto [l_value, regime] = big_l(params, rc, y);

    SmilePoint pt;
    pt.y = y;
    pt.regime = regime;
    pt.big_l = l_value;
    switch (regime) {
        case Regime::kPut:
            pt.xi = -1;
            pt.eta = 1;
            break;
        case Regime::kCoveredCall:
            pt.xi = 1;
            pt.eta = 1;
            break;
        case Regime::kCall:
            pt.xi = 1;
            pt.eta = -1;
            break;
        case Regime::kPlateau:
            throw PlateauRegimeError("y lies in the plateau regime");
    }

    double rad_l = l_value;
    double rad_ly = l_value + y;
    if (rad_l < -1e-10 || rad_ly < -1e-10) {
        throw NegativeRadicandError("negative radicand in the limiting smile");
    }
    rad_l = std::max(rad_l, 0.0);
    rad_ly = std::max(rad_ly, 0.0);

    pt.sigma_inf = std::sqrt(2.0) * (pt.xi * std::sqrt(rad_ly) + pt.eta * std::sqrt(rad_l));
    if (!(pt.sigma_inf > 0.0)) throw NumericalError("limiting volatility is not positive");

    const double half = pt.sigma_inf / 2.0 - y / pt.sigma_inf;
    if (std::abs(0.5 * half * half - l_value) > 1e-8) {
        throw NumericalError("limiting volatility violates the rate identity");
    }
    return pt;
}

double c_infinity(const ModelParams& params, double y) {
    return c_infinity(params, regime_constants(params), y);
}

double c_infinity(const ModelParams& params, const RegimeConstants& rc, double y) {
    for (double xt : rc.x_tilde_star) {
        if (std::abs(y - xt) <= kBoundaryTol) {
            throw DegenerateYError("y coincides with a slope constant x~*_i");
        }
    }
    double c = 0.0;
    for (int i = 0; i < params.n; ++i) {
        if (rc.x_tilde_star[i] > y) c += params.omega[i];
    }
    return c;
}

double plateau_sigma(const ModelParams& params, double y, double maturity) {
    if (!(maturity > 0.0)) throw Error("plateau_sigma requires a positive maturity");
    const RegimeConstants rc = regime_constants(params);
    if (!(y > rc.beta_hat_star + kBoundaryTol && y < rc.beta_tilde_star - kBoundaryTol)) {
        throw OutOfPlateauError("y is not strictly inside the plateau");
    }
    const double c = c_infinity(params, rc, y);
    if (!(c > 0.0 && c < 1.0)) {
        throw DegenerateCError("plateau correction needs C_inf strictly inside (0, 1)");
    }
    return std::sqrt(2.0 * y) + normal_quantile(c) / std::sqrt(maturity);
}

SmilePoint smile_point(const ModelParams& params, const RegimeConstants& rc, double y) {
    reject_degenerate(rc, y);
    if (classify(rc, y) == Regime::kPlateau) {
        SmilePoint pt;
        pt.y = y;
        pt.regime = Regime::kPlateau;
        pt.big_l = 0.0;  // prices converge to a constant in (0,1): no decay
        pt.sigma_inf = std::sqrt(2.0 * y);
        pt.xi = 1;
        pt.eta = 1;
        return pt;
    }
    return sigma_infinity(params, rc, y);
}

double bs_price(double maturity, double log_strike, double sigma, bool is_call) {
    if (!(maturity > 0.0)) throw Error("bs_price requires maturity > 0");
    if (!(sigma > 0.0)) throw Error("bs_price requires sigma > 0");
    const double vol = sigma * std::sqrt(maturity);
    const double d1 = (-log_strike + 0.5 * vol * vol) / vol;
    const double d2 = d1 - vol;
    const double ek = std::exp(log_strike);
    if (is_call) {
        const double call = normal_cdf(d1) - ek * normal_cdf(d2);
        return std::max(call, std::max(1.0 - ek, 0.0));
    }
    // Direct tail form; the parity route cancels catastrophically far out of
    // the money.
    const double put = ek * normal_cdf(-d2) - normal_cdf(-d1);
    return std::max(put, std::max(ek - 1.0, 0.0));
}

double bs_implied_vol(double maturity, double log_strike, double price, bool is_call) {
    if (!(maturity > 0.0)) throw Error("bs_implied_vol requires maturity > 0");
    const double ek = std::exp(log_strike);
    const double lower = is_call ? std::max(1.0 - ek, 0.0) : std::max(ek - 1.0, 0.0);
    const double upper = is_call ? 1.0 : ek;
    if (!(price > lower && price < upper)) {
        throw OutOfBoundsError("price is outside the no-arbitrage bounds");
    }

    double lo = 1e-8, hi = 10.0;
    auto f = [&](double sigma) { return bs_price(maturity, log_strike, sigma, is_call) - price; };
    if (f(lo) > 0.0 || f(hi) < 0.0) {
        throw OutOfBoundsError("no implied volatility in [1e-8, 10] matches the price");
    }

    // Bisection-safeguarded Newton, run to bracket collapse: price-space
    // tolerances alone leave sigma loose where the vega is tiny.
    double sigma = 0.25;
    for (int iter = 0; iter < 200; ++iter) {
        const double fv = f(sigma);
        if (fv == 0.0) break;
        if (fv > 0.0) {
            hi = sigma;
        } else {
            lo = sigma;
        }
        if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
        const double vol = sigma * std::sqrt(maturity);
        const double d1 = (-log_strike + 0.5 * vol * vol) / vol;
        const double vega = normal_pdf(d1) * std::sqrt(maturity);
        double next = (vega > 1e-300) ? sigma - fv / vega : sigma;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        sigma = next;
    }
    return sigma;
}

}  // namespace wishart

#include "wishart/impsamp.hpp"

#include <chrono>
#include <cmath>

#include "wishart/laplace.hpp"
#include "wishart/ldp.hpp"
#include "wishart/optim.hpp"
#include "wishart/parallel.hpp"
#include "wishart/rng.hpp"

namespace wishart {

PayoffSpec PayoffSpec::basket_put(double strike, Vec omega) {
    if (!(strike > 0.0)) throw Error("basket put requires a positive strike");
    PayoffSpec p;
    p.kind = PayoffKind::kBasketPut;
    p.strike = strike;
    p.omega = std::move(omega);
    return p;
}

PayoffSpec PayoffSpec::basket_call(double strike, Vec omega) {
    PayoffSpec p = basket_put(strike, std::move(omega));
    p.kind = PayoffKind::kBasketCall;
    return p;
}

double PayoffSpec::operator()(const Vec& y_terminal) const {
    double basket = 0.0;
    for (size_t i = 0; i < omega.size(); ++i) basket += omega[i] * std::exp(y_terminal[i]);
    const double intrinsic = (kind == PayoffKind::kBasketPut) ? strike - basket : basket - strike;
    return intrinsic > 0.0 ? intrinsic : 0.0;
}

ExtReal h_hat_basket_put(const Vec& theta, double strike, const Vec& omega) {
    if (!(strike > 0.0)) throw Error("h_hat_basket_put requires a positive strike");
    double sum = 0.0;
    for (double t : theta) {
        if (t >= 0.0) return ExtReal::infinity();
        sum += t;
    }
    const double one_minus = 1.0 - sum;
    double v = -one_minus * std::log(one_minus / strike);
    for (size_t k = 0; k < theta.size(); ++k) v -= theta[k] * std::log(-theta[k] / omega[k]);
    return ExtReal::finite(v);
}

Vec h_hat_basket_put_gradient(const Vec& theta, double strike, const Vec& omega) {
    double sum = 0.0;
    for (double t : theta) {
        if (t >= 0.0) throw Error("h_hat gradient needs theta in the negative orthant");
        sum += t;
    }
    const double head = std::log((1.0 - sum) / strike);
    Vec g(theta.size());
    for (size_t k = 0; k < theta.size(); ++k) g[k] = head - std::log(-theta[k] / omega[k]);
    return g;
}

ThetaStar theta_star(const ModelParams& params, double horizon, const PayoffSpec& payoff) {
    require_valid(params);
    if (payoff.kind != PayoffKind::kBasketPut) {
        throw Error("theta_star covers basket puts only");
    }
    const int n = params.n;

    ConcaveObjective obj;
    obj.value = [&](const Vec& th) {
        const double h = h_hat_basket_put(th, payoff.strike, payoff.omega).value_or_inf();
        return -(h + lambda(params, horizon, th).value.value_or_inf());
    };
    obj.gradient = [&](const Vec& th) {
        Vec g = h_hat_basket_put_gradient(th, payoff.strike, payoff.omega);
        const Vec gl = grad_lambda(params, horizon, th);
        for (int i = 0; i < n; ++i) g[i] = -(g[i] + gl[i]);
        return g;
    };

    Box box = Box::unbounded(n);
    box.upper.assign(n, -1e-10);

    // Feasible start -0.25 * 1, halved into U when needed.
    Vec anchor(n, -0.25);
    for (int k = 0; k < 60 && min_eigenvalue(phi(params, anchor)) <= 1e-9; ++k) {
        for (double& v : anchor) v *= 0.5;
    }
    std::vector<Vec> starts;
    starts.push_back(anchor);
    Vec half = anchor, stretch = anchor;
    for (double& v : half) v *= 0.5;
    for (double& v : stretch) v *= 2.0;
    starts.push_back(std::move(half));
    starts.push_back(std::move(stretch));

    const IpResult res = maximize_interior(params, obj, box, starts, anchor);

    ThetaStar out;
    out.theta = res.x;
    out.objective = -res.value;
    out.converged = res.converged;
    return out;
}

double is_weight(const ModelParams& params, const Vec& theta, double horizon,
                 const Vec& y_terminal) {
    const LaplaceEval ev = log_laplace_y(params, theta, horizon);
    if (!ev.finite) throw OutOfDomainError("tilt theta has no finite Laplace transform");
    return std::exp(ev.log_value - dot(theta, y_terminal));
}

namespace {

// Discounted per-path estimator values (weighted payoffs under a tilt).
std::vector<double> mc_values(const ModelParams& params, const PayoffSpec& payoff,
                              const PathConfig& cfg, const std::optional<Vec>& tilt,
                              MeasureSpec& measure_out) {
    measure_out = tilt ? MeasureSpec::tilted(*tilt) : MeasureSpec::physical();
    const TerminalBatch batch = simulate(params, cfg, measure_out);
    const double discount = std::exp(-params.r * cfg.horizon);

    double log_laplace = 0.0;
    if (tilt) {
        const LaplaceEval ev = log_laplace_y(params, *tilt, cfg.horizon);
        if (!ev.finite) throw OutOfDomainError("tilt theta has no finite Laplace transform");
        log_laplace = ev.log_value;
    }

    std::vector<double> values(cfg.n_paths);
    parallel_for(static_cast<size_t>(cfg.n_paths), [&](size_t begin, size_t end) {
        for (size_t p = begin; p < end; ++p) {
            const Vec y = batch.y_row(static_cast<int>(p));
            double v = payoff(y);
            if (tilt && v != 0.0) v *= std::exp(log_laplace - dot(*tilt, y));
            values[p] = discount * v;
        }
    });
    return values;
}

McResult summarize(std::vector<double> values, MeasureSpec measure, double seconds) {
    McResult out;
    const MeanVar mv = mean_variance(values);
    out.estimate = mv.mean;
    out.variance = mv.variance;
    out.n_paths = static_cast<int>(values.size());
    out.stderr_ = std::sqrt(mv.variance / static_cast<double>(values.size()));
    out.measure = std::move(measure);
    out.wall_time = seconds;
    return out;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

McResult price(const ModelParams& params, const PayoffSpec& payoff, const PathConfig& cfg,
               const std::optional<Vec>& tilt) {
    const auto start = std::chrono::steady_clock::now();
    MeasureSpec measure;
    std::vector<double> values = mc_values(params, payoff, cfg, tilt, measure);
    return summarize(std::move(values), std::move(measure), elapsed_seconds(start));
}

VarianceRatioResult variance_ratio(const ModelParams& params, const PayoffSpec& payoff,
                                   const PathConfig& cfg, const Vec& theta) {
    const auto start = std::chrono::steady_clock::now();

    PathConfig plain_cfg = cfg;
    plain_cfg.seed = derive_seed(cfg.seed, 0);
    PathConfig tilted_cfg = cfg;
    tilted_cfg.seed = derive_seed(cfg.seed, 1);

    MeasureSpec plain_measure, tilted_measure;
    std::vector<double> plain_vals = mc_values(params, payoff, plain_cfg, std::nullopt,
                                               plain_measure);
    std::vector<double> tilted_vals = mc_values(params, payoff, tilted_cfg, theta,
                                                tilted_measure);

    VarianceRatioResult out;
    out.plain = summarize(plain_vals, plain_measure, 0.0);
    out.tilted = summarize(tilted_vals, tilted_measure, 0.0);
    out.ratio = out.plain.variance / out.tilted.variance;

    // Batch-means spread of the ratio.
    constexpr int kBatches = 10;
    const size_t per = plain_vals.size() / kBatches;
    if (per >= 2) {
        std::vector<double> ratios;
        ratios.reserve(kBatches);
        for (int b = 0; b < kBatches; ++b) {
            const auto lo = static_cast<std::ptrdiff_t>(per * b);
            const auto hi = static_cast<std::ptrdiff_t>(b + 1 == kBatches ? plain_vals.size()
                                                                          : per * (b + 1));
            const std::vector<double> pv(plain_vals.begin() + lo, plain_vals.begin() + hi);
            const std::vector<double> tv(tilted_vals.begin() + lo, tilted_vals.begin() + hi);
            const double tvar = mean_variance(tv).variance;
            if (tvar > 0.0) ratios.push_back(mean_variance(pv).variance / tvar);
        }
        if (ratios.size() >= 2) {
            const MeanVar mv = mean_variance(ratios);
            out.ratio_stderr = std::sqrt(mv.variance / static_cast<double>(ratios.size()));
        }
    }

    const double total = elapsed_seconds(start);
    out.plain.wall_time = total * 0.5;
    out.tilted.wall_time = total * 0.5;
    return out;
}

}  // namespace wishart

#include "wishart/ldp.hpp"

#include <algorithm>
#include <cmath>

namespace wishart {

namespace {

double trace(const Matrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim(); ++i) s += m(i, i);
    return s;
}

}  // namespace

LambdaEval lambda(const ModelParams& params, double horizon, const Vec& theta) {
    require_valid(params);
    if (!(horizon > 0.0)) throw Error("lambda requires a positive horizon");

    LambdaEval ev;
    ev.theta = theta;
    ev.horizon = horizon;

    const SpectralDecomp es = sym_eigen(phi(params, theta));
    if (es.eigenvalues.front() < -tol::kDomain) {
        ev.value = ExtReal::infinity();
        return ev;
    }
    double tr_sqrt = 0.0;
    for (double lam : es.eigenvalues) tr_sqrt += std::sqrt(std::max(lam, 0.0));
    double theta_sum = 0.0;
    for (double v : theta) theta_sum += v;
    ev.value = ExtReal::finite(
        horizon * (params.r * theta_sum - 0.5 * params.alpha * (trace(params.b.mat()) + tr_sqrt)));
    return ev;
}

Vec grad_lambda(const ModelParams& params, double horizon, const Vec& theta) {
    require_valid(params);
    if (!(horizon > 0.0)) throw Error("grad_lambda requires a positive horizon");

    const SpectralDecomp es = sym_eigen(phi(params, theta));
    if (es.eigenvalues.front() <= tol::kDomain) {
        throw OnBoundaryError("gradient requested at the boundary of the Laplace domain");
    }

    const int n = params.n;
    // Columns w_i = a^T p_i; tr(phi^{-1/2} d_j phi) = sum_i w_i[j] (w_i[j] -
    // 2 theta^T w_i) / sqrt(lambda_i).
    const Matrix w = params.a.transpose() * es.eigenvectors;
    Vec proj(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += theta[k] * w(k, i);
        proj[i] = s;
    }
    Vec g(n);
    for (int j = 0; j < n; ++j) {
        double tr_term = 0.0;
        for (int i = 0; i < n; ++i) {
            tr_term += w(j, i) * (w(j, i) - 2.0 * proj[i]) / std::sqrt(es.eigenvalues[i]);
        }
        g[j] = horizon * (params.r - 0.25 * params.alpha * tr_term);
    }
    return g;
}

RateEval rate_function(const ModelParams& params, const Vec& y,
                       const std::optional<Box>& constraint_box) {
    require_valid(params);
    const int n = params.n;
    const Box box = constraint_box.value_or(Box::unbounded(n));

    ConcaveObjective obj;
    obj.value = [&params, &y](const Vec& lam) {
        return dot(lam, y) - lambda(params, 1.0, lam).value.value_or_inf();
    };
    obj.gradient = [&params, &y](const Vec& lam) {
        Vec g = grad_lambda(params, 1.0, lam);
        for (size_t i = 0; i < g.size(); ++i) g[i] = y[i] - g[i];
        return g;
    };

    // Anchor: the origin nudged strictly inside the box, shrunk until it is
    // also interior to U.
    Vec anchor(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double lo = box.lower[i];
        const double hi = box.upper[i];
        const double margin = 1e-3;
        anchor[i] = std::min(hi - margin, std::max(lo + margin, 0.0));
    }
    for (int k = 0; k < 60 && min_eigenvalue(phi(params, anchor)) <= 1e-9; ++k) {
        for (double& v : anchor) v *= 0.5;
    }

    const double radius = domain_bounding_radius(params);
    std::vector<Vec> starts;
    starts.push_back(anchor);
    for (int i = 0; i < n; ++i) {
        for (double sign : {1.0, -1.0}) {
            Vec s(n, 0.0);
            s[i] = sign * 0.5 * radius;
            starts.push_back(std::move(s));
        }
    }

    const IpResult res = maximize_interior(params, obj, box, starts, anchor);

    RateEval out;
    out.y = y;
    out.argmax_lambda = res.x;
    out.value = (res.value > -1e-9 && res.value < 0.0) ? 0.0 : res.value;
    out.converged = res.converged;
    return out;
}

RegimeConstants regime_constants(const ModelParams& params) {
    require_valid(params);
    if (params.r != 0.0) throw Error("regime_constants requires r = 0");

    const int n = params.n;
    RegimeConstants rc;
    rc.x_star = grad_lambda(params, 1.0, Vec(n, 0.0));
    rc.x_tilde_star.resize(n);
    for (int j = 0; j < n; ++j) {
        Vec ej(n, 0.0);
        ej[j] = 1.0;
        rc.x_tilde_star[j] = grad_lambda(params, 1.0, ej)[j];
    }
    rc.beta_star = *std::max_element(rc.x_star.begin(), rc.x_star.end());
    rc.beta_hat_star = *std::min_element(rc.x_tilde_star.begin(), rc.x_tilde_star.end());
    rc.beta_tilde_star = *std::max_element(rc.x_tilde_star.begin(), rc.x_tilde_star.end());

    for (int j = 0; j < n; ++j) {
        if (std::abs(rc.x_star[j] + rc.x_tilde_star[j]) > 1e-8 || !(rc.x_star[j] < 0.0)) {
            throw NumericalError("regime constants violate x*_j = -x~*_j < 0");
        }
    }
    return rc;
}

ExtReal lambda_line(const ModelParams& params, const Vec& base, const Vec& dir, double s) {
    Vec x(base.size());
    for (size_t i = 0; i < x.size(); ++i) x[i] = base[i] + s * dir[i];
    return lambda(params, 1.0, x).value;
}

}  // namespace wishart

#include "wishart/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wishart {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Strict-feasibility margin maintained by the line search.
constexpr double kFeasMargin = 1e-12;

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

struct Feasibility {
    bool ok = false;
    double min_eig = 0.0;
};

Feasibility check_feasible(const ModelParams& params, const Box& box, const Vec& x) {
    Feasibility f;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= box.lower[i] + kFeasMargin || x[i] >= box.upper[i] - kFeasMargin) return f;
    }
    f.min_eig = min_eigenvalue(phi(params, x));
    f.ok = f.min_eig > kFeasMargin;
    return f;
}

// Gradient of the smallest eigenvalue of phi at x through its unit
// eigenvector u: with w = a^T u, the j-th component is w_j (w_j - 2 theta^T w).
Vec min_eig_gradient(const ModelParams& params, const Vec& x) {
    const SpectralDecomp es = sym_eigen(phi(params, x));
    const int n = params.n;
    Vec u(n);
    for (int i = 0; i < n; ++i) u[i] = es.eigenvectors(i, 0);
    const Vec w = params.a.transpose() * u;
    const double tw = dot(x, w);
    Vec g(n);
    for (int j = 0; j < n; ++j) g[j] = w[j] * (w[j] - 2.0 * tw);
    return g;
}

struct BarrierProblem {
    const ModelParams& params;
    const ConcaveObjective& objective;
    const Box& box;
    double mu;

    double value(const Vec& x) const {
        const Feasibility f = check_feasible(params, box, x);
        if (!f.ok) return -kInf;
        double v = objective.value(x) + mu * std::log(f.min_eig);
        for (size_t i = 0; i < x.size(); ++i) {
            if (box.upper[i] < kInf) v += mu * std::log(box.upper[i] - x[i]);
            if (box.lower[i] > -kInf) v += mu * std::log(x[i] - box.lower[i]);
        }
        return v;
    }

    Vec gradient(const Vec& x) const {
        Vec g = smooth_gradient(x);
        for (size_t i = 0; i < x.size(); ++i) {
            if (box.upper[i] < kInf) g[i] -= mu / (box.upper[i] - x[i]);
            if (box.lower[i] > -kInf) g[i] += mu / (x[i] - box.lower[i]);
        }
        return g;
    }

    // Objective plus domain barrier, without the box terms; those carry the
    // singular curvature and get exact Hessian entries instead of finite
    // differences.
    Vec smooth_gradient(const Vec& x) const {
        Vec g = objective.gradient(x);
        const double me = min_eigenvalue(phi(params, x));
        const Vec dg = min_eig_gradient(params, x);
        for (size_t i = 0; i < g.size(); ++i) g[i] += mu * dg[i] / me;
        return g;
    }

    Vec box_hessian_diag(const Vec& x) const {
        Vec h(x.size(), 0.0);
        for (size_t i = 0; i < x.size(); ++i) {
            if (box.upper[i] < kInf) {
                const double s = box.upper[i] - x[i];
                h[i] -= mu / (s * s);
            }
            if (box.lower[i] > -kInf) {
                const double s = x[i] - box.lower[i];
                h[i] -= mu / (s * s);
            }
        }
        return h;
    }
};

// Solves H d = g for small n by Gaussian elimination; returns false when the
// pivot degenerates.
bool solve_linear(Matrix h, Vec g, Vec& d) {
    const int n = h.dim();
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int i = c + 1; i < n; ++i)
            if (std::abs(h(i, c)) > std::abs(h(p, c))) p = i;
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(h(c, j), h(p, j));
            std::swap(g[c], g[p]);
        }
        if (std::abs(h(c, c)) < 1e-300) return false;
        for (int i = c + 1; i < n; ++i) {
            const double f = h(i, c) / h(c, c);
            for (int j = c; j < n; ++j) h(i, j) -= f * h(c, j);
            g[i] -= f * g[c];
        }
    }
    d.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = g[i];
        for (int j = i + 1; j < n; ++j) s -= h(i, j) * d[j];
        d[i] = s / h(i, i);
    }
    return true;
}

// One barrier stage: damped Newton on the barrier objective until its
// gradient shrinks below tol or the iteration budget runs out.
void newton_stage(const BarrierProblem& prob, Vec& x, double tol, int max_iter) {
    const int n = static_cast<int>(x.size());
    for (int iter = 0; iter < max_iter; ++iter) {
        const Vec g = prob.gradient(x);
        if (norm2(g) <= tol) return;

        // Hessian: finite differences of the smooth gradient plus the exact
        // diagonal of the box-barrier curvature.
        Matrix h(n);
        bool fd_ok = true;
        for (int j = 0; j < n && fd_ok; ++j) {
            double step = 1e-6 * std::max(1.0, std::abs(x[j]));
            if (prob.box.upper[j] < kInf) step = std::min(step, 0.45 * (prob.box.upper[j] - x[j]));
            if (prob.box.lower[j] > -kInf) step = std::min(step, 0.45 * (x[j] - prob.box.lower[j]));
            Vec xp = x, xm = x;
            xp[j] += step;
            xm[j] -= step;
            if (!check_feasible(prob.params, prob.box, xp).ok ||
                !check_feasible(prob.params, prob.box, xm).ok) {
                step *= 1e-3;
                xp[j] = x[j] + step;
                xm[j] = x[j] - step;
                if (!check_feasible(prob.params, prob.box, xp).ok ||
                    !check_feasible(prob.params, prob.box, xm).ok) {
                    fd_ok = false;
                    break;
                }
            }
            const Vec gp = prob.smooth_gradient(xp);
            const Vec gm = prob.smooth_gradient(xm);
            for (int i = 0; i < n; ++i) h(i, j) = (gp[i] - gm[i]) / (2.0 * step);
        }
        if (fd_ok) {
            const Vec hb = prob.box_hessian_diag(x);
            for (int i = 0; i < n; ++i) h(i, i) += hb[i];
        }

        Vec d;
        bool have_newton = false;
        if (fd_ok) {
            // Symmetrize and solve (-H) d = g; the direction is only kept
            // when it ascends.
            Matrix hneg(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) hneg(i, j) = -0.5 * (h(i, j) + h(j, i));
            have_newton = solve_linear(hneg, g, d) && dot(d, g) > 0.0;
        }
        if (!have_newton) {
            d = g;
            const double gn = norm2(g);
            if (gn > 0.0) {
                for (double& v : d) v /= gn;
            }
        }

        const double f0 = prob.value(x);
        const double slope = dot(g, d);
        double step = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            Vec cand(n);
            for (int i = 0; i < n; ++i) cand[i] = x[i] + step * d[i];
            const double fc = prob.value(cand);
            if (std::isfinite(fc) && fc >= f0 + 1e-4 * step * slope) {
                x = std::move(cand);
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) return;
    }
}

}  // namespace

Box Box::unbounded(int n) {
    Box b;
    b.lower.assign(n, -kInf);
    b.upper.assign(n, kInf);
    return b;
}

IpResult maximize_interior(const ModelParams& params, const ConcaveObjective& objective,
                           const Box& box, const std::vector<Vec>& starts, const Vec& anchor,
                           const IpOptions& options) {
    if (!check_feasible(params, box, anchor).ok) {
        throw Error("interior-point anchor is not strictly feasible");
    }

    std::vector<IpResult> finals;
    for (const Vec& start : starts) {
        Vec x = start;
        // Pull toward the anchor until strictly feasible.
        for (int k = 0; k < 80 && !check_feasible(params, box, x).ok; ++k) {
            for (size_t i = 0; i < x.size(); ++i) x[i] = anchor[i] + 0.5 * (x[i] - anchor[i]);
        }
        if (!check_feasible(params, box, x).ok) x = anchor;

        for (double mu = options.mu0; mu >= options.mu_final * 0.999; mu *= 0.1) {
            BarrierProblem prob{params, objective, box, mu};
            const double stage_tol = std::max(options.grad_tol, 0.1 * mu);
            newton_stage(prob, x, stage_tol, options.max_newton);
        }

        IpResult r;
        r.x = x;
        r.value = objective.value(x);
        Vec g = objective.gradient(x);
        r.grad_norm = norm2(g);

        // KKT test. Nearly-active box constraints absorb their gradient
        // component as a multiplier; what remains must vanish and the
        // complementarity gap must stay below the duality-gap proxy bound.
        double gap = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            const double near = 1e-4 * (1.0 + std::abs(x[i]));
            if (box.upper[i] < kInf && box.upper[i] - x[i] <= near && g[i] > 0.0) {
                gap += g[i] * (box.upper[i] - x[i]);
                g[i] = 0.0;
            }
            if (box.lower[i] > -kInf && x[i] - box.lower[i] <= near && g[i] < 0.0) {
                gap -= g[i] * (x[i] - box.lower[i]);
                g[i] = 0.0;
            }
        }
        const double me = min_eigenvalue(phi(params, x));
        if (me <= 1e-4) {
            const Vec dg = min_eig_gradient(params, x);
            const double nu = dot(g, dg) / std::max(dot(dg, dg), 1e-300);
            if (nu < 0.0) {  // pushing against the PSD boundary
                for (size_t i = 0; i < g.size(); ++i) g[i] -= nu * dg[i];
                gap += -nu * me;
            }
        }
        r.converged = r.grad_norm <= options.grad_tol ||
                      (norm2(g) <= 1e-6 && gap <= 1e-7);
        finals.push_back(std::move(r));
    }

    IpResult best = finals.front();
    for (const auto& r : finals) {
        if (r.value > best.value) best = r;
    }
    double spread = 0.0;
    for (const auto& r : finals) {
        if (r.converged) spread = std::max(spread, best.value - r.value);
    }
    if (spread > options.agree_tol) best.converged = false;
    return best;
}

std::pair<double, double> domain_interval(const ModelParams& params, const Vec& base,
                                          const Vec& dir) {
    const double dir_norm = norm2(dir);
    if (dir_norm == 0.0) throw Error("domain_interval requires a nonzero direction");
    auto inside = [&](double s) {
        Vec x(base.size());
        for (size_t i = 0; i < x.size(); ++i) x[i] = base[i] + s * dir[i];
        return min_eigenvalue(phi(params, x)) >= -tol::kDomain;
    };
    if (!inside(0.0)) throw OutOfDomainError("domain_interval base is outside the domain");

    const double reach = (domain_bounding_radius(params) + norm2(base)) / dir_norm + 1.0;
    auto boundary = [&](double sign) {
        double lo = 0.0, hi = sign;
        while (std::abs(hi) < reach && inside(hi)) {
            lo = hi;
            hi *= 2.0;
        }
        if (inside(hi)) return hi;  // capped by the bounding radius
        while (std::abs(hi - lo) > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            (inside(mid) ? lo : hi) = mid;
        }
        return lo;
    };
    return {boundary(-1.0), boundary(1.0)};
}

std::pair<double, double> golden_min(const std::function<double(double)>& f, double lo,
                                     double hi) {
    static const double phi_ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi_ratio * (b - a);
    double x2 = a + phi_ratio * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-10) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi_ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi_ratio * (b - a);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

}  // namespace wishart

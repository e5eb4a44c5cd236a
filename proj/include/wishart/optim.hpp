#pragma once

#include <functional>
#include <utility>

#include "wishart/model.hpp"

namespace wishart {

// Smooth concave objective with analytic gradient, defined on the strict
// interior of U (and of the box below).
struct ConcaveObjective {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
};

// Per-coordinate bounds; +-infinity entries disable a side.
struct Box {
    Vec lower;
    Vec upper;
    static Box unbounded(int n);
};

struct IpOptions {
    double mu0 = 1e-2;
    double mu_final = 1e-8;
    double grad_tol = 1e-8;
    // Multi-start agreement bound for a concave objective; disagreement past
    // it marks the result unconverged.
    double agree_tol = 1e-7;
    int max_newton = 60;
};

struct IpResult {
    Vec x;
    double value = 0.0;
    double grad_norm = 0.0;
    bool converged = false;
};

// Maximizes the objective over U intersected with the box by a log-barrier
// interior method: barriers on the smallest eigenvalue of phi and on the box
// slacks, mu decreasing geometrically from mu0 to mu_final, damped Newton
// with finite-difference Hessians inside each stage. All starts are pulled
// toward `anchor` (a strictly feasible point) until strictly feasible.
IpResult maximize_interior(const ModelParams& params, const ConcaveObjective& objective,
                           const Box& box, const std::vector<Vec>& starts, const Vec& anchor,
                           const IpOptions& options = {});

// Largest closed interval [lo, hi] containing 0 such that base + s * dir
// stays inside U, located by outward doubling and bisection to width 1e-12.
// base itself must lie in U.
std::pair<double, double> domain_interval(const ModelParams& params, const Vec& base,
                                          const Vec& dir);

// Golden-section minimum of a convex function on [lo, hi] to x-tolerance
// 1e-10; returns (argmin, min value).
std::pair<double, double> golden_min(const std::function<double(double)>& f, double lo, double hi);

}  // namespace wishart

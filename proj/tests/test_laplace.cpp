#include <doctest.h>

#include <cmath>
#include <random>

#include "wishart/laplace.hpp"
#include "test_util.hpp"

using namespace wishart;
using namespace wishart::testing;

namespace {

ModelParams drifted_params() {
    ModelParams p = smile_params();
    p.r = 0.03;
    p.y0 = {0.2, -0.1};
    return p;
}

Matrix expm_scaled(const SymMatrix& m, double scale) {
    return apply_spectral_fn(m, [scale](double x) { return std::exp(scale * x); }).mat();
}

double trace_product(const Matrix& l, const Matrix& r) {
    double s = 0.0;
    for (int i = 0; i < l.dim(); ++i)
        for (int k = 0; k < l.dim(); ++k) s += l(i, k) * r(k, i);
    return s;
}

}  // namespace

TEST_CASE("v_pair at t = 0") {
    const ModelParams p = smile_params();
    const VPair v = v_pair(p, {0.3, 0.3}, 0.0);
    CHECK(max_abs_diff(v.v, Matrix::identity(2)) < 1e-12);
    CHECK(max_abs_diff(v.v_prime, p.b.mat() * -1.0) < 1e-12);
    CHECK(v.det_v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("v_pair collapses to a matrix exponential at theta in {0, e_j}") {
    const ModelParams p = smile_params();
    for (const Vec theta : {Vec{0.0, 0.0}, Vec{1.0, 0.0}, Vec{0.0, 1.0}}) {
        for (double t : {0.25, 1.0, 3.0}) {
            const VPair v = v_pair(p, theta, t);
            const Matrix ref = expm_scaled(p.b, -t);
            CHECK(max_abs_diff(v.v, ref) <= 1e-8);
        }
    }
}

TEST_CASE("v_pair rejects theta outside the domain") {
    CHECK_THROWS_AS(v_pair(smile_params(), {50.0, 50.0}, 1.0), OutOfDomainError);
}

TEST_CASE("log_laplace_y normalization and martingale identities") {
    const ModelParams p = drifted_params();
    for (double t : {0.1, 1.0, 10.0, 100.0}) {
        const LaplaceEval at0 = log_laplace_y(p, {0.0, 0.0}, t);
        REQUIRE(at0.finite);
        CHECK(std::abs(at0.log_value) <= 1e-9);

        for (int j = 0; j < 2; ++j) {
            Vec ej(2, 0.0);
            ej[j] = 1.0;
            const LaplaceEval ev = log_laplace_y(p, ej, t);
            REQUIRE(ev.finite);
            CHECK(std::abs(ev.log_value - (p.y0[j] + p.r * t)) <= 1e-9);
        }
    }
}

TEST_CASE("log_laplace_y at t = 0 reduces to theta . y0") {
    const ModelParams p = drifted_params();
    const Vec theta = {0.3, -0.2};
    const LaplaceEval ev = log_laplace_y(p, theta, 0.0);
    REQUIRE(ev.finite);
    CHECK(ev.log_value == doctest::Approx(dot(theta, p.y0)).epsilon(1e-14));
}

TEST_CASE("log_laplace_y is infinite outside the domain") {
    const LaplaceEval ev = log_laplace_y(smile_params(), {100.0, 100.0}, 1.0);
    CHECK(!ev.finite);
}

TEST_CASE("log_laplace_y is convex along segments inside the domain") {
    const ModelParams p = smile_params();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    int tested = 0;
    while (tested < 50) {
        const Vec a = {u(rng), u(rng)};
        const Vec b = {u(rng), u(rng)};
        const Vec mid = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
        if (!in_domain(p, a).strict || !in_domain(p, b).strict) continue;
        const double t = 0.5 + (tested % 4);
        const LaplaceEval fa = log_laplace_y(p, a, t);
        const LaplaceEval fb = log_laplace_y(p, b, t);
        const LaplaceEval fm = log_laplace_y(p, mid, t);
        REQUIRE(fa.finite);
        REQUIRE(fb.finite);
        REQUIRE(fm.finite);
        CHECK(fm.log_value <= 0.5 * fa.log_value + 0.5 * fb.log_value + 1e-10);
        ++tested;
    }
}

TEST_CASE("joint laplace normalizes at v = w = 0") {
    for (const ModelParams& p : {smile_params(), varred_params()}) {
        const SymMatrix zero{Matrix(2)};
        for (double t : {0.1, 0.5, 2.0, 20.0}) {
            CHECK(std::abs(wishart_joint_laplace(p, zero, zero, t)) <= 1e-9);
        }
    }
}

TEST_CASE("joint laplace reproduces the log-price transform") {
    // With v = a (Diag(theta) - theta theta^T) a^T and w = 0 the two closed
    // forms describe the same expectation.
    const ModelParams p = smile_params();
    const SymMatrix zero{Matrix(2)};
    for (const Vec theta : {Vec{0.3, 0.3}, Vec{0.5, -0.2}, Vec{-0.2, -0.2}}) {
        const Matrix b2 = p.b.mat() * p.b.mat();
        const SymMatrix v = SymMatrix::symmetric_part(phi(p, theta).mat() - b2);
        for (double t : {0.25, 0.5, 1.0, 4.0}) {
            const double joint = wishart_joint_laplace(p, v, zero, t);
            const LaplaceEval full = log_laplace_y(p, theta, t);
            REQUIRE(full.finite);
            double theta_sum = 0.0;
            for (double c : theta) theta_sum += c;
            const double expected = full.log_value - dot(theta, p.y0) - p.r * theta_sum * t;
            CHECK(joint == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("joint laplace small-t limit is -tr(w x)/2") {
    const ModelParams p = smile_params();
    const SymMatrix w(Matrix(2, {0.8, 0.1, 0.1, 1.2}));
    const SymMatrix zero{Matrix(2)};
    const double val = wishart_joint_laplace(p, zero, w, 1e-8);
    const double expect = -0.5 * trace_product(w.mat(), p.x0.mat());
    CHECK(val == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("joint laplace rejects arguments violating the existence condition") {
    const ModelParams p = smile_params();
    const SymMatrix bad_v(Matrix::identity(2) * -10.0);
    const SymMatrix zero{Matrix(2)};
    CHECK_THROWS_AS(wishart_joint_laplace(p, bad_v, zero, 1.0), ConditionFailedError);
    const SymMatrix bad_w(Matrix::identity(2) * -10.0);
    CHECK_THROWS_AS(wishart_joint_laplace(p, zero, bad_w, 1.0), ConditionFailedError);
}

TEST_CASE("gamma_theta vanishes at tau = 0 and for theta = 0") {
    const ModelParams p = smile_params();
    CHECK(gamma_theta(p, {0.3, 0.3}, 0.0).max_abs() <= 1e-12);
    for (double tau : {0.1, 0.5, 2.0, 10.0}) {
        CHECK(gamma_theta(p, {0.0, 0.0}, tau).max_abs() <= 1e-10);
    }
}

TEST_CASE("gamma_theta satisfies its matrix Riccati equation") {
    // d/dt gamma = gamma b + b gamma + 2 gamma^2 - (phi - b^2)/2, checked by
    // central differences in tau.
    const std::pair<ModelParams, Vec> cases[] = {
        {smile_params(), {-0.2, -0.2}},
        {smile_params(), {0.3, 0.1}},
        {varred_params(), {-0.4, -0.4}},
        {varred_params(), {0.3, 0.1}},
    };
    for (const auto& [p, theta] : cases) {
        {
            const Matrix b2 = p.b.mat() * p.b.mat();
            const Matrix src = (phi(p, theta).mat() - b2) * 0.5;
            for (double tau : {0.3, 0.7, 1.5}) {
                const double h = 1e-5;
                const Matrix gp = gamma_theta(p, theta, tau + h);
                const Matrix gm = gamma_theta(p, theta, tau - h);
                const Matrix fd = (gp - gm) * (1.0 / (2.0 * h));

                const Matrix g = gamma_theta(p, theta, tau);
                Matrix rhs = g * p.b.mat() + p.b.mat() * g + g * g * 2.0;
                rhs -= src;
                CHECK(max_abs_diff(fd, rhs) <= 1e-6 * (1.0 + rhs.max_abs()));
            }
        }
    }
}

TEST_CASE("gamma_theta ties the transform to its determinant split") {
    // log E[e^{theta Y_t}] = theta y0 + r theta.1 t - (alpha/2) tr(b) t
    //                        - (alpha/2) log det V(t) + tr(gamma(t) x0).
    const ModelParams p = drifted_params();
    for (const Vec theta : {Vec{0.3, 0.3}, Vec{0.5, -0.2}, Vec{-0.2, -0.2}}) {
        for (double t : {0.25, 1.0, 3.0}) {
            const LaplaceEval full = log_laplace_y(p, theta, t);
            REQUIRE(full.finite);
            const VPair vp = v_pair(p, theta, t);
            REQUIRE(vp.det_v > 0.0);
            const Matrix g = gamma_theta(p, theta, t);
            double theta_sum = 0.0;
            for (double c : theta) theta_sum += c;
            double tr_b = 0.0, tr_gx = 0.0;
            for (int i = 0; i < 2; ++i) tr_b += p.b(i, i);
            tr_gx = trace_product(g, p.x0.mat());
            const double assembled = dot(theta, p.y0) + p.r * theta_sum * t -
                                     0.5 * p.alpha * tr_b * t -
                                     0.5 * p.alpha * std::log(vp.det_v) + tr_gx;
            CHECK(full.log_value == doctest::Approx(assembled).epsilon(1e-9));
        }
    }
}

TEST_CASE("gamma_theta stays finite on long horizons") {
    const ModelParams p = varred_params();
    const Matrix g = gamma_theta(p, {-0.4, -0.4}, 50.0);
    CHECK(std::isfinite(g.max_abs()));
    // Long-horizon limit: -(phi^{1/2} + b)/2.
    const SymMatrix root = sym_sqrt(phi(p, {-0.4, -0.4}));
    const Matrix limit = (root.mat() + p.b.mat()) * -0.5;
    CHECK(max_abs_diff(g, limit) <= 1e-8);
}

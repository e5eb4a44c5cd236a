#include <doctest.h>

#include <cmath>
#include <random>

#include "wishart/laplace.hpp"
#include "wishart/ldp.hpp"
#include "grid_oracle.hpp"
#include "test_util.hpp"

using namespace wishart;
using namespace wishart::testing;

namespace {

Vec unit(int j) {
    Vec e(2, 0.0);
    e[j] = 1.0;
    return e;
}

// Rejection-samples a strictly interior theta with a positive-definiteness
// margin.
Vec random_interior(const ModelParams& p, std::mt19937_64& rng, double margin) {
    std::uniform_real_distribution<double> u1(-0.8, 1.6);
    for (int tries = 0; tries < 10000; ++tries) {
        Vec th = {u1(rng), u1(rng)};
        if (min_eigenvalue(phi(p, th)) > margin) return th;
    }
    throw Error("no interior point found");
}

}  // namespace

TEST_CASE("lambda vanishes at zero and at basis vectors when r = 0") {
    for (const ModelParams& p : {smile_params(), varred_params()}) {
        CHECK(std::abs(lambda(p, 1.0, {0.0, 0.0}).value.value()) <= 1e-12);
        CHECK(std::abs(lambda(p, 1.0, unit(0)).value.value()) <= 1e-12);
        CHECK(std::abs(lambda(p, 1.0, unit(1)).value.value()) <= 1e-12);
    }
}

TEST_CASE("lambda is infinite outside the domain") {
    CHECK(!lambda(smile_params(), 1.0, {100.0, 100.0}).value.is_finite());
}

TEST_CASE("lambda matches the long-horizon limit of the transform") {
    const ModelParams p = smile_params();
    const Vec theta = {0.3, 0.3};
    const double lam = lambda(p, 1.0, theta).value.value();
    const LaplaceEval ev = log_laplace_y(p, theta, 400.0);
    REQUIRE(ev.finite);
    CHECK(std::abs(ev.log_value / 400.0 - lam) <= 1e-3);
}

TEST_CASE("limit consistency improves with the horizon") {
    const ModelParams p = smile_params();
    const Vec thetas[] = {{0.3, 0.3}, {0.05, 0.05}, {-0.1, -0.1}};
    for (const Vec& theta : thetas) {
        const double lam = lambda(p, 1.0, theta).value.value();
        double prev = std::numeric_limits<double>::infinity();
        for (double t : {25.0, 50.0, 100.0, 200.0}) {
            const LaplaceEval ev = log_laplace_y(p, theta, t);
            REQUIRE(ev.finite);
            const double gap = std::abs(ev.log_value / t - lam);
            CHECK(gap <= prev + 1e-12);
            prev = gap;
        }
        CHECK(prev <= 1e-3);
    }
}

TEST_CASE("lambda agrees with the independent closed-form evaluation") {
    const GridOracle oracle(smile_params());
    std::mt19937_64 rng(3);
    const ModelParams p = smile_params();
    for (int rep = 0; rep < 100; ++rep) {
        const Vec th = random_interior(p, rng, 1e-6);
        CHECK(lambda(p, 1.0, th).value.value() ==
              doctest::Approx(oracle.lambda1(th[0], th[1])).epsilon(1e-10));
    }
}

TEST_CASE("lambda is convex on random interior pairs") {
    const ModelParams p = smile_params();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> w(0.05, 0.95);
    for (int rep = 0; rep < 200; ++rep) {
        const Vec a = random_interior(p, rng, 1e-8);
        const Vec b = random_interior(p, rng, 1e-8);
        const double u = w(rng);
        const Vec mid = {u * a[0] + (1 - u) * b[0], u * a[1] + (1 - u) * b[1]};
        const double fa = lambda(p, 1.0, a).value.value();
        const double fb = lambda(p, 1.0, b).value.value();
        const double fm = lambda(p, 1.0, mid).value.value_or_inf();
        CHECK(fm <= u * fa + (1 - u) * fb + 1e-10);
    }
}

TEST_CASE("grad_lambda matches central finite differences") {
    const ModelParams p = smile_params();
    std::mt19937_64 rng(9);
    const double h = 1e-5;
    for (int rep = 0; rep < 20; ++rep) {
        const Vec th = random_interior(p, rng, 1e-3);
        const Vec g = grad_lambda(p, 1.0, th);
        for (int j = 0; j < 2; ++j) {
            Vec up = th, dn = th;
            up[j] += h;
            dn[j] -= h;
            const double fd = (lambda(p, 1.0, up).value.value() -
                               lambda(p, 1.0, dn).value.value()) /
                              (2.0 * h);
            CHECK(std::abs(g[j] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("grad_lambda at zero is negative when r = 0") {
    for (const ModelParams& p : {smile_params(), varred_params()}) {
        const Vec g = grad_lambda(p, 1.0, {0.0, 0.0});
        CHECK(g[0] < 0.0);
        CHECK(g[1] < 0.0);
    }
}

TEST_CASE("grad_lambda respects coordinate exchange symmetry") {
    const Vec g = grad_lambda(exchangeable_params(), 1.0, {0.0, 0.0});
    CHECK(g[0] == doctest::Approx(g[1]).epsilon(1e-12));
}

TEST_CASE("grad_lambda throws on the domain boundary") {
    // Walk along 1 until the smallest eigenvalue crosses the strictness cut.
    const ModelParams p = smile_params();
    double lo = 0.0, hi = domain_bounding_radius(p);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (min_eigenvalue(phi(p, {mid, mid})) > 0.0 ? lo : hi) = mid;
    }
    CHECK_THROWS_AS(grad_lambda(p, 1.0, {hi, hi}), OnBoundaryError);
}

TEST_CASE("gradient blows up toward the domain boundary") {
    const ModelParams p = smile_params();
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int tested = 0;
    while (tested < 5) {
        Vec dir = {gauss(rng), gauss(rng)};
        const double norm = std::sqrt(dot(dir, dir));
        for (auto& v : dir) v /= norm;
        // Bisect the ray to a point with min_eig inside (1e-10, 1e-9).
        double lo = 0.0, hi = domain_bounding_radius(p) + 1.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (min_eigenvalue(phi(p, {mid * dir[0], mid * dir[1]})) > 5e-10 ? lo : hi) = mid;
        }
        const Vec th = {lo * dir[0], lo * dir[1]};
        const double me = min_eigenvalue(phi(p, th));
        if (!(me > 1e-10 && me < 1e-6)) continue;
        const Vec g = grad_lambda(p, 1.0, th);
        CHECK(std::sqrt(dot(g, g)) > 1e3);
        ++tested;
    }
}

TEST_CASE("rate_function at gradient points") {
    const ModelParams p = smile_params();

    const Vec y0 = grad_lambda(p, 1.0, {0.0, 0.0});
    const RateEval r0 = rate_function(p, y0);
    CHECK(r0.converged);
    CHECK(std::abs(r0.value) <= 1e-7);
    CHECK(std::abs(r0.argmax_lambda[0]) <= 1e-4);
    CHECK(std::abs(r0.argmax_lambda[1]) <= 1e-4);

    // At y = grad Lambda(e_j) the transform equals <e_j, y>, i.e. the j-th
    // slope constant.
    for (int j = 0; j < 2; ++j) {
        const Vec yj = grad_lambda(p, 1.0, unit(j));
        const RateEval rj = rate_function(p, yj);
        CHECK(rj.converged);
        CHECK(rj.value == doctest::Approx(yj[j]).epsilon(1e-6));
        CHECK(rj.argmax_lambda[j] == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(std::abs(rj.argmax_lambda[1 - j]) <= 1e-3);
    }
}

TEST_CASE("rate_function agrees with the grid oracle") {
    const ModelParams p = smile_params();
    const GridOracle oracle(p);
    const std::vector<Vec> targets = {{-0.1, -0.1}, {0.05, -0.2}};
    const std::vector<double> sup = oracle.rate_sup(targets, 1e-3);
    for (size_t t = 0; t < targets.size(); ++t) {
        const RateEval r = rate_function(p, targets[t]);
        CHECK(r.converged);
        CHECK(std::abs(r.value - sup[t]) <= 1e-4);
    }
}

TEST_CASE("rate_function is nonnegative and dominates each coordinate") {
    const ModelParams p = smile_params();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int rep = 0; rep < 10; ++rep) {
        const Vec y = {u(rng), u(rng)};
        const RateEval r = rate_function(p, y);
        CHECK(r.converged);
        CHECK(r.value >= -1e-12);
        CHECK(r.value >= y[0] - 1e-7);
        CHECK(r.value >= y[1] - 1e-7);
    }
}

TEST_CASE("rate_function honors constraint boxes") {
    const ModelParams p = smile_params();
    // Unconstrained optimum at y = grad Lambda(0) is lambda = 0; with an
    // upper bound pushing lambda_1 below -0.1 the value must drop.
    const Vec y = grad_lambda(p, 1.0, {0.0, 0.0});
    Box box = Box::unbounded(2);
    box.upper = {-0.1, 0.0};
    const RateEval r = rate_function(p, y, box);
    CHECK(r.converged);
    CHECK(r.argmax_lambda[0] <= -0.1 + 1e-6);
    CHECK(r.argmax_lambda[1] <= 1e-6);
    CHECK(r.value <= 1e-7);

    // The box optimum can't beat the free optimum.
    const RateEval free = rate_function(p, y);
    CHECK(r.value <= free.value + 1e-9);
}

TEST_CASE("regime_constants identities and anchors") {
    for (const ModelParams& p : {smile_params(), varred_params()}) {
        const RegimeConstants rc = regime_constants(p);
        for (int j = 0; j < 2; ++j) {
            CHECK(std::abs(rc.x_star[j] + rc.x_tilde_star[j]) <= 1e-10);
            CHECK(rc.x_star[j] < 0.0);
        }
        CHECK(rc.beta_star < 0.0);
        CHECK(rc.beta_hat_star > 0.0);
        CHECK(rc.beta_hat_star <= rc.beta_tilde_star);

        // Closed form: x*_j = -(alpha/4) (a^T (-b)^{-1} a)_{jj}.
        const Matrix neg_b_inv = det_and_inverse(p.b.mat() * -1.0).inverse;
        const Matrix sandwich = p.a.transpose() * neg_b_inv * p.a;
        for (int j = 0; j < 2; ++j) {
            CHECK(rc.x_star[j] ==
                  doctest::Approx(-0.25 * p.alpha * sandwich(j, j)).epsilon(1e-10));
        }
    }

    // Frozen anchors for the smile parameter set.
    const RegimeConstants rc = regime_constants(smile_params());
    CHECK(rc.x_tilde_star[0] == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(rc.x_tilde_star[1] == doctest::Approx(0.16071428571428573).epsilon(1e-12));
    CHECK(rc.beta_star == doctest::Approx(-0.05).epsilon(1e-12));
}

TEST_CASE("regime_constants requires r = 0") {
    ModelParams p = smile_params();
    p.r = 0.01;
    CHECK_THROWS_AS(regime_constants(p), Error);
}

TEST_CASE("lambda_line basics") {
    const ModelParams p = smile_params();
    CHECK(std::abs(lambda_line(p, {0.0, 0.0}, unit(0), 0.0).value()) <= 1e-12);
    CHECK(std::abs(lambda_line(p, unit(1), unit(0), 0.0).value()) <= 1e-12);
    CHECK(!lambda_line(p, {0.0, 0.0}, unit(0), 1e6).is_finite());
    CHECK(!lambda_line(p, {0.0, 0.0}, unit(0), -1e6).is_finite());
}

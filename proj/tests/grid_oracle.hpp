#pragma once

#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "wishart/model.hpp"

namespace wishart::testing {

// Brute-force Legendre transform on a regular grid, written from scratch for
// n = 2: the exponent is evaluated through the closed-form trace of the 2x2
// matrix square root, tr sqrt(M) = sqrt(tr M + 2 sqrt(det M)), independent of
// the library's eigensolver and optimizer.
class GridOracle {
  public:
    explicit GridOracle(const ModelParams& p) : p_(p) {
        if (p.n != 2) throw Error("grid oracle covers n = 2 only");
        const Matrix b2 = p.b.mat() * p.b.mat();
        b2_00_ = b2(0, 0);
        b2_01_ = b2(0, 1);
        b2_11_ = b2(1, 1);
        tr_b_ = p.b(0, 0) + p.b(1, 1);
    }

    // Lambda at horizon 1; +inf outside the domain.
    double lambda1(double l1, double l2) const {
        // phi = b^2 + a Diag(l) a^T - (a l)(a l)^T
        const double a00 = p_.a(0, 0), a01 = p_.a(0, 1), a10 = p_.a(1, 0), a11 = p_.a(1, 1);
        const double al0 = a00 * l1 + a01 * l2;
        const double al1 = a10 * l1 + a11 * l2;
        const double e00 = b2_00_ + a00 * a00 * l1 + a01 * a01 * l2 - al0 * al0;
        const double e11 = b2_11_ + a10 * a10 * l1 + a11 * a11 * l2 - al1 * al1;
        const double e01 = b2_01_ + a00 * a10 * l1 + a01 * a11 * l2 - al0 * al1;
        const double tr = e00 + e11;
        const double det = e00 * e11 - e01 * e01;
        if (tr < 0.0 || det < -1e-14) return std::numeric_limits<double>::infinity();
        const double tr_sqrt = std::sqrt(tr + 2.0 * std::sqrt(std::max(det, 0.0)));
        return p_.r * (l1 + l2) - 0.5 * p_.alpha * (tr_b_ + tr_sqrt);
    }

    // sup over the grid of <lambda, y> - Lambda(lambda), one shared sweep for
    // all targets; bounds restrict the grid (e.g. the nonpositive orthant).
    std::vector<double> rate_sup(const std::vector<Vec>& targets, double step,
                                 double lo1 = -1e30, double hi1 = 1e30, double lo2 = -1e30,
                                 double hi2 = 1e30) const {
        const double radius = domain_bounding_radius(p_);
        const double a1 = std::max(-radius, lo1), b1 = std::min(radius, hi1);
        const double a2 = std::max(-radius, lo2), b2 = std::min(radius, hi2);
        const long n1 = static_cast<long>(std::floor((b1 - a1) / step)) + 1;
        const long n2 = static_cast<long>(std::floor((b2 - a2) / step)) + 1;

        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        std::vector<std::vector<double>> partial(
            hw, std::vector<double>(targets.size(), -std::numeric_limits<double>::infinity()));

        auto work = [&](unsigned w) {
            auto& best = partial[w];
            for (long i = w; i < n1; i += hw) {
                const double l1 = a1 + i * step;
                for (long j = 0; j < n2; ++j) {
                    const double l2 = a2 + j * step;
                    const double lam = lambda1(l1, l2);
                    if (!std::isfinite(lam)) continue;
                    for (size_t t = 0; t < targets.size(); ++t) {
                        const double v = l1 * targets[t][0] + l2 * targets[t][1] - lam;
                        if (v > best[t]) best[t] = v;
                    }
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < hw; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();

        std::vector<double> out(targets.size(), -std::numeric_limits<double>::infinity());
        for (const auto& best : partial) {
            for (size_t t = 0; t < out.size(); ++t) out[t] = std::max(out[t], best[t]);
        }
        return out;
    }

  private:
    ModelParams p_;
    double b2_00_, b2_01_, b2_11_, tr_b_;
};

}  // namespace wishart::testing

#pragma once

#include "wishart/matrix.hpp"
#include "wishart/model.hpp"

namespace wishart {

// log E[exp(theta^T Y_t)], finite exactly when theta lies in U and the
// matrix V(t) keeps a positive determinant up to t.
struct LaplaceEval {
    double log_value = 0.0;
    bool finite = false;
    double t = 0.0;
    Vec theta;
};

// V(t) = cosh(t phi^{1/2}) - phi^{-1/2} sinh(t phi^{1/2}) b and its
// derivative, with V(0) = I and V'(0) = -b. Assembled densely; intended for
// moderate t (the log-space path below handles long horizons).
struct VPair {
    Matrix v;
    Matrix v_prime;
    double det_v = 0.0;
};

VPair v_pair(const ModelParams& params, const Vec& theta, double t);

LaplaceEval log_laplace_y(const ModelParams& params, const Vec& theta, double t);

// log E[exp(-tr(w X_t)/2 - tr(v R_t)/2)] with R_t the running integral of X.
// Requires the m = -b/2 sufficient condition: v/2 + b^2/2 and w/2 - b/2 PSD;
// throws ConditionFailedError otherwise.
double wishart_joint_laplace(const ModelParams& params, const SymMatrix& v, const SymMatrix& w,
                             double t);

// gamma_theta(tau) = -(V'(tau) V^{-1}(tau) + b)/2, the matrix entering the
// drift b + 2 gamma_theta(T - t) of X under the exponentially tilted measure.
// Symmetrized output; gamma_theta(0) = 0.
Matrix gamma_theta(const ModelParams& params, const Vec& theta, double tau);

}  // namespace wishart

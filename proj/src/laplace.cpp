#include "wishart/laplace.hpp"

#include <cmath>
#include <limits>

namespace wishart {

namespace {

double trace(const Matrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim(); ++i) s += m(i, i);
    return s;
}

double trace_product(const Matrix& l, const Matrix& r) {
    double s = 0.0;
    for (int i = 0; i < l.dim(); ++i)
        for (int k = 0; k < l.dim(); ++k) s += l(i, k) * r(k, i);
    return s;
}

Matrix conjugate_by_pt(const Matrix& p, const Matrix& m) {  // P^T m P
    return p.transpose() * m * p;
}

// Spectral assembly of V(t) = cosh(t C^{1/2}) + C^{-1/2} sinh(t C^{1/2}) w
// for PSD curvature C and symmetric w, written in the eigenbasis of C as
// Delta * B with Delta = diag(e^{t s_i}/2) and
//   B = diag(1 + e^{-2 t s_i}) + diag(h_i) w_hat,
//   h_i = (1 - e^{-2 t s_i})/s_i  (h_i = 2t on the kernel).
// Every factor stays bounded, so determinants and the correction term below
// are available for arbitrarily large t without overflow.
struct StableV {
    Vec s;                 // sqrt of clipped eigenvalues of the curvature
    Matrix p;              // eigenvectors
    double log_det = 0.0;  // log det V(t)
    bool det_positive = false;
    // e^{-t D^{1/2}} (D^{1/2} - w_hat) B^{-1} diag(2 e^{-t s_j}): equals
    // phi^{1/2} - V'(t) V^{-1}(t) in the eigenbasis.
    Matrix correction;
};

StableV build_stable_v(const SpectralDecomp& es, const Matrix& w_tilde, double t) {
    const int n = static_cast<int>(es.eigenvalues.size());
    StableV out;
    out.p = es.eigenvectors;
    out.s.resize(n);
    for (int i = 0; i < n; ++i) out.s[i] = std::sqrt(std::max(es.eigenvalues[i], 0.0));

    const Matrix w_hat = conjugate_by_pt(es.eigenvectors, w_tilde);
    Matrix b_mat(n);
    double log_scale = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ts = t * out.s[i];
        log_scale += ts - std::log(2.0);
        const double e2 = std::exp(-2.0 * ts);
        const double h = (out.s[i] > 0.0) ? -std::expm1(-2.0 * ts) / out.s[i] : 2.0 * t;
        for (int j = 0; j < n; ++j) b_mat(i, j) = h * w_hat(i, j);
        b_mat(i, i) += 1.0 + e2;
    }

    DetInverse lu;
    try {
        lu = det_and_inverse(b_mat);
    } catch (const SingularError&) {
        out.det_positive = false;
        return out;
    }
    if (!(lu.det > 0.0)) {
        out.det_positive = false;
        return out;
    }
    out.det_positive = true;
    out.log_det = log_scale + std::log(lu.det);

    Matrix corr(n);
    for (int i = 0; i < n; ++i) {
        const double row_scale = std::exp(-t * out.s[i]);
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                const double lhs = (i == k ? out.s[i] : 0.0) - w_hat(i, k);
                s += lhs * lu.inverse(k, j);
            }
            corr(i, j) = row_scale * s * 2.0 * std::exp(-t * out.s[j]);
        }
    }
    out.correction = std::move(corr);
    return out;
}

Matrix negated(const Matrix& m) {
    Matrix out = m;
    out *= -1.0;
    return out;
}

}  // namespace

VPair v_pair(const ModelParams& params, const Vec& theta, double t) {
    require_valid(params);
    if (t < 0.0) throw Error("v_pair requires t >= 0");
    const DomainReport rep = in_domain(params, theta);
    if (!rep.inside) throw OutOfDomainError("theta is outside the Laplace domain");

    const SpectralDecomp es = sym_eigen(phi(params, theta));
    const int n = params.n;
    const Matrix w_hat = conjugate_by_pt(es.eigenvectors, negated(params.b.mat()));

    Matrix vh(n), vph(n);
    for (int i = 0; i < n; ++i) {
        const double lam = std::max(es.eigenvalues[i], 0.0);
        const double s = std::sqrt(lam);
        const double c = std::cosh(t * s);
        const double sh = std::sinh(t * s);
        const double h = (lam >= tol::kEigCut)
                             ? sh / s
                             : t * (1.0 + lam * t * t / 6.0 + lam * lam * t * t * t * t / 120.0);
        for (int j = 0; j < n; ++j) {
            vh(i, j) = h * w_hat(i, j) + (i == j ? c : 0.0);
            vph(i, j) = c * w_hat(i, j) + (i == j ? sh * s : 0.0);
        }
    }
    VPair out;
    out.v = es.eigenvectors * vh * es.eigenvectors.transpose();
    out.v_prime = es.eigenvectors * vph * es.eigenvectors.transpose();
    out.det_v = det_and_inverse(out.v).det;
    return out;
}

LaplaceEval log_laplace_y(const ModelParams& params, const Vec& theta, double t) {
    require_valid(params);
    if (t < 0.0) throw Error("log_laplace_y requires t >= 0");

    LaplaceEval ev;
    ev.t = t;
    ev.theta = theta;
    ev.finite = false;
    ev.log_value = std::numeric_limits<double>::infinity();

    const SpectralDecomp es = sym_eigen(phi(params, theta));
    if (es.eigenvalues.front() < -tol::kDomain) return ev;

    const StableV sv = build_stable_v(es, negated(params.b.mat()), t);
    if (!sv.det_positive) return ev;

    // tr{(b + phi^{1/2}) x0} minus the decaying correction
    // tr{e^{-t phi^{1/2}} (b + phi^{1/2}) V^{-1}(t) x0}.
    const Matrix x_hat = conjugate_by_pt(es.eigenvectors, params.x0.mat());
    const Matrix b_hat = conjugate_by_pt(es.eigenvectors, params.b.mat());
    const double trace_head = trace_product(Matrix::diag(sv.s) + b_hat, x_hat);
    const double trace_corr = trace_product(sv.correction, x_hat);

    double theta_sum = 0.0;
    for (double v : theta) theta_sum += v;

    ev.log_value = dot(theta, params.y0) + params.r * theta_sum * t -
                   0.5 * params.alpha * trace(params.b.mat()) * t -
                   0.5 * params.alpha * sv.log_det - 0.5 * (trace_head - trace_corr);
    ev.finite = true;
    return ev;
}

double wishart_joint_laplace(const ModelParams& params, const SymMatrix& v, const SymMatrix& w,
                             double t) {
    require_valid(params);
    if (t < 0.0) throw Error("wishart_joint_laplace requires t >= 0");

    const Matrix b2 = params.b.mat() * params.b.mat();
    const SymMatrix cond1 = SymMatrix::symmetric_part((v.mat() + b2) * 0.5);
    const SymMatrix cond2 = SymMatrix::symmetric_part((w.mat() - params.b.mat()) * 0.5);
    if (min_eigenvalue(cond1) < -tol::kPsd || min_eigenvalue(cond2) < -tol::kPsd) {
        throw ConditionFailedError("joint Laplace existence condition fails for m = -b/2");
    }

    const SymMatrix v_tilde = SymMatrix::symmetric_part(v.mat() + b2);
    const Matrix w_tilde = w.mat() - params.b.mat();
    const SpectralDecomp es = sym_eigen(v_tilde);
    const StableV sv = build_stable_v(es, w_tilde, t);
    if (!sv.det_positive) throw SingularError("V(t) determinant is not positive");

    const Matrix x_hat = conjugate_by_pt(es.eigenvectors, params.x0.mat());
    const Matrix b_hat = conjugate_by_pt(es.eigenvectors, params.b.mat());
    const double trace_head = trace_product(Matrix::diag(sv.s) + b_hat, x_hat);
    const double trace_corr = trace_product(sv.correction, x_hat);

    return -0.5 * params.alpha * trace(params.b.mat()) * t - 0.5 * params.alpha * sv.log_det -
           0.5 * (trace_head - trace_corr);
}

Matrix gamma_theta(const ModelParams& params, const Vec& theta, double tau) {
    require_valid(params);
    if (tau < 0.0) throw Error("gamma_theta requires tau >= 0");
    const DomainReport rep = in_domain(params, theta);
    if (!rep.inside) throw OutOfDomainError("theta is outside the Laplace domain");

    const SpectralDecomp es = sym_eigen(phi(params, theta));
    const StableV sv = build_stable_v(es, negated(params.b.mat()), tau);
    if (!sv.det_positive) throw SingularError("V(tau) determinant is not positive");

    // V' V^{-1} = phi^{1/2} - correction (in the eigenbasis), so
    // gamma = -(phi^{1/2} - P corr P^T + b)/2.
    const Matrix p = es.eigenvectors;
    const Matrix corr = p * sv.correction * p.transpose();
    Matrix g(params.n);
    const Matrix sqrt_phi = p * Matrix::diag(sv.s) * p.transpose();
    for (int i = 0; i < params.n; ++i)
        for (int j = 0; j < params.n; ++j)
            g(i, j) = -0.5 * (sqrt_phi(i, j) - corr(i, j) + params.b(i, j));

    double asym = 0.0;
    for (int i = 0; i < params.n; ++i)
        for (int j = i + 1; j < params.n; ++j) asym = std::max(asym, std::abs(g(i, j) - g(j, i)));
    if (asym > 1e-8) throw NumericalError("gamma_theta asymmetry exceeds tolerance");

    Matrix sym(params.n);
    for (int i = 0; i < params.n; ++i)
        for (int j = 0; j < params.n; ++j) sym(i, j) = 0.5 * (g(i, j) + g(j, i));
    return sym;
}

}  // namespace wishart

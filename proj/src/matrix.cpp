#include "wishart/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wishart {

Matrix::Matrix(int n, Vec entries) : n_(n), a_(std::move(entries)) {
    if (a_.size() != static_cast<size_t>(n) * n) {
        throw Error("matrix entries size does not match dimension");
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diag(const Vec& d) {
    Matrix m(static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

Matrix& Matrix::operator+=(const Matrix& o) {
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

Matrix operator*(const Matrix& l, const Matrix& r) {
    const int n = l.dim();
    Matrix p(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double lik = l(i, k);
            if (lik == 0.0) continue;
            for (int j = 0; j < n; ++j) p(i, j) += lik * r(k, j);
        }
    }
    return p;
}

Vec operator*(const Matrix& m, const Vec& v) {
    const int n = m.dim();
    Vec r(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[i] += m(i, j) * v[j];
    return r;
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec outer_diag(const Matrix& m) {
    Vec d(m.dim());
    for (int i = 0; i < m.dim(); ++i) d[i] = m(i, i);
    return d;
}

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
    const double bound = tol::kSym * std::max(1.0, m_.max_abs());
    for (int i = 0; i < m_.dim(); ++i) {
        for (int j = i + 1; j < m_.dim(); ++j) {
            if (std::abs(m_(i, j) - m_(j, i)) > bound) {
                throw NonSymmetricError("matrix is not symmetric within tolerance");
            }
        }
    }
}

SymMatrix SymMatrix::symmetric_part(const Matrix& m) {
    Matrix s(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
    return SymMatrix(std::move(s));
}

namespace {

// One cyclic Jacobi sweep over the strict upper triangle of a, accumulating
// rotations into q.
void jacobi_sweep(Matrix& a, Matrix& q) {
    const int n = a.dim();
    for (int p = 0; p < n - 1; ++p) {
        for (int r = p + 1; r < n; ++r) {
            const double apr = a(p, r);
            if (apr == 0.0) continue;
            const double app = a(p, p);
            const double arr = a(r, r);
            const double tau = (arr - app) / (2.0 * apr);
            // Smaller-magnitude root of t^2 + 2 tau t - 1 = 0.
            const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                          : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;
            for (int k = 0; k < n; ++k) {
                const double akp = a(k, p);
                const double akr = a(k, r);
                a(k, p) = c * akp - s * akr;
                a(k, r) = s * akp + c * akr;
            }
            for (int k = 0; k < n; ++k) {
                const double apk = a(p, k);
                const double ark = a(r, k);
                a(p, k) = c * apk - s * ark;
                a(r, k) = s * apk + c * ark;
            }
            for (int k = 0; k < n; ++k) {
                const double qkp = q(k, p);
                const double qkr = q(k, r);
                q(k, p) = c * qkp - s * qkr;
                q(k, r) = s * qkp + c * qkr;
            }
        }
    }
}

double off_diagonal_mass(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

SpectralDecomp sym_eigen(const SymMatrix& m) {
    const int n = m.dim();
    // Work on the exact symmetric part so the iteration sees a symmetric
    // matrix bit for bit.
    Matrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
    Matrix q = Matrix::identity(n);

    const double target = tol::kJacobi * std::max(a.frobenius_norm(), 1e-300);
    for (int sweep = 0; sweep < 64; ++sweep) {
        if (off_diagonal_mass(a) <= target) break;
        jacobi_sweep(a, q);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](int i, int j) { return a(i, i) < a(j, j); });

    SpectralDecomp d;
    d.eigenvalues.resize(n);
    d.eigenvectors = Matrix(n);
    for (int k = 0; k < n; ++k) {
        d.eigenvalues[k] = a(order[k], order[k]);
        for (int i = 0; i < n; ++i) d.eigenvectors(i, k) = q(i, order[k]);
    }
    return d;
}

namespace {

SymMatrix reconstruct(const SpectralDecomp& d, const Vec& mapped) {
    const int n = static_cast<int>(mapped.size());
    Matrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += d.eigenvectors(i, k) * mapped[k] * d.eigenvectors(j, k);
            r(i, j) = s;
            r(j, i) = s;
        }
    }
    return SymMatrix(std::move(r));
}

}  // namespace

SymMatrix apply_spectral_fn(const SymMatrix& m, const std::function<double(double)>& f) {
    const SpectralDecomp d = sym_eigen(m);
    Vec mapped(d.eigenvalues.size());
    for (size_t k = 0; k < mapped.size(); ++k) {
        mapped[k] = f(d.eigenvalues[k]);
        if (!std::isfinite(mapped[k])) {
            throw NonFiniteError("spectral function is not finite on the spectrum");
        }
    }
    return reconstruct(d, mapped);
}

SymMatrix sym_sqrt(const SymMatrix& m) {
    const SpectralDecomp d = sym_eigen(m);
    Vec mapped(d.eigenvalues.size());
    for (size_t k = 0; k < mapped.size(); ++k) {
        double lam = d.eigenvalues[k];
        if (lam < -tol::kPsd) throw NotPsdError("matrix is not positive semidefinite");
        if (lam < 0.0) lam = 0.0;
        mapped[k] = std::sqrt(lam);
    }
    return reconstruct(d, mapped);
}

SymMatrix sinhc_sqrt(const SymMatrix& m, double t) {
    if (t < 0.0) throw Error("sinhc_sqrt requires t >= 0");
    const SpectralDecomp d = sym_eigen(m);
    Vec mapped(d.eigenvalues.size());
    for (size_t k = 0; k < mapped.size(); ++k) {
        double lam = d.eigenvalues[k];
        if (lam < -tol::kPsd) throw NotPsdError("matrix is not positive semidefinite");
        if (lam < 0.0) lam = 0.0;
        if (lam >= tol::kEigCut) {
            const double s = std::sqrt(lam);
            mapped[k] = std::sinh(t * s) / s;
        } else {
            const double t2 = t * t;
            mapped[k] = t * (1.0 + lam * t2 / 6.0 + lam * lam * t2 * t2 / 120.0);
        }
    }
    return reconstruct(d, mapped);
}

Matrix cholesky(const SymMatrix& m) {
    const int n = m.dim();
    Matrix l(n);
    for (int j = 0; j < n; ++j) {
        double diag = m(j, j);
        for (int k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0) || !std::isfinite(diag)) {
            throw NotSpdError("matrix is not positive definite");
        }
        l(j, j) = std::sqrt(diag);
        for (int i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

double min_eigenvalue(const SymMatrix& m) { return sym_eigen(m).eigenvalues.front(); }

DetInverse det_and_inverse(const Matrix& m) {
    const int n = m.dim();
    Matrix lu = m;
    std::vector<int> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    double det = 1.0;

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int i = col + 1; i < n; ++i) {
            if (std::abs(lu(i, col)) > std::abs(lu(pivot, col))) pivot = i;
        }
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(lu(col, j), lu(pivot, j));
            std::swap(piv[col], piv[pivot]);
            det = -det;
        }
        const double p = lu(col, col);
        if (std::abs(p) < 1e-300 || !std::isfinite(p)) {
            throw SingularError("matrix is numerically singular");
        }
        det *= p;
        for (int i = col + 1; i < n; ++i) {
            lu(i, col) /= p;
            for (int j = col + 1; j < n; ++j) lu(i, j) -= lu(i, col) * lu(col, j);
        }
    }
    if (std::abs(det) <= 1e-300 || !std::isfinite(det)) {
        throw SingularError("matrix determinant underflows");
    }

    DetInverse out;
    out.det = det;
    out.inverse = Matrix(n);
    // Solve LU x = e_{piv} column by column.
    for (int col = 0; col < n; ++col) {
        Vec x(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double s = (piv[i] == col) ? 1.0 : 0.0;
            for (int j = 0; j < i; ++j) s -= lu(i, j) * x[j];
            x[i] = s;
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = x[i];
            for (int j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
            x[i] = s / lu(i, i);
        }
        for (int i = 0; i < n; ++i) out.inverse(i, col) = x[i];
    }
    return out;
}

}  // namespace wishart

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wishart/errors.hpp"

namespace wishart {

using Vec = std::vector<double>;

namespace tol {
// |m_ij - m_ji| <= kSym * max(1, maxabs) defines an acceptable symmetric input.
inline constexpr double kSym = 1e-12;
// Eigenvalues in [-kPsd, 0) are treated as exact zeros by PSD-requiring ops.
inline constexpr double kPsd = 1e-10;
// Boundary/interior split for the Laplace-transform domain.
inline constexpr double kDomain = 1e-10;
// Below this eigenvalue, sinh(t*sqrt(x))/sqrt(x) switches to its Taylor form.
inline constexpr double kEigCut = 1e-8;
// Jacobi sweep stops when the off-diagonal Frobenius mass falls below
// kJacobi * ||m||_F.
inline constexpr double kJacobi = 1e-13;
}  // namespace tol

// Dense square matrix, row-major. Dimensions stay small (n <= 10), so all
// operations are plain loops.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}
    Matrix(int n, Vec entries);

    static Matrix identity(int n);
    static Matrix diag(const Vec& d);

    int dim() const { return n_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
    const Vec& entries() const { return a_; }

    Matrix transpose() const;
    double max_abs() const;
    double frobenius_norm() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);

    friend Matrix operator+(Matrix l, const Matrix& r) { return l += r; }
    friend Matrix operator-(Matrix l, const Matrix& r) { return l -= r; }
    friend Matrix operator*(Matrix l, double s) { return l *= s; }
    friend Matrix operator*(double s, Matrix r) { return r *= s; }
    friend Matrix operator*(const Matrix& l, const Matrix& r);

  private:
    int n_ = 0;
    Vec a_;
};

Vec operator*(const Matrix& m, const Vec& v);
double dot(const Vec& a, const Vec& b);
Vec outer_diag(const Matrix& m);  // diagonal of m as a vector

// Symmetric matrix. Construction checks the symmetry defect against tol::kSym
// and throws NonSymmetricError past it; entries are stored as given.
class SymMatrix {
  public:
    SymMatrix() = default;
    explicit SymMatrix(Matrix m);

    // Symmetrizes (m + m^T)/2 without the defect check.
    static SymMatrix symmetric_part(const Matrix& m);
    static SymMatrix identity(int n) { return SymMatrix(Matrix::identity(n)); }
    static SymMatrix diag(const Vec& d) { return SymMatrix(Matrix::diag(d)); }

    int dim() const { return m_.dim(); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Matrix& mat() const { return m_; }

  private:
    Matrix m_;
};

struct SpectralDecomp {
    Vec eigenvalues;      // ascending
    Matrix eigenvectors;  // orthonormal, column k pairs with eigenvalues[k]
};

// Cyclic Jacobi eigendecomposition. Deterministic: identical input bits give
// identical output bits.
SpectralDecomp sym_eigen(const SymMatrix& m);

// Q diag(f(d)) Q^T. Throws NonFiniteError if f is not finite on the spectrum.
SymMatrix apply_spectral_fn(const SymMatrix& m, const std::function<double(double)>& f);

// PSD square root; eigenvalues in [-kPsd, 0) are clipped to zero, anything
// below -kPsd throws NotPsdError.
SymMatrix sym_sqrt(const SymMatrix& m);

// m^{-1/2} sinh(t m^{1/2}) extended across the kernel, where it equals t.
// Per eigenvalue: sinh(t sqrt(x))/sqrt(x) for x >= kEigCut, otherwise the
// Taylor form t (1 + x t^2/6 + x^2 t^4/120).
SymMatrix sinhc_sqrt(const SymMatrix& m, double t);

// Lower-triangular L with L L^T = m and positive diagonal. Throws NotSpdError
// when a pivot fails.
Matrix cholesky(const SymMatrix& m);

double min_eigenvalue(const SymMatrix& m);

struct DetInverse {
    double det = 0.0;
    Matrix inverse;
};

// LU with partial pivoting; throws SingularError when |det| <= 1e-300.
DetInverse det_and_inverse(const Matrix& m);

}  // namespace wishart

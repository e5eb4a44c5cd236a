#include <doctest.h>

#include <cmath>
#include <random>

#include "wishart/matrix.hpp"
#include "test_util.hpp"

using namespace wishart;
using namespace wishart::testing;

TEST_CASE("sym_eigen on identity and diagonal matrices") {
    const SpectralDecomp id = sym_eigen(SymMatrix::identity(2));
    CHECK(id.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(id.eigenvalues[1] == doctest::Approx(1.0));
    // Reconstruction rather than a particular Q.
    const Matrix q = id.eigenvectors;
    CHECK(max_abs_diff(q * q.transpose(), Matrix::identity(2)) < 1e-10);

    const SpectralDecomp d = sym_eigen(SymMatrix::diag({9.0, 4.0}));
    CHECK(d.eigenvalues[0] == doctest::Approx(4.0));
    CHECK(d.eigenvalues[1] == doctest::Approx(9.0));
}

TEST_CASE("sym_eigen hand-checked 2x2") {
    // [[2,1],[1,2]] has characteristic roots 1 and 3.
    const SymMatrix m(Matrix(2, {2.0, 1.0, 1.0, 2.0}));
    const SpectralDecomp d = sym_eigen(m);
    CHECK(d.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sym_eigen rejects asymmetric input") {
    Matrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 0.5;
    CHECK_THROWS_AS(SymMatrix{m}, NonSymmetricError);
}

TEST_CASE("sym_eigen reconstruction and orthonormality on random input") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const SymMatrix m{random_symmetric(rng, n, 5.0)};
        const SpectralDecomp d = sym_eigen(m);
        for (size_t k = 1; k < d.eigenvalues.size(); ++k) {
            CHECK(d.eigenvalues[k - 1] <= d.eigenvalues[k]);
        }
        const Matrix q = d.eigenvectors;
        CHECK(max_abs_diff(q.transpose() * q, Matrix::identity(n)) <= 1e-10);
        const Matrix rec = q * Matrix::diag(d.eigenvalues) * q.transpose();
        CHECK(max_abs_diff(rec, m.mat()) <= 1e-9 * (1.0 + m.mat().max_abs()));
    }
}

TEST_CASE("sym_eigen is bit-deterministic") {
    std::mt19937_64 rng(11);
    const SymMatrix m{random_symmetric(rng, 4, 3.0)};
    const SpectralDecomp d1 = sym_eigen(m);
    const SpectralDecomp d2 = sym_eigen(m);
    for (size_t k = 0; k < d1.eigenvalues.size(); ++k) {
        CHECK(d1.eigenvalues[k] == d2.eigenvalues[k]);
    }
    CHECK(d1.eigenvectors.entries() == d2.eigenvectors.entries());
}

TEST_CASE("apply_spectral_fn basics") {
    const SymMatrix sq = apply_spectral_fn(SymMatrix::identity(2), [](double x) { return x * x; });
    CHECK(max_abs_diff(sq.mat(), Matrix::identity(2)) < 1e-14);

    const SymMatrix root = apply_spectral_fn(SymMatrix::diag({4.0, 9.0}),
                                             [](double x) { return std::sqrt(x); });
    CHECK(max_abs_diff(root.mat(), Matrix::diag({2.0, 3.0})) < 1e-12);
}

TEST_CASE("apply_spectral_fn exp preserves eigenvectors") {
    const SymMatrix m(Matrix(2, {2.0, 1.0, 1.0, 2.0}));
    const SymMatrix em = apply_spectral_fn(m, [](double x) { return std::exp(x); });
    const SpectralDecomp d = sym_eigen(em);
    CHECK(d.eigenvalues[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
    CHECK(d.eigenvalues[1] == doctest::Approx(std::exp(3.0)).epsilon(1e-10));
    // Same invariant subspaces: e^m commutes with m.
    CHECK(max_abs_diff(em.mat() * m.mat(), m.mat() * em.mat()) < 1e-10);
}

TEST_CASE("apply_spectral_fn flags non-finite values") {
    CHECK_THROWS_AS(apply_spectral_fn(SymMatrix::diag({-1.0, 1.0}),
                                      [](double x) { return std::sqrt(x); }),
                    NonFiniteError);
}

TEST_CASE("spectral mapping matches direct matrix polynomial") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 40; ++rep) {
        const SymMatrix m{random_symmetric(rng, 3, 10.0 / 3.0)};
        // p(x) = 2 x^3 - x + 0.5
        const SymMatrix via_fn =
            apply_spectral_fn(m, [](double x) { return 2.0 * x * x * x - x + 0.5; });
        const Matrix mm = m.mat();
        Matrix direct = mm * mm * mm * 2.0;
        direct -= mm;
        direct += Matrix::identity(3) * 0.5;
        CHECK(max_abs_diff(via_fn.mat(), direct) <= 1e-8 * (1.0 + direct.max_abs()));
    }
}

TEST_CASE("sym_sqrt on examples") {
    CHECK(max_abs_diff(sym_sqrt(SymMatrix::identity(2)).mat(), Matrix::identity(2)) < 1e-14);
    CHECK(max_abs_diff(sym_sqrt(SymMatrix::diag({4.0, 0.0})).mat(), Matrix::diag({2.0, 0.0})) <
          1e-12);

    // The negated mean-reversion matrix is SPD and must be recovered from its
    // square.
    const Matrix b(2, {-1.0, -0.7, -0.7, -0.7});
    const SymMatrix b2 = SymMatrix::symmetric_part(b * b);
    const SymMatrix neg_b(b * -1.0);
    CHECK(min_eigenvalue(neg_b) > 0.0);
    CHECK(max_abs_diff(sym_sqrt(b2).mat(), neg_b.mat()) < 1e-10);
}

TEST_CASE("sym_sqrt squares back to the input") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 40; ++rep) {
        const SymMatrix m = random_psd(rng, 3, 2.0);
        const SymMatrix root = sym_sqrt(m);
        CHECK(min_eigenvalue(root) >= -tol::kPsd);
        const Matrix sq = root.mat() * root.mat();
        CHECK(max_abs_diff(sq, m.mat()) <= 1e-8 * (1.0 + m.mat().max_abs()));
    }
}

TEST_CASE("sym_sqrt rejects indefinite input") {
    CHECK_THROWS_AS(sym_sqrt(SymMatrix::diag({-1e-6, 1.0})), NotPsdError);
}

TEST_CASE("sinhc_sqrt kernel and scalar cases") {
    const SymMatrix zero(Matrix(2));
    CHECK(max_abs_diff(sinhc_sqrt(zero, 0.7).mat(), Matrix::identity(2) * 0.7) < 1e-14);

    const SymMatrix id = SymMatrix::identity(2);
    CHECK(max_abs_diff(sinhc_sqrt(id, 1.0).mat(), Matrix::identity(2) * std::sinh(1.0)) < 1e-12);

    const SymMatrix m = SymMatrix::diag({4.0, 0.0});
    const SymMatrix s = sinhc_sqrt(m, 1.0);
    CHECK(s(0, 0) == doctest::Approx(std::sinh(2.0) / 2.0).epsilon(1e-12));
    CHECK(s(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sinhc_sqrt agrees with m^{-1/2} sinh(t m^{1/2}) away from the kernel") {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 25; ++rep) {
        SymMatrix m = random_psd(rng, 3, 1.0);
        // Push the spectrum above 1e-4.
        Matrix shifted = m.mat();
        for (int i = 0; i < 3; ++i) shifted(i, i) += 1e-3;
        m = SymMatrix(shifted);
        const double t = 0.3 + 2.0 * (rep % 5) / 5.0;

        const SymMatrix direct = sinhc_sqrt(m, t);
        const SymMatrix root = sym_sqrt(m);
        const SymMatrix sinh_part =
            apply_spectral_fn(root, [t](double s) { return std::sinh(t * s); });
        const SymMatrix inv_root = apply_spectral_fn(root, [](double s) { return 1.0 / s; });
        const Matrix ref = inv_root.mat() * sinh_part.mat();
        CHECK(max_abs_diff(direct.mat(), ref) <= 1e-8 * (1.0 + ref.max_abs()));
    }
}

TEST_CASE("cholesky on examples") {
    CHECK(max_abs_diff(cholesky(SymMatrix::identity(2)), Matrix::identity(2)) < 1e-14);
    CHECK(max_abs_diff(cholesky(SymMatrix::diag({4.0, 9.0})), Matrix::diag({2.0, 3.0})) < 1e-14);

    const Matrix expect(2, {2.0, 0.0, 1.0, 2.0});
    CHECK(max_abs_diff(cholesky(SymMatrix(Matrix(2, {4.0, 2.0, 2.0, 5.0}))), expect) < 1e-12);
}

TEST_CASE("cholesky factors random SPD matrices") {
    std::mt19937_64 rng(59);
    for (int rep = 0; rep < 30; ++rep) {
        Matrix base = random_psd(rng, 4, 1.5).mat();
        for (int i = 0; i < 4; ++i) base(i, i) += 0.5;
        const SymMatrix m(base);
        const Matrix l = cholesky(m);
        for (int i = 0; i < 4; ++i) {
            CHECK(l(i, i) > 0.0);
            for (int j = i + 1; j < 4; ++j) CHECK(l(i, j) == 0.0);
        }
        CHECK(max_abs_diff(l * l.transpose(), m.mat()) <= 1e-9 * (1.0 + m.mat().max_abs()));
    }
}

TEST_CASE("cholesky rejects indefinite input") {
    CHECK_THROWS_AS(cholesky(SymMatrix(Matrix(2, {1.0, 2.0, 2.0, 1.0}))), NotSpdError);
}

TEST_CASE("min_eigenvalue") {
    CHECK(min_eigenvalue(SymMatrix::identity(2)) == doctest::Approx(1.0));
    CHECK(min_eigenvalue(SymMatrix::diag({-3.0, 5.0})) == doctest::Approx(-3.0));
    CHECK(min_eigenvalue(SymMatrix(Matrix(2, {2.0, 1.0, 1.0, 2.0}))) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("det_and_inverse on examples") {
    const DetInverse id = det_and_inverse(Matrix::identity(2));
    CHECK(id.det == doctest::Approx(1.0));
    CHECK(max_abs_diff(id.inverse, Matrix::identity(2)) < 1e-14);

    const DetInverse d = det_and_inverse(Matrix::diag({2.0, 3.0}));
    CHECK(d.det == doctest::Approx(6.0));
    CHECK(max_abs_diff(d.inverse, Matrix::diag({0.5, 1.0 / 3.0})) < 1e-14);

    const DetInverse g = det_and_inverse(Matrix(2, {1.0, 2.0, 3.0, 4.0}));
    CHECK(g.det == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(max_abs_diff(g.inverse, Matrix(2, {-2.0, 1.0, 1.5, -0.5})) < 1e-12);
}

TEST_CASE("det_and_inverse flags singular input") {
    CHECK_THROWS_AS(det_and_inverse(Matrix(2, {1.0, 2.0, 2.0, 4.0})), SingularError);
}

TEST_CASE("det_and_inverse round-trips on random matrices") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 30; ++rep) {
        Matrix m(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = u(rng);
        DetInverse di;
        try {
            di = det_and_inverse(m);
        } catch (const SingularError&) {
            continue;
        }
        CHECK(max_abs_diff(m * di.inverse, Matrix::identity(3)) < 1e-9);
    }
}

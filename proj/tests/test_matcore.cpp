#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "posfactor/error.hpp"
#include "posfactor/matcore.hpp"
#include "posfactor/random.hpp"

using namespace posfactor;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex I1{0.0, 1.0};

Mat unit_det(const Mat& u) {
    const Complex d = oracle::determinant(u);
    return u * std::polar(1.0, -std::arg(d) / static_cast<double>(u.rows()));
}

} // namespace

TEST_CASE("ComplexMatrix validates shape and entries") {
    CHECK_THROWS_AS(ComplexMatrix(Mat(2, 3)), InvalidArgument);
    Mat bad = Mat::Identity(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ComplexMatrix{bad}, InvalidArgument);
    CHECK_THROWS_AS((ComplexMatrix{{1.0, 2.0}, {3.0}}), InvalidArgument);

    const ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
    CHECK(a(1, 0) == Complex(3.0));
    CHECK(a.row_major() == std::vector<Complex>{1.0, 2.0, 3.0, 4.0});
    CHECK((a * ComplexMatrix::identity(2)).mat() == a.mat());
}

TEST_CASE("operator norm agrees with power iteration") {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        const Mat a = random_complex(1 + t % 5, rng);
        CHECK(op_norm(a) == doctest::Approx(oracle::spectral_norm(a)).epsilon(1e-9));
    }
}

TEST_CASE("hermitian_eig: ascending eigenvalues and reconstruction") {
    Rng rng(3);
    for (std::size_t n = 1; n <= 6; ++n) {
        const Mat h = random_hermitian(n, rng);
        const auto sd = hermitian_eig(ComplexMatrix(h));
        for (std::size_t i = 1; i < n; ++i) CHECK(sd.eigenvalues[i - 1].real() <= sd.eigenvalues[i].real());
        CHECK(oracle::frobenius(sd.reconstruct() - h) <= 1e-12 * (1.0 + oracle::frobenius(h)));
        // Product of eigenvalues against cofactor determinant.
        Complex prod = 1.0;
        for (auto l : sd.eigenvalues) prod *= l;
        CHECK(std::abs(prod - oracle::determinant(h)) <= 1e-9 * (1.0 + std::abs(prod)));
    }
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix{{1.0, 1.0}, {0.0, 1.0}}), InvalidArgument);
}

TEST_CASE("normal_eig handles unitaries and rejects non-normal input") {
    Rng rng(5);
    const Mat u = random_unitary(4, rng);
    const auto sd = normal_eig(ComplexMatrix(u));
    CHECK(oracle::frobenius(sd.reconstruct() - u) <= 1e-12);
    for (auto l : sd.eigenvalues) CHECK(std::abs(l) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(normal_eig(ComplexMatrix{{1.0, 1.0}, {0.0, 1.0}}), InvalidArgument);
}

TEST_CASE("polar of [[0,-2],[1,0]]") {
    const auto pp = polar_decompose(ComplexMatrix{{0.0, -2.0}, {1.0, 0.0}});
    const Mat u_expected = ComplexMatrix{{0.0, -1.0}, {1.0, 0.0}}.mat();
    const Mat p_expected = ComplexMatrix::diagonal({1.0, 2.0}).mat();
    CHECK(oracle::frobenius(pp.unitary.mat() - u_expected) <= 1e-12);
    CHECK(oracle::frobenius(pp.positive.mat() - p_expected) <= 1e-12);
}

TEST_CASE("polar decomposition properties") {
    Rng rng(7);
    for (std::size_t n = 1; n <= 6; ++n) {
        const Mat x = random_complex(n, rng);
        const auto pp = polar_decompose(ComplexMatrix(x));
        const Mat& u = pp.unitary.mat();
        const Mat& p = pp.positive.mat();
        CHECK(oracle::frobenius(oracle::multiply(u, p) - x) <= 1e-11 * oracle::frobenius(x));
        CHECK(oracle::frobenius(oracle::multiply(u.adjoint(), u) - Mat::Identity(n, n)) <= 1e-12);
        CHECK(oracle::cholesky_positive(p));
        // p² = x*x.
        CHECK(oracle::frobenius(oracle::multiply(p, p) - oracle::multiply(x.adjoint(), x)) <=
              1e-10 * oracle::frobenius(x) * oracle::frobenius(x));
    }
    CHECK_THROWS_AS(polar_decompose(ComplexMatrix{{1.0, 1.0}, {1.0, 1.0}}), NotInvertible);
}

TEST_CASE("matrix_exp against Taylor series") {
    Rng rng(13);
    for (std::size_t n = 1; n <= 5; ++n) {
        const Mat a = random_complex(n, rng);
        CHECK(oracle::frobenius(matrix_exp(a) - oracle::taylor_exp(a)) <=
              1e-11 * oracle::frobenius(oracle::taylor_exp(a)));
        const Mat h = random_hermitian(n, rng);
        const Mat eh = matrix_exp(h);
        CHECK((eh - eh.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(oracle::cholesky_positive(eh));
        CHECK(oracle::frobenius(eh - oracle::taylor_exp(h)) <= 1e-11 * oracle::frobenius(eh));
    }
}

TEST_CASE("positive_log inverts exp") {
    Rng rng(17);
    const Mat p = random_positive(4, rng, 0.1, 10.0);
    const auto l = positive_log(ComplexMatrix(p));
    CHECK(oracle::frobenius(oracle::taylor_exp(l.mat()) - p) <= 1e-11 * oracle::frobenius(p));
    CHECK_THROWS_AS(positive_log(ComplexMatrix::diagonal({1.0, -1.0})), InvalidArgument);
}

TEST_CASE("traceless log of diag(i, -i)") {
    const auto tl = traceless_unitary_log(ComplexMatrix::diagonal({I1, -I1}));
    const Mat expected = ComplexMatrix::diagonal({0.25, -0.25}).mat();
    CHECK(oracle::frobenius(tl.hermitian.mat() - expected) <= 1e-12);
    int shifted = 0;
    for (int s : tl.branch_shifts) shifted += (s == -1);
    CHECK(shifted == 1);
}

TEST_CASE("traceless log of random det-one unitaries") {
    Rng rng(19);
    for (std::size_t n = 1; n <= 6; ++n) {
        const Mat u = unit_det(random_unitary(n, rng));
        const auto tl = traceless_unitary_log(ComplexMatrix(u));
        const Mat& h = tl.hermitian.mat();
        CHECK(std::abs(h.trace()) <= 1e-10);
        CHECK(oracle::frobenius(h - h.adjoint()) <= 1e-12);
        CHECK(oracle::frobenius(oracle::taylor_exp(Complex(0.0, kTwoPi) * h) - u) <= 1e-10);
    }
    CHECK_THROWS_AS(traceless_unitary_log(ComplexMatrix::diagonal({I1, I1})), DeterminantObstruction);
    CHECK_THROWS_AS(traceless_unitary_log(ComplexMatrix{{1.0, 1.0}, {0.0, 1.0}}), InvalidArgument);
}

TEST_CASE("block decomposition of [[0,1],[1,1]] at k = 1") {
    const auto bf = block_invertible_decomposition(ComplexMatrix{{0.0, 1.0}, {1.0, 1.0}}, 1);
    CHECK(bf.middle(0, 0) == Complex(-1.0)); // a − b·d⁻¹·c = 0 − 1
    CHECK(bf.middle(1, 1) == Complex(1.0));
    CHECK(oracle::frobenius(bf.upper.mat() - ComplexMatrix{{1.0, 1.0}, {0.0, 1.0}}.mat()) == 0.0);
    CHECK(oracle::frobenius(bf.lower.mat() - ComplexMatrix{{1.0, 0.0}, {1.0, 1.0}}.mat()) == 0.0);
}

TEST_CASE("block decomposition reconstructs and validates") {
    Rng rng(23);
    for (std::size_t n = 2; n <= 6; ++n) {
        for (std::size_t k = 1; k < n; ++k) {
            const Mat x = random_complex(n, rng);
            const auto bf = block_invertible_decomposition(ComplexMatrix(x), k);
            const Mat prod = oracle::product({bf.upper.mat(), bf.middle.mat(), bf.lower.mat()},
                                             static_cast<Eigen::Index>(n));
            CHECK(oracle::frobenius(prod - x) <= 1e-10 * oracle::frobenius(x));
            // Triangular factors are unipotent.
            CHECK(std::abs(oracle::determinant(bf.upper.mat()) - 1.0) <= 1e-12);
            CHECK(std::abs(oracle::determinant(bf.lower.mat()) - 1.0) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(block_invertible_decomposition(ComplexMatrix::diagonal({1.0, 0.0}), 1),
                    BlockNotInvertible);
    CHECK_THROWS_AS(block_invertible_decomposition(ComplexMatrix::identity(3), 0), InvalidArgument);
    CHECK_THROWS_AS(block_invertible_decomposition(ComplexMatrix::identity(3), 3), InvalidArgument);
}

TEST_CASE("approximate_invertible") {
    const auto z = approximate_invertible(ComplexMatrix::zero(2), 0.1);
    CHECK(oracle::frobenius(z.mat() - 0.05 * Mat::Identity(2, 2)) <= 1e-15);

    const ComplexMatrix inv{{2.0, 1.0}, {0.0, 1.0}};
    CHECK(approximate_invertible(inv, 0.1).mat() == inv.mat());

    const ComplexMatrix sing{{1.0, 2.0}, {2.0, 4.0}};
    const auto fixed = approximate_invertible(sing, 1e-3);
    CHECK(oracle::spectral_norm(fixed.mat() - sing.mat()) <= 1e-3);
    CHECK(std::abs(oracle::determinant(fixed.mat())) > 0.0);
    CHECK_THROWS_AS(approximate_invertible(sing, 0.0), InvalidArgument);
}

TEST_CASE("complex_determinant agrees with cofactor expansion") {
    Rng rng(29);
    for (std::size_t n = 1; n <= 6; ++n) {
        const Mat a = random_complex(n, rng);
        const Complex d = oracle::determinant(a);
        CHECK(std::abs(complex_determinant(a) - d) <= 1e-11 * (1.0 + std::abs(d)));
    }
}

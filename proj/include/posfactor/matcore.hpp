#pragma once

#include <cstddef>
#include <vector>

#include "posfactor/complex_matrix.hpp"

namespace posfactor {

/// Eigenvalues with an orthonormal eigenbasis (columns of `eigenvectors`).
struct SpectralDecomposition {
    std::vector<Complex> eigenvalues;
    ComplexMatrix eigenvectors;

    /// U·diag(λ)·U*.
    Mat reconstruct() const;
};

struct PolarParts {
    ComplexMatrix unitary;
    ComplexMatrix positive;
};

/// Hermitian `hermitian` with exp(2πi·hermitian) equal to the input unitary.
struct TracelessLog {
    ComplexMatrix hermitian;
    /// Per eigenvector: -1 where its phase in [0,1) was moved down by one.
    std::vector<int> branch_shifts;
};

struct BlockFactors {
    ComplexMatrix upper;    // [[1, b·d⁻¹], [0, 1]]
    ComplexMatrix middle;   // diag(a - b·d⁻¹·c, d)
    ComplexMatrix lower;    // [[1, 0], [d⁻¹·c, 1]]
};

/// Real eigenvalues in ascending order.
SpectralDecomposition hermitian_eig(const ComplexMatrix& h);

/// Eigendecomposition of a normal matrix (unitary, Hermitian, ...) through the
/// complex Schur form, whose triangular factor is diagonal for normal input.
/// Eigenvalues are returned in Schur order.
SpectralDecomposition normal_eig(const ComplexMatrix& a);

PolarParts polar_decompose(const ComplexMatrix& x);

/// Matrix exponential. Hermitian input takes the spectral route so the result
/// is exactly Hermitian and positive definite.
ComplexMatrix matrix_exp(const ComplexMatrix& a);
Mat matrix_exp(const Mat& a);

/// Hermitian logarithm of a positive definite matrix.
ComplexMatrix positive_log(const ComplexMatrix& p);

/// Phases are taken in [0,1); the k largest (k = their integer sum, ties by
/// lowest index) are moved down by one so the logarithm is traceless.
TracelessLog traceless_unitary_log(const ComplexMatrix& u);

/// Splits x into lower-right block d of size k and the complementary (n-k)
/// block a, and returns the triangular·diagonal·triangular factorization
/// through the Schur complement of d.
BlockFactors block_invertible_decomposition(const ComplexMatrix& x, std::size_t k);

/// Invertible matrix within `eps` of x. Invertible x is returned unchanged;
/// otherwise singular values below eps/2 are raised to eps/2.
ComplexMatrix approximate_invertible(const ComplexMatrix& x, double eps);

Complex complex_determinant(const Mat& a);

} // namespace posfactor

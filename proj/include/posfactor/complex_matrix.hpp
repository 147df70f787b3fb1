#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace posfactor {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

/// Dense square complex matrix with finite entries.
///
/// Thin validated wrapper over Eigen::MatrixXcd: construction rejects
/// non-square shapes and NaN/inf entries, afterwards the value is immutable.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(Mat m);

    /// Row-major construction, `rows.size()` must equal the row length.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix from_row_major(std::size_t n, std::span<const Complex> entries);
    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t n);
    static ComplexMatrix diagonal(std::span<const Complex> diag);
    static ComplexMatrix diagonal(std::initializer_list<Complex> diag);

    std::size_t n() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    const Mat& mat() const noexcept { return m_; }
    Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    std::vector<Complex> row_major() const;

    ComplexMatrix adjoint() const { return ComplexMatrix(Mat(m_.adjoint())); }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

  private:
    Mat m_;
};

// Norms and structural predicates on raw Eigen matrices.

/// Largest singular value.
double op_norm(const Mat& a);
inline double op_norm(const ComplexMatrix& a) { return op_norm(a.mat()); }

/// Smallest singular value.
double min_singular_value(const Mat& a);

Mat hermitian_part(const Mat& a);
Mat commutator(const Mat& a, const Mat& b);

bool is_hermitian(const Mat& a, double rel_tol);
bool is_unitary(const Mat& a, double tol);

/// Block-diagonal matrix with the given blocks along the diagonal.
Mat block_diagonal(std::span<const Mat> blocks);

/// Ordered product a₀·a₁·…; identity of size n for an empty list.
Mat ordered_product(std::span<const ComplexMatrix> factors, std::size_t n);

} // namespace posfactor

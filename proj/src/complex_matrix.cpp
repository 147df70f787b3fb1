#include "posfactor/complex_matrix.hpp"

#include <cmath>
#include <string>

#include "posfactor/error.hpp"

namespace posfactor {

namespace {

void validate(const Mat& m) {
    if (m.rows() != m.cols()) {
        throw InvalidArgument("matrix is not square: " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()));
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
                throw InvalidArgument("matrix has a non-finite entry");
            }
        }
    }
}

} // namespace

ComplexMatrix::ComplexMatrix(Mat m) : m_(std::move(m)) { validate(m_); }

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    m_.resize(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != n) {
            throw InvalidArgument("matrix is not square");
        }
        Eigen::Index j = 0;
        for (const auto& v : row) m_(i, j++) = v;
        ++i;
    }
    validate(m_);
}

ComplexMatrix ComplexMatrix::from_row_major(std::size_t n, std::span<const Complex> entries) {
    if (entries.size() != n * n) {
        throw InvalidArgument("expected " + std::to_string(n * n) + " entries, got " +
                              std::to_string(entries.size()));
    }
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = entries[i * n + j];
    }
    return ComplexMatrix(std::move(m));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    return ComplexMatrix(Mat::Identity(n, n));
}

ComplexMatrix ComplexMatrix::zero(std::size_t n) { return ComplexMatrix(Mat::Zero(n, n)); }

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    Mat m = Mat::Zero(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return ComplexMatrix(std::move(m));
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<Complex> diag) {
    return diagonal(std::span<const Complex>(diag.begin(), diag.size()));
}

std::vector<Complex> ComplexMatrix::row_major() const {
    std::vector<Complex> out;
    out.reserve(n() * n());
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
        for (Eigen::Index j = 0; j < m_.cols(); ++j) out.push_back(m_(i, j));
    }
    return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    return ComplexMatrix(Mat(a.m_ * b.m_));
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    return ComplexMatrix(Mat(a.m_ + b.m_));
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    return ComplexMatrix(Mat(a.m_ - b.m_));
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) { return ComplexMatrix(Mat(s * a.m_)); }

double op_norm(const Mat& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues()(0);
}

double min_singular_value(const Mat& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

Mat hermitian_part(const Mat& a) { return (a + a.adjoint()) / 2.0; }

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

bool is_hermitian(const Mat& a, double rel_tol) {
    return op_norm(a - a.adjoint()) <= rel_tol * op_norm(a);
}

bool is_unitary(const Mat& a, double tol) {
    return op_norm(a.adjoint() * a - Mat::Identity(a.rows(), a.cols())) <= tol;
}

Mat block_diagonal(std::span<const Mat> blocks) {
    Eigen::Index n = 0;
    for (const auto& b : blocks) n += b.rows();
    Mat out = Mat::Zero(n, n);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        out.block(at, at, b.rows(), b.cols()) = b;
        at += b.rows();
    }
    return out;
}

Mat ordered_product(std::span<const ComplexMatrix> factors, std::size_t n) {
    Mat acc = Mat::Identity(n, n);
    for (const auto& f : factors) acc = acc * f.mat();
    return acc;
}

} // namespace posfactor

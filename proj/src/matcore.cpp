#include "posfactor/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "posfactor/error.hpp"
#include "posfactor/tolerances.hpp"

namespace posfactor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Cheap entrywise test used to route exp/log through the spectral path.
bool exactly_hermitian(const Mat& a) {
    const double scale = a.cwiseAbs().maxCoeff();
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

Mat spectral_apply(const Eigen::SelfAdjointEigenSolver<Mat>& es, double (*f)(double)) {
    const Eigen::VectorXd mapped = es.eigenvalues().unaryExpr(f);
    Mat out = es.eigenvectors() * mapped.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    return hermitian_part(out);
}

void require_hermitian(const Mat& h, const char* what) {
    if (!is_hermitian(h, tolerances().hermitian)) {
        throw InvalidArgument(std::string(what) + ": input is not Hermitian");
    }
}

} // namespace

Mat SpectralDecomposition::reconstruct() const {
    Eigen::VectorXcd d(eigenvalues.size());
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) d(i) = eigenvalues[i];
    const Mat& u = eigenvectors.mat();
    return u * d.asDiagonal() * u.adjoint();
}

SpectralDecomposition hermitian_eig(const ComplexMatrix& h) {
    require_hermitian(h.mat(), "hermitian_eig");
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h.mat()));
    if (es.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver did not converge");

    SpectralDecomposition out{{}, ComplexMatrix(es.eigenvectors())};
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        out.eigenvalues.emplace_back(es.eigenvalues()(i), 0.0);
    }
    return out;
}

SpectralDecomposition normal_eig(const ComplexMatrix& a) {
    Eigen::ComplexSchur<Mat> schur(a.mat());
    if (schur.info() != Eigen::Success) throw Error("normal_eig: Schur iteration did not converge");

    const Mat& t = schur.matrixT();
    const double off = t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
    if (off > 1e-8 * std::max(1.0, t.norm())) {
        throw InvalidArgument("normal_eig: input is not normal");
    }
    SpectralDecomposition out{{}, ComplexMatrix(schur.matrixU())};
    for (Eigen::Index i = 0; i < t.rows(); ++i) out.eigenvalues.push_back(t(i, i));
    return out;
}

PolarParts polar_decompose(const ComplexMatrix& x) {
    Eigen::JacobiSVD<Mat> svd(x.mat(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    if (s.size() == 0 || !(s(s.size() - 1) > tolerances().positivity * s(0))) {
        throw NotInvertible("polar_decompose: matrix is singular");
    }
    const Mat& w = svd.matrixU();
    const Mat& v = svd.matrixV();
    Mat u = w * v.adjoint();
    Mat p = hermitian_part(v * s.cast<Complex>().asDiagonal() * v.adjoint());
    return {ComplexMatrix(std::move(u)), ComplexMatrix(std::move(p))};
}

Mat matrix_exp(const Mat& a) {
    if (a.size() == 0) return a;
    if (exactly_hermitian(a)) {
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(a));
        return spectral_apply(es, [](double v) { return std::exp(v); });
    }
    return a.exp();
}

ComplexMatrix matrix_exp(const ComplexMatrix& a) { return ComplexMatrix(matrix_exp(a.mat())); }

ComplexMatrix positive_log(const ComplexMatrix& p) {
    require_hermitian(p.mat(), "positive_log");
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(p.mat()));
    const auto& ev = es.eigenvalues();
    if (ev.size() == 0) return p;
    const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    if (!(ev(0) > tolerances().positivity * scale)) {
        throw InvalidArgument("positive_log: input is not positive definite");
    }
    return ComplexMatrix(spectral_apply(es, [](double v) { return std::log(v); }));
}

TracelessLog traceless_unitary_log(const ComplexMatrix& u) {
    const auto& tol = tolerances();
    const std::size_t n = u.n();
    if (!is_unitary(u.mat(), tol.unitary)) {
        throw InvalidArgument("traceless_unitary_log: input is not unitary");
    }
    const Complex det = complex_determinant(u.mat());
    if (std::abs(det - 1.0) > tol.determinant) {
        throw DeterminantObstruction("traceless_unitary_log: det u = (" +
                                     std::to_string(det.real()) + ", " +
                                     std::to_string(det.imag()) + ") is not 1");
    }

    const SpectralDecomposition spec = normal_eig(u);
    std::vector<double> phase(n);
    for (std::size_t j = 0; j < n; ++j) {
        double t = std::arg(spec.eigenvalues[j]) / kTwoPi;
        if (t < 0.0) t += 1.0;
        if (t >= 1.0) t = 0.0;
        phase[j] = t;
    }
    const double total = std::accumulate(phase.begin(), phase.end(), 0.0);
    const auto shifts = static_cast<std::size_t>(std::llround(total));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return phase[a] > phase[b]; });

    TracelessLog out{ComplexMatrix::zero(n), std::vector<int>(n, 0)};
    for (std::size_t r = 0; r < shifts && r < n; ++r) {
        phase[order[r]] -= 1.0;
        out.branch_shifts[order[r]] = -1;
    }

    Eigen::VectorXd d(n);
    for (std::size_t j = 0; j < n; ++j) d(j) = phase[j];
    const Mat& q = spec.eigenvectors.mat();
    out.hermitian = ComplexMatrix(hermitian_part(q * d.cast<Complex>().asDiagonal() * q.adjoint()));
    return out;
}

BlockFactors block_invertible_decomposition(const ComplexMatrix& x, std::size_t k) {
    const std::size_t n = x.n();
    if (k == 0 || k >= n) {
        throw InvalidArgument("block_invertible_decomposition: block size must satisfy 0 < k < n");
    }
    const std::size_t r = n - k;
    const Mat& m = x.mat();
    const Mat a = m.topLeftCorner(r, r);
    const Mat b = m.topRightCorner(r, k);
    const Mat c = m.bottomLeftCorner(k, r);
    const Mat d = m.bottomRightCorner(k, k);

    if (!(min_singular_value(d) > tolerances().positivity * op_norm(m))) {
        throw BlockNotInvertible("block_invertible_decomposition: lower-right block is singular");
    }
    const Mat dinv = Eigen::PartialPivLU<Mat>(d).inverse();
    const Mat b_dinv = b * dinv;
    const Mat dinv_c = dinv * c;

    Mat upper = Mat::Identity(n, n);
    upper.topRightCorner(r, k) = b_dinv;
    Mat middle = Mat::Zero(n, n);
    middle.topLeftCorner(r, r) = a - b_dinv * c;
    middle.bottomRightCorner(k, k) = d;
    Mat lower = Mat::Identity(n, n);
    lower.bottomLeftCorner(k, r) = dinv_c;
    return {ComplexMatrix(std::move(upper)), ComplexMatrix(std::move(middle)),
            ComplexMatrix(std::move(lower))};
}

ComplexMatrix approximate_invertible(const ComplexMatrix& x, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("approximate_invertible: eps must be positive");
    Eigen::JacobiSVD<Mat> svd(x.mat(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd s = svd.singularValues();
    if (s.size() == 0) return x;
    if (s(0) > 0.0 && s(s.size() - 1) > tolerances().positivity * s(0)) return x;

    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::max(s(i), eps / 2.0);
    return ComplexMatrix(Mat(svd.matrixU() * s.cast<Complex>().asDiagonal() *
                             svd.matrixV().adjoint()));
}

Complex complex_determinant(const Mat& a) {
    if (a.size() == 0) return 1.0;
    return Eigen::PartialPivLU<Mat>(a).determinant();
}

} // namespace posfactor

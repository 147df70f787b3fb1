#include "posfactor/random.hpp"

#include <cmath>
#include <numbers>

namespace posfactor {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Mat random_complex(std::size_t n, Rng& rng) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
    }
    return m;
}

Mat random_hermitian(std::size_t n, Rng& rng) { return hermitian_part(random_complex(n, rng)); }

Mat random_unitary(std::size_t n, Rng& rng) {
    const Mat g = random_complex(n, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t j = 0; j < n; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

Mat random_positive(std::size_t n, Rng& rng, double lo, double hi) {
    const Mat u = random_unitary(n, rng);
    Eigen::VectorXcd d(n);
    for (std::size_t i = 0; i < n; ++i) d(i) = rng.uniform(lo, hi);
    return hermitian_part(u * d.asDiagonal() * u.adjoint());
}

Mat unit_norm(const Mat& a) {
    const double s = op_norm(a);
    return s > 0.0 ? Mat(a / s) : a;
}

} // namespace posfactor

#include "posfactor/factorlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "posfactor/error.hpp"
#include "posfactor/tolerances.hpp"

namespace posfactor {

namespace {

using Index = Eigen::Index;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI{0.0, 1.0};

Mat identity(Index n) { return Mat::Identity(n, n); }

double phase_in_unit_interval(Complex z) {
    double t = std::arg(z) / kTwoPi;
    if (t < 0.0) t += 1.0;
    if (t >= 1.0) t = 0.0;
    return t;
}

PositiveFactorization make_factorization(ComplexMatrix target, std::vector<ComplexMatrix> factors,
                                         std::string method, FactorizationSchedule schedule) {
    PositiveFactorization out{std::move(target), std::move(factors), 0.0, std::move(method),
                              schedule};
    out.error = out.recompute_error();
    return out;
}

// Unitary similarity g (identity outside the (i, j) plane) such that the new
// i-th diagonal entry of g*·c·g is c_ii + s·(c_jj − c_ii), 0 ≤ s ≤ 1.
//
// The compression of c to span{e_i, e_j} sends v = (cos t, e^{iφ} sin t) to
// c_ii + sin²t·δ + sin t cos t·g(φ) with δ = c_jj − c_ii and
// g(φ) = e^{iφ}c_ij + e^{−iφ}c_ji. φ is chosen with g(φ) ∥ δ, which leaves a
// real equation in t solved by bisection.
void rotate_diagonal(Mat& c, Mat& q, Index i, Index j, double s) {
    const Complex delta = c(j, j) - c(i, i);
    const double len = std::abs(delta);
    if (len == 0.0 || s <= 0.0) return;
    const Complex w = delta / len;

    const Complex a = c(i, j) * std::conj(w);
    const Complex b = c(j, i) * std::conj(w);
    const double p = a.imag() + b.imag();
    const double r0 = a.real() - b.real();
    const double phi = (p == 0.0 && r0 == 0.0) ? 0.0 : std::atan2(-p, r0);
    const Complex g = std::polar(1.0, phi) * c(i, j) + std::polar(1.0, -phi) * c(j, i);
    const double r = (g * std::conj(w)).real() / len;

    const auto f = [&](double theta) {
        return 0.5 * (1.0 - std::cos(theta) + r * std::sin(theta)) - s;
    };
    double lo = 0.0;
    double hi = std::numbers::pi;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    const double t = 0.25 * (lo + hi);

    Mat rot = identity(c.rows());
    const Complex e = std::polar(1.0, phi);
    rot(i, i) = std::cos(t);
    rot(j, i) = e * std::sin(t);
    rot(i, j) = -std::sin(t);
    rot(j, j) = e * std::cos(t);
    c = (rot.adjoint() * c * rot).eval();
    q = (q * rot).eval();
}

void swap_basis(Mat& c, Mat& q, Index i, Index k) {
    if (i == k) return;
    c.row(i).swap(c.row(k));
    c.col(i).swap(c.col(k));
    q.col(i).swap(q.col(k));
}

// Picks i maximizing |key(d_i)| and j of opposite sign maximizing |key(d_j)|.
template <typename Key>
bool opposite_pair(const Mat& c, Index from, double tiny, Key key, Index& i, Index& j) {
    i = -1;
    for (Index r = from; r < c.rows(); ++r) {
        if (std::abs(key(c(r, r))) > tiny && (i < 0 || std::abs(key(c(r, r))) > std::abs(key(c(i, i))))) {
            i = r;
        }
    }
    if (i < 0) return false;
    j = -1;
    const double sign = key(c(i, i)) > 0.0 ? 1.0 : -1.0;
    for (Index r = from; r < c.rows(); ++r) {
        if (sign * key(c(r, r)) < 0.0 && (j < 0 || std::abs(key(c(r, r))) > std::abs(key(c(j, j))))) {
            j = r;
        }
    }
    return j >= 0;
}

// Unitary q with q*·c·q of (numerically) zero diagonal, for traceless c.
// Each step first makes the trailing diagonal real by pairing entries with
// imaginary parts of opposite sign, then pairs opposite real parts to land
// one entry on zero and moves it to the front.
Mat zero_diagonal_frame(const Mat& c, Mat& reduced) {
    const Index n = c.rows();
    reduced = c;
    Mat q = identity(n);
    const double tiny = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n) *
                        std::max(c.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const auto im = [](Complex z) { return z.imag(); };
    const auto re = [](Complex z) { return z.real(); };

    for (Index k = 0; k + 1 < n; ++k) {
        Index i = 0;
        Index j = 0;
        for (Index it = 0; it < 2 * n && opposite_pair(reduced, k, tiny, im, i, j); ++it) {
            const double di = reduced(i, i).imag();
            rotate_diagonal(reduced, q, i, j, di / (di - reduced(j, j).imag()));
        }
        if (opposite_pair(reduced, k, tiny, re, i, j)) {
            const double di = reduced(i, i).real();
            rotate_diagonal(reduced, q, i, j, di / (di - reduced(j, j).real()));
        } else {
            i = k;
            for (Index r = k; r < n; ++r) {
                if (std::abs(reduced(r, r)) < std::abs(reduced(i, i))) i = r;
            }
        }
        swap_basis(reduced, q, i, k);
    }
    return q;
}

PositiveFactorization factor_unitary(const ComplexMatrix& u, const FactorizationSchedule& schedule,
                                     std::size_t extra_factors) {
    schedule.validate();
    const auto& tol = tolerances();
    const Index n = static_cast<Index>(u.n());
    if (!is_unitary(u.mat(), tol.unitary)) {
        throw InvalidArgument("unitary_to_positive_factors: input is not unitary");
    }
    const Complex det = complex_determinant(u.mat());
    if (std::abs(det - 1.0) > tol.determinant) {
        throw DeterminantObstruction("unitary_to_positive_factors: det u is not 1");
    }
    if (op_norm(u.mat() - identity(n)) <= tol.positivity) {
        return make_factorization(u, {ComplexMatrix::identity(u.n())}, "commutator-pipeline",
                                  schedule);
    }

    const TracelessLog log = traceless_unitary_log(u);
    const ComplexMatrix c((kTwoPi * kI) * log.hermitian.mat());
    const CommutatorDecomposition shoda = shoda_commutator(c);

    // [x − τ·1, y] = [x, y] and [s·x, y/s] = [x, y]; center x and balance norms.
    Mat x = shoda.pairs.front().x.mat();
    Mat y = shoda.pairs.front().y.mat();
    x -= (x.trace() / static_cast<double>(n)) * identity(n);
    const double nx = op_norm(x);
    const double ny = op_norm(y);
    if (nx > 0.0 && ny > 0.0) {
        const double s = std::sqrt(ny / nx);
        x *= s;
        y /= s;
    }

    const CommutatorDecomposition split = hermitian_pair_split(ComplexMatrix(x), ComplexMatrix(y));
    const double y_scale = op_norm(y);
    const double root_t = std::sqrt(static_cast<double>(schedule.trotter_steps));
    std::vector<CommutatorPair> effective;
    for (const auto& pair : split.pairs) {
        if (op_norm(pair.y.mat()) > 1e-14 * y_scale) {
            effective.push_back({ComplexMatrix(Mat(pair.x.mat() / root_t)),
                                 ComplexMatrix(Mat(pair.y.mat() / root_t))});
        }
    }

    const std::size_t predicted =
        schedule.predicted_factor_count(effective.size()) - 1 + extra_factors;
    if (predicted > schedule.max_factors) {
        throw BudgetExceeded("unitary_to_positive_factors: schedule needs " +
                                 std::to_string(predicted) + " factors, budget is " +
                                 std::to_string(schedule.max_factors),
                             predicted, schedule.max_factors);
    }

    // Trotter rounds Π_k exp([x_k, y_k] / T), each realized by commutator blocks.
    // Odd rounds use (−x_k, −y_k): the commutator is unchanged while the leading
    // cubic error term of the block formula flips sign, so consecutive rounds cancel it.
    std::vector<ComplexMatrix> even_round;
    std::vector<ComplexMatrix> odd_round;
    for (const auto& pair : effective) {
        const auto plus = commutator_exp_factors(pair.x, pair.y, schedule.commutator_steps);
        const auto minus = commutator_exp_factors(ComplexMatrix(Mat(-pair.x.mat())),
                                                  ComplexMatrix(Mat(-pair.y.mat())),
                                                  schedule.commutator_steps);
        even_round.insert(even_round.end(), plus.factors.begin(), plus.factors.end());
        odd_round.insert(odd_round.end(), minus.factors.begin(), minus.factors.end());
    }
    std::vector<ComplexMatrix> factors;
    factors.reserve(even_round.size() * static_cast<std::size_t>(schedule.trotter_steps) +
                    extra_factors);
    for (int t = 0; t < schedule.trotter_steps; ++t) {
        const auto& round = t % 2 == 0 ? even_round : odd_round;
        factors.insert(factors.end(), round.begin(), round.end());
    }
    return make_factorization(u, std::move(factors), "commutator-pipeline", schedule);
}

} // namespace

std::size_t FactorizationSchedule::predicted_factor_count(std::size_t pairs) const {
    const auto t = static_cast<std::size_t>(trotter_steps);
    const auto c = static_cast<std::size_t>(commutator_steps);
    return t * pairs * 3 * c * c + 1;
}

void FactorizationSchedule::validate() const {
    if (trotter_steps < 1 || commutator_steps < 1) {
        throw InvalidArgument("schedule steps must be at least 1");
    }
}

Mat PositiveFactorization::product() const { return ordered_product(factors, target.n()); }

double PositiveFactorization::recompute_error() const { return op_norm(target.mat() - product()); }

Mat CommutatorDecomposition::commutator_sum(std::size_t n) const {
    Mat acc = Mat::Zero(n, n);
    for (const auto& p : pairs) acc += commutator(p.x.mat(), p.y.mat());
    return acc;
}

Complex TorusCorrection::zeta() const { return std::polar(1.0, kTwoPi / m); }

std::vector<Complex> TorusCorrection::corrected() const {
    std::vector<Complex> out(lambdas.size());
    for (std::size_t j = 0; j < lambdas.size(); ++j) out[j] = lambdas[j] / mus[j];
    return out;
}

PositiveFactorization two_positive_split(const ComplexMatrix& x, const ComplexMatrix& similarity,
                                         std::span<const double> diagonal) {
    const std::size_t n = x.n();
    if (similarity.n() != n || diagonal.size() != n) {
        throw InvalidArgument("two_positive_split: dimension mismatch");
    }
    for (double d : diagonal) {
        if (!(d > 0.0)) throw InvalidArgument("two_positive_split: diagonal must be positive");
    }
    const Mat& s = similarity.mat();
    if (!(min_singular_value(s) > tolerances().positivity * op_norm(s))) {
        throw NotInvertible("two_positive_split: similarity is singular");
    }
    Eigen::VectorXcd d(n);
    for (std::size_t i = 0; i < n; ++i) d(i) = diagonal[i];

    const Mat s_inv = Eigen::PartialPivLU<Mat>(s).inverse();
    const Mat witness = s * d.asDiagonal() * s_inv;
    const double scale = op_norm(s) * d.cwiseAbs().maxCoeff() * op_norm(s_inv);
    if (op_norm(witness - x.mat()) > tolerances().reconstruction * scale) {
        throw InvalidArgument("two_positive_split: witness S·D·S⁻¹ does not reproduce x");
    }
    Mat first = hermitian_part(s * s.adjoint());
    Mat second = hermitian_part(s_inv.adjoint() * d.asDiagonal() * s_inv);
    FactorizationSchedule schedule{1, 1, 2};
    return make_factorization(x, {ComplexMatrix(std::move(first)), ComplexMatrix(std::move(second))},
                              "two-positive-split", schedule);
}

PositiveFactorization conjugate_positive_as_two(const ComplexMatrix& v, const ComplexMatrix& p) {
    if (v.n() != p.n()) throw InvalidArgument("conjugate_positive_as_two: dimension mismatch");
    if (!is_hermitian(p.mat(), tolerances().hermitian)) {
        throw InvalidArgument("conjugate_positive_as_two: p is not Hermitian");
    }
    if (hermitian_eig(p).eigenvalues.front().real() <= tolerances().positivity * op_norm(p)) {
        throw InvalidArgument("conjugate_positive_as_two: p is not positive definite");
    }
    const PolarParts polar = polar_decompose(v);
    const Mat& u = polar.unitary.mat();
    const Mat& q = polar.positive.mat();
    const Mat q_inv = Eigen::PartialPivLU<Mat>(q).inverse();

    Mat first = hermitian_part(u * (q * p.mat() * q) * u.adjoint());
    Mat second = hermitian_part(u * (q_inv * q_inv) * u.adjoint());
    const Mat target = v.mat() * p.mat() * Eigen::PartialPivLU<Mat>(v.mat()).inverse();
    FactorizationSchedule schedule{1, 1, 2};
    return make_factorization(ComplexMatrix(target),
                              {ComplexMatrix(std::move(first)), ComplexMatrix(std::move(second))},
                              "conjugate-positive", schedule);
}

std::vector<ComplexMatrix> trotter_factors(const ComplexMatrix& a, const ComplexMatrix& b, int n) {
    if (n < 1) throw InvalidArgument("trotter_factors: n must be at least 1");
    if (a.n() != b.n()) throw InvalidArgument("trotter_factors: dimension mismatch");
    const ComplexMatrix ea = matrix_exp(ComplexMatrix(Mat(a.mat() / static_cast<double>(n))));
    const ComplexMatrix eb = matrix_exp(ComplexMatrix(Mat(b.mat() / static_cast<double>(n))));
    std::vector<ComplexMatrix> out;
    out.reserve(2 * static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out.push_back(ea);
        out.push_back(eb);
    }
    return out;
}

PositiveFactorization commutator_exp_factors(const ComplexMatrix& a, const ComplexMatrix& b, int n) {
    if (n < 1) throw InvalidArgument("commutator_exp_factors: n must be at least 1");
    if (a.n() != b.n()) throw InvalidArgument("commutator_exp_factors: dimension mismatch");
    if (!is_hermitian(b.mat(), tolerances().hermitian)) {
        throw InvalidArgument("commutator_exp_factors: b is not Hermitian");
    }
    const double steps = static_cast<double>(n);
    const Mat bh = hermitian_part(b.mat());

    // (v·e^{−b/n}·v⁻¹)·e^{b/n} with v = e^{−a/n}; the conjugate splits into two positives.
    const ComplexMatrix v = matrix_exp(ComplexMatrix(Mat(-a.mat() / steps)));
    const ComplexMatrix shrink = matrix_exp(ComplexMatrix(Mat(-bh / steps)));
    const ComplexMatrix grow = matrix_exp(ComplexMatrix(Mat(bh / steps)));
    const PositiveFactorization conj = conjugate_positive_as_two(v, shrink);

    const std::size_t blocks = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    std::vector<ComplexMatrix> factors;
    factors.reserve(3 * blocks);
    for (std::size_t k = 0; k < blocks; ++k) {
        factors.push_back(conj.factors[0]);
        factors.push_back(conj.factors[1]);
        factors.push_back(grow);
    }
    const ComplexMatrix target = matrix_exp(ComplexMatrix(commutator(a.mat(), bh)));
    FactorizationSchedule schedule{1, n, 3 * blocks};
    return make_factorization(target, std::move(factors), "commutator-exp", schedule);
}

CommutatorDecomposition shoda_commutator(const ComplexMatrix& c) {
    const Mat& cm = c.mat();
    const Index n = cm.rows();
    if (std::abs(cm.trace()) > tolerances().hermitian * op_norm(cm)) {
        throw TraceObstruction("shoda_commutator: trace is nonzero");
    }
    Mat reduced;
    const Mat q = zero_diagonal_frame(cm, reduced);

    Mat xd = Mat::Zero(n, n);
    Mat yd = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        xd(i, i) = static_cast<double>(i + 1);
        for (Index j = 0; j < n; ++j) {
            if (i != j) yd(i, j) = reduced(i, j) / static_cast<double>(i - j);
        }
    }
    CommutatorDecomposition out;
    out.pairs.push_back({ComplexMatrix(hermitian_part(q * xd * q.adjoint())),
                         ComplexMatrix(Mat(q * yd * q.adjoint()))});
    out.residual = op_norm(out.commutator_sum(c.n()) - cm);
    return out;
}

CommutatorDecomposition hermitian_pair_split(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.n() != y.n()) throw InvalidArgument("hermitian_pair_split: dimension mismatch");
    const Mat& ym = y.mat();
    Mat y1 = (ym + ym.adjoint()) / 2.0;
    Mat y2 = (ym - ym.adjoint()) / (2.0 * kI);
    CommutatorDecomposition out;
    out.pairs.push_back({x, ComplexMatrix(std::move(y1))});
    out.pairs.push_back({ComplexMatrix(Mat(kI * x.mat())), ComplexMatrix(std::move(y2))});
    out.residual = op_norm(out.commutator_sum(x.n()) - commutator(x.mat(), ym));
    return out;
}

CommutatorDecomposition zero_diagonal_commutators(const ComplexMatrix& a, std::size_t block_size) {
    const std::size_t dim = a.n();
    if (block_size == 0 || dim % block_size != 0) {
        throw InvalidArgument("zero_diagonal_commutators: block size must divide the dimension");
    }
    const auto k = static_cast<Index>(block_size);
    const auto blocks = static_cast<Index>(dim / block_size);
    const Mat& am = a.mat();
    const double scale = am.cwiseAbs().maxCoeff();
    for (Index i = 0; i < blocks; ++i) {
        if (am.block(i * k, i * k, k, k).cwiseAbs().maxCoeff() > tolerances().positivity * scale) {
            throw InvalidArgument("zero_diagonal_commutators: diagonal block " + std::to_string(i) +
                                  " is nonzero");
        }
    }

    CommutatorDecomposition out;
    for (Index i = 0; i < blocks; ++i) {
        for (Index j = 0; j < blocks; ++j) {
            if (i == j) continue;
            const auto block = am.block(i * k, j * k, k, k);
            if (block.cwiseAbs().maxCoeff() == 0.0) continue;
            Mat x = Mat::Zero(dim, dim);
            x.block(i * k, j * k, k, k) = block;
            Mat y = Mat::Zero(dim, dim);
            y.block(j * k, j * k, k, k) = Mat::Identity(k, k);
            out.pairs.push_back({ComplexMatrix(std::move(x)), ComplexMatrix(std::move(y))});
        }
    }
    out.residual = op_norm(out.commutator_sum(dim) - am);
    return out;
}

PositiveFactorization unitary_to_positive_factors(const ComplexMatrix& u,
                                                  const FactorizationSchedule& schedule) {
    return factor_unitary(u, schedule, 0);
}

PositiveFactorization matrix_to_positive_factors(const ComplexMatrix& x,
                                                 const FactorizationSchedule& schedule) {
    schedule.validate();
    const auto& tol = tolerances();
    const Mat& xm = x.mat();
    const std::size_t n = x.n();
    if (!(min_singular_value(xm) > tol.positivity * op_norm(xm))) {
        throw NotInvertible("matrix_to_positive_factors: target is singular");
    }
    const Complex det = complex_determinant(xm);
    if (!(det.real() > 0.0) || std::abs(det.imag()) > tol.determinant * std::abs(det)) {
        throw DeterminantObstruction(
            "matrix_to_positive_factors: det x is not a positive real number, so x is not a "
            "limit of products of positive matrices");
    }

    if (is_hermitian(xm, tol.hermitian)) {
        const Mat h = hermitian_part(xm);
        Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) > 0.0) {
            return make_factorization(x, {ComplexMatrix(h)}, "positive", schedule);
        }
    }

    const PolarParts polar = polar_decompose(x);
    // det u = e^{iφ} with |φ| ≲ tolerance; rotate it onto 1 exactly.
    const Complex det_u = complex_determinant(polar.unitary.mat());
    const Complex fix = std::polar(1.0, -std::arg(det_u) / static_cast<double>(n));
    const ComplexMatrix u(Mat(fix * polar.unitary.mat()));

    PositiveFactorization out = factor_unitary(u, schedule, 1);
    out.factors.push_back(polar.positive);
    out.target = x;
    out.method = "polar-commutator-pipeline";
    out.error = out.recompute_error();
    return out;
}

PositiveFactorization direct_sum_factorization(std::span<const PositiveFactorization> blocks) {
    if (blocks.empty()) throw InvalidArgument("direct_sum_factorization: no blocks");
    if (blocks.size() == 1) return blocks.front();

    std::size_t length = 0;
    double error = 0.0;
    std::vector<Mat> targets;
    for (const auto& b : blocks) {
        length = std::max(length, b.factors.size());
        error = std::max(error, b.error);
        targets.push_back(b.target.mat());
    }
    std::vector<ComplexMatrix> factors;
    factors.reserve(length);
    std::vector<Mat> parts(blocks.size());
    for (std::size_t t = 0; t < length; ++t) {
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            const auto& b = blocks[k];
            parts[k] = t < b.factors.size() ? b.factors[t].mat()
                                            : Mat(Mat::Identity(b.target.n(), b.target.n()));
        }
        factors.emplace_back(block_diagonal(parts));
    }
    FactorizationSchedule schedule = blocks.front().schedule;
    schedule.max_factors = std::max(schedule.max_factors, length);
    return PositiveFactorization{ComplexMatrix(block_diagonal(targets)), std::move(factors), error,
                                 "direct-sum", schedule};
}

TorusParameters torus_parameters(double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("torus_parameters: eps must be positive");
    // m = 1 gives ζ = 1, which does not subdivide the circle.  The relative margin keeps
    // the inequality strict when |ζ - 1| equals eps/2 up to rounding (eps = 2, m = 6).
    const double bound = eps / 2.0 * (1.0 - 1e-12);
    for (int m = 2;; ++m) {
        if (std::abs(std::polar(1.0, kTwoPi / m) - 1.0) < bound) {
            return {m, static_cast<std::size_t>(m) * static_cast<std::size_t>(m)};
        }
        if (m > 100000000) throw InvalidArgument("torus_parameters: eps too small");
    }
}

TorusCorrection eps_dense_correction(std::span<const Complex> lambdas, double eps) {
    const TorusParameters params = torus_parameters(eps);
    const std::size_t n = lambdas.size();
    if (n < params.N) {
        throw InsufficientPoints("eps_dense_correction: need at least " + std::to_string(params.N) +
                                     " points, got " + std::to_string(n),
                                 params.N);
    }
    const int m = params.m;
    TorusCorrection out;
    out.lambdas.assign(lambdas.begin(), lambdas.end());
    out.epsilon = eps;
    out.m = m;
    out.N = params.N;

    std::vector<std::vector<std::size_t>> arcs(static_cast<std::size_t>(m));
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(std::abs(lambdas[j]) - 1.0) > tolerances().positivity) {
            throw InvalidArgument("eps_dense_correction: inputs must have modulus 1");
        }
        auto arc = static_cast<int>(std::floor(phase_in_unit_interval(lambdas[j]) * m));
        arcs[static_cast<std::size_t>(std::clamp(arc, 0, m - 1))].push_back(j);
    }
    const auto chosen = std::find_if(arcs.begin(), arcs.end(), [m](const auto& members) {
        return members.size() >= static_cast<std::size_t>(m);
    });
    out.arc_index = static_cast<int>(chosen - arcs.begin());
    out.arc_members.assign(chosen->begin(), chosen->begin() + m);

    // Tail μ's share ζ^{−m(m−1)/2} through its principal (n − m)-th root.
    // ζ^{−m(m−1)/2} = (−1)^{m−1}, whose principal argument is 0 or π.
    const double tail_arg = m % 2 == 0 ? std::numbers::pi : 0.0;
    const Complex tail = std::polar(1.0, tail_arg / static_cast<double>(n - m));
    out.mus.assign(n, tail);
    for (int r = 0; r < m; ++r) {
        out.mus[out.arc_members[static_cast<std::size_t>(r)]] =
            r == 0 ? Complex(1.0, 0.0) : std::polar(1.0, kTwoPi * r / m);
    }
    return out;
}

std::vector<SpectralBlock> group_spectrum(const ComplexMatrix& w, double cluster_tol) {
    const SpectralDecomposition spec = normal_eig(w);
    const Mat& q = spec.eigenvectors.mat();
    const std::size_t n = w.n();
    std::vector<int> label(n, -1);
    std::vector<std::vector<Index>> members;
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i] >= 0) continue;
        label[i] = static_cast<int>(members.size());
        members.push_back({static_cast<Index>(i)});
        for (std::size_t j = i + 1; j < n; ++j) {
            if (label[j] < 0 && std::abs(spec.eigenvalues[j] - spec.eigenvalues[i]) <= cluster_tol) {
                label[j] = label[i];
                members.back().push_back(static_cast<Index>(j));
            }
        }
    }

    std::vector<SpectralBlock> out;
    for (const auto& group : members) {
        Mat basis(n, group.size());
        Complex mean = 0.0;
        for (std::size_t c = 0; c < group.size(); ++c) {
            basis.col(c) = q.col(group[c]);
            mean += spec.eigenvalues[static_cast<std::size_t>(group[c])];
        }
        mean /= static_cast<double>(group.size());
        if (std::abs(std::abs(mean) - 1.0) < 1e-8) mean /= std::abs(mean);
        out.push_back({mean, ComplexMatrix(hermitian_part(basis * basis.adjoint())), group.size()});
    }
    return out;
}

FiniteSpectrumAdjustment finite_spectrum_adjust(const ComplexMatrix& w,
                                                std::span<const SpectralBlock> blocks) {
    const std::size_t n = w.n();
    const Index dim = static_cast<Index>(n);
    const double tol = tolerances().reconstruction;
    if (!is_unitary(w.mat(), tolerances().unitary)) {
        throw InvalidArgument("finite_spectrum_adjust: w is not unitary");
    }
    Mat total = Mat::Zero(dim, dim);
    Mat declared = Mat::Zero(dim, dim);
    for (std::size_t a = 0; a < blocks.size(); ++a) {
        const Mat& p = blocks[a].projection.mat();
        if (p.rows() != dim || op_norm(p * p - p) > tol || !is_hermitian(p, tolerances().hermitian)) {
            throw InvalidArgument("finite_spectrum_adjust: block " + std::to_string(a) +
                                  " is not an orthogonal projection");
        }
        if (blocks[a].rank < 1 ||
            std::abs(p.trace().real() - static_cast<double>(blocks[a].rank)) > 1e-8) {
            throw InvalidArgument("finite_spectrum_adjust: rank does not match projection trace");
        }
        for (std::size_t b = 0; b < a; ++b) {
            if (op_norm(p * blocks[b].projection.mat()) > tol) {
                throw InvalidArgument("finite_spectrum_adjust: projections are not orthogonal");
            }
        }
        total += p;
        declared += blocks[a].eigenvalue * p;
    }
    if (op_norm(total - Mat::Identity(dim, dim)) > tol) {
        throw InvalidArgument("finite_spectrum_adjust: projections do not resolve the identity");
    }
    if (op_norm(declared - w.mat()) > 1e-8) {
        throw InvalidArgument("finite_spectrum_adjust: declared spectrum does not reproduce w");
    }

    FiniteSpectrumAdjustment out{{blocks.begin(), blocks.end()}, {}, {}, w, w};
    Mat adjusted = Mat::Zero(dim, dim);
    for (const auto& block : blocks) {
        const double theta = phase_in_unit_interval(block.eigenvalue);
        const double rank = static_cast<double>(block.rank);
        // Smallest integer k ≥ rank·θ; the slack keeps exact roots at α = 0.
        const double k = std::ceil(rank * theta - 1e-9);
        out.alphas.push_back(std::max(0.0, k / rank - theta));
        const Complex mu = std::polar(1.0, kTwoPi * (k / rank));
        out.adjusted_eigenvalues.push_back(mu);
        adjusted += mu * block.projection.mat();
    }
    out.adjusted = ComplexMatrix(std::move(adjusted));
    return out;
}

PositiveFactorization finite_spectrum_factorization(const FiniteSpectrumAdjustment& adjustment,
                                                    const FactorizationSchedule& schedule) {
    const Index dim = static_cast<Index>(adjustment.adjusted.n());
    Mat frame(dim, dim);
    std::vector<PositiveFactorization> parts;
    Index col = 0;
    for (std::size_t a = 0; a < adjustment.blocks.size(); ++a) {
        const auto& block = adjustment.blocks[a];
        Eigen::SelfAdjointEigenSolver<Mat> es(block.projection.mat());
        const auto rank = static_cast<Index>(block.rank);
        frame.middleCols(col, rank) = es.eigenvectors().rightCols(rank);
        col += rank;

        const Complex mu = adjustment.adjusted_eigenvalues[a];
        const ComplexMatrix scalar(Mat(mu * Mat::Identity(rank, rank)));
        parts.push_back(unitary_to_positive_factors(scalar, schedule));
    }
    PositiveFactorization sum = direct_sum_factorization(parts);

    std::vector<ComplexMatrix> factors;
    factors.reserve(sum.factors.size());
    for (const auto& f : sum.factors) {
        factors.emplace_back(hermitian_part(frame * f.mat() * frame.adjoint()));
    }
    return make_factorization(adjustment.adjusted, std::move(factors), "finite-spectrum", schedule);
}

} // namespace posfactor

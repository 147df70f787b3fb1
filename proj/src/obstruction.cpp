#include "posfactor/obstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "posfactor/error.hpp"
#include "posfactor/matcore.hpp"
#include "posfactor/random.hpp"
#include "posfactor/tolerances.hpp"

namespace posfactor {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string schedule_label(const FactorizationSchedule& s) {
    return "(" + std::to_string(s.trotter_steps) + "," + std::to_string(s.commutator_steps) + ")";
}

} // namespace

Complex TraceFunctional::operator()(const Mat& a) const {
    const Complex t = a.trace();
    return kind == Kind::standard ? t : t / static_cast<double>(n);
}

double TraceFunctional::lattice_spacing() const {
    return kind == Kind::standard ? 1.0 : 1.0 / static_cast<double>(n);
}

std::vector<FactorizationSchedule> default_budget_ladder() {
    return {{4, 4, 100000}, {8, 8, 100000}, {16, 16, 100000}};
}

DeterminantResidue dhs_residue_of_exponential(const ComplexMatrix& c, const TraceFunctional& trace) {
    const Complex z = trace(c.mat()) / Complex(0.0, kTwoPi);
    DeterminantResidue out;
    out.value = z.real();
    out.imaginary = z.imag();
    out.spacing = trace.lattice_spacing();
    double r = out.value - out.spacing * std::floor(out.value / out.spacing);
    // Values a rounding error below a lattice point belong to that point.
    if (r < 0.0 || out.spacing - r <= 1e-10 * std::max(1.0, std::abs(out.value))) r = 0.0;
    out.residue = r;
    return out;
}

TraceIdentityRecord unitary_product_trace_identity(std::span<const ComplexMatrix> factors,
                                                   double delta) {
    if (factors.empty()) throw InvalidArgument("unitary_product_trace_identity: no factors");
    if (!(delta >= 0.0 && delta < 1.0)) {
        throw InvalidArgument("unitary_product_trace_identity: delta must lie in [0, 1)");
    }
    const std::size_t n = factors.front().n();
    const Mat z = ordered_product(factors, n);
    Eigen::JacobiSVD<Mat> svd(z);
    const auto& s = svd.singularValues();
    double defect = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) defect = std::max(defect, std::abs(s(i) - 1.0));

    TraceIdentityRecord out;
    out.unitarity_defect = defect;
    out.delta = delta;
    if (defect > delta) {
        throw InvalidArgument("unitary_product_trace_identity: product is not unitary within " +
                              std::to_string(delta) + " (defect " + std::to_string(defect) + ")");
    }

    double magnitude = 0.0;
    for (const auto& b : factors) {
        const Complex tr = positive_log(b).mat().trace();
        out.trace_log_sum += tr.real();
        magnitude += std::abs(tr.real());
    }
    // |Σ Tr log bₖ| = |Σ log σᵢ| ≤ n·max|log σᵢ| ≤ n·δ/(1 − δ).
    const double slack = 1e-12 * (1.0 + magnitude);
    out.bound = static_cast<double>(n) * delta / (1.0 - delta) + slack;
    out.holds = std::abs(out.trace_log_sum) <= out.bound;
    return out;
}

DeterminantCheck det_nonneg_check(std::span<const ComplexMatrix> factors) {
    if (factors.empty()) throw InvalidArgument("det_nonneg_check: no factors");
    const std::size_t n = factors.front().n();
    double scale = 1.0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const Mat& f = factors[k].mat();
        if (static_cast<std::size_t>(f.rows()) != n) {
            throw InvalidArgument("det_nonneg_check: dimension mismatch");
        }
        if (!is_hermitian(f, tolerances().hermitian)) {
            throw InvalidArgument("det_nonneg_check: factor " + std::to_string(k) +
                                  " is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(f), Eigen::EigenvaluesOnly);
        const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
        if (es.eigenvalues()(0) < -tolerances().positivity * norm) {
            throw InvalidArgument("det_nonneg_check: factor " + std::to_string(k) +
                                  " is not positive semidefinite");
        }
        scale *= std::pow(norm, static_cast<double>(n));
    }

    DeterminantCheck out;
    out.determinant = complex_determinant(ordered_product(factors, n));
    const double tol = tolerances().determinant;
    const double det_abs = std::abs(out.determinant);
    out.nonnegative = std::abs(out.determinant.imag()) <= tol * det_abs + 1e-14 * scale &&
                      out.determinant.real() >= -tol * scale;
    return out;
}

double nonneg_det_distance(Complex lambda, std::size_t n, std::uint64_t seed) {
    const auto dim = static_cast<Eigen::Index>(n);
    const Mat center = lambda * Mat::Identity(dim, dim);
    const double nd = static_cast<double>(n);

    // Rotating X by e^{−i·arg(det X)/n} lands on the feasible set.
    const auto displacement = [&](const Mat& e) {
        Mat x = center + e;
        const Complex d = complex_determinant(x);
        if (std::abs(d) > 0.0) x *= std::polar(1.0, -std::arg(d) / nd);
        return Mat(x - center);
    };
    // Schatten-p norm: a smooth stand-in for the operator norm during descent.
    const auto schatten = [](const Mat& d, double p) {
        const Eigen::VectorXd s = Eigen::JacobiSVD<Mat>(d).singularValues();
        const double top = s(0);
        if (top == 0.0) return 0.0;
        double acc = 0.0;
        for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i) / top, p);
        return top * std::pow(acc, 1.0 / p);
    };

    // Nearest singular matrix, det = 0.
    Mat singular = Mat::Zero(dim, dim);
    singular(0, 0) = -lambda;
    double best = op_norm(displacement(singular));

    const double noise = 1.0 / std::sqrt(2.0 * nd * nd);
    constexpr int kRestarts = 6;
    constexpr int kIterations = 1500;
    for (int r = 0; r < kRestarts; ++r) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
        Mat e = r == 0 ? Mat(Mat::Zero(dim, dim)) : Mat(0.5 * noise * random_complex(n, rng));
        for (double p : {32.0, 128.0, 512.0}) {
            double value = schatten(displacement(e), p);
            double step = 0.1;
            for (int it = 0; it < kIterations && step > 1e-10; ++it) {
                const Mat candidate = e + step * noise * random_complex(n, rng);
                const double cv = schatten(displacement(candidate), p);
                if (cv < value) {
                    e = candidate;
                    value = cv;
                    step *= 1.3;
                } else {
                    step *= 0.97;
                }
            }
        }
        best = std::min(best, op_norm(displacement(e)));
    }
    return best;
}

ObstructionReport scalar_obstruction_distance(Complex lambda, std::size_t n,
                                              std::span<const FactorizationSchedule> budgets,
                                              std::uint64_t seed) {
    if (std::abs(std::abs(lambda) - 1.0) > tolerances().positivity) {
        throw InvalidArgument("scalar_obstruction_distance: lambda must have modulus 1");
    }
    if (n == 0) throw InvalidArgument("scalar_obstruction_distance: n must be positive");
    if (budgets.empty()) throw InvalidArgument("scalar_obstruction_distance: empty budget ladder");

    ObstructionReport out;
    out.lambda = lambda;
    out.n = n;
    out.budget = budgets.back();
    out.in_group =
        std::abs(std::pow(lambda, static_cast<double>(n)) - 1.0) <= tolerances().root_of_unity;

    if (!out.in_group) {
        out.best_distance = nonneg_det_distance(lambda, n, seed);
        out.status = "oracle";
        return out;
    }

    const auto dim = static_cast<Eigen::Index>(n);
    const ComplexMatrix target(Mat(lambda * Mat::Identity(dim, dim)));
    bool any = false;
    std::string overflow;
    for (const auto& schedule : budgets) {
        try {
            const PositiveFactorization f = matrix_to_positive_factors(target, schedule);
            if (!any || f.error < out.best_distance) {
                out.best_distance = f.error;
                out.budget = schedule;
            }
            any = true;
        } catch (const BudgetExceeded& e) {
            overflow = "budget exceeded at " + schedule_label(schedule);
        }
    }
    if (!any) {
        out.best_distance = std::numeric_limits<double>::infinity();
        out.status = overflow;
    } else {
        out.status = overflow.empty() ? "pipeline" : overflow;
    }
    return out;
}

GroupEstimate estimate_group_G(std::size_t n, std::size_t grid, double epsilon,
                               std::span<const FactorizationSchedule> budgets, std::uint64_t seed) {
    if (grid < 4 * n) throw InvalidArgument("estimate_group_G: grid must be at least 4n");
    GroupEstimate out;
    out.epsilon = epsilon;
    for (std::size_t k = 0; k < grid; ++k) {
        const Complex lambda =
            std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(grid));
        out.reports.push_back(scalar_obstruction_distance(lambda, n, budgets,
                                                          splitmix64(seed ^ (k + 1))));
    }
    const auto phase = [](Complex z) {
        const double a = std::arg(z);
        return a < 0.0 ? a + kTwoPi : a;
    };
    std::stable_sort(out.reports.begin(), out.reports.end(),
                     [&](const auto& a, const auto& b) { return phase(a.lambda) < phase(b.lambda); });
    for (const auto& r : out.reports) {
        if (r.best_distance < epsilon) out.accepted.push_back(r.lambda);
    }
    return out;
}

FactorizationAudit audit_factorization(const PositiveFactorization& f) {
    const auto& tol = tolerances();
    FactorizationAudit out;
    out.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < f.factors.size(); ++k) {
        const Mat& m = f.factors[k].mat();
        if (m.rows() != static_cast<Eigen::Index>(f.target.n())) {
            out.factors_positive = false;
            out.failures.push_back("factor " + std::to_string(k) + " has the wrong dimension");
            continue;
        }
        const double norm = op_norm(m);
        const double defect = norm > 0.0 ? op_norm(m - m.adjoint()) / norm : 0.0;
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
        out.max_hermitian_defect = std::max(out.max_hermitian_defect, defect);
        out.min_eigenvalue = std::min(out.min_eigenvalue, es.eigenvalues()(0));
        if (defect > tol.hermitian || !(es.eigenvalues()(0) > 0.0)) {
            if (out.factors_positive) {
                out.failures.push_back("factor " + std::to_string(k) +
                                       " is not Hermitian positive definite");
            }
            out.factors_positive = false;
        }
    }
    if (!out.factors_positive) return out;

    out.recomputed_error = f.recompute_error();
    if (std::abs(out.recomputed_error - f.error) > 1e-12 * std::max(1.0, op_norm(f.target))) {
        out.error_consistent = false;
        out.failures.push_back("stored error " + std::to_string(f.error) +
                               " disagrees with recomputed " +
                               std::to_string(out.recomputed_error));
    }

    if (!f.factors.empty()) {
        try {
            out.determinant_ok = det_nonneg_check(f.factors).nonnegative;
        } catch (const Error& e) {
            out.determinant_ok = false;
        }
        if (!out.determinant_ok) out.failures.push_back("determinant of the product is not >= 0");
    }

    out.target_unitary = is_unitary(f.target.mat(), tol.unitary);
    if (out.target_unitary && !f.factors.empty() && out.recomputed_error < 0.5) {
        try {
            const double delta = out.recomputed_error + 1e-12;
            out.trace_identity_ok = unitary_product_trace_identity(f.factors, delta).holds;
        } catch (const Error& e) {
            out.trace_identity_ok = false;
        }
        if (!out.trace_identity_ok) {
            out.failures.push_back("sum of Tr log of the factors is not within the bound");
        }
    }
    return out;
}

} // namespace posfactor

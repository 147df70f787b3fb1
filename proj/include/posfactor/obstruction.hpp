#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "posfactor/complex_matrix.hpp"
#include "posfactor/factorlab.hpp"

namespace posfactor {

/// Trace on M_n, either Tr or Tr/n. Its image on K₀(M_n) is ℤ resp. (1/n)ℤ.
struct TraceFunctional {
    enum class Kind { standard, normalized };

    Kind kind = Kind::standard;
    std::size_t n = 1;

    Complex operator()(const Mat& a) const;
    double lattice_spacing() const;
};

/// τ(c)/(2πi) reduced modulo the lattice τ_*(K₀).
struct DeterminantResidue {
    double value = 0.0;
    double imaginary = 0.0; // Im of τ(c)/(2πi); zero when c = 2πi·(Hermitian)
    double spacing = 1.0;
    double residue = 0.0;   // in [0, spacing)
};

/// Result of comparing Σ Tr log bₖ with zero for a unitary product.
struct TraceIdentityRecord {
    double trace_log_sum = 0.0;
    double unitarity_defect = 0.0; // max |σᵢ(Π bₖ) − 1|
    double delta = 0.0;
    double bound = 0.0;            // n·δ/(1 − δ) plus rounding slack
    bool holds = false;
};

struct DeterminantCheck {
    Complex determinant;
    bool nonnegative = false;
};

struct ObstructionReport {
    Complex lambda;
    std::size_t n = 1;
    double best_distance = 0.0;
    FactorizationSchedule budget;
    bool in_group = false;
    std::string status; // "pipeline", "oracle", or a budget overflow note
};

struct GroupEstimate {
    std::vector<ObstructionReport> reports; // sorted by phase of λ
    double epsilon = 0.0;
    std::vector<Complex> accepted;          // λ with best_distance < epsilon
};

/// Consolidated check of a factorization, used by `verify`.
struct FactorizationAudit {
    bool factors_positive = true;
    bool error_consistent = true;
    bool determinant_ok = true;
    bool trace_identity_ok = true; // vacuous unless the target is unitary
    bool target_unitary = false;
    double min_eigenvalue = 0.0;
    double max_hermitian_defect = 0.0;
    double recomputed_error = 0.0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

/// Schedules (4,4), (8,8), (16,16) with a budget of 10⁵ factors.
std::vector<FactorizationSchedule> default_budget_ladder();

DeterminantResidue dhs_residue_of_exponential(const ComplexMatrix& c, const TraceFunctional& trace);

/// Throws InvalidArgument when the product is not unitary within `delta`.
TraceIdentityRecord unitary_product_trace_identity(std::span<const ComplexMatrix> factors,
                                                   double delta);

/// Throws InvalidArgument on a factor that is not Hermitian positive semidefinite.
DeterminantCheck det_nonneg_check(std::span<const ComplexMatrix> factors);

/// min ‖X − λ·1ₙ‖ over X with det X ∈ [0, ∞), by seeded random-restart
/// descent over feasible points. Every evaluated point is feasible, so the
/// result is an upper bound on the true distance.
double nonneg_det_distance(Complex lambda, std::size_t n, std::uint64_t seed);

ObstructionReport scalar_obstruction_distance(Complex lambda, std::size_t n,
                                              std::span<const FactorizationSchedule> budgets,
                                              std::uint64_t seed = 0);

GroupEstimate estimate_group_G(std::size_t n, std::size_t grid, double epsilon,
                               std::span<const FactorizationSchedule> budgets,
                               std::uint64_t seed = 0);

FactorizationAudit audit_factorization(const PositiveFactorization& f);

} // namespace posfactor

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "posfactor/complex_matrix.hpp"
#include "posfactor/matcore.hpp"

namespace posfactor {

/// Accuracy knobs of the commutator pipeline.
///
/// `trotter_steps` splits exp(Σ cₖ) into rounds, `commutator_steps` is the n in
/// (e^{-a/n} e^{-b/n} e^{a/n} e^{b/n})^{n²} → e^{[a,b]}. Each commutator block
/// contributes 3 positive factors, so a full run over `pairs` commutators emits
/// trotter_steps · pairs · 3 · commutator_steps² factors plus the positive polar
/// part.
struct FactorizationSchedule {
    int trotter_steps = 8;
    int commutator_steps = 8;
    std::size_t max_factors = 100000;

    std::size_t predicted_factor_count(std::size_t pairs) const;
    void validate() const;
};

struct PositiveFactorization {
    ComplexMatrix target;
    std::vector<ComplexMatrix> factors;
    double error = 0.0; // ‖target − Π factors‖
    std::string method;
    FactorizationSchedule schedule;

    Mat product() const;
    double recompute_error() const;
};

struct CommutatorPair {
    ComplexMatrix x;
    ComplexMatrix y;
};

/// target ≈ Σ [xᵢ, yᵢ] with `residual` = ‖Σ [xᵢ, yᵢ] − target‖.
struct CommutatorDecomposition {
    std::vector<CommutatorPair> pairs;
    double residual = 0.0;

    Mat commutator_sum(std::size_t n) const;
};

struct TorusParameters {
    int m = 0;          // ζ = exp(2πi/m)
    std::size_t N = 0;  // m², points needed by the pigeonhole argument
};

struct TorusCorrection {
    std::vector<Complex> lambdas;
    std::vector<Complex> mus;
    double epsilon = 0.0;
    int m = 0;
    std::size_t N = 0;
    int arc_index = 0;                    // arc from ζ^k to ζ^{k+1}
    std::vector<std::size_t> arc_members; // inputs that received 1, ζ, …, ζ^{m−1}

    Complex zeta() const;
    /// μⱼ⁻¹·λⱼ.
    std::vector<Complex> corrected() const;
};

struct SpectralBlock {
    Complex eigenvalue;
    ComplexMatrix projection;
    std::size_t rank = 0;
};

struct FiniteSpectrumAdjustment {
    std::vector<SpectralBlock> blocks;
    std::vector<double> alphas;             // least α ≥ 0 with (e^{2πiα}λ)^rank = 1
    std::vector<Complex> adjusted_eigenvalues;
    ComplexMatrix original;
    ComplexMatrix adjusted;
};

// Two-factor forms.

/// x = S·D·S⁻¹ with D positive diagonal splits as (S·S*)·((S*)⁻¹·D·S⁻¹).
PositiveFactorization two_positive_split(const ComplexMatrix& x, const ComplexMatrix& similarity,
                                         std::span<const double> diagonal);

/// v·p·v⁻¹ as (u·q·p·q·u*)·(u·q⁻²·u*) where v = u·q is the polar decomposition.
PositiveFactorization conjugate_positive_as_two(const ComplexMatrix& v, const ComplexMatrix& p);

// Product formulas.

/// exp(a/n), exp(b/n) repeated n times.
std::vector<ComplexMatrix> trotter_factors(const ComplexMatrix& a, const ComplexMatrix& b, int n);

/// 3n² positive factors approximating exp([a, b]) for Hermitian b.
PositiveFactorization commutator_exp_factors(const ComplexMatrix& a, const ComplexMatrix& b, int n);

// Commutator witnesses.

/// Single pair with [x, y] = c for traceless c. x is diagonal with entries
/// 1..n in a unitary frame where c has zero diagonal.
CommutatorDecomposition shoda_commutator(const ComplexMatrix& c);

/// (x, y₁), (i·x, y₂) with y = y₁ + i·y₂, y₁ and y₂ Hermitian.
CommutatorDecomposition hermitian_pair_split(const ComplexMatrix& x, const ComplexMatrix& y);

/// a ∈ M_n(M_k) with zero diagonal blocks as Σ_{i≠j} [e^{ij}⊗a_ij, e^{jj}⊗1].
CommutatorDecomposition zero_diagonal_commutators(const ComplexMatrix& a, std::size_t block_size);

// Pipelines.

PositiveFactorization unitary_to_positive_factors(const ComplexMatrix& u,
                                                  const FactorizationSchedule& schedule);

PositiveFactorization matrix_to_positive_factors(const ComplexMatrix& x,
                                                 const FactorizationSchedule& schedule);

/// Block-diagonal combination; shorter factor lists are padded with identities.
PositiveFactorization direct_sum_factorization(std::span<const PositiveFactorization> blocks);

// Torus correction and finite spectra.

/// Smallest m ≥ 2 with |exp(2πi/m) − 1| < ε/2, and N = m².
TorusParameters torus_parameters(double eps);

TorusCorrection eps_dense_correction(std::span<const Complex> lambdas, double eps);

/// Groups the eigenvalues of a normal matrix that agree within `cluster_tol`.
std::vector<SpectralBlock> group_spectrum(const ComplexMatrix& w, double cluster_tol = 1e-8);

FiniteSpectrumAdjustment finite_spectrum_adjust(const ComplexMatrix& w,
                                                std::span<const SpectralBlock> blocks);

/// Factors the adjusted unitary block by block (each block is a scalar root
/// of unity, hence determinant one) and reassembles the direct sum.
PositiveFactorization finite_spectrum_factorization(const FiniteSpectrumAdjustment& adjustment,
                                                    const FactorizationSchedule& schedule);

} // namespace posfactor

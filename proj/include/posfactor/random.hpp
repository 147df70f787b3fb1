#pragma once

#include <cstdint>
#include <random>

#include "posfactor/complex_matrix.hpp"

namespace posfactor {

/// Seedable generator with a platform-independent output sequence.
///
/// Built on std::mt19937_64, whose sequence is fixed by the standard; the
/// uniform and normal transforms are implemented here because the standard
/// distributions are not reproducible across library vendors.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for (seed, stream) through a splitmix64 mix.
    static Rng stream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next() { return engine_(); }
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);
    double normal();
    Complex complex_normal();               // E|z|² = 1

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Gaussian complex matrix.
Mat random_complex(std::size_t n, Rng& rng);
Mat random_hermitian(std::size_t n, Rng& rng);
/// Haar-distributed unitary (QR of a Gaussian matrix with phase fix).
Mat random_unitary(std::size_t n, Rng& rng);
/// Hermitian positive definite with eigenvalues drawn from [lo, hi].
Mat random_positive(std::size_t n, Rng& rng, double lo = 0.5, double hi = 2.0);
/// Scaled to operator norm 1.
Mat unit_norm(const Mat& a);

} // namespace posfactor

#pragma once

#include <string_view>

namespace posfactor {

/// Global numerical thresholds. All norms are operator (spectral) norms.
struct Tolerances {
    double reconstruction = 1e-10; // relative reconstruction error of factorizations
    double hermitian = 1e-10;      // relative ‖h - h*‖
    double unitary = 1e-10;        // ‖u*u - 1‖
    double positivity = 1e-12;     // relative smallest eigenvalue / singular value floor
    double determinant = 1e-8;     // |det - 1| and relative imaginary residue of det
    double root_of_unity = 1e-10;  // |λⁿ - 1| for group membership
};

/// Parses "key=value[,key=value...]" on top of the defaults. Unknown keys and
/// malformed values throw InvalidArgument.
Tolerances parse_tolerances(std::string_view spec);

/// Defaults, overridden once at first use by the POSFACTOR_TOL environment variable.
const Tolerances& tolerances();

} // namespace posfactor

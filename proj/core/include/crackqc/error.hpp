/**
 * @file error.hpp
 * @brief Error codes and the exception type shared by every module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace crackqc {

enum class ErrorCode {
    NonFiniteInput,        ///< a parameter or field entry is NaN or infinite
    NonPositiveKappa1,     ///< kappa1 <= 0
    NonPositiveKappaBar,   ///< kappa1 + 4 kappa2 <= 0
    NonPositiveKappa3,     ///< kappa3 <= 0
    NonPositiveCutoff,     ///< u_cut <= 0
    NegativeDiscriminant,  ///< kappa_bar^2 + 8 kappa2 kappa3 < 0 (complex roots)
    ComplexBondedRoots,    ///< bonded-region roots on the unit circle, not real
    ZeroKappa2,            ///< kappa2 = 0 where the crack-region root is needed
    NegativeDisplacement,  ///< surface energy requested for u < 0
    KernelOverflow,        ///< unscaled kernel value not representable
    IndexOrder,            ///< interface / crack-tip indices violate the stencil order
    ShapeMismatch,         ///< field length does not match the chain configuration
    NoEnergy,              ///< energy requested for the force-based model
    NonConvergence,        ///< Newton iteration limit reached
    SingularJacobian,      ///< Newton Jacobian numerically singular
    SingularSystem,        ///< reduced linear system of the oracle is singular
    InvalidArgument,       ///< generic precondition violation
    MismatchedCurves,      ///< curves traced with different step or orientation
};

/// Stable identifier used in CLI and JSON output.
const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, long index = -1)
        : std::runtime_error(what), code_(code), index_(index) {}

    ErrorCode code() const noexcept { return code_; }
    /// Row / pivot location attached to the error, or -1.
    long index() const noexcept { return index_; }

private:
    ErrorCode code_;
    long index_;
};

}  // namespace crackqc

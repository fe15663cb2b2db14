#include "crackqc/error.hpp"

namespace crackqc {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonFiniteInput: return "non_finite_input";
        case ErrorCode::NonPositiveKappa1: return "non_positive_kappa1";
        case ErrorCode::NonPositiveKappaBar: return "non_positive_kappa_bar";
        case ErrorCode::NonPositiveKappa3: return "non_positive_kappa3";
        case ErrorCode::NonPositiveCutoff: return "non_positive_cutoff";
        case ErrorCode::NegativeDiscriminant: return "negative_discriminant";
        case ErrorCode::ComplexBondedRoots: return "complex_bonded_roots";
        case ErrorCode::ZeroKappa2: return "zero_kappa2";
        case ErrorCode::NegativeDisplacement: return "negative_displacement";
        case ErrorCode::KernelOverflow: return "kernel_overflow";
        case ErrorCode::IndexOrder: return "index_order";
        case ErrorCode::ShapeMismatch: return "shape_mismatch";
        case ErrorCode::NoEnergy: return "no_energy";
        case ErrorCode::NonConvergence: return "non_convergence";
        case ErrorCode::SingularJacobian: return "singular_jacobian";
        case ErrorCode::SingularSystem: return "singular_system";
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::MismatchedCurves: return "mismatched_curves";
    }
    return "unknown";
}

}  // namespace crackqc

/**
 * @file kernels.hpp
 * @brief Hyperbolic kernels C(k) = cosh[k delta], S(k) = sinh[k delta] written
 *        through integer powers of z0, the F/G coefficient functions and the
 *        K_n transfer matrix.
 *
 * With delta = -log z0 the kernels are C(k) = (z0^-k + z0^k)/2 and
 * S(k) = (z0^-k - z0^k)/2, real even when z0 < 0. Scaled values carry an
 * extra factor z0^k and stay bounded for every k >= 0.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "crackqc/error.hpp"
#include "crackqc/material.hpp"

namespace crackqc {

/// Largest supported |k|; beyond it z0^(2k) underflows and scaled kernels are 1/2.
inline constexpr long kMaxKernelIndex = 1000000;

template <class Real>
Real ipow(Real x, long k) {
    if (k < 0) return 1 / ipow(x, -k);
    Real result(1);
    while (k > 0) {
        if (k & 1) result *= x;
        x *= x;
        k >>= 1;
    }
    return result;
}

template <class Real = double>
struct FGCoefficients {
    long k = 0;
    Real rho{};
    Real F{};         ///< F_{k,rho}; only set by HyperbolicKernel::fg
    Real G{};
    Real F_scaled{};  ///< z0^k F_{k,rho}
    Real G_scaled{};
};

template <class Real = double>
struct KernelMatrix {
    long n = 0;
    Real C{}, S{};                ///< entries of K_n = [[C, S], [S, C]]
    Real C_scaled{}, S_scaled{};  ///< entries of z0^n K_n
};

/// Coefficients of the (A, B) decomposition (F, G)_{k,rho} = (A, B) K_k.
template <class Real = double>
struct ABPair {
    Real A{};
    Real B{};
};

/// Residuals of the cosh and sinh three-term relations, scaled by z0^k.
template <class Real = double>
struct RelaResidual {
    Real cosh_residual{};
    Real sinh_residual{};
    Real scale{};  ///< largest individual term, for relative checks
};

template <class Real = double>
class HyperbolicKernel {
public:
    explicit HyperbolicKernel(Real z0) : z0_(z0) {
        using std::abs;
        if (!(abs(z0) < 1) || z0 == 0)
            throw Error(ErrorCode::InvalidArgument, "kernel root must satisfy 0 < |z0| < 1");
    }

    static HyperbolicKernel from(const MaterialParams<Real>& p) {
        return HyperbolicKernel(crack_region_root(p));
    }

    Real z0() const { return z0_; }

    /// z0^(2k + j) / 2 style powers used by every scaled value.
    Real power(long k) const {
        check_index(k);
        return ipow(z0_, k);
    }

    Real C(long k) const {
        check_unscaled(k);
        return (ipow(z0_, -k) + ipow(z0_, k)) / 2;
    }

    Real S(long k) const {
        check_unscaled(k);
        return (ipow(z0_, -k) - ipow(z0_, k)) / 2;
    }

    /// z0^k C(k) = (1 + z0^(2k)) / 2.
    Real C_scaled(long k) const { return (1 + power(2 * k)) / 2; }
    /// z0^k S(k) = (1 - z0^(2k)) / 2.
    Real S_scaled(long k) const { return (1 - power(2 * k)) / 2; }

    /// z0^k C(k + j), bounded for small |j|.
    Real C_shift(long k, long j) const { return (ipow(z0_, -j) + power(2 * k + j)) / 2; }
    /// z0^k S(k + j).
    Real S_shift(long k, long j) const { return (ipow(z0_, -j) - power(2 * k + j)) / 2; }

    Real cosh1() const { return (z0_ + 1 / z0_) / 2; }
    Real sinh1() const { return (1 / z0_ - z0_) / 2; }
    /// tanh(delta/2) = S(1) / (C(1) + 1).
    Real tanh_half() const { return sinh1() / (cosh1() + 1); }

    KernelMatrix<Real> matrix(long n) const {
        KernelMatrix<Real> km;
        km.n = n;
        km.C_scaled = C_scaled(n);
        km.S_scaled = S_scaled(n);
        if (representable(n)) {
            km.C = C(n);
            km.S = S(n);
        } else {
            km.C = km.S = std::numeric_limits<Real>::infinity();
        }
        return km;
    }

    /// Scaled pair z0^k (F_{k,rho}, G_{k,rho}) from the defining three-term sums.
    FGCoefficients<Real> fg_scaled(long k, Real rho) const {
        FGCoefficients<Real> r;
        r.k = k;
        r.rho = rho;
        r.F_scaled = C_shift(k, 1) - (1 - rho) * C_shift(k, 0) - rho * C_shift(k, -1);
        r.G_scaled = S_shift(k, 1) - (1 - rho) * S_shift(k, 0) - rho * S_shift(k, -1);
        r.F = r.G = std::numeric_limits<Real>::quiet_NaN();
        return r;
    }

    /// Unscaled and scaled F/G; throws when z0^-(|k|+1) is not representable.
    FGCoefficients<Real> fg(long k, Real rho) const {
        FGCoefficients<Real> r = fg_scaled(k, rho);
        r.F = C(k + 1) - (1 - rho) * C(k) - rho * C(k - 1);
        r.G = S(k + 1) - (1 - rho) * S(k) - rho * S(k - 1);
        return r;
    }

    /// A_rho = (1 - rho)(C(1) - 1), B_rho = (1 + rho) S(1).
    ABPair<Real> ab(Real rho) const { return {(1 - rho) * (cosh1() - 1), (1 + rho) * sinh1()}; }

    /// Scaled F/G through the decomposition (A, B) z0^k K_k.
    FGCoefficients<Real> fg_from_ab(long k, Real rho) const {
        const ABPair<Real> d = ab(rho);
        FGCoefficients<Real> r;
        r.k = k;
        r.rho = rho;
        r.F_scaled = d.A * C_scaled(k) + d.B * S_scaled(k);
        r.G_scaled = d.A * S_scaled(k) + d.B * C_scaled(k);
        r.F = r.G = std::numeric_limits<Real>::quiet_NaN();
        return r;
    }

    bool representable(long k) const {
        using std::abs;
        using std::log;
        const long a = k < 0 ? -k : k;
        const Real limit = log(std::numeric_limits<Real>::max()) - 2;
        return Real(a + 1) * -log(abs(z0_)) < limit;
    }

private:
    static void check_index(long k) {
        if (k > 2 * kMaxKernelIndex + 2 || k < -2 * kMaxKernelIndex - 2)
            throw Error(ErrorCode::InvalidArgument, "kernel index out of supported range");
    }

    void check_unscaled(long k) const {
        check_index(k);
        if (!representable(k))
            throw Error(ErrorCode::KernelOverflow, "unscaled kernel overflows at this index");
    }

    Real z0_;
};

/// Residuals of the cosh and sinh chains at index k, both scaled by z0^k.
template <class Real>
RelaResidual<Real> identity_rela(const MaterialParams<Real>& p,
                                 const HyperbolicKernel<Real>& ker, long k) {
    using std::abs;
    using std::max;
    if (p.kappa2 == 0)
        throw Error(ErrorCode::ZeroKappa2, "kernel relations need kappa2 != 0");
    const Real a = p.kappa1 + 2 * p.kappa2;
    const Real b = p.kappa2;
    RelaResidual<Real> r;
    auto chain = [&](auto f, Real& scale) {
        const Real t1 = a * (f(0) - f(-1));
        const Real t2 = b * (f(-1) - f(-2));
        const Real t3 = b * (f(1) - f(0));
        scale = max(scale, max(abs(t1), max(abs(t2), abs(t3))));
        return t1 + t2 + t3;
    };
    r.cosh_residual = chain([&](long j) { return ker.C_shift(k, j); }, r.scale);
    r.sinh_residual = chain([&](long j) { return ker.S_shift(k, j); }, r.scale);
    return r;
}

/// G_{k,1-beta} F_{k,alpha} - F_{k,1-beta} G_{k,alpha} from unscaled kernels.
template <class Real>
Real criss_cross(const HyperbolicKernel<Real>& ker, Real alpha, Real beta, long k) {
    const auto fa = ker.fg(k, alpha);
    const auto fb = ker.fg(k, 1 - beta);
    return fb.G * fa.F - fb.F * fa.G;
}

/// The n-independent value -2(alpha + beta - 1)(C(1) - 1) S(1).
template <class Real>
Real criss_cross_constant(const HyperbolicKernel<Real>& ker, Real alpha, Real beta) {
    return -2 * (alpha + beta - 1) * (ker.cosh1() - 1) * ker.sinh1();
}

/// (beta-2) F_{k,alpha} + (1+alpha) F_{k,1-beta} - 2(alpha+beta-1)(C(1)-1) C(k), scaled.
template <class Real>
Real collapse_residual(const HyperbolicKernel<Real>& ker, Real alpha, Real beta, long k) {
    const auto fa = ker.fg_scaled(k, alpha);
    const auto fb = ker.fg_scaled(k, 1 - beta);
    return (beta - 2) * fa.F_scaled + (1 + alpha) * fb.F_scaled -
           2 * (alpha + beta - 1) * (ker.cosh1() - 1) * ker.C_scaled(k);
}

}  // namespace crackqc

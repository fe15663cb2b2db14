/**
 * @file material.hpp
 * @brief Force constants, the cubic bond force law and the characteristic
 *        roots of the cracked and bonded lattice regions.
 *
 * Everything here is templated on the scalar type so the same formulas can be
 * evaluated in double or in an extended-precision type.
 */
#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "crackqc/error.hpp"

namespace crackqc {

namespace detail {

template <class Real>
bool finite(const Real& x) {
    using std::abs;
    return abs(x) <= std::numeric_limits<Real>::max();
}

}  // namespace detail

/// Validated force constants. Derived fields are filled once by validate().
template <class Real = double>
struct MaterialParams {
    Real kappa1{};      ///< nearest-neighbour constant
    Real kappa2{};      ///< next-nearest-neighbour constant
    Real kappa3{};      ///< vertical bond stiffness
    Real u_cut{};       ///< bond cutoff displacement
    Real kappa_bar{};   ///< kappa1 + 4 kappa2
    Real delta_disc{};  ///< kappa_bar^2 + 8 kappa2 kappa3

    template <class Other>
    MaterialParams<Other> cast() const {
        return {Other(kappa1), Other(kappa2), Other(kappa3),
                Other(u_cut),  Other(kappa_bar), Other(delta_disc)};
    }
};

/**
 * @brief Check the force constants and populate the derived fields.
 *
 * kappa2 = 0 is accepted here; operations that need the crack-region root
 * reject it later. With kappa2 != 0 the bonded roots must be real, which
 * additionally requires |w| >= 2 for both roots of the w = z + 1/z quadratic.
 */
template <class Real>
MaterialParams<Real> validate(Real k1, Real k2, Real k3, Real ucut) {
    using std::abs;
    using std::sqrt;
    if (!detail::finite(k1) || !detail::finite(k2) || !detail::finite(k3) ||
        !detail::finite(ucut))
        throw Error(ErrorCode::NonFiniteInput, "material parameters must be finite");
    if (!(k1 > 0)) throw Error(ErrorCode::NonPositiveKappa1, "kappa1 must be positive");
    const Real kb = k1 + 4 * k2;
    if (!(kb > 0))
        throw Error(ErrorCode::NonPositiveKappaBar, "kappa1 + 4 kappa2 must be positive");
    if (!(k3 > 0)) throw Error(ErrorCode::NonPositiveKappa3, "kappa3 must be positive");
    if (!(ucut > 0)) throw Error(ErrorCode::NonPositiveCutoff, "u_cut must be positive");
    const Real disc = kb * kb + 8 * k2 * k3;
    if (disc < 0)
        throw Error(ErrorCode::NegativeDiscriminant,
                    "kappa_bar^2 + 8 kappa2 kappa3 < 0: complex-root regime is unsupported");
    if (k2 != 0) {
        const Real sq = sqrt(disc);
        for (const Real w : {(-k1 + sq) / (2 * k2), (-k1 - sq) / (2 * k2)}) {
            if (w * w < 4)
                throw Error(ErrorCode::ComplexBondedRoots,
                            "bonded-region roots are complex (|z + 1/z| < 2)");
        }
    }
    return {k1, k2, k3, ucut, kb, disc};
}

/// Cubic bond force F(u) = -(kappa3/u_cut^2) u (u - u_cut)^2 on u <= u_cut, 0 beyond.
///
/// For u < 0 the same cubic is used. Physical states have u >= 0.
template <class Real = double>
struct ForceLaw {
    Real kappa3{};
    Real u_cut{};

    static ForceLaw from(const MaterialParams<Real>& p) { return {p.kappa3, p.u_cut}; }

    Real scale() const { return kappa3 / (u_cut * u_cut); }

    Real force(Real u) const {
        if (u > u_cut) return Real(0);
        return -scale() * u * (u - u_cut) * (u - u_cut);
    }

    Real derivative(Real u) const {
        if (u > u_cut) return Real(0);
        return -scale() * (u - u_cut) * (3 * u - u_cut);
    }

    Real second_derivative(Real u) const {
        if (u > u_cut) return Real(0);
        return -scale() * (6 * u - 4 * u_cut);
    }

    /// Surface energy without the sign check; polynomial extension for u < 0.
    Real surface_energy_unchecked(Real u) const {
        if (u >= u_cut) return gamma0();
        const Real u2 = u * u;
        return scale() * (u2 * u2 / 4 - 2 * u_cut * u2 * u / 3 + u_cut * u_cut * u2 / 2);
    }

    /// gamma(u) = -int_0^u F(v) dv.
    Real surface_energy(Real u) const {
        if (u < 0)
            throw Error(ErrorCode::NegativeDisplacement, "surface energy needs u >= 0");
        return surface_energy_unchecked(u);
    }

    /// gamma_0 = gamma(u_cut) = kappa3 u_cut^2 / 12.
    Real gamma0() const { return kappa3 * u_cut * u_cut / 12; }
};

/// Roots of both regions plus the far-field recursion coefficients.
template <class Real = double>
struct CharacteristicRoots {
    Real z0{};      ///< crack-region root, |z0| < 1
    Real z1{};      ///< bonded-region roots, |z| <= 1
    Real z2{};
    Real alpha{};   ///< -z1 z2
    Real beta{};    ///< z1 + z2
    bool marginal = false;  ///< a bonded root sits on |z| = 1
};

template <class Real>
Real crack_polynomial(const MaterialParams<Real>& p, Real z) {
    return (((p.kappa2 * z + p.kappa1) * z - 2 * (p.kappa1 + p.kappa2)) * z + p.kappa1) * z +
           p.kappa2;
}

template <class Real>
Real bonded_polynomial(const MaterialParams<Real>& p, Real z) {
    return (((p.kappa2 * z + p.kappa1) * z - 2 * (p.kappa1 + p.kappa2 + p.kappa3)) * z +
            p.kappa1) * z + p.kappa2;
}

/// Root of kappa2 z^2 + (kappa1 + 2 kappa2) z + kappa2 = 0 inside the unit disc.
template <class Real>
Real crack_region_root(const MaterialParams<Real>& p) {
    using std::sqrt;
    if (p.kappa2 == 0)
        throw Error(ErrorCode::ZeroKappa2, "crack-region root undefined for kappa2 = 0");
    // The discriminant (k1 + 2k2)^2 - 4k2^2 equals kappa1 * kappa_bar > 0.
    const Real b = p.kappa1 + 2 * p.kappa2;
    return 2 * p.kappa2 / (-b - sqrt(p.kappa1 * p.kappa_bar));
}

namespace detail {

/// Root of z^2 - w z + 1 = 0 with |z| <= 1, for real |w| >= 2.
template <class Real>
Real inner_root(Real w, bool& marginal) {
    using std::sqrt;
    Real d = w * w - 4;
    if (d <= 4 * std::numeric_limits<Real>::epsilon() * w * w) marginal = true;
    if (d < 0) d = 0;
    const Real s = w > 0 ? Real(1) : Real(-1);
    return 2 / (w + s * sqrt(d));
}

}  // namespace detail

/**
 * @brief Bonded-region roots through w = z + 1/z.
 *
 * The quartic reduces to kappa2 w^2 + kappa1 w - 2(kappa1 + 2 kappa2 + kappa3) = 0
 * whose discriminant is delta_disc. Each w gives the root of z^2 - wz + 1 = 0
 * inside the unit disc.
 */
template <class Real>
CharacteristicRoots<Real> bonded_region_roots(const MaterialParams<Real>& p) {
    using std::sqrt;
    if (p.kappa2 == 0)
        throw Error(ErrorCode::ZeroKappa2, "bonded-region roots need kappa2 != 0");
    if (p.delta_disc < 0)
        throw Error(ErrorCode::NegativeDiscriminant, "complex-root regime is unsupported");
    const Real q = -(p.kappa1 + sqrt(p.delta_disc)) / 2;
    const Real c = -2 * (p.kappa1 + 2 * p.kappa2 + p.kappa3);
    const Real wa = q / p.kappa2;
    const Real wb = c / q;
    if (wa * wa < 4 || wb * wb < 4)
        throw Error(ErrorCode::ComplexBondedRoots, "bonded-region roots are complex");
    CharacteristicRoots<Real> r;
    r.z1 = detail::inner_root(wb, r.marginal);
    r.z2 = detail::inner_root(wa, r.marginal);
    r.alpha = -r.z1 * r.z2;
    r.beta = r.z1 + r.z2;
    return r;
}

/// All roots and alpha, beta for kappa2 != 0.
template <class Real>
CharacteristicRoots<Real> characteristic_roots(const MaterialParams<Real>& p) {
    CharacteristicRoots<Real> r = bonded_region_roots(p);
    r.z0 = crack_region_root(p);
    return r;
}

/**
 * @brief Far-field recursion u_{j+1} = alpha u_{j-1} + beta u_j of the bonded region.
 *
 * Also defined for kappa2 = 0, where the bonded recurrence is second order with
 * the single decaying root z1 and the recursion is u_{j+1} = z1 u_j.
 */
template <class Real>
std::pair<Real, Real> far_field_recursion(const MaterialParams<Real>& p) {
    using std::sqrt;
    if (p.kappa2 != 0) {
        const auto r = bonded_region_roots(p);
        return {r.alpha, r.beta};
    }
    const Real w = 2 * (p.kappa1 + p.kappa3) / p.kappa1;
    bool marginal = false;
    return {Real(0), detail::inner_root(w, marginal)};
}

/// Largest bonded-root magnitude, which sets the truncation length.
template <class Real>
Real bonded_decay(const MaterialParams<Real>& p) {
    using std::abs;
    using std::max;
    if (p.kappa2 != 0) {
        const auto r = bonded_region_roots(p);
        return max(abs(r.z1), abs(r.z2));
    }
    return abs(far_field_recursion(p).second);
}

}  // namespace crackqc

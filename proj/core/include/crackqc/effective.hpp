/**
 * @file effective.hpp
 * @brief Closed-form coefficients (kappa, eta) of the crack-tip equation
 *        F(u_n) + kappa u_n + eta P = 0 for the exact lattice and three
 *        quasicontinuum couplings, their limits and leading expansions.
 *
 * All ratios of kernels at a large index are formed from scaled kernels, so
 * every formula is valid for any index up to kMaxKernelIndex.
 */
#pragma once

#include <optional>
#include <string>

#include "crackqc/kernels.hpp"
#include "crackqc/material.hpp"

namespace crackqc {

enum class ModelKind { Exact, QC, QQC, FQC };

inline const char* to_string(ModelKind m) {
    switch (m) {
    case ModelKind::Exact: return "exact";
    case ModelKind::QC: return "qc";
    case ModelKind::QQC: return "qqc";
    case ModelKind::FQC: return "fqc";
    }
    return "?";
}

/// The force-based coupling has no total energy.
inline bool has_energy(ModelKind m) { return m != ModelKind::FQC; }

/// Smallest admissible interface index for each coupling stencil.
inline long min_interface_index(ModelKind m) {
    switch (m) {
    case ModelKind::QC: return 3;
    case ModelKind::QQC: return 2;
    case ModelKind::FQC: return 1;
    case ModelKind::Exact: return 0;
    }
    return 0;
}

/// Throws IndexOrder unless the (m, n) pair is admissible for the model.
inline void check_indices(ModelKind model, long m, long n) {
    if (n < 1) throw Error(ErrorCode::IndexOrder, "crack-tip index n must be >= 1");
    if (n > kMaxKernelIndex) throw Error(ErrorCode::IndexOrder, "crack-tip index too large");
    if (model == ModelKind::Exact) return;
    const long lo = min_interface_index(model);
    if (m < lo || m >= n)
        throw Error(ErrorCode::IndexOrder, std::string(to_string(model)) + " needs " +
                                               std::to_string(lo) + " <= m < n");
}

/**
 * @brief Which closed form to use for the energy-based QC coupling.
 *
 * Lattice solves the interface rows of the assembled QC chain exactly and
 * agrees with the full-chain oracle. Published follows the classical
 * reduction through the Q matrix, which carries an O(1) limit gap in eta.
 */
enum class QcVariant { Lattice, Published };

template <class Real = double>
struct EffectiveCoefficients {
    ModelKind model = ModelKind::Exact;
    Real kappa{};
    Real eta{};
    long n = 0;
    std::optional<long> m;  ///< absent for the exact model
};

template <class Real = double>
struct CoefficientLimits {
    Real kappa0{};
    Real eta0{};
    Real eta0_qc{};          ///< Published QC limit, ratio form
    Real eta0_qc_tanh{};     ///< same limit through tanh(delta/2)
    Real gap{};              ///< eta0 - eta0_qc
    Real eta0_qc_lattice{};  ///< limit of the Lattice QC variant
};

/// Exponent of z0 written as n_coef * n + m_coef * m + constant.
struct DecayExponent {
    long n_coef = 0;
    long m_coef = 0;
    long constant = 0;
    long at(long n, long m = 0) const { return n_coef * n + m_coef * m + constant; }
};

enum class Quantity { Kappa, Eta };

template <class Real = double>
struct ExpansionRecord {
    ModelKind model = ModelKind::Exact;
    Quantity quantity = Quantity::Kappa;
    Real limit{};                  ///< kappa0 or eta0
    Real leading_coefficient{};    ///< coefficient c in value = limit + c z0^e + ...
    Real published_coefficient{};  ///< classical closed-form coefficient, for comparison
    DecayExponent decay_exponent;
    Real z0{};

    Real predicted(long n, long m = 0) const {
        return limit + leading_coefficient * ipow(z0, decay_exponent.at(n, m));
    }
};

template <class Real = double>
struct ExpansionPair {
    ExpansionRecord<Real> kappa;
    ExpansionRecord<Real> eta;
};

template <class Real = double>
struct QcMatrix {
    Real q11{}, q12{}, q21{}, q22{};
    Real gamma{};  ///< kappa_bar / (kappa_bar + kappa2/2)
    Real det() const { return q11 * q22 - q12 * q21; }
};

namespace detail {

/// Shared per-parameter quantities for every closed form.
template <class Real>
struct Setup {
    MaterialParams<Real> p;
    CharacteristicRoots<Real> r;
    HyperbolicKernel<Real> ker;
    Real abp, ch, sh;
    ABPair<Real> a_alpha, a_beta;  ///< (A, B) at rho = alpha and rho = 1 - beta

    explicit Setup(const MaterialParams<Real>& params)
        : p(params), r(characteristic_roots(params)), ker(r.z0) {
        abp = r.alpha + r.beta - 1;
        ch = ker.cosh1();
        sh = ker.sinh1();
        a_alpha = ker.ab(r.alpha);
        a_beta = ker.ab(1 - r.beta);
    }

    Real ab_alpha() const { return a_alpha.A + a_alpha.B; }
    Real ab_beta() const { return a_beta.A + a_beta.B; }
    /// kappa1 + kappa2 (beta + 1), the local part of every kappa.
    Real kappa_local() const { return p.kappa1 + p.kappa2 * (r.beta + 1); }
    /// kappa_bar + (beta - 2) kappa2, the load part of the tip row.
    Real load_coefficient() const { return p.kappa_bar + (r.beta - 2) * p.kappa2; }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact model
// ---------------------------------------------------------------------------

template <class Real>
EffectiveCoefficients<Real> exact_coefficients(const MaterialParams<Real>& p, long n) {
    check_indices(ModelKind::Exact, 0, n);
    const detail::Setup<Real> s(p);
    const auto fa = s.ker.fg_scaled(n, s.r.alpha);
    const auto fb = s.ker.fg_scaled(n, 1 - s.r.beta);
    EffectiveCoefficients<Real> c;
    c.model = ModelKind::Exact;
    c.n = n;
    c.kappa = s.abp * (s.kappa_local() + p.kappa2 * fb.F_scaled / fa.F_scaled);
    c.eta = 1 - s.abp * (s.ker.C_scaled(n) - s.ker.power(n)) / fa.F_scaled;
    return c;
}

/**
 * @brief eta of the exact model from the unsimplified three-term expression
 *        1 + kappa2(beta-2)/kappa_bar + (kappa2/kappa_bar)[cross/(S(1) F_a) + (1+alpha) F_b/F_a].
 *
 * The cross term G_b F_a - F_b G_a is a difference of products of size
 * z0^-2n. It loses about 2n log10|1/z0| digits and is meant for
 * extended-precision cross-checks.
 */
template <class Real>
Real exact_eta_long(const MaterialParams<Real>& p, long n) {
    check_indices(ModelKind::Exact, 0, n);
    const detail::Setup<Real> s(p);
    const auto fa = s.ker.fg_scaled(n, s.r.alpha);
    const auto fb = s.ker.fg_scaled(n, 1 - s.r.beta);
    const Real cross = fb.G_scaled * fa.F_scaled - fb.F_scaled * fa.G_scaled;
    const Real w = p.kappa2 / p.kappa_bar;
    return 1 + w * (s.r.beta - 2) +
           w * (cross / (s.ker.power(n) * s.sh * fa.F_scaled) +
                (1 + s.r.alpha) * fb.F_scaled / fa.F_scaled);
}

template <class Real>
CoefficientLimits<Real> exact_limits(const MaterialParams<Real>& p);

template <class Real>
ExpansionPair<Real> exact_expansions(const MaterialParams<Real>& p, long n) {
    check_indices(ModelKind::Exact, 0, n);
    const detail::Setup<Real> s(p);
    const auto lim = exact_limits(p);
    const Real ab = s.ab_alpha();
    ExpansionPair<Real> e;
    e.kappa = {ModelKind::Exact,
               Quantity::Kappa,
               lim.kappa0,
               -2 * s.abp * s.abp * p.kappa_bar * s.sh / (ab * ab),
               -s.abp * p.kappa_bar * s.sh / (ab * ab),
               {2, 0, 0},
               s.r.z0};
    e.eta = {ModelKind::Exact, Quantity::Eta, lim.eta0, 2 * s.abp / ab, 2 * s.abp / ab,
             {1, 0, 0},        s.r.z0};
    return e;
}

// ---------------------------------------------------------------------------
// QC (energy-based, no force correction)
// ---------------------------------------------------------------------------

template <class Real>
QcMatrix<Real> qc_matrix(const MaterialParams<Real>& p) {
    if (p.kappa2 == 0) throw Error(ErrorCode::ZeroKappa2, "QC matrix needs kappa2 != 0");
    const HyperbolicKernel<Real> ker = HyperbolicKernel<Real>::from(p);
    const Real ch = ker.cosh1(), sh = ker.sinh1();
    const Real kb = p.kappa_bar, k2 = p.kappa2;
    QcMatrix<Real> q;
    q.gamma = kb / (kb + k2 / 2);
    const Real g = q.gamma;
    q.q11 = (4 - 3 * g) / (4 * k2 * (ch - 1));
    q.q12 = 3 * g / (4 * k2 * sh);
    q.q21 = (2 - g) * kb / (4 * k2 * (ch - 1));
    q.q22 = ((g + 2) * kb - 4 * k2) / (4 * k2 * sh);
    return q;
}

namespace detail {

template <class Real>
struct QcPublishedParts {
    Real den, X, Y, Z, zk, detid;
};

/// Scaled building blocks of the Q-matrix reduction at shift k = n - m.
template <class Real>
QcPublishedParts<Real> qc_published_parts(const Setup<Real>& s, const QcMatrix<Real>& q,
                                          long k) {
    const auto fa = s.ker.fg_scaled(k, s.r.alpha);
    const auto fb = s.ker.fg_scaled(k, 1 - s.r.beta);
    QcPublishedParts<Real> t;
    t.zk = s.ker.power(k);
    t.den = q.q21 * fa.F_scaled + q.q22 * fa.G_scaled + (1 + s.r.alpha) * t.zk;
    t.X = q.q11 * fa.F_scaled + q.q12 * fa.G_scaled;
    t.Y = q.q11 * fb.F_scaled + q.q12 * fb.G_scaled;
    t.Z = q.q21 * fb.F_scaled + q.q22 * fb.G_scaled;
    // Y (q21 F_a + q22 G_a) - X Z = det Q (F_b G_a - F_a G_b), independent of k.
    t.detid = -q.det() * criss_cross_constant(s.ker, s.r.alpha, s.r.beta);
    return t;
}

template <class Real>
EffectiveCoefficients<Real> qc_published(const Setup<Real>& s, long m, long n) {
    const QcMatrix<Real> q = qc_matrix(s.p);
    const auto t = qc_published_parts(s, q, n - m);
    const Real k2 = s.p.kappa2;
    EffectiveCoefficients<Real> c;
    c.model = ModelKind::QC;
    c.n = n;
    c.m = m;
    c.kappa = s.abp * (s.kappa_local() + k2 * t.Z / t.den) -
              s.abp * s.load_coefficient() * t.zk / t.den;
    c.eta = (k2 * t.detid * t.zk + k2 * (1 + s.r.alpha) * t.Y + t.X * s.load_coefficient()) /
            t.den;
    return c;
}

template <class Real>
EffectiveCoefficients<Real> qc_lattice(const Setup<Real>& s, long m, long n) {
    const long k = n - m;
    const Real k1 = s.p.kappa1, k2 = s.p.kappa2, kb = s.p.kappa_bar;
    const Real g = kb / (kb + k2 / 2);
    const Real c2 = s.ker.C_shift(0, 2), s2 = s.ker.S_shift(0, 2);
    const Real lead = k1 + g * k2 / 2;
    const Real a11 = lead * (s.ch - 1) + k2 * (c2 - 1);
    const Real a12 = lead * s.sh + k2 * s2;
    const Real r1lin = lead + 2 * k2;
    const Real wr = -(s.a_alpha.A * s.a_beta.B - s.a_beta.A * s.a_alpha.B);
    const auto fa = s.ker.fg_scaled(k, s.r.alpha);
    const auto fb = s.ker.fg_scaled(k, 1 - s.r.beta);
    const Real det = a11 * fa.G_scaled - a12 * fa.F_scaled;
    const Real tb = a11 * fb.G_scaled - a12 * fb.F_scaled;
    EffectiveCoefficients<Real> c;
    c.model = ModelKind::QC;
    c.n = n;
    c.m = m;
    c.kappa = s.abp * s.kappa_local() + k2 * s.abp * tb / det;
    c.eta = s.load_coefficient() / kb +
            k2 * ((r1lin / kb - g) * wr * s.ker.power(k) + (1 + s.r.alpha) / kb * tb) / det;
    return c;
}

}  // namespace detail

template <class Real>
EffectiveCoefficients<Real> qc_coefficients(const MaterialParams<Real>& p, long m, long n,
                                            QcVariant variant = QcVariant::Lattice) {
    check_indices(ModelKind::QC, m, n);
    const detail::Setup<Real> s(p);
    return variant == QcVariant::Lattice ? detail::qc_lattice(s, m, n)
                                         : detail::qc_published(s, m, n);
}

/**
 * @brief Published QC eta through the reshaped expression
 *        X kappa_bar/den - abp kappa_bar (q11 C(k) + q12 S(k))/den + abp[(1-gamma)kappa_bar/kappa2 - (2 - 3gamma/2)]/den.
 *
 * With literal_sign the last bracket enters with a minus sign, as it is
 * commonly printed; that version is off by O(z0^k) and serves as a diagnostic.
 */
template <class Real>
Real qc_eta_reshaped(const MaterialParams<Real>& p, long m, long n, bool literal_sign = false) {
    check_indices(ModelKind::QC, m, n);
    const detail::Setup<Real> s(p);
    const QcMatrix<Real> q = qc_matrix(p);
    const long k = n - m;
    const auto t = detail::qc_published_parts(s, q, k);
    const Real kb = p.kappa_bar, g = q.gamma;
    const Real bracket = s.abp * ((1 - g) * kb / p.kappa2 - (2 - 3 * g / 2));
    const Real sign = literal_sign ? Real(-1) : Real(1);
    return t.X * kb / t.den -
           s.abp * kb * (q.q11 * s.ker.C_scaled(k) + q.q12 * s.ker.S_scaled(k)) / t.den +
           sign * bracket * t.zk / t.den;
}

template <class Real>
CoefficientLimits<Real> qc_limit(const MaterialParams<Real>& p) {
    return exact_limits(p);
}

template <class Real>
CoefficientLimits<Real> exact_limits(const MaterialParams<Real>& p) {
    const detail::Setup<Real> s(p);
    const Real ab = s.ab_alpha();
    CoefficientLimits<Real> l;
    l.kappa0 = s.abp * (s.kappa_local() + p.kappa2 * s.ab_beta() / ab);
    l.eta0 = 1 - s.abp / ab;
    const QcMatrix<Real> q = qc_matrix(p);
    const Real kb = p.kappa_bar, g = q.gamma;
    l.eta0_qc = l.eta0 * kb * (q.q11 + q.q12) / (q.q21 + q.q22);
    const Real th = s.ker.tanh_half();
    l.eta0_qc_tanh = l.eta0 * (4 + 3 * g * (th - 1)) / (2 - g + (g + 2 - 4 * p.kappa2 / kb) * th);
    l.gap = l.eta0 - l.eta0_qc;
    l.eta0_qc_lattice =
        s.load_coefficient() / kb + p.kappa2 * (1 + s.r.alpha) * s.ab_beta() / (kb * ab);
    return l;
}

// ---------------------------------------------------------------------------
// QQC (quasi-nonlocal, ghost-force free)
// ---------------------------------------------------------------------------

template <class Real>
EffectiveCoefficients<Real> qqc_coefficients(const MaterialParams<Real>& p, long m, long n) {
    check_indices(ModelKind::QQC, m, n);
    const detail::Setup<Real> s(p);
    const long k = n - m + 1;
    const auto ga = s.ker.fg_scaled(k, s.r.alpha);
    const auto gb = s.ker.fg_scaled(k, 1 - s.r.beta);
    EffectiveCoefficients<Real> c;
    c.model = ModelKind::QQC;
    c.n = n;
    c.m = m;
    c.kappa = s.abp * (s.kappa_local() + p.kappa2 * gb.G_scaled / ga.G_scaled);
    c.eta = 1 - s.abp * s.ker.S_scaled(k) / ga.G_scaled;
    return c;
}

/// QQC eta with G_{k,alpha} expanded as A_alpha S(k) + B_alpha C(k).
template <class Real>
Real qqc_eta_decomposed(const MaterialParams<Real>& p, long m, long n) {
    check_indices(ModelKind::QQC, m, n);
    const detail::Setup<Real> s(p);
    const long k = n - m + 1;
    const Real sk = s.ker.S_scaled(k), ck = s.ker.C_scaled(k);
    return 1 - s.abp * sk / (s.a_alpha.A * sk + s.a_alpha.B * ck);
}

template <class Real>
ExpansionPair<Real> qqc_expansions(const MaterialParams<Real>& p, long m, long n) {
    check_indices(ModelKind::QQC, m, n);
    const detail::Setup<Real> s(p);
    const auto lim = exact_limits(p);
    const Real ab = s.ab_alpha();
    const Real ab2 = ab * ab;
    ExpansionPair<Real> e;
    e.kappa = {ModelKind::QQC,
               Quantity::Kappa,
               lim.kappa0,
               2 * s.abp * s.abp * p.kappa_bar * s.sh / ab2,
               -2 * p.kappa_bar * s.abp * s.sh / ab2,
               {2, -2, 2},
               s.r.z0};
    e.eta = {ModelKind::QQC,
             Quantity::Eta,
             lim.eta0,
             2 * s.abp * s.a_alpha.B / ab2,
             2 * s.abp * s.a_alpha.A / ab2,
             {2, -2, 2},
             s.r.z0};
    return e;
}

// ---------------------------------------------------------------------------
// FQC (force-based)
// ---------------------------------------------------------------------------

enum class FqcEtaForm {
    Compact,         ///< 1 - abp S(k)/D + (1+alpha) S(1)/D
    Long,            ///< product form with denominator D = G_{k,alpha} - (1+alpha) S(1)
    LiteralLong,     ///< last denominator read as G_{k,alpha} (1+alpha) S(1)
    LiteralCompact,  ///< first numerator carrying an extra factor S(1)
};

template <class Real>
Real fqc_eta(const MaterialParams<Real>& p, long m, long n, FqcEtaForm form) {
    check_indices(ModelKind::FQC, m, n);
    const detail::Setup<Real> s(p);
    const long k = n - m;
    const auto ga = s.ker.fg_scaled(k, s.r.alpha);
    const auto gb = s.ker.fg_scaled(k, 1 - s.r.beta);
    const Real zk = s.ker.power(k);
    const Real b1 = (1 + s.r.alpha) * s.sh;
    const Real d = ga.G_scaled - b1 * zk;
    const Real w = p.kappa2 / p.kappa_bar;
    switch (form) {
    case FqcEtaForm::Compact:
        return 1 - s.abp * s.ker.S_scaled(k) / d + b1 * zk / d;
    case FqcEtaForm::Long:
        return (1 + (s.r.beta - 2) * w) * (1 + b1 * zk / d) + (1 + s.r.alpha) * w * gb.G_scaled / d;
    case FqcEtaForm::LiteralLong:
        return (1 + (s.r.beta - 2) * w) * (1 + b1 * zk / d) +
               (1 + s.r.alpha) * w * gb.G_scaled / (ga.G_scaled * b1);
    case FqcEtaForm::LiteralCompact:
        return 1 - s.abp * s.sh * s.ker.S_scaled(k) / d + b1 * zk / d;
    }
    return Real(0);
}

template <class Real>
EffectiveCoefficients<Real> fqc_coefficients(const MaterialParams<Real>& p, long m, long n) {
    check_indices(ModelKind::FQC, m, n);
    const detail::Setup<Real> s(p);
    const long k = n - m;
    const auto ga = s.ker.fg_scaled(k, s.r.alpha);
    const auto gb = s.ker.fg_scaled(k, 1 - s.r.beta);
    const Real zk = s.ker.power(k);
    const Real d = ga.G_scaled - (1 + s.r.alpha) * s.sh * zk;
    EffectiveCoefficients<Real> c;
    c.model = ModelKind::FQC;
    c.n = n;
    c.m = m;
    c.kappa = s.abp * (s.kappa_local() + p.kappa2 * gb.G_scaled / d) +
              s.abp * s.load_coefficient() * s.sh * zk / d;
    c.eta = fqc_eta(p, m, n, FqcEtaForm::Compact);
    return c;
}

template <class Real>
ExpansionPair<Real> fqc_expansions(const MaterialParams<Real>& p, long m, long n) {
    check_indices(ModelKind::FQC, m, n);
    const detail::Setup<Real> s(p);
    const auto lim = exact_limits(p);
    const Real ab = s.ab_alpha();
    const Real ab2 = ab * ab;
    const Real ba = s.a_alpha.B;
    ExpansionPair<Real> e;
    e.kappa = {ModelKind::FQC,
               Quantity::Kappa,
               lim.kappa0,
               2 * s.abp * (p.kappa2 * s.ab_beta() * ba / ab2 + s.load_coefficient() * s.sh / ab),
               2 * s.abp * p.kappa_bar * (ab - s.abp * s.sh) / ab2,
               {1, -1, 0},
               s.r.z0};
    e.eta = {ModelKind::FQC,
             Quantity::Eta,
             lim.eta0,
             2 * ba * (ab - s.abp) / ab2,
             (3 + s.r.alpha - s.r.beta) * s.sh / ab,
             {1, -1, 0},
             s.r.z0};
    return e;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

template <class Real>
EffectiveCoefficients<Real> coefficients(ModelKind model, const MaterialParams<Real>& p, long m,
                                         long n, QcVariant variant = QcVariant::Lattice) {
    switch (model) {
    case ModelKind::Exact: return exact_coefficients(p, n);
    case ModelKind::QC: return qc_coefficients(p, m, n, variant);
    case ModelKind::QQC: return qqc_coefficients(p, m, n);
    case ModelKind::FQC: return fqc_coefficients(p, m, n);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown model");
}

/// Leading expansions for every model; QC has none and returns nullopt.
template <class Real>
std::optional<ExpansionPair<Real>> expansions(ModelKind model, const MaterialParams<Real>& p,
                                              long m, long n) {
    switch (model) {
    case ModelKind::Exact: return exact_expansions(p, n);
    case ModelKind::QQC: return qqc_expansions(p, m, n);
    case ModelKind::FQC: return fqc_expansions(p, m, n);
    case ModelKind::QC: return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace crackqc

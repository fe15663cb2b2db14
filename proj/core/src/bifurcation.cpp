#include "crackqc/bifurcation.hpp"

#include <gsl/gsl_poly.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace crackqc {

namespace {

/// Cubic branch of the residual, also used for u < 0.
double cubic_residual(const EffectiveEquation& eq, double u, double P) {
    const double s = eq.law.scale(), uc = eq.law.u_cut;
    return -s * u * (u - uc) * (u - uc) + eq.kappa * u + eq.eta * P;
}

double cubic_slope(const EffectiveEquation& eq, double u) {
    const double s = eq.law.scale(), uc = eq.law.u_cut;
    return -s * (u - uc) * (3 * u - uc) + eq.kappa;
}

double polish(const EffectiveEquation& eq, double u, double P) {
    for (int i = 0; i < 3; ++i) {
        const double d = cubic_slope(eq, u);
        if (d == 0.0) break;
        const double next = u - cubic_residual(eq, u, P) / d;
        if (!(std::abs(cubic_residual(eq, next, P)) < std::abs(cubic_residual(eq, u, P)))) break;
        u = next;
    }
    return u;
}

struct State {
    double u, P;
};

State rk4_step(const EffectiveEquation& eq, double sig, State x, double dt) {
    const Tangent k1 = tangent(eq, x.u);
    const Tangent k2 = tangent(eq, x.u + 0.5 * dt * sig * k1.f1);
    const Tangent k3 = tangent(eq, x.u + 0.5 * dt * sig * k2.f1);
    const Tangent k4 = tangent(eq, x.u + dt * sig * k3.f1);
    return {x.u + dt * sig * (k1.f1 + 2 * k2.f1 + 2 * k3.f1 + k4.f1) / 6,
            x.P + dt * sig * (k1.f2 + 2 * k2.f2 + 2 * k3.f2 + k4.f2) / 6};
}

/// One step that stops on u = u_cut when the step crosses it, since F'' jumps there.
State event_step(const EffectiveEquation& eq, double sig, State x, double dt) {
    const double uc = eq.law.u_cut;
    const State full = rk4_step(eq, sig, x, dt);
    if ((x.u - uc) * (full.u - uc) >= 0) return full;
    double lo = 0, hi = dt;
    for (int i = 0; i < 80 && hi - lo > 1e-17 * dt; ++i) {
        const double mid = 0.5 * (lo + hi);
        const State y = rk4_step(eq, sig, x, mid);
        ((y.u - uc) * (x.u - uc) > 0 ? lo : hi) = mid;
    }
    const State at = rk4_step(eq, sig, x, hi);
    // The remainder lies on one smooth piece; a second crossing within one step is not resolved.
    return rk4_step(eq, sig, at, dt - hi);
}

}  // namespace

EffectiveEquation make_equation(const ForceLaw<double>& law, double kappa, double eta,
                                std::string tag) {
    if (!std::isfinite(kappa) || !std::isfinite(eta))
        throw Error(ErrorCode::NonFiniteInput, "effective coefficients must be finite");
    if (!(eta > 0)) throw Error(ErrorCode::InvalidArgument, "eta must be positive");
    if (!(law.kappa3 > 0) || !(law.u_cut > 0))
        throw Error(ErrorCode::InvalidArgument, "force law needs kappa3 > 0 and u_cut > 0");
    return {law, kappa, eta, std::move(tag)};
}

EffectiveEquation make_equation(const MaterialParams<double>& p,
                                const EffectiveCoefficients<double>& c) {
    return make_equation(ForceLaw<double>::from(p), c.kappa, c.eta, to_string(c.model));
}

std::vector<double> solve_branches(const EffectiveEquation& eq, double P) {
    const double s = eq.law.scale(), uc = eq.law.u_cut;
    double x[3];
    const int count = gsl_poly_solve_cubic(-2 * uc, uc * uc - eq.kappa / s, -eq.eta * P / s,
                                           &x[0], &x[1], &x[2]);
    std::vector<double> roots;
    for (int i = 0; i < count; ++i) {
        const double r = polish(eq, x[i], P);
        if (r <= uc * (1 + 1e-14)) roots.push_back(std::min(r, uc));
    }
    if (eq.kappa != 0.0) {
        const double lin = -eq.eta * P / eq.kappa;
        if (lin > uc) roots.push_back(lin);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots)
        if (unique.empty() || std::abs(r - unique.back()) > 1e-12 * std::max(1.0, std::abs(r)))
            unique.push_back(r);
    return unique;
}

std::vector<FoldPoint> fold_points(const EffectiveEquation& eq) {
    const double uc = eq.law.u_cut;
    // F'(u) = -kappa  <=>  3u^2 - 4 u_c u + u_c^2 (1 - kappa/kappa3) = 0.
    const double disc = 4 * uc * uc * (1 + 3 * eq.kappa / eq.law.kappa3);
    std::vector<FoldPoint> folds;
    auto push = [&](double u, bool degenerate) {
        if (u > 0 && u < uc)
            folds.push_back({u, -(eq.law.force(u) + eq.kappa * u) / eq.eta, degenerate});
    };
    if (disc < 0) return folds;
    if (disc <= 1e-14 * uc * uc) {
        push(2 * uc / 3, true);
        return folds;
    }
    const double sq = std::sqrt(disc);
    push((4 * uc - sq) / 6, false);
    push((4 * uc + sq) / 6, false);
    return folds;
}

Tangent tangent(const EffectiveEquation& eq, double u) {
    const double q = eq.law.derivative(u) + eq.kappa;
    const double r = std::hypot(q, eq.eta);
    return {-eq.eta / r, q / r};
}

int default_orientation(const EffectiveEquation& eq) {
    return eq.law.derivative(0.0) + eq.kappa > 0 ? 1 : -1;
}

double BifurcationCurve::max_residual() const {
    double r = 0;
    for (const auto& x : samples) r = std::max(r, std::abs(x.residual));
    return r;
}

BifurcationCurve trace_curve(const EffectiveEquation& eq, double s_max, double h,
                             const TraceOptions& options) {
    if (!std::isfinite(s_max) || s_max < 0)
        throw Error(ErrorCode::InvalidArgument, "s_max must be finite and non-negative");
    if (!std::isfinite(h) || !(h > 0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
    const double nsteps = std::ceil(s_max / h - 1e-9);
    if (nsteps > 5e8) throw Error(ErrorCode::InvalidArgument, "step-size underflow");

    BifurcationCurve c;
    c.h = h;
    c.tag = eq.tag;
    c.orientation = options.orientation != 0 ? (options.orientation > 0 ? 1 : -1)
                                             : default_orientation(eq);
    const double sig = c.orientation;
    const double cutoff = 1.1 * eq.law.u_cut;
    const long total = static_cast<long>(nsteps);
    c.samples.reserve(static_cast<size_t>(total) + 1);
    c.samples.push_back({0.0, 0.0, 0.0, 0.0});

    double u = 0.0, P = 0.0;
    for (long i = 1; i <= total; ++i) {
        const double s = std::min(static_cast<double>(i) * h, s_max);
        const double dt = s - c.samples.back().s;
        if (c.reached_cutoff) {
            // Past the cutoff F vanishes and the tangent is constant.
            const Tangent t = tangent(eq, u);
            u += dt * sig * t.f1;
            P += dt * sig * t.f2;
        } else {
            const State next = event_step(eq, sig, {u, P}, dt);
            u = next.u;
            P = next.P;
        }
        c.samples.push_back({s, u, P, eq.residual(u, P)});
        if (!c.reached_cutoff && u > cutoff) {
            c.reached_cutoff = true;
            if (!options.extend_linear_tail) break;
        }
    }
    return c;
}

CurveComparison compare_curves(const BifurcationCurve& a, const BifurcationCurve& b) {
    if (std::abs(a.h - b.h) > 1e-15 * std::max(a.h, b.h))
        throw Error(ErrorCode::MismatchedCurves, "curves use different step sizes");
    if (a.orientation != b.orientation)
        throw Error(ErrorCode::MismatchedCurves, "curves use different orientations");
    const size_t shared = std::min(a.samples.size(), b.samples.size());
    CurveComparison r;
    r.s.reserve(shared);
    r.distance.reserve(shared);
    for (size_t i = 0; i < shared; ++i) {
        const auto& x = a.samples[i];
        const auto& y = b.samples[i];
        if (std::abs(x.s - y.s) > 1e-12 * std::max(1.0, x.s))
            throw Error(ErrorCode::MismatchedCurves, "curves are sampled at different s");
        const double d = std::abs(x.u - y.u) + std::abs(x.P - y.P);
        r.s.push_back(x.s);
        r.distance.push_back(d);
        r.sup_distance = std::max(r.sup_distance, d);
    }
    return r;
}

LipschitzBound lipschitz_bound(const EffectiveEquation& eq, const EffectiveEquation& eq_hat,
                               double s_max) {
    if (!(eq.eta > 0) || !(eq_hat.eta > 0))
        throw Error(ErrorCode::InvalidArgument, "both equations need eta > 0");
    if (!(s_max >= 0)) throw Error(ErrorCode::InvalidArgument, "s_max must be non-negative");
    LipschitzBound b;
    // |F''| = (kappa3/u_c^2)|6u - 4u_c| on [0, u_c] peaks at u = 0 with 4 kappa3/u_c; F'' = 0 beyond.
    b.max_second_derivative =
        std::max(4 * eq.law.kappa3 / eq.law.u_cut, 4 * eq_hat.law.kappa3 / eq_hat.law.u_cut);
    b.eta_min = std::min(eq.eta, eq_hat.eta);
    b.L = std::max(1.0, std::sqrt(2.0) * std::max(b.max_second_derivative, 1.0) / b.eta_min);
    b.delta_kappa = std::abs(eq.kappa - eq_hat.kappa);
    b.delta_eta = std::abs(eq.eta - eq_hat.eta);
    b.s_max = s_max;
    const double gap = b.delta_kappa + b.delta_eta;
    b.value = gap == 0.0 ? 0.0 : b.L * gap * std::exp(b.L * s_max);
    b.log_value = gap == 0.0 ? -std::numeric_limits<double>::infinity()
                             : std::log(b.L) + std::log(gap) + b.L * s_max;

    std::ostringstream d;
    d.precision(17);
    d << "tangent f = (-eta, q)/|(q, eta)| with q = F'(u) + kappa; "
         "v -> v/|v| is 1/eta_min-Lipschitz on segments with second component >= eta_min; "
         "|dq| <= M |du| + |dkappa| with M = max|F''| = 4 kappa3/u_cut = "
      << b.max_second_derivative << "; l1 <= sqrt(2) l2 gives L = sqrt(2) max(M, 1)/eta_min = "
      << b.L << " with eta_min = " << b.eta_min
      << "; Gronwall: e(s) <= c (exp(L s) - 1) <= L c exp(L s) for L >= 1, c = |dkappa| + |deta| = "
      << gap;
    b.derivation = d.str();
    return b;
}

}  // namespace crackqc

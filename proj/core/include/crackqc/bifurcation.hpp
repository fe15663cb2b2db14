/**
 * @file bifurcation.hpp
 * @brief Roots and folds of the scalar crack-tip equation
 *        F(u) + kappa u + eta P = 0, arc-length continuation of its solution
 *        curve, curve comparison and the Lipschitz perturbation bound.
 */
#pragma once

#include <string>
#include <vector>

#include "crackqc/effective.hpp"
#include "crackqc/material.hpp"

namespace crackqc {

struct EffectiveEquation {
    ForceLaw<double> law;
    double kappa = 0.0;
    double eta = 1.0;
    std::string tag;  ///< model label carried into traced curves

    /// F(u) + kappa u + eta P.
    double residual(double u, double P) const { return law.force(u) + kappa * u + eta * P; }
};

/// Throws InvalidArgument unless eta > 0 and the inputs are finite.
EffectiveEquation make_equation(const ForceLaw<double>& law, double kappa, double eta,
                                std::string tag = {});
EffectiveEquation make_equation(const MaterialParams<double>& p,
                                const EffectiveCoefficients<double>& c);

struct FoldPoint {
    double u_star = 0.0;
    double P_star = 0.0;
    bool degenerate = false;  ///< double tangency (the two folds coincide)
};

/// All real roots in ascending order (cubic on u <= u_cut, linear beyond).
std::vector<double> solve_branches(const EffectiveEquation& eq, double P);

/// Saddle-node points F'(u*) = -kappa on (0, u_cut), sorted by u*.
std::vector<FoldPoint> fold_points(const EffectiveEquation& eq);

struct Tangent {
    double f1 = 0.0;  ///< du/ds before orientation
    double f2 = 0.0;  ///< dP/ds before orientation
};

Tangent tangent(const EffectiveEquation& eq, double u);

/// Orientation sign making dP/ds > 0 at the origin.
int default_orientation(const EffectiveEquation& eq);

struct CurveSample {
    double s = 0.0;
    double u = 0.0;
    double P = 0.0;
    double residual = 0.0;
};

struct BifurcationCurve {
    std::vector<CurveSample> samples;
    double h = 0.0;
    int orientation = 1;
    std::string tag;
    bool reached_cutoff = false;  ///< stopped because u > 1.1 u_cut

    double max_residual() const;
};

struct TraceOptions {
    int orientation = 0;              ///< 0 selects default_orientation
    bool extend_linear_tail = false;  ///< continue analytically past 1.1 u_cut up to s_max
};

/// Fixed-step fourth-order Runge-Kutta integration from (u, P) = (0, 0).
BifurcationCurve trace_curve(const EffectiveEquation& eq, double s_max, double h = 1e-3,
                             const TraceOptions& options = {});

struct CurveComparison {
    double sup_distance = 0.0;   ///< max over shared s of |du| + |dP|
    std::vector<double> s;
    std::vector<double> distance;
};

CurveComparison compare_curves(const BifurcationCurve& a, const BifurcationCurve& b);

struct LipschitzBound {
    double value = 0.0;  ///< L (|dkappa| + |deta|) exp(L s_max), may overflow to inf
    double log_value = 0.0;  ///< natural log of value, -inf when the coefficients agree
    double L = 0.0;
    double max_second_derivative = 0.0;
    double eta_min = 0.0;
    double delta_kappa = 0.0;
    double delta_eta = 0.0;
    double s_max = 0.0;
    std::string derivation;
};

LipschitzBound lipschitz_bound(const EffectiveEquation& eq, const EffectiveEquation& eq_hat,
                               double s_max);

}  // namespace crackqc

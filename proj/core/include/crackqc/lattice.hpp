/**
 * @file lattice.hpp
 * @brief Full-chain assembly for the exact, QC, QQC and FQC chains: force
 *        residuals, energies, a Newton equilibrium solver, the analytic
 *        reconstruction of the exact solution and the linear-solve oracle
 *        for (kappa, eta).
 *
 * The chain holds atoms j = 0..j_max. Beyond j_max the bonded recursion
 * u_{j+1} = alpha u_{j-1} + beta u_j closes the system, so the two last rows
 * are truncation closures rather than equilibrium rows.
 */
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "crackqc/effective.hpp"
#include "crackqc/material.hpp"

namespace crackqc {

struct ChainConfig {
    ModelKind model = ModelKind::Exact;
    long m = 0;      ///< interface index (unused by the exact model)
    long n = 1;      ///< crack-tip index
    long j_max = 0;  ///< last kept atom
};

/// Smallest J with max(|z1|, |z2|)^J <= 1e-14, clamped to [30, 400].
long default_truncation(const MaterialParams<double>& p);

/// Validates the indices and fills j_max = n + default_truncation when absent.
ChainConfig make_chain(const MaterialParams<double>& p, ModelKind model, long m, long n,
                       std::optional<long> j_max = std::nullopt);

struct DisplacementField {
    std::vector<double> u;  ///< u_0..u_{j_max}
    double P = 0.0;         ///< load on atom 0
};

/// Five-point row u_{j-2}..u_{j+2} of the linear operator, closure already folded in.
using BandRow = std::array<double, 5>;

/// Linear part of every row; the tip row additionally receives F(u_n).
struct LinearChain {
    ChainConfig config;
    std::vector<BandRow> rows;
    BandRow tip_row{};  ///< linear part of the tip equation before any closure
    double load_coefficient = 1.0;  ///< P enters row 0 with this factor

    long size() const { return config.j_max + 1; }
    /// Sum over the band of row j applied to u.
    double apply(long j, const std::vector<double>& u) const;
};

LinearChain assemble_linear(const MaterialParams<double>& p, const ChainConfig& config);

/// residual_j = left-hand side of equilibrium row j (force balance convention).
std::vector<double> assemble_residual(const MaterialParams<double>& p,
                                      const ChainConfig& config, const DisplacementField& field);

/**
 * @brief Total energy of the truncated chain.
 *
 * Bonds reaching beyond j_max are dropped, so -grad E equals the residual on
 * rows 0..j_max-2; the last two rows are the non-variational closure.
 * The tip bond contributes gamma(u_n) and the broken bonds 2 n gamma_0.
 */
double assemble_energy(const MaterialParams<double>& p, const ChainConfig& config,
                       const DisplacementField& field);

/// Number of leading rows on which -grad E and the residual coincide.
inline long variational_rows(const ChainConfig& config) { return config.j_max - 1; }

struct NewtonOptions {
    int max_iterations = 50;
    int max_halvings = 20;
    double tolerance = 1e-12;      ///< converged when |residual|_inf <= tolerance (1 + |P|)
    double singular_tolerance = 1e-10;  ///< reciprocal condition estimate flagged as singular
};

struct NewtonResult {
    DisplacementField field;
    int iterations = 0;                   ///< Newton updates performed
    std::vector<double> residual_history;  ///< |residual|_inf before each update and at exit
};

NewtonResult newton_solve(const MaterialParams<double>& p, const ChainConfig& config, double P,
                          const DisplacementField& u_init, const NewtonOptions& options = {});

struct ReconstructionCoefficients {
    double a = 0, b = 0, c = 0, d = 0;  ///< u_j = a + b j + c C(j) + d S(j) for j <= n
    double u_nm1 = 0, u_n = 0;          ///< seed of the bonded recursion
};

struct Reconstruction {
    ReconstructionCoefficients coefficients;
    DisplacementField field;
};

/// Analytic exact-model field for prescribed (u_n, P).
Reconstruction reconstruct_solution(const MaterialParams<double>& p, long n, double u_n, double P,
                                    std::optional<long> j_max = std::nullopt);

/// (kappa, eta) from two full-chain linear solves with u_n prescribed.
EffectiveCoefficients<double> oracle_coefficients(const MaterialParams<double>& p,
                                                  const ChainConfig& config);

}  // namespace crackqc

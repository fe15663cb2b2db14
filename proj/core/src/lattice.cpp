#include "crackqc/lattice.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace crackqc {

namespace {

constexpr int kBand = 2;  // next-nearest-neighbour stencil

double inf_norm(const std::vector<double>& v) {
    double r = 0;
    for (double x : v) r = std::max(r, std::abs(x));
    return r;
}

/// LU factorisation of a pentadiagonal matrix in LAPACK band storage.
class BandLU {
public:
    explicit BandLU(const std::vector<BandRow>& rows)
        : n_(static_cast<lapack_int>(rows.size())), ab_(static_cast<size_t>(kLd) * n_, 0.0),
          ipiv_(n_) {
        std::vector<double> column_sum(static_cast<size_t>(n_), 0.0);
        for (lapack_int i = 0; i < n_; ++i) {
            for (int o = -kBand; o <= kBand; ++o) {
                const lapack_int j = i + o;
                const double v = rows[i][o + kBand];
                if (v == 0.0) continue;
                if (j < 0 || j >= n_)
                    throw Error(ErrorCode::ShapeMismatch, "band entry outside the chain", i);
                ab_[(kBand + kBand + i - j) + static_cast<size_t>(j) * kLd] = v;
                column_sum[j] += std::abs(v);
            }
        }
        for (double c : column_sum) norm1_ = std::max(norm1_, c);
        info_ = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kBand, kBand, ab_.data(), kLd,
                               ipiv_.data());
    }

    /// Estimate of 1 / cond_1; a near-null mode can hide behind moderate pivots, so this is the test.
    double rcond() const {
        if (info_ > 0 || norm1_ == 0.0) return 0.0;
        double rc = 0.0;
        if (LAPACKE_dgbcon(LAPACK_COL_MAJOR, '1', n_, kBand, kBand, ab_.data(), kLd, ipiv_.data(),
                           norm1_, &rc) != 0)
            return 0.0;
        return rc;
    }

    /// Column of the smallest pivot of U, reported alongside singularity errors.
    long smallest_pivot() const {
        if (info_ > 0) return info_ - 1;
        long where = 0;
        for (lapack_int j = 1; j < n_; ++j)
            if (std::abs(pivot(j)) < std::abs(pivot(where))) where = j;
        return where;
    }

    void solve(std::vector<double>& rhs, int nrhs = 1) const {
        const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kBand, kBand, nrhs,
                                               ab_.data(), kLd, ipiv_.data(), rhs.data(), n_);
        if (info != 0) throw Error(ErrorCode::InvalidArgument, "banded solve failed");
    }

private:
    static constexpr lapack_int kLd = 3 * kBand + 1;
    lapack_int n_;
    std::vector<double> ab_;
    std::vector<lapack_int> ipiv_;
    lapack_int info_ = 0;
    double norm1_ = 0.0;

    double pivot(long j) const { return ab_[2 * kBand + static_cast<size_t>(j) * kLd]; }
};

void check_field(const ChainConfig& c, const DisplacementField& f) {
    if (static_cast<long>(f.u.size()) != c.j_max + 1)
        throw Error(ErrorCode::ShapeMismatch, "field length must be j_max + 1");
    for (double x : f.u)
        if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteInput, "field entries must be finite");
    if (!std::isfinite(f.P)) throw Error(ErrorCode::NonFiniteInput, "load must be finite");
}

/// Term -> band placement with the bonded closure beyond j_max.
struct RowBuilder {
    long j_max;
    double alpha, beta;
    BandRow* row = nullptr;
    long r = 0;

    void add(long j, double c) {
        if (c == 0.0) return;
        if (j < 0) throw Error(ErrorCode::IndexOrder, "stencil reaches below atom 0", r);
        if (j <= j_max) {
            (*row)[j - r + kBand] += c;
        } else if (j == j_max + 1) {
            add(j_max - 1, c * alpha);
            add(j_max, c * beta);
        } else if (j == j_max + 2) {
            add(j_max, c * alpha);
            add(j_max + 1, c * beta);
        } else {
            throw Error(ErrorCode::ShapeMismatch, "stencil reaches beyond the closure", r);
        }
    }
};

/// Row of the model at index j, expressed as offsets -2..2 (before closure).
BandRow model_row(const MaterialParams<double>& p, const ChainConfig& c, long j) {
    const double k1 = p.kappa1, k2 = p.kappa2, kb = p.kappa_bar, k3 = p.kappa3;
    const long m = c.m, n = c.n;
    const BandRow la{k2, k1, -2 * k1 - 2 * k2, k1, k2};
    const BandRow cb{0, kb, -2 * kb, kb, 0};
    if (j > n) return {k2, k1, -2 * k1 - 2 * k2 - 2 * k3, k1, k2};
    switch (c.model) {
    case ModelKind::Exact:
        if (j == 0) return {0, 0, -k1 - k2, k1, k2};
        if (j == 1) return {0, k1, -2 * k1 - k2, k1, k2};
        return la;
    case ModelKind::QC:
        if (j == 0) return {0, 0, -kb, kb, 0};
        if (j <= m - 2) return cb;
        if (j == m - 1) return {0, kb, -(2 * k1 + 8.5 * k2), kb, k2 / 2};
        if (j == m) return {0, kb, -(2 * k1 + 5 * k2), k1, k2};
        if (j == m + 1) return {k2 / 2, k1, -(2 * k1 + 1.5 * k2), k1, k2};
        return la;
    case ModelKind::QQC:
        if (j == 0) return {0, 0, -kb, kb, 0};
        if (j <= m - 2) return cb;
        if (j == m - 1) return {0, kb, -(2 * k1 + 7 * k2), k1 + 2 * k2, k2};
        if (j == m) return {0, k1 + 2 * k2, -(2 * k1 + 3 * k2), k1, k2};
        return la;
    case ModelKind::FQC:
        if (j == 0) return {0, 0, -kb, kb, 0};
        if (j <= m) return cb;
        return la;
    }
    return la;
}

std::vector<double> residual_from(const MaterialParams<double>& p, const LinearChain& lc,
                                  const DisplacementField& f) {
    const ForceLaw<double> law = ForceLaw<double>::from(p);
    std::vector<double> r(lc.size());
    for (long j = 0; j < lc.size(); ++j) r[j] = lc.apply(j, f.u);
    r[0] += lc.load_coefficient * f.P;
    r[lc.config.n] += law.force(f.u[lc.config.n]);
    return r;
}

}  // namespace

long default_truncation(const MaterialParams<double>& p) {
    const double zmax = bonded_decay(p);
    long J = 30;
    if (zmax > 0 && zmax < 1) J = static_cast<long>(std::ceil(std::log(1e-14) / std::log(zmax)));
    return std::clamp(J, 30L, 400L);
}

ChainConfig make_chain(const MaterialParams<double>& p, ModelKind model, long m, long n,
                       std::optional<long> j_max) {
    check_indices(model, m, n);
    ChainConfig c{model, model == ModelKind::Exact ? 0 : m, n, 0};
    c.j_max = j_max ? *j_max : n + default_truncation(p);
    if (c.j_max < n + 4) throw Error(ErrorCode::InvalidArgument, "j_max must be at least n + 4");
    return c;
}

double LinearChain::apply(long j, const std::vector<double>& u) const {
    double s = 0;
    for (int o = -kBand; o <= kBand; ++o) {
        const double c = rows[j][o + kBand];
        if (c != 0.0) s += c * u[j + o];
    }
    return s;
}

LinearChain assemble_linear(const MaterialParams<double>& p, const ChainConfig& config) {
    check_indices(config.model, config.m, config.n);
    if (config.j_max < config.n + 4)
        throw Error(ErrorCode::InvalidArgument, "j_max must be at least n + 4");
    const auto [alpha, beta] = far_field_recursion(p);
    LinearChain lc;
    lc.config = config;
    lc.rows.assign(config.j_max + 1, BandRow{});
    RowBuilder b{config.j_max, alpha, beta};
    for (long j = 0; j <= config.j_max; ++j) {
        const BandRow raw = model_row(p, config, j);
        b.row = &lc.rows[j];
        b.r = j;
        for (int o = -kBand; o <= kBand; ++o) b.add(j + o, raw[o + kBand]);
    }
    lc.tip_row = model_row(p, config, config.n);
    return lc;
}

std::vector<double> assemble_residual(const MaterialParams<double>& p,
                                      const ChainConfig& config, const DisplacementField& field) {
    check_field(config, field);
    return residual_from(p, assemble_linear(p, config), field);
}

double assemble_energy(const MaterialParams<double>& p, const ChainConfig& config,
                       const DisplacementField& field) {
    if (!has_energy(config.model))
        throw Error(ErrorCode::NoEnergy, "the force-based coupling has no associated energy");
    check_indices(config.model, config.m, config.n);
    check_field(config, field);
    const auto& u = field.u;
    const long J = config.j_max, m = config.m, n = config.n;
    const double k1 = p.kappa1, k2 = p.kappa2, kb = p.kappa_bar;
    auto in = [&](long j) { return j >= 0 && j <= J; };
    auto sq = [&](long i, long j) {
        if (!in(i) || !in(j)) return 0.0;
        const double d = u[i] - u[j];
        return d * d;
    };
    auto site_atomistic = [&](long j) {
        return k1 / 4 * (sq(j + 1, j) + sq(j - 1, j)) + k2 / 4 * (sq(j + 2, j) + sq(j - 2, j));
    };
    auto site_cauchy_born = [&](long j) { return kb / 4 * (sq(j + 1, j) + sq(j, j - 1)); };

    double E = -field.P * u[0];
    switch (config.model) {
    case ModelKind::Exact:
        for (long j = 0; j <= J; ++j) E += k1 / 2 * sq(j + 1, j) + k2 / 2 * sq(j + 2, j);
        break;
    case ModelKind::QC:
        for (long j = 0; j <= m - 2; ++j) E += site_cauchy_born(j);
        E += k1 / 4 * (sq(m, m - 1) + sq(m - 1, m - 2)) + k2 * (sq(m, m - 1) + sq(m - 1, m - 2));
        E += k1 / 4 * (sq(m, m - 1) + sq(m + 1, m)) + k2 / 4 * (sq(m + 2, m) + 4 * sq(m, m - 1));
        for (long j = m + 1; j <= J; ++j) E += site_atomistic(j);
        break;
    case ModelKind::QQC:
        for (long j = 0; j <= m - 2; ++j) E += site_cauchy_born(j);
        for (long j = m - 1; j <= m; ++j)
            E += k2 / 4 * sq(j + 2, j) + k1 / 4 * (sq(j + 1, j) + sq(j, j - 1)) + k2 * sq(j, j - 1);
        for (long j = m + 1; j <= J; ++j) E += site_atomistic(j);
        break;
    case ModelKind::FQC:
        break;
    }
    const ForceLaw<double> law = ForceLaw<double>::from(p);
    E += 2.0 * static_cast<double>(n) * law.gamma0() + law.surface_energy_unchecked(u[n]);
    for (long j = n + 1; j <= J; ++j) E += p.kappa3 * u[j] * u[j];
    return E;
}

NewtonResult newton_solve(const MaterialParams<double>& p, const ChainConfig& config, double P,
                          const DisplacementField& u_init, const NewtonOptions& options) {
    check_field(config, u_init);
    if (!std::isfinite(P)) throw Error(ErrorCode::NonFiniteInput, "load must be finite");
    const LinearChain lc = assemble_linear(p, config);
    const ForceLaw<double> law = ForceLaw<double>::from(p);
    const long n = config.n;
    const double tol = options.tolerance * (1.0 + std::abs(P));

    NewtonResult res;
    res.field = u_init;
    res.field.P = P;
    std::vector<double> r = residual_from(p, lc, res.field);
    double norm = inf_norm(r);
    res.residual_history.push_back(norm);

    for (int it = 0; it < options.max_iterations; ++it) {
        if (norm <= tol) return res;
        std::vector<BandRow> jac = lc.rows;
        jac[n][kBand] += law.derivative(res.field.u[n]);
        const BandLU lu(jac);
        if (lu.rcond() < options.singular_tolerance) {
            const long weak = lu.smallest_pivot();
            throw Error(ErrorCode::SingularJacobian,
                        "Newton Jacobian is singular near pivot " + std::to_string(weak), weak);
        }
        std::vector<double> step(r.size());
        for (size_t i = 0; i < r.size(); ++i) step[i] = -r[i];
        lu.solve(step);

        double lambda = 1.0;
        DisplacementField trial = res.field;
        std::vector<double> rt;
        double nt = norm;
        for (int h = 0; h <= options.max_halvings; ++h) {
            for (size_t i = 0; i < step.size(); ++i) trial.u[i] = res.field.u[i] + lambda * step[i];
            rt = residual_from(p, lc, trial);
            nt = inf_norm(rt);
            if (nt < norm) break;
            lambda *= 0.5;
        }
        res.field = trial;
        r = std::move(rt);
        norm = nt;
        res.iterations = it + 1;
        res.residual_history.push_back(norm);
    }
    if (norm <= tol) return res;
    throw Error(ErrorCode::NonConvergence,
                "Newton did not converge in " + std::to_string(options.max_iterations) +
                    " iterations");
}

Reconstruction reconstruct_solution(const MaterialParams<double>& p, long n, double u_n, double P,
                                    std::optional<long> j_max) {
    const ChainConfig cfg = make_chain(p, ModelKind::Exact, 0, n, j_max);
    const auto roots = characteristic_roots(p);
    const HyperbolicKernel<double> ker(roots.z0);
    const double z = roots.z0, alpha = roots.alpha, beta = roots.beta;
    const double abp = alpha + beta - 1;
    const double sh = ker.sinh1();
    const double load = P / p.kappa_bar;
    const auto fa = ker.fg_scaled(n, alpha);
    const auto ab = ker.ab(alpha);
    const double zn = ker.power(n);

    Reconstruction out;
    auto& c = out.coefficients;
    c.b = -load;
    c.d = load / sh;
    c.c = zn * abp * u_n / fa.F_scaled - load * (fa.G_scaled / sh - (1 + alpha) * zn) / fa.F_scaled;
    // u_j = a + b j + cp z^-j + cm z^j with cp = (c + d)/2 carrying an explicit z^n.
    const double cp_core =
        (abp * u_n + load * (1 + alpha) + load * (ab.A - ab.B) * zn / sh) / (2 * fa.F_scaled);
    const double cm = (c.c - c.d) / 2;
    c.a = u_n - c.b * static_cast<double>(n) - cp_core - cm * zn;

    auto& u = out.field.u;
    u.assign(cfg.j_max + 1, 0.0);
    out.field.P = P;
    for (long j = 0; j <= n; ++j)
        u[j] = c.a + c.b * static_cast<double>(j) + cp_core * ipow(z, n - j) + cm * ipow(z, j);
    u[n] = u_n;
    for (long j = n; j < cfg.j_max; ++j) u[j + 1] = alpha * u[j - 1] + beta * u[j];
    c.u_nm1 = u[n - 1];
    c.u_n = u_n;
    return out;
}

EffectiveCoefficients<double> oracle_coefficients(const MaterialParams<double>& p,
                                                  const ChainConfig& config) {
    const LinearChain lc = assemble_linear(p, config);
    const long N = lc.size(), n = config.n;
    std::vector<BandRow> rows = lc.rows;
    rows[n] = BandRow{0, 0, 1, 0, 0};
    const BandLU lu(rows);
    if (lu.rcond() < 1e-13)
        throw Error(ErrorCode::SingularSystem, "reduced oracle system is singular",
                    lu.smallest_pivot());

    // Column 0: (u_n = 1, P = 0); column 1: (u_n = 0, P = 1).
    std::vector<double> rhs(2 * N, 0.0);
    rhs[n] = 1.0;
    rhs[N + 0] = -lc.load_coefficient;
    lu.solve(rhs, 2);

    auto tip = [&](const double* u) {
        double s = 0;
        for (int o = -kBand; o <= kBand; ++o)
            if (lc.tip_row[o + kBand] != 0.0) s += lc.tip_row[o + kBand] * u[n + o];
        return s;
    };
    EffectiveCoefficients<double> c;
    c.model = config.model;
    c.n = n;
    if (config.model != ModelKind::Exact) c.m = config.m;
    c.kappa = tip(rhs.data());
    c.eta = tip(rhs.data() + N) + (n == 0 ? lc.load_coefficient : 0.0);
    return c;
}

}  // namespace crackqc

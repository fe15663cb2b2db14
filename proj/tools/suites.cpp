#include "suites.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crackqc/effective.hpp"
#include "crackqc/kernels.hpp"
#include "crackqc/lattice.hpp"

namespace crackqc::suites {

namespace {

namespace mp = boost::multiprecision;
using Big = mp::number<mp::cpp_bin_float<160>>;
using Mid = mp::cpp_bin_float_50;

SuiteResult make(std::string name, double metric, double tol, std::string detail = {}) {
    return {std::move(name), metric <= tol, metric, tol, std::move(detail)};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

/// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double log_abs(const Mid& v) { return static_cast<double>(mp::log(mp::abs(v))); }

}  // namespace

MaterialParams<double> random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> k1(1.0, 10.0), ratio(0.02, 0.5), k3(1.0, 50.0),
        uc(0.1, 2.0);
    for (;;) {
        const double a = k1(rng);
        const double b = a * ratio(rng);
        try {
            return validate(a, b, k3(rng), uc(rng));
        } catch (const Error&) {
        }
    }
}

std::vector<SuiteResult> identity_suites(const MaterialParams<double>& p) {
    std::vector<SuiteResult> out;
    const auto ker = HyperbolicKernel<double>::from(p);
    double worst = 0;
    for (long k = -5; k <= 120; ++k) {
        const auto r = identity_rela(p, ker, k);
        worst = std::max(worst, std::max(std::abs(r.cosh_residual), std::abs(r.sinh_residual)) /
                                    r.scale);
    }
    out.push_back(make("rela1/rela2 residual, k in [-5, 120]", worst, 1e-11));

    const auto pb = p.cast<Big>();
    const auto rb = characteristic_roots(pb);
    const HyperbolicKernel<Big> kb(rb.z0);
    const Big c0 = criss_cross_constant(kb, rb.alpha, rb.beta);
    double cc = 0;
    for (long n = 1; n <= 50; ++n) {
        const Big v = criss_cross(kb, rb.alpha, rb.beta, n);
        cc = std::max(cc, static_cast<double>(mp::abs((v - c0) / c0)));
    }
    out.push_back(make("criss-cross determinant constant, n in [1, 50]", cc, 1e-9));

    const auto r = characteristic_roots(p);
    double col = 0;
    for (long n = 1; n <= 50; ++n) {
        const auto fa = ker.fg_scaled(n, r.alpha);
        const auto fb = ker.fg_scaled(n, 1 - r.beta);
        const double scale = std::abs((r.beta - 2) * fa.F_scaled) +
                             std::abs((1 + r.alpha) * fb.F_scaled);
        col = std::max(col, std::abs(collapse_residual(ker, r.alpha, r.beta, n)) / scale);
    }
    out.push_back(make("coefficient collapse identity, n in [1, 50]", col, 1e-11));
    return out;
}

SuiteResult alpha_beta_suite(const SuiteOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    double worst = 0;
    for (int i = 0; i < opts.alpha_beta_sets; ++i) {
        const auto p = random_params(rng);
        const auto r = characteristic_roots(p);
        const double a = r.alpha, b = r.beta;
        const double e1 = std::abs(p.kappa1 * a + p.kappa2 * (a - 1) * b) /
                          (std::abs(p.kappa1 * a) + std::abs(p.kappa2 * (a - 1) * b));
        // z^2 coefficient of kappa2 (z^2 - beta z - alpha)(z^2 + (beta/alpha) z + 1/alpha).
        const double lhs = p.kappa2 * (a * a + b * b + 1);
        const double rhs = 2 * (p.kappa1 + p.kappa2 + p.kappa3) * a;
        const double e2 = std::abs(lhs - rhs) / std::abs(lhs);
        worst = std::max({worst, e1, e2});
        if (!(a + b - 1 < 0)) return make("alpha/beta relations", 1.0, 1e-11, "alpha + beta >= 1");
    }
    std::ostringstream d;
    d << opts.alpha_beta_sets << " random parameter sets";
    return make("alpha/beta relations", worst, 1e-11, d.str());
}

std::vector<SuiteResult> energy_force_suites(const MaterialParams<double>& p,
                                             const SuiteOptions& opts) {
    std::vector<SuiteResult> out;
    std::mt19937_64 rng(opts.seed ^ 0x5eedULL);
    std::uniform_real_distribution<double> amp(0.0, 0.6 * p.u_cut), load(-1.0, 1.0);
    for (ModelKind model : {ModelKind::Exact, ModelKind::QC, ModelKind::QQC}) {
        const ChainConfig cfg = make_chain(p, model, 6, 12);
        double worst = 0;
        for (int f = 0; f < opts.energy_fields; ++f) {
            DisplacementField field{std::vector<double>(cfg.j_max + 1), load(rng)};
            for (auto& u : field.u) u = amp(rng);
            const auto res = assemble_residual(p, cfg, field);
            double scale = 0;
            for (long j = 0; j < variational_rows(cfg); ++j) scale = std::max(scale, std::abs(res[j]));
            for (long j = 0; j < variational_rows(cfg); ++j) {
                const double h = 1e-6;
                DisplacementField a = field, b = field;
                a.u[j] += h;
                b.u[j] -= h;
                const double g = (assemble_energy(p, cfg, a) - assemble_energy(p, cfg, b)) / (2 * h);
                worst = std::max(worst, std::abs(g + res[j]) / scale);
            }
        }
        out.push_back(make(std::string("energy-force consistency, ") + to_string(model), worst, 1e-6));
    }
    bool rejected = false;
    try {
        const ChainConfig cfg = make_chain(p, ModelKind::FQC, 6, 12);
        assemble_energy(p, cfg, DisplacementField{std::vector<double>(cfg.j_max + 1, 0.0), 0.0});
    } catch (const Error& e) {
        rejected = e.code() == ErrorCode::NoEnergy;
    }
    out.push_back(make("fqc reports no energy", rejected ? 0.0 : 1.0, 0.0));
    return out;
}

std::vector<SuiteResult> oracle_suites(const MaterialParams<double>& p, long m, long n,
                                       const SuiteOptions& opts) {
    std::vector<SuiteResult> out;
    std::mt19937_64 rng(opts.seed ^ 0x0a11ULL);
    for (ModelKind model : {ModelKind::Exact, ModelKind::QC, ModelKind::QQC, ModelKind::FQC}) {
        const auto f = coefficients(model, p, m, n);
        const auto o = oracle_coefficients(p, make_chain(p, model, m, n));
        double worst = std::max(rel(o.kappa, f.kappa), rel(o.eta, f.eta));
        for (int i = 0; i < opts.oracle_configs; ++i) {
            const auto q = random_params(rng);
            const long mm = std::uniform_int_distribution<long>(min_interface_index(model) + 2, 30)(rng);
            const long nn = mm + std::uniform_int_distribution<long>(2, 10)(rng);
            const auto fq = coefficients(model, q, mm, nn);
            const auto oq = oracle_coefficients(q, make_chain(q, model, mm, nn));
            worst = std::max({worst, rel(oq.kappa, fq.kappa), rel(oq.eta, fq.eta)});
        }
        std::ostringstream d;
        d << "configured (m, n) = (" << m << ", " << n << ") plus " << opts.oracle_configs
          << " random configurations";
        out.push_back(make(std::string("oracle equivalence, ") + to_string(model), worst, 1e-8, d.str()));
    }
    return out;
}

std::vector<SuiteResult> expansion_suites(const MaterialParams<double>& p) {
    std::vector<SuiteResult> out;
    const auto pm = p.cast<Mid>();
    const auto lim = exact_limits(pm);
    const double lz = std::log(std::abs(crack_region_root(p)));
    auto order = [&](const std::string& name, double expected, auto&& err, long lo, long hi) {
        std::vector<double> x, y;
        for (long k = lo; k <= hi; ++k) {
            x.push_back(static_cast<double>(k));
            y.push_back(log_abs(err(k)));
        }
        const double s = slope(x, y);
        std::ostringstream d;
        d << "slope " << s << ", expected " << expected;
        out.push_back(make(name, std::abs(s / expected - 1), 0.05, d.str()));
    };
    const long m0 = 20;
    order("exact kappa order in n", 2 * lz,
          [&](long n) { return exact_coefficients(pm, n).kappa - lim.kappa0; }, 6, 14);
    order("qqc kappa order in n - m", 2 * lz,
          [&](long k) { return qqc_coefficients(pm, m0, m0 + k).kappa - lim.kappa0; }, 2, 10);
    order("qqc eta order in n - m", 2 * lz,
          [&](long k) { return qqc_coefficients(pm, m0, m0 + k).eta - lim.eta0; }, 2, 10);
    order("fqc kappa order in n - m", lz,
          [&](long k) { return fqc_coefficients(pm, m0, m0 + k).kappa - lim.kappa0; }, 2, 10);
    order("fqc eta order in n - m", lz,
          [&](long k) { return fqc_coefficients(pm, m0, m0 + k).eta - lim.eta0; }, 2, 10);

    const double gap = std::abs(static_cast<double>(lim.gap));
    double worst_ratio = 1e300;
    for (long k = 4; k <= 60; ++k) {
        const auto c = qc_coefficients(pm, m0, m0 + k, QcVariant::Published);
        worst_ratio = std::min(worst_ratio, std::abs(static_cast<double>(c.eta - lim.eta0)) / gap);
    }
    std::ostringstream d;
    d << "min |eta_qc - eta0| / |eta0 - eta0_qc| over n - m in [4, 60] = " << worst_ratio;
    out.push_back({"qc eta keeps the limit gap", worst_ratio >= 0.9, worst_ratio, 0.9, d.str()});
    return out;
}

}  // namespace crackqc::suites

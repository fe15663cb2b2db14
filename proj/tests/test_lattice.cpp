#include <cmath>
#include <vector>

#include "crackqc/bifurcation.hpp"
#include "crackqc/lattice.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace crackqc;
using crackqc::test::random_params;
using crackqc::test::reference_params;

namespace {

constexpr ModelKind kAllModels[] = {ModelKind::Exact, ModelKind::QC, ModelKind::QQC,
                                    ModelKind::FQC};

DisplacementField zero_field(const ChainConfig& c, double P = 0.0) {
    return {std::vector<double>(static_cast<size_t>(c.j_max + 1), 0.0), P};
}

double max_abs(const std::vector<double>& v, size_t from = 0, size_t to = SIZE_MAX) {
    double r = 0;
    for (size_t i = from; i < std::min(to, v.size()); ++i) r = std::max(r, std::abs(v[i]));
    return r;
}

ErrorCode error_code(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("lattice") {
    TEST_CASE("zero field at zero load is in equilibrium") {
        const auto p = reference_params();
        for (ModelKind model : kAllModels) {
            const auto c = make_chain(p, model, 8, 14);
            CHECK(max_abs(assemble_residual(p, c, zero_field(c))) == 0.0);
        }
    }

    TEST_CASE("uniform gradient exposes ghost forces only in QC") {
        const auto p = reference_params();
        const long m = 10, n = 20;
        for (ModelKind model : kAllModels) {
            CAPTURE(to_string(model));
            const auto c = make_chain(p, model, m, n);
            auto f = zero_field(c);
            for (long j = 0; j <= c.j_max; ++j) f.u[j] = 0.3 - 0.01 * static_cast<double>(j);
            const auto r = assemble_residual(p, c, f);
            // Rows away from the left boundary and the tip.
            double interior = 0, interface = 0;
            for (long j = 2; j <= n - 2; ++j) {
                const bool near = j >= m - 1 && j <= m + 1;
                (near ? interface : interior) = std::max(near ? interface : interior, std::abs(r[j]));
            }
            CHECK(interior <= 1e-15);
            if (model == ModelKind::QC)
                CHECK(interface > 1e-4);
            else
                CHECK(interface <= 1e-15);
        }
    }

    TEST_CASE("energy of the unloaded reference state") {
        const auto p = reference_params();
        const ForceLaw<double> law = ForceLaw<double>::from(p);
        for (ModelKind model : {ModelKind::Exact, ModelKind::QC, ModelKind::QQC}) {
            const auto c = make_chain(p, model, 8, 14);
            CHECK(assemble_energy(p, c, zero_field(c)) == doctest::Approx(2 * 14 * law.gamma0()));
        }
    }

    TEST_CASE("energy gradient equals minus the residual") {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> U(-0.2, 0.2), Tip(0.05, 0.45), Load(-3, 3);
        const auto p = reference_params();
        const double h = 1e-6;
        for (ModelKind model : {ModelKind::Exact, ModelKind::QC, ModelKind::QQC}) {
            for (int t = 0; t < 20; ++t) {
                const auto c = make_chain(p, model, 6, 12, 40);
                DisplacementField f = zero_field(c, Load(rng));
                for (auto& x : f.u) x = U(rng);
                f.u[c.n] = Tip(rng) * p.u_cut * 2;
                const auto r = assemble_residual(p, c, f);
                double worst = 0;
                for (long j = 0; j < variational_rows(c); ++j) {
                    DisplacementField a = f, b = f;
                    a.u[j] += h;
                    b.u[j] -= h;
                    const double g = (assemble_energy(p, c, a) - assemble_energy(p, c, b)) / (2 * h);
                    worst = std::max(worst, std::abs(g + r[j]) / std::max(1.0, std::abs(r[j])));
                }
                CAPTURE(to_string(model));
                CHECK(worst <= 1e-6);
            }
        }
        const auto fc = make_chain(p, ModelKind::FQC, 6, 12);
        CHECK(error_code([&] { assemble_energy(p, fc, zero_field(fc)); }) == ErrorCode::NoEnergy);
    }

    TEST_CASE("Newton at zero load returns the zero field") {
        const auto p = reference_params();
        for (ModelKind model : kAllModels) {
            const auto c = make_chain(p, model, 100, 104);
            const auto r = newton_solve(p, c, 0.0, zero_field(c));
            CHECK(r.iterations <= 1);
            CHECK(max_abs(r.field.u) == 0.0);
        }
    }

    TEST_CASE("Newton equilibrium lies on the effective equation") {
        const auto p = reference_params();
        for (ModelKind model : kAllModels) {
            CAPTURE(to_string(model));
            const auto c = make_chain(p, model, 96, 104);
            const auto coef = oracle_coefficients(p, c);
            const auto eq = make_equation(p, coef);
            const auto folds = fold_points(eq);
            REQUIRE(folds.size() == 2);
            for (double frac : {0.2, 0.6, 0.95}) {
                const double P = frac * folds[0].P_star;
                const auto r = newton_solve(p, c, P, zero_field(c));
                const double un = r.field.u[c.n];
                // The stable branch is the smallest non-negative root.
                double want = HUGE_VAL;
                for (double x : solve_branches(eq, P))
                    if (x >= 0) want = std::min(want, x);
                CHECK(std::abs(un - want) <= 1e-8);
                CHECK(std::abs(eq.residual(un, P)) <= 1e-10);
            }
        }
    }

    TEST_CASE("Newton converges quadratically") {
        const auto p = reference_params();
        const auto c = make_chain(p, ModelKind::Exact, 0, 104);
        const auto r = newton_solve(p, c, 2.3, zero_field(c));
        const auto& h = r.residual_history;
        REQUIRE(h.size() >= 4);
        int checked = 0;
        for (size_t k = 0; k + 1 < h.size(); ++k) {
            if (h[k] > 1e-2 || h[k + 1] < 1e-12) continue;
            CHECK(h[k + 1] <= 50 * h[k] * h[k]);
            ++checked;
        }
        CHECK(checked >= 1);
    }

    TEST_CASE("Newton agrees with the analytic reconstruction") {
        const auto p = reference_params();
        const auto c = make_chain(p, ModelKind::Exact, 0, 104);
        for (double P : {0.5, 1.5, 2.4}) {
            const auto r = newton_solve(p, c, P, zero_field(c));
            const auto rec = reconstruct_solution(p, 104, r.field.u[104], P);
            REQUIRE(rec.field.u.size() == r.field.u.size());
            double d = 0;
            for (size_t j = 0; j < rec.field.u.size(); ++j)
                d = std::max(d, std::abs(rec.field.u[j] - r.field.u[j]));
            CHECK(d <= 1e-8);
        }
    }

    TEST_CASE("singular Jacobian at the fold state") {
        const auto p = reference_params();
        const auto c = make_chain(p, ModelKind::Exact, 0, 104);
        const auto eq = make_equation(p, exact_coefficients(p, 104));
        const auto folds = fold_points(eq);
        REQUIRE(folds.size() == 2);
        const auto rec = reconstruct_solution(p, 104, folds[0].u_star, folds[0].P_star);
        NewtonOptions opt;
        opt.tolerance = 1e-18;
        try {
            newton_solve(p, c, folds[0].P_star, rec.field, opt);
            FAIL("expected a singular Jacobian");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SingularJacobian);
            CHECK(e.index() >= 0);
        }
    }

    TEST_CASE("oracle is insensitive to the truncation length") {
        const auto p = reference_params();
        for (ModelKind model : kAllModels) {
            CAPTURE(to_string(model));
            const auto a = oracle_coefficients(p, make_chain(p, model, 100, 104, 164));
            const auto b = oracle_coefficients(p, make_chain(p, model, 100, 104, 224));
            const auto f = coefficients(model, p, 100, 104);
            CHECK(std::abs(a.kappa - b.kappa) <= 1e-11);
            CHECK(std::abs(a.eta - b.eta) <= 1e-11);
            CHECK(std::abs(a.kappa - f.kappa) <= 1e-8);
            CHECK(std::abs(a.eta - f.eta) <= 1e-8);
        }
    }

    TEST_CASE("far-field closure of a converged field") {
        const auto p = reference_params();
        const auto [alpha, beta] = far_field_recursion(p);
        const auto c = make_chain(p, ModelKind::QQC, 96, 104);
        const auto r = newton_solve(p, c, 1.0, zero_field(c));
        const auto& u = r.field.u;
        const long J = c.j_max;
        CHECK(std::abs(u[J] - (alpha * u[J - 2] + beta * u[J - 1])) <= 1e-12 * max_abs(u));
        CHECK(std::abs(u[J]) <= 1e-12 * max_abs(u));
    }

    TEST_CASE("chain without next-nearest bonds") {
        const auto p = validate(4.0, 0.0, 20.0, 0.5);
        const double w = 2 * (p.kappa1 + p.kappa3) / p.kappa1;
        const double z1 = (w - std::sqrt(w * w - 4)) / 2;
        for (long n : {5L, 30L}) {
            const auto o = oracle_coefficients(p, make_chain(p, ModelKind::Exact, 0, n));
            CHECK(o.kappa == doctest::Approx(p.kappa1 * (z1 - 1)).epsilon(1e-12));
            CHECK(o.eta == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(error_code([&] { exact_coefficients(p, 10); }) == ErrorCode::ZeroKappa2);
    }

    TEST_CASE("reconstruction coefficients and residual") {
        std::mt19937_64 rng(3);
        for (int t = 0; t < 20; ++t) {
            const auto p = random_params(rng);
            const long n = std::uniform_int_distribution<long>(3, 60)(rng);
            const double un = 0.7 * p.u_cut * std::uniform_real_distribution<double>(0, 1)(rng);
            const double P = std::uniform_real_distribution<double>(-2, 2)(rng);
            const auto rec = reconstruct_solution(p, n, un, P);
            const double sh = HyperbolicKernel<double>::from(p).sinh1();
            CHECK(rec.coefficients.b == doctest::Approx(-P / p.kappa_bar));
            CHECK(rec.coefficients.d == doctest::Approx(P / p.kappa_bar / sh));
            CHECK(rec.coefficients.u_n == un);
            CHECK(rec.field.u[n] == un);

            const auto c = make_chain(p, ModelKind::Exact, 0, n);
            const auto r = assemble_residual(p, c, rec.field);
            double off_tip = 0;
            for (long j = 0; j <= c.j_max; ++j)
                if (j != n) off_tip = std::max(off_tip, std::abs(r[j]));
            const double scale = std::max({1.0, std::abs(P), p.kappa_bar * max_abs(rec.field.u)});
            CHECK(off_tip <= 1e-10 * scale);
            const auto coef = exact_coefficients(p, n);
            const double tip = ForceLaw<double>::from(p).force(un) + coef.kappa * un + coef.eta * P;
            CHECK(std::abs(r[n] - tip) <= 1e-10 * scale);
        }
        const auto p = reference_params();
        const auto z = reconstruct_solution(p, 20, 0.0, 0.0);
        CHECK(max_abs(z.field.u) == 0.0);
    }

    TEST_CASE("input validation") {
        const auto p = reference_params();
        const auto c = make_chain(p, ModelKind::QC, 8, 14);
        DisplacementField bad = zero_field(c);
        bad.u.pop_back();
        CHECK(error_code([&] { assemble_residual(p, c, bad); }) == ErrorCode::ShapeMismatch);
        DisplacementField nan = zero_field(c);
        nan.u[3] = std::nan("");
        CHECK(error_code([&] { assemble_residual(p, c, nan); }) == ErrorCode::NonFiniteInput);
        CHECK(error_code([&] { newton_solve(p, c, std::nan(""), zero_field(c)); }) ==
              ErrorCode::NonFiniteInput);
        CHECK(error_code([&] { make_chain(p, ModelKind::QQC, 8, 14, 17); }) ==
              ErrorCode::InvalidArgument);
        CHECK(error_code([&] { make_chain(p, ModelKind::QC, 2, 14); }) == ErrorCode::IndexOrder);
        CHECK(make_chain(p, ModelKind::Exact, 0, 14).j_max - 14 == default_truncation(p));
        CHECK(default_truncation(p) >= 30);
    }
}

/**
 * @file main.cpp
 * @brief crackqc command-line tool: parameter validation, coefficient
 *        reports, limits, curve tracing, fold detection, curve comparison,
 *        table reproduction and the invariant suites.
 *
 * Exit codes: 0 success, 1 numerical mismatch, 2 invalid input.
 */
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "crackqc/bifurcation.hpp"
#include "crackqc/effective.hpp"
#include "crackqc/lattice.hpp"
#include "reference_tables.hpp"
#include "run_config.hpp"
#include "suites.hpp"

using nlohmann::json;

namespace crackqc::cli {
namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kInvalid = 2;

constexpr double kOracleTolerance = 1e-8;

bool is_input_error(ErrorCode c) {
    switch (c) {
    case ErrorCode::NonFiniteInput:
    case ErrorCode::NonPositiveKappa1:
    case ErrorCode::NonPositiveKappaBar:
    case ErrorCode::NonPositiveKappa3:
    case ErrorCode::NonPositiveCutoff:
    case ErrorCode::NegativeDiscriminant:
    case ErrorCode::ComplexBondedRoots:
    case ErrorCode::ZeroKappa2:
    case ErrorCode::NegativeDisplacement:
    case ErrorCode::IndexOrder:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::InvalidArgument:
    case ErrorCode::MismatchedCurves: return true;
    default: return false;
    }
}

std::string fmt(double v, int digits = 15) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

void put_params(json& j, const RunConfig& c) {
    j["k1"] = c.k1;
    j["k2"] = c.k2;
    j["k3"] = c.k3;
    j["ucut"] = c.ucut;
}

/// Writes either to --out or to stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void emit_json(const RunConfig& cfg, const json& j) {
    Output out(cfg.out);
    out.stream() << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------

int cmd_validate(const RunConfig& cfg) {
    json j;
    j["command"] = "validate";
    put_params(j, cfg);
    MaterialParams<double> p;
    try {
        p = cfg.params();
    } catch (const Error& e) {
        j["valid"] = false;
        j["error"] = to_string(e.code());
        j["message"] = e.what();
        if (cfg.json) emit_json(cfg, j);
        else std::cout << "invalid: " << to_string(e.code()) << ": " << e.what() << "\n";
        return kInvalid;
    }
    j["valid"] = true;
    j["kappa_bar"] = p.kappa_bar;
    j["delta_disc"] = p.delta_disc;
    if (p.kappa2 != 0) {
        const auto r = characteristic_roots(p);
        j["z0"] = r.z0;
        j["z1"] = r.z1;
        j["z2"] = r.z2;
        j["alpha"] = r.alpha;
        j["beta"] = r.beta;
        j["marginal"] = r.marginal;
    } else {
        const auto [a, b] = far_field_recursion(p);
        j["z0"] = nullptr;
        j["alpha"] = a;
        j["beta"] = b;
        j["marginal"] = false;
    }
    const long jt = default_truncation(p);
    j["default_truncation"] = jt;
    if (cfg.json) {
        emit_json(cfg, j);
        return kOk;
    }
    Output out(cfg.out);
    auto& os = out.stream();
    os << "valid parameters\n";
    for (const char* key : {"kappa_bar", "delta_disc", "z0", "z1", "z2", "alpha", "beta"}) {
        if (!j.contains(key) || j[key].is_null()) continue;
        os << "  " << key << " = " << fmt(j[key].get<double>(), 16) << "\n";
    }
    os << "  marginal = " << (j["marginal"].get<bool>() ? "yes" : "no") << "\n";
    os << "  default truncation J = " << jt << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_coefficients(const RunConfig& cfg) {
    const auto p = cfg.params();
    const auto lim = exact_limits(p);
    json j;
    j["command"] = "coefficients";
    put_params(j, cfg);
    j["m"] = cfg.m;
    j["n"] = cfg.n;
    j["qc_variant"] = to_string(cfg.qc_variant);
    j["kappa0"] = lim.kappa0;
    j["eta0"] = lim.eta0;
    j["eta0_qc"] = lim.eta0_qc;
    j["gap"] = lim.gap;
    json rows = json::array();
    double max_diff = 0;
    for (ModelKind model : cfg.models) {
        const auto c = coefficients(model, p, cfg.m, cfg.n, cfg.qc_variant);
        json r;
        r["model"] = to_string(model);
        r["kappa"] = c.kappa;
        r["eta"] = c.eta;
        if (const auto e = expansions(model, p, cfg.m, cfg.n)) {
            r["kappa_expansion"] = e->kappa.predicted(cfg.n, cfg.m);
            r["eta_expansion"] = e->eta.predicted(cfg.n, cfg.m);
            r["kappa_leading_coefficient"] = e->kappa.leading_coefficient;
            r["eta_leading_coefficient"] = e->eta.leading_coefficient;
            r["kappa_exponent"] = e->kappa.decay_exponent.at(cfg.n, cfg.m);
            r["eta_exponent"] = e->eta.decay_exponent.at(cfg.n, cfg.m);
        }
        if (cfg.oracle) {
            const auto o = oracle_coefficients(p, make_chain(p, model, cfg.m, cfg.n, cfg.jmax));
            r["oracle_kappa"] = o.kappa;
            r["oracle_eta"] = o.eta;
            r["abs_diff_kappa"] = std::abs(o.kappa - c.kappa);
            r["abs_diff_eta"] = std::abs(o.eta - c.eta);
            max_diff = std::max({max_diff, std::abs(o.kappa - c.kappa), std::abs(o.eta - c.eta)});
        }
        rows.push_back(r);
    }
    j["models"] = rows;
    const bool ok = !cfg.oracle || max_diff <= kOracleTolerance;
    if (cfg.oracle) {
        j["max_abs_diff"] = max_diff;
        j["oracle_tolerance"] = kOracleTolerance;
        j["oracle_pass"] = ok;
    }
    if (cfg.json) {
        emit_json(cfg, j);
        return ok ? kOk : kMismatch;
    }
    Output out(cfg.out);
    auto& os = out.stream();
    os << "m = " << cfg.m << ", n = " << cfg.n << ", qc variant = " << to_string(cfg.qc_variant) << "\n";
    os << "model        kappa                  eta";
    if (cfg.oracle) os << "                    oracle kappa           oracle eta             |dkappa|   |deta|";
    os << "\n";
    for (const auto& r : rows) {
        char line[256];
        std::snprintf(line, sizeof line, "%-6s %22.15f %22.15f", r["model"].get<std::string>().c_str(),
                      r["kappa"].get<double>(), r["eta"].get<double>());
        os << line;
        if (cfg.oracle) {
            std::snprintf(line, sizeof line, " %22.15f %22.15f %10.3e %10.3e",
                          r["oracle_kappa"].get<double>(), r["oracle_eta"].get<double>(),
                          r["abs_diff_kappa"].get<double>(), r["abs_diff_eta"].get<double>());
            os << line;
        }
        os << "\n";
    }
    os << "limits: kappa0 = " << fmt(lim.kappa0) << ", eta0 = " << fmt(lim.eta0)
       << ", eta0_qc = " << fmt(lim.eta0_qc) << ", gap = " << fmt(lim.gap) << "\n";
    for (const auto& r : rows) {
        if (!r.contains("kappa_expansion")) continue;
        os << "expansion " << r["model"].get<std::string>() << ": kappa ~ kappa0 + "
           << sci(r["kappa_leading_coefficient"].get<double>()) << " z0^" << r["kappa_exponent"].get<long>()
           << " = " << fmt(r["kappa_expansion"].get<double>()) << ", eta ~ eta0 + "
           << sci(r["eta_leading_coefficient"].get<double>()) << " z0^" << r["eta_exponent"].get<long>()
           << " = " << fmt(r["eta_expansion"].get<double>()) << "\n";
    }
    if (cfg.oracle)
        os << "max |formula - oracle| = " << sci(max_diff) << (ok ? "  PASS" : "  FAIL") << "\n";
    return ok ? kOk : kMismatch;
}

// ---------------------------------------------------------------------------

int cmd_limits(const RunConfig& cfg) {
    const auto p = cfg.params();
    const auto l = exact_limits(p);
    json j;
    j["command"] = "limits";
    put_params(j, cfg);
    j["kappa0"] = l.kappa0;
    j["eta0"] = l.eta0;
    j["eta0_qc"] = l.eta0_qc;
    j["eta0_qc_tanh"] = l.eta0_qc_tanh;
    j["gap"] = l.gap;
    j["eta0_qc_lattice"] = l.eta0_qc_lattice;
    if (cfg.json) {
        emit_json(cfg, j);
        return kOk;
    }
    Output out(cfg.out);
    auto& os = out.stream();
    for (const char* key : {"kappa0", "eta0", "eta0_qc", "eta0_qc_tanh", "gap", "eta0_qc_lattice"})
        os << key << " = " << fmt(j[key].get<double>(), 16) << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------

std::map<ModelKind, EffectiveEquation> equations(const RunConfig& cfg, const MaterialParams<double>& p,
                                                 const std::vector<ModelKind>& models) {
    std::map<ModelKind, EffectiveEquation> eqs;
    for (ModelKind model : models)
        eqs.emplace(model, make_equation(p, coefficients(model, p, cfg.m, cfg.n, cfg.qc_variant)));
    return eqs;
}

/// Number of sign changes of dP/ds along the sampled curve.
int load_turns(const BifurcationCurve& c) {
    int turns = 0;
    double last = 0;
    for (size_t i = 1; i < c.samples.size(); ++i) {
        const double d = c.samples[i].P - c.samples[i - 1].P;
        if (d == 0) continue;
        if (last != 0 && (d > 0) != (last > 0)) ++turns;
        last = d;
    }
    return turns;
}

std::string curve_path(const RunConfig& cfg, ModelKind model, bool several) {
    if (cfg.out.empty()) return several ? std::string("curve_") + to_string(model) + ".csv" : "";
    if (!several) return cfg.out;
    std::filesystem::path p(cfg.out);
    const std::string stem = p.stem().string() + "_" + to_string(model);
    return (p.parent_path() / (stem + (p.has_extension() ? p.extension().string() : ".csv"))).string();
}

void write_csv(std::ostream& os, const BifurcationCurve& c) {
    os << "s,u,P,residual\n";
    char line[160];
    for (const auto& x : c.samples) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", x.s, x.u, x.P, x.residual);
        os << line;
    }
}

int cmd_trace(const RunConfig& cfg, const TraceOptions& topts) {
    const auto p = cfg.params();
    const auto eqs = equations(cfg, p, cfg.models);
    const bool several = cfg.models.size() > 1;
    const bool csv_to_stdout = !several && cfg.out.empty();
    std::ostream& info = csv_to_stdout ? std::cerr : std::cout;
    std::map<ModelKind, BifurcationCurve> curves;
    json rows = json::array();
    for (const auto& [model, eq] : eqs) {
        auto curve = trace_curve(eq, cfg.smax, cfg.step, topts);
        const std::string path = curve_path(cfg, model, several);
        if (path.empty()) {
            write_csv(std::cout, curve);
        } else {
            std::ofstream f(path);
            if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
            write_csv(f, curve);
        }
        json r;
        r["model"] = to_string(model);
        r["path"] = path.empty() ? "-" : path;
        r["samples"] = curve.samples.size();
        r["max_residual"] = curve.max_residual();
        r["load_turns"] = load_turns(curve);
        r["reached_cutoff"] = curve.reached_cutoff;
        curves.emplace(model, std::move(curve));
        rows.push_back(r);
    }
    if (curves.count(ModelKind::Exact)) {
        for (auto& r : rows) {
            const ModelKind model = parse_models(r["model"].get<std::string>()).front();
            r["sup_distance_to_exact"] =
                compare_curves(curves.at(ModelKind::Exact), curves.at(model)).sup_distance;
        }
    }
    json j;
    j["command"] = "trace";
    put_params(j, cfg);
    j["m"] = cfg.m;
    j["n"] = cfg.n;
    j["smax"] = cfg.smax;
    j["step"] = cfg.step;
    j["curves"] = rows;
    if (cfg.json) {
        // With the CSV on stdout the summary goes to stderr.
        info << j.dump(2) << "\n";
        return kOk;
    }
    for (const auto& r : rows) {
        info << r["model"].get<std::string>() << ": " << r["samples"].get<size_t>() << " samples -> "
             << r["path"].get<std::string>() << ", max residual " << sci(r["max_residual"].get<double>())
             << ", dP/ds sign changes " << r["load_turns"].get<int>();
        if (r.contains("sup_distance_to_exact"))
            info << ", sup distance to exact " << sci(r["sup_distance_to_exact"].get<double>());
        info << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_folds(const RunConfig& cfg) {
    const auto p = cfg.params();
    json j;
    j["command"] = "folds";
    put_params(j, cfg);
    j["m"] = cfg.m;
    j["n"] = cfg.n;
    json rows = json::array();
    for (const auto& [model, eq] : equations(cfg, p, cfg.models)) {
        for (const auto& f : fold_points(eq)) {
            json r;
            r["model"] = to_string(model);
            r["u_star"] = f.u_star;
            r["P_star"] = f.P_star;
            r["degenerate"] = f.degenerate;
            rows.push_back(r);
        }
    }
    j["folds"] = rows;
    if (cfg.json) {
        emit_json(cfg, j);
        return kOk;
    }
    Output out(cfg.out);
    auto& os = out.stream();
    os << "model  u*                 P*\n";
    for (const auto& r : rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%-6s %.15f %.15f%s\n", r["model"].get<std::string>().c_str(),
                      r["u_star"].get<double>(), r["P_star"].get<double>(),
                      r["degenerate"].get<bool>() ? " (degenerate)" : "");
        os << line;
    }
    return kOk;
}

// ---------------------------------------------------------------------------

int cmd_compare(const RunConfig& cfg, const TraceOptions& topts) {
    const auto p = cfg.params();
    std::vector<ModelKind> models{ModelKind::Exact};
    for (ModelKind m : cfg.models)
        if (m != ModelKind::Exact) models.push_back(m);
    if (models.size() == 1)
        throw Error(ErrorCode::InvalidArgument, "compare needs at least one approximate model");
    const auto eqs = equations(cfg, p, models);
    const auto& ex = eqs.at(ModelKind::Exact);
    const auto reference = trace_curve(ex, cfg.smax, cfg.step, topts);
    json rows = json::array();
    bool ok = true;
    for (const auto& [model, eq] : eqs) {
        if (model == ModelKind::Exact) continue;
        const auto curve = trace_curve(eq, cfg.smax, cfg.step, topts);
        const auto cmp = compare_curves(reference, curve);
        const double s_shared = cmp.s.empty() ? 0.0 : cmp.s.back();
        const auto bound = lipschitz_bound(ex, eq, s_shared);
        json r;
        r["model"] = to_string(model);
        r["sup_distance"] = cmp.sup_distance;
        r["shared_s"] = s_shared;
        r["bound"] = std::isfinite(bound.value) ? json(bound.value) : json("inf");
        r["log_bound"] = bound.log_value;
        r["L"] = bound.L;
        r["within_bound"] = cmp.sup_distance <= bound.value;
        r["derivation"] = bound.derivation;
        ok = ok && cmp.sup_distance <= bound.value;
        rows.push_back(r);
    }
    json j;
    j["command"] = "compare";
    put_params(j, cfg);
    j["m"] = cfg.m;
    j["n"] = cfg.n;
    j["smax"] = cfg.smax;
    j["step"] = cfg.step;
    j["comparisons"] = rows;
    if (cfg.json) {
        emit_json(cfg, j);
        return ok ? kOk : kMismatch;
    }
    Output out(cfg.out);
    auto& os = out.stream();
    os << "model  sup|du|+|dP|   bound        ln(bound)    L\n";
    for (const auto& r : rows) {
        const std::string b = r["bound"].is_string() ? "inf" : sci(r["bound"].get<double>());
        char line[200];
        std::snprintf(line, sizeof line, "%-6s %-14s %-12s %-12.4f %.4f %s\n",
                      r["model"].get<std::string>().c_str(), sci(r["sup_distance"].get<double>()).c_str(),
                      b.c_str(), r["log_bound"].get<double>(), r["L"].get<double>(),
                      r["within_bound"].get<bool>() ? "within bound" : "BOUND VIOLATED");
        os << line;
    }
    return ok ? kOk : kMismatch;
}

// ---------------------------------------------------------------------------

struct ReproduceOptions {
    double perturb_k1 = 0.0;
    bool inferred = false;
    double tolerance = 1e-9;
    std::string fqc_form = "compact";
};

FqcEtaForm parse_fqc_form(const std::string& s) {
    if (s == "compact") return FqcEtaForm::Compact;
    if (s == "long") return FqcEtaForm::Long;
    if (s == "literal-long") return FqcEtaForm::LiteralLong;
    if (s == "literal-compact") return FqcEtaForm::LiteralCompact;
    throw Error(ErrorCode::InvalidArgument, "unknown fqc form '" + s + "'");
}

int cmd_reproduce_tables(RunConfig cfg, const ReproduceOptions& ro, bool qc_variant_given) {
    double k1 = reference::kKappa1, k2 = reference::kKappa2;
    if (ro.inferred) {
        k1 = reference::kInferredKappa1;
        k2 = reference::kInferredKappa2;
    }
    k1 += ro.perturb_k1;
    // The tables report the Q-matrix QC reduction unless another variant is requested.
    const QcVariant qv = qc_variant_given ? cfg.qc_variant : QcVariant::Published;
    const FqcEtaForm form = parse_fqc_form(ro.fqc_form);
    const auto p = validate(k1, k2, reference::kKappa3, reference::kCutoff);
    json rows = json::array();
    double max_err = 0;
    for (const auto& table : reference::kTables) {
        for (const auto& e : table.entries) {
            auto c = coefficients(e.model, p, table.m, table.n, qv);
            if (e.model == ModelKind::FQC) c.eta = fqc_eta(p, table.m, table.n, form);
            for (int q = 0; q < 2; ++q) {
                const double expected = q == 0 ? e.kappa : e.eta;
                const double got = q == 0 ? c.kappa : c.eta;
                json r;
                r["m"] = table.m;
                r["n"] = table.n;
                r["model"] = to_string(e.model);
                r["quantity"] = q == 0 ? "kappa" : "eta";
                r["expected"] = expected;
                r["computed"] = got;
                r["abs_error"] = std::abs(got - expected);
                r["pass"] = std::abs(got - expected) <= ro.tolerance;
                max_err = std::max(max_err, std::abs(got - expected));
                rows.push_back(r);
            }
        }
    }
    const bool ok = max_err <= ro.tolerance;
    json j;
    j["command"] = "reproduce-tables";
    j["k1"] = k1;
    j["k2"] = k2;
    j["k3"] = reference::kKappa3;
    j["ucut"] = reference::kCutoff;
    j["qc_variant"] = to_string(qv);
    j["fqc_eta_form"] = ro.fqc_form;
    j["tolerance"] = ro.tolerance;
    j["comparisons"] = rows;
    j["max_abs_error"] = max_err;
    j["pass"] = ok;
    if (cfg.json) {
        emit_json(cfg, j);
        return ok ? kOk : kMismatch;
    }
    Output out(cfg.out);
    auto& os = out.stream();
    os << "kappa1 = " << fmt(k1, 17) << ", kappa2 = " << fmt(k2, 17) << ", kappa3 = " << reference::kKappa3
       << ", u_cut = " << reference::kCutoff << ", qc variant = " << to_string(qv) << "\n";
    os << "  m    n  model quantity  expected              computed              abs error\n";
    for (const auto& r : rows) {
        char line[200];
        std::snprintf(line, sizeof line, "%3ld  %3ld  %-5s %-8s %21.15f %21.15f %10.3e %s\n",
                      r["m"].get<long>(), r["n"].get<long>(), r["model"].get<std::string>().c_str(),
                      r["quantity"].get<std::string>().c_str(), r["expected"].get<double>(),
                      r["computed"].get<double>(), r["abs_error"].get<double>(),
                      r["pass"].get<bool>() ? "ok" : "MISMATCH");
        os << line;
    }
    os << "max abs error " << sci(max_err) << " (tolerance " << sci(ro.tolerance) << "): "
       << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kOk : kMismatch;
}

// ---------------------------------------------------------------------------

int cmd_check(const RunConfig& cfg, const suites::SuiteOptions& so) {
    std::vector<suites::SuiteResult> results;
    MaterialParams<double> p;
    bool valid = true;
    try {
        p = cfg.params();
        if (p.kappa2 == 0) throw Error(ErrorCode::ZeroKappa2, "the invariant suites need kappa2 != 0");
        results.push_back({"validation", true, 0.0, 0.0, "parameters accepted"});
    } catch (const Error& e) {
        valid = false;
        results.push_back({"validation", false, 1.0, 0.0,
                           std::string("unsupported: ") + to_string(e.code()) + ": " + e.what()});
    }
    if (valid) {
        auto append = [&](std::vector<suites::SuiteResult> v) {
            for (auto& r : v) results.push_back(std::move(r));
        };
        append(suites::identity_suites(p));
        results.push_back(suites::alpha_beta_suite(so));
        append(suites::energy_force_suites(p, so));
        append(suites::oracle_suites(p, cfg.m, cfg.n, so));
        append(suites::expansion_suites(p));
    }
    bool ok = true;
    json rows = json::array();
    for (const auto& r : results) {
        ok = ok && r.passed;
        rows.push_back({{"suite", r.name}, {"pass", r.passed}, {"metric", r.metric},
                        {"tolerance", r.tolerance}, {"detail", r.detail}});
    }
    const int code = !valid ? kInvalid : ok ? kOk : kMismatch;
    if (cfg.json) {
        json j;
        j["command"] = "check";
        put_params(j, cfg);
        j["seed"] = cfg.seed;
        j["suites"] = rows;
        j["pass"] = ok;
        emit_json(cfg, j);
        return code;
    }
    Output out(cfg.out);
    auto& os = out.stream();
    for (const auto& r : results) {
        os << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (r.name != "validation") os << "  [" << sci(r.metric) << " vs " << sci(r.tolerance) << "]";
        if (!r.detail.empty()) os << "  " << r.detail;
        os << "\n";
    }
    return code;
}

}  // namespace
}  // namespace crackqc::cli

int main(int argc, char** argv) {
    using namespace crackqc;
    using namespace crackqc::cli;

    CLI::App app{"crackqc: effective crack-tip equations of a two-chain fracture lattice"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, model, qc_variant;
    double k1 = 0, k2 = 0, k3 = 0, ucut = 0, smax = 0, step = 0;
    long m = 0, n = 0, jmax = 0;
    std::string out;
    std::uint64_t seed = 0;
    bool oracle = false, json_flag = false;

    auto* o_config = app.add_option("--config", config_path, "JSON file mirroring the flags");
    auto* o_k1 = app.add_option("--k1", k1, "nearest-neighbour constant kappa1");
    auto* o_k2 = app.add_option("--k2", k2, "next-nearest-neighbour constant kappa2");
    auto* o_k3 = app.add_option("--k3", k3, "vertical bond stiffness kappa3");
    auto* o_uc = app.add_option("--ucut", ucut, "bond cutoff displacement");
    auto* o_m = app.add_option("--m", m, "interface index");
    auto* o_n = app.add_option("--n", n, "crack-tip index");
    auto* o_jmax = app.add_option("--jmax", jmax, "last kept atom of the oracle chain");
    auto* o_model = app.add_option("--model", model, "exact|qc|qqc|fqc|all")
                        ->check(CLI::IsMember({"exact", "qc", "qqc", "fqc", "all"}));
    auto* o_smax = app.add_option("--smax", smax, "arc length of traced curves");
    auto* o_step = app.add_option("--step", step, "integration step h");
    auto* o_oracle = app.add_flag("--oracle", oracle, "add full-chain oracle values");
    auto* o_json = app.add_flag("--json", json_flag, "JSON report instead of text");
    auto* o_out = app.add_option("--out", out, "output path");
    auto* o_seed = app.add_option("--seed", seed, "seed of the random suites");
    auto* o_qcv = app.add_option("--qc-variant", qc_variant, "lattice|published")
                      ->check(CLI::IsMember({"lattice", "published"}));

    auto* validate_cmd = app.add_subcommand("validate", "check parameters and print derived roots");
    auto* coeff_cmd = app.add_subcommand("coefficients", "(kappa, eta) per model with limits and expansions");
    auto* limits_cmd = app.add_subcommand("limits", "n -> infinity limits and the QC gap");
    auto* trace_cmd = app.add_subcommand("trace", "arc-length curves as CSV (s,u,P,residual)");
    auto* folds_cmd = app.add_subcommand("folds", "saddle-node points of each effective equation");
    auto* compare_cmd = app.add_subcommand("compare", "curve distance to the exact model and the bound");
    auto* repro_cmd = app.add_subcommand("reproduce-tables", "compare with the published tables");
    auto* check_cmd = app.add_subcommand("check", "run the invariant suites");

    TraceOptions topts;
    bool extend_tail = false;
    for (auto* sub : {trace_cmd, compare_cmd}) {
        sub->add_flag("--extend-tail", extend_tail, "continue the straight tail up to s_max");
        sub->add_option("--orientation", topts.orientation, "+1 or -1; 0 picks dP/ds > 0 at the origin");
    }
    ReproduceOptions ro;
    repro_cmd->add_option("--perturb-k1", ro.perturb_k1, "diagnostic: add this to kappa1");
    repro_cmd->add_flag("--inferred", ro.inferred, "diagnostic: use the parameters fitted to the exact row");
    repro_cmd->add_option("--tolerance", ro.tolerance, "absolute tolerance per entry");
    repro_cmd->add_option("--fqc-form", ro.fqc_form, "compact|long|literal-long|literal-compact")
        ->check(CLI::IsMember({"compact", "long", "literal-long", "literal-compact"}));
    suites::SuiteOptions so;
    check_cmd->add_option("--random-configs", so.oracle_configs, "random oracle configurations per model");
    check_cmd->add_option("--alpha-beta-sets", so.alpha_beta_sets, "random parameter sets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        RunConfig cfg;
        if (*o_config) apply_json_file(cfg, config_path);
        if (*o_k1) cfg.k1 = k1;
        if (*o_k2) cfg.k2 = k2;
        if (*o_k3) cfg.k3 = k3;
        if (*o_uc) cfg.ucut = ucut;
        if (*o_m) cfg.m = m;
        if (*o_n) cfg.n = n;
        if (*o_jmax) cfg.jmax = jmax;
        if (*o_model) cfg.models = parse_models(model);
        if (*o_smax) cfg.smax = smax;
        if (*o_step) cfg.step = step;
        if (*o_oracle) cfg.oracle = oracle;
        if (*o_json) cfg.json = json_flag;
        if (*o_out) cfg.out = out;
        if (*o_seed) cfg.seed = seed;
        if (*o_qcv) cfg.qc_variant = parse_qc_variant(qc_variant);
        topts.extend_linear_tail = extend_tail;
        so.seed = cfg.seed;

        if (*validate_cmd) return cmd_validate(cfg);
        if (*coeff_cmd) return cmd_coefficients(cfg);
        if (*limits_cmd) return cmd_limits(cfg);
        if (*trace_cmd) return cmd_trace(cfg, topts);
        if (*folds_cmd) return cmd_folds(cfg);
        if (*compare_cmd) return cmd_compare(cfg, topts);
        if (*repro_cmd) return cmd_reproduce_tables(cfg, ro, static_cast<bool>(*o_qcv));
        if (*check_cmd) return cmd_check(cfg, so);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return is_input_error(e.code()) ? kInvalid : kMismatch;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMismatch;
    }
    return kInvalid;
}

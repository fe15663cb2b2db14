#include "run_config.hpp"

#include <fstream>

namespace crackqc::cli {

std::vector<ModelKind> parse_models(const std::string& s) {
    if (s == "all") return {ModelKind::Exact, ModelKind::QC, ModelKind::QQC, ModelKind::FQC};
    if (s == "exact") return {ModelKind::Exact};
    if (s == "qc") return {ModelKind::QC};
    if (s == "qqc") return {ModelKind::QQC};
    if (s == "fqc") return {ModelKind::FQC};
    throw Error(ErrorCode::InvalidArgument, "unknown model '" + s + "'");
}

QcVariant parse_qc_variant(const std::string& s) {
    if (s == "lattice") return QcVariant::Lattice;
    if (s == "published") return QcVariant::Published;
    throw Error(ErrorCode::InvalidArgument, "unknown qc variant '" + s + "'");
}

const char* to_string(QcVariant v) { return v == QcVariant::Lattice ? "lattice" : "published"; }

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "k1") cfg.k1 = value.get<double>();
            else if (key == "k2") cfg.k2 = value.get<double>();
            else if (key == "k3") cfg.k3 = value.get<double>();
            else if (key == "ucut") cfg.ucut = value.get<double>();
            else if (key == "m") cfg.m = value.get<long>();
            else if (key == "n") cfg.n = value.get<long>();
            else if (key == "jmax") cfg.jmax = value.get<long>();
            else if (key == "model") cfg.models = parse_models(value.get<std::string>());
            else if (key == "smax") cfg.smax = value.get<double>();
            else if (key == "step") cfg.step = value.get<double>();
            else if (key == "oracle") cfg.oracle = value.get<bool>();
            else if (key == "json") cfg.json = value.get<bool>();
            else if (key == "out") cfg.out = value.get<std::string>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "qc_variant") cfg.qc_variant = parse_qc_variant(value.get<std::string>());
            else throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("config value: ") + e.what());
    }
}

void apply_json_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("config parse: ") + e.what());
    }
    apply_json(cfg, j);
}

}  // namespace crackqc::cli

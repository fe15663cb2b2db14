/**
 * @file run_config.hpp
 * @brief Command-line and JSON configuration shared by every subcommand.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "crackqc/effective.hpp"
#include "crackqc/material.hpp"

namespace crackqc::cli {

struct RunConfig {
    double k1 = 4.0;
    double k2 = 0.4;
    double k3 = 20.0;
    double ucut = 0.5;
    long m = 100;
    long n = 104;
    std::optional<long> jmax;
    std::vector<ModelKind> models{ModelKind::Exact, ModelKind::QC, ModelKind::QQC, ModelKind::FQC};
    double smax = 5.0;
    double step = 1e-3;
    bool oracle = false;
    bool json = false;
    std::string out;
    std::uint64_t seed = 1;
    QcVariant qc_variant = QcVariant::Lattice;

    MaterialParams<double> params() const { return validate(k1, k2, k3, ucut); }
};

/// Parses "exact", "qc", "qqc", "fqc" or "all"; throws InvalidArgument otherwise.
std::vector<ModelKind> parse_models(const std::string& s);
QcVariant parse_qc_variant(const std::string& s);
const char* to_string(QcVariant v);

/// Overlays the keys of a JSON object; unknown keys throw InvalidArgument.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
void apply_json_file(RunConfig& cfg, const std::string& path);

}  // namespace crackqc::cli

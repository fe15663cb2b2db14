/**
 * @file suites.hpp
 * @brief Invariant suites run by the `check` subcommand.
 */
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "crackqc/material.hpp"

namespace crackqc::suites {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double metric = 0.0;     ///< worst observed value of the checked quantity
    double tolerance = 0.0;  ///< threshold the metric is compared against
    std::string detail;
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    int alpha_beta_sets = 1000;
    int oracle_configs = 50;
    int energy_fields = 20;
};

/// Random valid parameter set with kappa2 > 0, drawn by rejection.
MaterialParams<double> random_params(std::mt19937_64& rng);

std::vector<SuiteResult> identity_suites(const MaterialParams<double>& p);
SuiteResult alpha_beta_suite(const SuiteOptions& opts);
std::vector<SuiteResult> energy_force_suites(const MaterialParams<double>& p,
                                             const SuiteOptions& opts);
std::vector<SuiteResult> oracle_suites(const MaterialParams<double>& p, long m, long n,
                                       const SuiteOptions& opts);
std::vector<SuiteResult> expansion_suites(const MaterialParams<double>& p);

}  // namespace crackqc::suites

/**
 * @file test_support.hpp
 * @brief Shared parameter sets, random generators and tolerances for the unit tests.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "crackqc/material.hpp"

namespace crackqc::test {

inline MaterialParams<double> reference_params() { return validate(4.0, 0.4, 20.0, 0.5); }

/// Random valid parameters with kappa2 > 0.
inline MaterialParams<double> random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> k1(0.5, 12.0), ratio(0.01, 0.6), k3(0.5, 60.0),
        uc(0.05, 3.0);
    for (;;) {
        const double a = k1(rng);
        try {
            return validate(a, a * ratio(rng), k3(rng), uc(rng));
        } catch (const Error&) {
        }
    }
}

inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace crackqc::test

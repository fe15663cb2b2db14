/**
 * @file reference_tables.hpp
 * @brief Published reference values of (kappa, eta) for the crack-tip
 *        equation at kappa1 = 4, kappa2 = 0.4, kappa3 = 20, u_cut = 0.5 and
 *        n = 104, with m = 100 (first table) and m = 96 (second table).
 *
 * The numbers are copied verbatim from the published tables and are never
 * recomputed.
 */
#pragma once

#include <array>

#include "crackqc/effective.hpp"

namespace crackqc::reference {

inline constexpr double kKappa1 = 4.0;
inline constexpr double kKappa2 = 0.4;
inline constexpr double kKappa3 = 20.0;
inline constexpr double kCutoff = 0.5;
inline constexpr long kTipIndex = 104;

struct TableEntry {
    ModelKind model;
    double kappa;
    double eta;
};

struct Table {
    long m;
    long n;
    std::array<TableEntry, 4> entries;
};

/// Published table for m = 100, n = 104.
inline constexpr Table kTableM100{100, 104, {{
    {ModelKind::Exact, -4.782062040603841, 0.934371338155818},
    {ModelKind::QC, -4.782048350329799, 1.002417909367481},
    {ModelKind::QQC, -4.782060913687936, 0.934371132296173},
    {ModelKind::FQC, -4.782243406077938, 0.934404469139225},
}}};

/// Published table for m = 96, n = 104.
inline constexpr Table kTableM96{96, 104, {{
    {ModelKind::Exact, -4.782062040603841, 0.934371338155818},
    {ModelKind::QC, -4.782062040081748, 1.002420436153853},
    {ModelKind::QQC, -4.782062040560865, 0.934371338147967},
    {ModelKind::FQC, -4.782062047519995, 0.934371339419228},
}}};

inline constexpr std::array<Table, 2> kTables{kTableM100, kTableM96};

/**
 * @brief Force constants at which the exact closed form reproduces the exact
 *        row of both tables (solved for with kappa3 = 20, u_cut = 0.5 fixed).
 *
 * These are not the stated parameters; they are used only by the diagnostic
 * that shows which table rows are consistent with a single parameter set.
 */
inline constexpr double kInferredKappa1 = 4.47532543594645662130;
inline constexpr double kInferredKappa2 = 0.41423267399513788577;

}  // namespace crackqc::reference

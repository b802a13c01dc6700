#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cvqd/stability.hpp"
#include "cvqd/sweep.hpp"

// Flat-file emitters (CSV is the primary artifact, JSON and SVG derived
// views) and the key-value sweep config. All output is byte-deterministic
// for identical inputs.

namespace cvqd {

/// Pinned CSV header of the sweep output.
inline constexpr std::string_view kCsvHeader =
    "delta_over_omega_m,block_id,discord,s_minus,s_plus,s_pt_minus,s_pt_plus,"
    "b1,b2,b3,b4,clamped,stable";

/// CSV with the pinned header, 12-significant-digit values, flags as 0/1,
/// missing values as empty fields, UNIX newlines.
std::string csv_string(const std::vector<OutputRow>& rows);

/// Stability table: delta, S_0..S_<degree>, verdict, abscissa, consistency.
std::string stability_csv_string(const std::vector<StabilityRow>& rows);

/// JSON document {"scenario", "variant", "rows": [...]}; missing values are
/// null.
std::string json_string(const std::vector<OutputRow>& rows, const SweepSpec& spec);

/// Static SVG: one polyline per block of discord vs detuning with gaps at
/// points that carry no discord value, a horizontal reference line at
/// discord = 1, and axis labels.
std::string svg_string(const std::vector<OutputRow>& rows);

void write_file(const std::string& path, std::string_view contents);

void emit_csv(const std::vector<OutputRow>& rows, const std::string& path);
void emit_json(const std::vector<OutputRow>& rows, const SweepSpec& spec,
               const std::string& path);
void emit_plot(const std::vector<OutputRow>& rows, const std::string& path);

/// Parses the key-value sweep config:
///
///   [scenario]           id, variant, blocks, nbar, N, J, M and (custom
///                        only) omega_m, kappa, gamma_m, gamma_sm, Omega,
///                        mu, S
///   [grid]               from, to, steps
///   [outputs]            csv, json, svg
///
/// '#' starts a comment; unknown keys are errors.
SweepSpec parse_config(std::string_view text);

/// Canonical config text; parse_config(serialize_config(s)) == s.
std::string serialize_config(const SweepSpec& spec);

}  // namespace cvqd

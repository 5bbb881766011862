#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "eekit/effects.hpp"

namespace eekit {

// Sensitivity zones separated by the sigma/mu* guide ratios 0.1, 0.5 and 1,
// plus a negligible class for parameters whose mu* is small relative to the
// largest one in the analysis.
enum class ZoneLabel {
  negligible,
  almost_linear,
  monotonic,
  almost_monotonic,
  nonmonotonic_or_interacting,
};

std::string to_string(ZoneLabel zone);

inline constexpr double kZoneAlmostLinear = 0.1;
inline constexpr double kZoneMonotonic = 0.5;
inline constexpr double kZoneAlmostMonotonic = 1.0;
inline constexpr double kDefaultNegligibleRel = 0.01;

// Classify one summary given the largest mu* of its group. Refuses n < 2
// (sigma undefined).
ZoneLabel classify_one(const SummaryStats& stats, double max_mu_star,
                       double negligible_rel = kDefaultNegligibleRel);

// Classify rows; the negligible threshold is relative to the max mu* taken
// separately over parameter rows and over pair rows.
std::vector<ZoneLabel> classify(std::span<const EffectsSummary> rows,
                                double negligible_rel = kDefaultNegligibleRel);

enum class Presentation { sigma_axis, ratio_axis };

std::string to_string(Presentation p);
Presentation presentation_from_string(const std::string& s);

// Scatter plot of the summaries, 800x600 self-contained SVG.
//   sigma_axis: x = mu*, y = sigma, slope guides at 0.1/0.5/1.
//   ratio_axis: x = mu*, y = sigma/mu*, horizontal guides (rows with
//               mu* = 0 are skipped: the ratio is undefined).
// Points are labeled with 1-based parameter indices, pairs as "i-j".
void emit_scatter_svg(std::span<const EffectsSummary> rows, Presentation presentation,
                      const std::filesystem::path& path, const std::string& title = "");

// CSV tables. Columns are documented in the README; absent values (sigma
// for n=1, undefined ratios) are written as empty cells. Indices are 1-based.
void write_effects_csv(const std::filesystem::path& path,
                       const std::vector<std::vector<double>>& first_samples,
                       const std::vector<std::vector<double>>& pair_samples, int k);

void write_summary_csv(const std::filesystem::path& path, std::span<const EffectsSummary> rows);
std::vector<EffectsSummary> read_summary_csv(const std::filesystem::path& path);

void write_zones_csv(const std::filesystem::path& path, std::span<const EffectsSummary> rows,
                     std::span<const ZoneLabel> zones, const std::vector<std::string>& names);

}  // namespace eekit

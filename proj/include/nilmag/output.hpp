#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nilmag/chaos.hpp"
#include "nilmag/euler.hpp"
#include "nilmag/orbits.hpp"
#include "nilmag/symdyn.hpp"

namespace nilmag {

using Json = nlohmann::json;  // std::map-backed, so keys are emitted sorted

/// printf "%.17g".
std::string format_double(double v);

/// Pretty JSON followed by a newline.
std::string dump_json(const Json& doc);

/// Writes bytes verbatim (LF stays LF); creates missing parent directories.
void write_text_file(const std::string& path, const std::string& content);

/// Header "t,p_1,...,p_n", one row per sample.
std::string trajectory_csv(const Trajectory& traj);
Json drift_json(const Trajectory& traj);

Json orbit_json(const OrbitSpec& orbit);
Json lyapunov_json(const LyapunovReport& report);

/// Columns k1,k2 (or c,energy),seed,mle,converged,t_end,step.
std::string sweep_csv(const std::vector<SweepRow>& rows, GridKind kind);
/// Per-row data plus aggregate min/max of the MLE over successful rows.
Json sweep_json(const std::vector<SweepRow>& rows, GridKind kind);

/// Entropy, transitivity and periodic-point counts for p = 1..max_period.
Json sft_json(const TransitionMatrix& a, std::size_t max_period);

}  // namespace nilmag

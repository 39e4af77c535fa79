#include "nilmag/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "nilmag/error.hpp"

namespace nilmag {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCategory::validation, "cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCategory::validation, "write failed for '" + path + "'");
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  for (Eigen::Index i = 0; i < n; ++i) out += ",p_" + std::to_string(i + 1);
  out += '\n';
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    out += format_double(traj.times[r]);
    for (Eigen::Index i = 0; i < n; ++i) out += ',' + format_double(traj.states[r](i));
    out += '\n';
  }
  return out;
}

Json drift_json(const Trajectory& traj) {
  Json doc = Json::object();
  for (const auto& [name, drift] : traj.drifts) doc[name] = drift;
  return doc;
}

Json orbit_json(const OrbitSpec& orbit) {
  Json doc;
  doc["k1"] = orbit.k1;
  doc["k2"] = orbit.k2;
  doc["regular"] = orbit.regular;
  if (orbit.alpha) {
    doc["alpha_re"] = orbit.alpha->real();
    doc["alpha_im"] = orbit.alpha->imag();
  } else {
    doc["alpha_re"] = nullptr;
    doc["alpha_im"] = nullptr;
  }
  return doc;
}

Json lyapunov_json(const LyapunovReport& r) {
  Json doc;
  doc["mle"] = r.mle;
  doc["fit_window"] = {r.fit_start, r.fit_end};
  doc["renorm_interval"] = r.renorm_interval;
  doc["step"] = r.step;
  doc["t_end"] = r.t_end;
  doc["seed"] = r.seed;
  doc["converged"] = r.converged;
  doc["refined_mle"] = r.refined_mle ? Json(*r.refined_mle) : Json(nullptr);
  if (r.spectrum) doc["spectrum"] = *r.spectrum;
  if (r.trace_average) doc["trace_average"] = *r.trace_average;
  return doc;
}

namespace {

std::pair<const char*, const char*> grid_columns(GridKind kind) {
  return kind == GridKind::orbit ? std::pair{"k1", "k2"} : std::pair{"c", "energy"};
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows, GridKind kind) {
  const auto [a, b] = grid_columns(kind);
  std::string out = std::string(a) + ',' + b + ",seed,mle,converged,t_end,step\n";
  for (const auto& row : rows) {
    const double mle = row.report ? row.report->mle : std::numeric_limits<double>::quiet_NaN();
    const bool converged = row.report && row.report->converged;
    out += format_double(row.point.a) + ',' + format_double(row.point.b) + ',' + std::to_string(row.seed) + ',' +
           format_double(mle) + ',' + (converged ? "true" : "false") + ',' + format_double(row.t_end) + ',' +
           format_double(row.step) + '\n';
  }
  return out;
}

Json sweep_json(const std::vector<SweepRow>& rows, GridKind kind) {
  const auto [a, b] = grid_columns(kind);
  Json list = Json::array();
  std::optional<double> lo, hi;
  std::size_t failures = 0;
  for (const auto& row : rows) {
    Json item;
    item[a] = row.point.a;
    item[b] = row.point.b;
    item["seed"] = row.seed;
    item["t_end"] = row.t_end;
    item["step"] = row.step;
    if (row.report) {
      item["report"] = lyapunov_json(*row.report);
      lo = std::min(lo.value_or(row.report->mle), row.report->mle);
      hi = std::max(hi.value_or(row.report->mle), row.report->mle);
    } else {
      item["error"] = row.error;
      ++failures;
    }
    list.push_back(std::move(item));
  }
  Json doc;
  doc["grid"] = kind == GridKind::orbit ? "orbit" : "energy";
  doc["rows"] = std::move(list);
  doc["failures"] = failures;
  doc["mle_min"] = lo ? Json(*lo) : Json(nullptr);
  doc["mle_max"] = hi ? Json(*hi) : Json(nullptr);
  return doc;
}

Json sft_json(const TransitionMatrix& a, std::size_t max_period) {
  Json doc;
  doc["matrix"] = a.to_string();
  const EntropyResult ent = sft_entropy(a);
  doc["entropy"] = ent.entropy ? Json(*ent.entropy) : Json(nullptr);
  doc["entropy_defined"] = ent.entropy.has_value();
  doc["spectral_radius"] = ent.spectral_radius;
  doc["power_iteration_radius"] = ent.power_iteration_radius;
  doc["charpoly_radius"] = ent.charpoly_radius ? Json(*ent.charpoly_radius) : Json(nullptr);
  const TransitivityResult tr = is_transitive(a);
  doc["transitive"] = tr.transitive;
  doc["witness"] = tr.witness ? Json(*tr.witness) : Json(nullptr);
  doc["searched_up_to"] = tr.searched_up_to;
  Json counts = Json::object();
  for (std::size_t p = 1; p <= max_period; ++p) {
    // Decimal strings: counts are unbounded integers.
    counts[std::to_string(p)] = count_periodic(a, p).get_str();
  }
  doc["periodic_counts"] = std::move(counts);
  return doc;
}

}  // namespace nilmag

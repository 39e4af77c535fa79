#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nilmag/magext.hpp"

namespace nilmag {

// Line-oriented scenario configuration. Grammar (see README):
//
//   file    := { line }
//   line    := blank | comment | section | entry
//   comment := '#' ...
//   section := '[' name ']'
//   entry   := key '=' value
//
// Values are whitespace-separated tokens; rationals are "p/q" or "p".

struct BracketTerm {
  std::size_t i = 0, j = 0, k = 0;  // [e_i, e_j] has coefficient on e_k, i < j
  Rational coef;
};

struct SigmaTerm {
  std::size_t i = 0, j = 0;  // i < j
  Rational value;
};

struct IntegrateSection {
  std::optional<double> step;
  std::optional<double> t_end;
  std::optional<std::size_t> sample_stride;
  std::optional<std::vector<double>> state;
  std::optional<double> k1;
  std::optional<double> k2;
};

struct ChaosSection {
  std::optional<double> step;
  std::optional<double> t_end;
  std::optional<double> renorm_interval;
  std::optional<double> transient_fraction;
  std::optional<bool> check_convergence;
  std::optional<bool> spectrum;
};

struct SweepSection {
  std::optional<std::string> kind;  // "orbit" or "energy"
  std::optional<std::vector<double>> a;
  std::optional<std::vector<double>> b;
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<double> t_end;
  std::optional<unsigned> threads;
};

struct SftSection {
  std::optional<std::string> matrix;
  std::optional<std::size_t> max_period;
};

struct ScenarioConfig {
  std::string name = "custom";
  std::optional<double> field_strength;
  std::optional<std::uint64_t> seed;

  std::vector<std::string> labels;
  std::vector<BracketTerm> brackets;          // sorted by (i, j, k)
  std::optional<std::vector<RVec>> metric;    // nullopt: identity
  std::vector<SigmaTerm> sigma;               // sorted by (i, j)
  std::optional<std::vector<RVec>> lattice;
  /// Set for extension documents: the named last basis vector is W.
  std::optional<std::string> w_label;

  IntegrateSection integrate;
  ChaosSection chaos;
  SweepSection sweep;
  SftSection sft;
};

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config_file(const std::string& path);

/// Canonical text: fixed section and key order, sorted terms, canonical numbers.
std::string serialize(const ScenarioConfig& cfg);

/// Hex SHA-256 of serialize(cfg).
std::string config_hash(const ScenarioConfig& cfg);

/// Algebra, metric, sigma and lattice as stated in the document.
MagneticSystem build_system(const ScenarioConfig& cfg);

/// For extension documents: the base system recovered from the W components,
/// re-extended and checked against the stated algebra and metric.
std::optional<ExtendedSystem> build_extension(const ScenarioConfig& cfg);

/// Extension document for m: extended algebra and metric, base sigma folded
/// into the W components, extended lattice when m has a lattice.
ScenarioConfig extension_config(const MagneticSystem& m, const std::string& name);

/// Effective seed: explicit override, else NILMAG_SEED, else config, else default.
std::uint64_t resolve_seed(const ScenarioConfig& cfg, std::optional<std::uint64_t> cli_seed);

}  // namespace nilmag

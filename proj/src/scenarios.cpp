#include "nilmag/scenarios.hpp"

#include <algorithm>
#include <filesystem>

#include "nilmag/error.hpp"
#include "nilmag/orbits.hpp"

namespace nilmag {
namespace {

constexpr const char* kHeisenberg = R"([system]
name = heisenberg

[algebra]
dim = 3
labels = X Y Z
bracket = X Y Z 1

[metric]
identity = true

[sigma]
entry = X Y 1

[lattice]
row = 1 0 0
row = 0 1 0
row = 0 0 1/2
)";

// Integer V, X, Y coefficients and half-integer U, Z coefficients.
constexpr const char* kPaper5d = R"([system]
name = paper5d

[algebra]
dim = 5
labels = U V X Y Z
bracket = X Y Z 1
bracket = Y V U 1

[metric]
identity = true

[sigma]
entry = X U 1
entry = Z V 1

[lattice]
row = 1/2 0 0 0 0
row = 0 1 0 0 0
row = 0 0 1 0 0
row = 0 0 0 1 0
row = 0 0 0 0 1/2
)";

constexpr const char* kAbelian2 = R"([system]
name = abelian2

[algebra]
dim = 2
labels = X Y

[metric]
identity = true

[sigma]
entry = X Y 1

[lattice]
row = 1 0
row = 0 1
)";

}  // namespace

std::vector<std::string> builtin_scenario_names() { return {"abelian2", "heisenberg", "paper5d", "t4ext"}; }

std::string builtin_config_text(const std::string& name) {
  if (name == "heisenberg") return kHeisenberg;
  if (name == "paper5d") return kPaper5d;
  if (name == "abelian2") return kAbelian2;
  if (name == "t4ext") {
    const MagneticSystem base = build_system(parse_config(kPaper5d));
    return serialize(extension_config(base, "t4ext"));
  }
  fail(ErrorCategory::validation, "unknown built-in scenario '" + name + "'");
}

Scenario scenario_from_config(ScenarioConfig cfg) {
  MagneticSystem system = build_system(cfg);
  std::optional<ExtendedSystem> extension = build_extension(cfg);
  std::string id = cfg.name;
  return Scenario{std::move(id), std::move(cfg), std::move(system), std::move(extension)};
}

Scenario load_scenario(const std::string& name_or_path) {
  const auto names = builtin_scenario_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return scenario_from_config(parse_config(builtin_config_text(name_or_path)));
  }
  if (!std::filesystem::exists(name_or_path)) {
    fail(ErrorCategory::parse, "'" + name_or_path + "' is neither a built-in scenario nor a readable file");
  }
  return scenario_from_config(load_config_file(name_or_path));
}

bool is_t4_shaped(const LieAlgebra& algebra) {
  if (algebra.dim() != t4::kDim) return false;
  LieAlgebra::StructureMap expected;
  const auto put = [&](std::size_t i, std::size_t j, std::size_t k, int coef) {
    RVec v = zero_vector(t4::kDim);
    v[k] = coef;
    expected.emplace(LieAlgebra::Key{i, j}, v);
  };
  put(t4::kX, t4::kY, t4::kZ, 1);
  put(t4::kV, t4::kY, t4::kU, -1);
  put(t4::kU, t4::kX, t4::kW, -1);
  put(t4::kV, t4::kZ, t4::kW, -1);
  return algebra.structure() == expected;
}

}  // namespace nilmag

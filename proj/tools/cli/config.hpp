#pragma once

// JSON model configuration for the qboson command line tool.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qboson/algebra.hpp"
#include "qboson/swanson.hpp"

namespace qboson::cli {

/// Malformed configuration; `where` names the field or "line L, column C".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

enum class ModelKind { OneMode, TwoMode, Custom };

struct OracleSettings {
  std::optional<std::size_t> nmax;
  std::optional<std::size_t> levels;
  std::optional<double> tol;
};

struct SweepAxis {
  std::string parameter;
  double start = 0.0;
  double stop = 0.0;
  long long steps = 0;

  /// start + (stop - start) k / (steps - 1); a single step sits at start.
  double value(long long k) const;
};

struct ModelConfig {
  ModelKind kind = ModelKind::OneMode;
  cplx alpha{0.0, 0.0};
  cplx beta{0.0, 0.0};
  double gamma = 0.0;
  CMatrix G;  // custom only
  cplx offset{0.0, 0.0};
  OracleSettings oracle;
  std::vector<SweepAxis> sweep;
  std::optional<double> s11;

  std::size_t modes() const;
  QuadraticForm form() const;
  swanson::OneModeParams one_mode_params() const { return {alpha, beta}; }
  swanson::TwoModeParams two_mode_params() const { return {alpha, beta, gamma}; }
  /// Copy with one sweep parameter set; throws ConfigError for unknown names.
  ModelConfig with(const std::string& parameter, double value) const;
};

std::string to_string(ModelKind k);

/// Names accepted in "sweep" for a model kind.
std::vector<std::string> sweep_parameters(ModelKind k);

ModelConfig parse_config(const std::string& text);
ModelConfig load_config(const std::string& path, std::string* raw = nullptr);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace qboson::cli

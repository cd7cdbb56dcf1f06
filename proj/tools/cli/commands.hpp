#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace qboson::cli {

enum ExitCode : int { kOk = 0, kError = 1, kExceptionalPoint = 2 };

struct Options {
  std::optional<std::string> out;
  std::optional<std::size_t> nmax;
  std::optional<std::size_t> levels;
  std::optional<double> tol;
  std::optional<double> s11;
  bool allow_complex = false;
  bool metric = false;  // transform: also run the Fock-space metric check
};

int cmd_analyze(const ModelConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_oracle(const ModelConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_transform(const ModelConfig& cfg, const Options& opt, std::ostream& out, std::ostream& err);

/// CSV: '#' metadata lines, header, one row per grid point in grid order
/// (first axis slowest). `raw` is hashed into the metadata.
int cmd_sweep(const ModelConfig& cfg, const std::string& raw, std::ostream& csv, std::ostream& err,
              unsigned threads);

std::vector<std::string> sweep_header(const ModelConfig& cfg);

/// QBOSON_SWEEP_THREADS if set (positive integer), else hardware concurrency.
unsigned sweep_threads();

/// Full command line: `qboson <command> --config FILE [options]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string fmt17(double x);
std::string fmt9(double x);
std::string fmt9(cplx z);

}  // namespace qboson::cli

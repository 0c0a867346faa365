#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>

#include "chroma_sr/config.hpp"
#include "chroma_sr/image.hpp"

namespace chroma_sr {

inline constexpr const char* kReportSchema = "chroma-sr/1";

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,   // I/O or pipeline stage failure
  kExitConfig = 2,    // invalid configuration
  kExitStrict = 3,    // warnings escalated by --strict
};

/// Path of the JSON report written next to an output image.
std::string report_path_for(const std::string& output_path);

/// Super-resolves `input_path` and writes a PNG plus `<output>.report.json`.
int cmd_sr(const std::string& input_path, const std::string& output_path, const RunConfig& cfg,
           std::ostream& out, std::ostream& err);

struct EvalOptions {
  std::array<double, kChannels> sigma{0.0, 0.0, 0.0};
  /// When set, the super-resolved PNG and its report are written here.
  std::optional<std::string> output_path;
};

/// Synthetic evaluation: inject seeded channel noise into the ground truth,
/// degrade, super-resolve, and compare against the bicubic baseline.
int cmd_eval(const std::string& gt_path, const EvalOptions& opts, const RunConfig& cfg,
             std::ostream& out, std::ostream& err);

/// Prints {"sigma": [r,g,b], "variance": [r,g,b]} for the image.
int cmd_noise(const std::string& input_path, std::ostream& out, std::ostream& err);

/// The eval protocol on an in-memory ground truth. Returns the report and,
/// through `sr_out`, the 8-bit super-resolved image.
nlohmann::json evaluate_synthetic(const ColorImage& gt, const std::array<double, kChannels>& sigma,
                                  const RunConfig& cfg, ColorImage* sr_out = nullptr,
                                  int* divergence_warnings = nullptr);

}  // namespace chroma_sr

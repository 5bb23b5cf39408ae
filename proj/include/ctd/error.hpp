#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ctd {

/// Failure categories shared across the library. The CLI maps these onto
/// its documented exit codes (see README).
enum class Errc {
  ZeroDepth,
  BehindCamera,
  EmptyTrajectory,
  DegenerateSample,
  RadiusOverflow,
  InsufficientData,
  NoValidHypothesis,
  ProjectionDegenerate,
  ParallelNormal,
  DegeneratePatch,
  GraspOnAxis,
  NonExecutableModel,
  SchemaViolation,
  VersionMismatch,
  InvalidSpec,
  IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Error(Errc code, std::string message, std::string stage)
      : std::runtime_error(std::move(message)),
        code_(code),
        stage_(std::move(stage)) {}

  Errc code() const { return code_; }

  /// Pipeline stage that raised the error (empty when not applicable).
  const std::string& stage() const { return stage_; }

  /// Single-line machine-parsable form: "error: <Name>[ at <stage>]: <msg>".
  std::string formatted() const;

  static Error schema(const std::string& field_path, const std::string& what) {
    return Error(Errc::SchemaViolation, what, field_path);
  }

 private:
  Errc code_;
  std::string stage_;
};

}  // namespace ctd

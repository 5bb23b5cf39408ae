#include "ctd/error.hpp"

namespace ctd {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::ZeroDepth: return "ZeroDepth";
    case Errc::BehindCamera: return "BehindCamera";
    case Errc::EmptyTrajectory: return "EmptyTrajectory";
    case Errc::DegenerateSample: return "DegenerateSample";
    case Errc::RadiusOverflow: return "RadiusOverflow";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::NoValidHypothesis: return "NoValidHypothesis";
    case Errc::ProjectionDegenerate: return "ProjectionDegenerate";
    case Errc::ParallelNormal: return "ParallelNormal";
    case Errc::DegeneratePatch: return "DegeneratePatch";
    case Errc::GraspOnAxis: return "GraspOnAxis";
    case Errc::NonExecutableModel: return "NonExecutableModel";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

std::string Error::formatted() const {
  std::string line = "error: ";
  line += errc_name(code_);
  if (!stage_.empty()) {
    line += " at ";
    line += stage_;
  }
  line += ": ";
  line += what();
  return line;
}

}  // namespace ctd

#include "critsense/error.hpp"
#include "critsense/field.hpp"

namespace critsense {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return "Usage";
    case ErrorCode::Catalogue: return "Catalogue";
    case ErrorCode::Margin: return "Margin";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NonIsolated: return "NonIsolated";
    case ErrorCode::UnderSampled: return "UnderSampled";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::NonGeneric: return "NonGeneric";
    case ErrorCode::BoundaryCritical: return "BoundaryCritical";
    case ErrorCode::NotMorse: return "NotMorse";
    case ErrorCode::FlowSingular: return "FlowSingular";
    case ErrorCode::Coverage: return "Coverage";
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::NoSeparation: return "NoSeparation";
    case ErrorCode::Convexity: return "Convexity";
    case ErrorCode::Unresolved: return "Unresolved";
  }
  return "Unknown";
}

std::string_view to_string(Smoothness s) {
  switch (s) {
    case Smoothness::C0: return "C0";
    case Smoothness::C1: return "C1";
    case Smoothness::C2: return "C2";
  }
  return "?";
}

}  // namespace critsense

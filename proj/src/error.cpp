#include "halfreg/error.hpp"

namespace halfreg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Malformed: return "Malformed";
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotNearRealization: return "NotNearRealization";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::AlreadySimple: return "AlreadySimple";
    case ErrorKind::SameRow: return "SameRow";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NoNonLoopEdge: return "NoNonLoopEdge";
    case ErrorKind::InvalidTrail: return "InvalidTrail";
    case ErrorKind::NotBalanced: return "NotBalanced";
    case ErrorKind::BadDefectShape: return "BadDefectShape";
    case ErrorKind::NotACyclicPermutation: return "NotACyclicPermutation";
    case ErrorKind::DifferentInstances: return "DifferentInstances";
    case ErrorKind::NotReversible: return "NotReversible";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace halfreg

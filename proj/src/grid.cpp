#include "cmc/grid.hpp"

namespace cmc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorCode::DegreeCap: return "DegreeCap";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyGeometry: return "EmptyGeometry";
    case ErrorCode::ImaginaryResidueTooLarge: return "ImaginaryResidueTooLarge";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::NonRational: return "NonRational";
    case ErrorCode::NotCMC1: return "NotCMC1";
    case ErrorCode::NotHolomorphic: return "NotHolomorphic";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::PathThroughMask: return "PathThroughMask";
    case ErrorCode::PoleOnGrid: return "PoleOnGrid";
    case ErrorCode::SingularParameter: return "SingularParameter";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVersion: return "UnknownVersion";
  }
  return "Unknown";
}

void require_same_chart(const GridChart& a, const GridChart& b,
                        const char* where) {
  if (!a.same_as(b))
    throw Error(ErrorCode::DimensionMismatch,
                std::string(where) + ": fields live on different charts");
}

std::vector<unsigned char> mask_and(const std::vector<unsigned char>& a,
                                    const std::vector<unsigned char>& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "mask sizes differ");
  std::vector<unsigned char> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = (a[k] && b[k]) ? 1 : 0;
  return out;
}

}  // namespace cmc

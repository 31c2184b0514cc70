#include "layoutminer/core/error.hpp"

namespace layoutminer {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonUnitQuaternion: return "NonUnitQuaternion";
    case ErrorCode::NonFiniteComponent: return "NonFiniteComponent";
    case ErrorCode::InvalidCrop: return "InvalidCrop";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::ScenarioMismatch: return "ScenarioMismatch";
    case ErrorCode::UpdateBeforeAdd: return "UpdateBeforeAdd";
    case ErrorCode::NonMonotonicSeq: return "NonMonotonicSeq";
    case ErrorCode::StorageFull: return "StorageFull";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownWidget: return "UnknownWidget";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::TimestampRegression: return "TimestampRegression";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::MissingBlob: return "MissingBlob";
    case ErrorCode::IntegrityError: return "IntegrityError";
    case ErrorCode::StoreCorrupt: return "StoreCorrupt";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::WrongRole: return "WrongRole";
    case ErrorCode::NoLastWidget: return "NoLastWidget";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::UnannotatedWidget: return "UnannotatedWidget";
    case ErrorCode::NoClusters: return "NoClusters";
    case ErrorCode::MissingActivityType: return "MissingActivityType";
    case ErrorCode::UnlabeledTask: return "UnlabeledTask";
    case ErrorCode::VersionConflict: return "VersionConflict";
    case ErrorCode::InvalidCategory: return "InvalidCategory";
    case ErrorCode::InvalidUiType: return "InvalidUiType";
    case ErrorCode::InvalidSortField: return "InvalidSortField";
    case ErrorCode::InvalidFilterField: return "InvalidFilterField";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::InvalidPage: return "InvalidPage";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ScriptError: return "ScriptError";
    case ErrorCode::NoData: return "NoData";
  }
  return "Unknown";
}

std::optional<ErrorCode> parse_error_code(std::string_view text) noexcept {
  for (int i = 0; i <= static_cast<int>(ErrorCode::NoData); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (to_string(code) == text) return code;
  }
  return std::nullopt;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace layoutminer

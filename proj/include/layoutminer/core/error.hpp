#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace layoutminer {

// Every domain failure carries one of these codes. The names double as the
// `error_code` strings of the HTTP APIs, so renaming one is a wire change.
enum class ErrorCode {
  NonUnitQuaternion,
  NonFiniteComponent,
  InvalidCrop,
  InvalidScenario,
  ScenarioMismatch,
  UpdateBeforeAdd,
  NonMonotonicSeq,
  StorageFull,
  DanglingReference,
  DuplicateId,
  UnknownWidget,
  UnknownScenario,
  TimestampRegression,
  SchemaMismatch,
  MissingBlob,
  IntegrityError,
  StoreCorrupt,
  IoError,
  WrongRole,
  NoLastWidget,
  Unreachable,
  UnannotatedWidget,
  NoClusters,
  MissingActivityType,
  UnlabeledTask,
  VersionConflict,
  InvalidCategory,
  InvalidUiType,
  InvalidSortField,
  InvalidFilterField,
  InvalidField,
  InvalidPage,
  InvalidArgument,
  ScriptError,
  NoData,
};

std::string_view to_string(ErrorCode code) noexcept;
std::optional<ErrorCode> parse_error_code(std::string_view text) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace layoutminer

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tfsim {

enum class Errc {
  IllegalTransition,
  AlreadyFinished,
  InvalidParam,
  DuplicateRequest,
  CapacityExceeded,
  UnknownRequest,
  OracleBoundExceeded,
  StalePlan,
  EmptyStream,
  ConfigError,
  IncompleteTrace,
  CalibrationFailed,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::IllegalTransition: return "IllegalTransition";
    case Errc::AlreadyFinished: return "AlreadyFinished";
    case Errc::InvalidParam: return "InvalidParam";
    case Errc::DuplicateRequest: return "DuplicateRequest";
    case Errc::CapacityExceeded: return "CapacityExceeded";
    case Errc::UnknownRequest: return "UnknownRequest";
    case Errc::OracleBoundExceeded: return "OracleBoundExceeded";
    case Errc::StalePlan: return "StalePlan";
    case Errc::EmptyStream: return "EmptyStream";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IncompleteTrace: return "IncompleteTrace";
    case Errc::CalibrationFailed: return "CalibrationFailed";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void check(bool cond, Errc code, const std::string& what) {
  if (!cond) {
    throw Error(code, what);
  }
}

}  // namespace tfsim

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace logsweep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation's documented precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Raised when a simulation reaches its event-count cap before its stopping
/// rule fired. Truncated data is never returned in that case.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(std::uint64_t cap)
      : Error("event cap exceeded (" + std::to_string(cap) + " events)"), cap_(cap) {}

  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t cap_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace logsweep

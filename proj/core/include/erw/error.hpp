#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "erw/rng.hpp"

namespace erw {

/// A pathwise guarantee failed (coupling order, distance bound, conservation).
/// Carries the stream key of the offending replicate when there is one.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what, std::optional<StreamKey> key = std::nullopt)
      : std::logic_error(key ? what + " [stream " + to_string(*key) + "]" : what), key_(key) {}

  const std::optional<StreamKey>& key() const noexcept { return key_; }

 private:
  std::optional<StreamKey> key_;
};

/// A computation ran past its configured step or censoring budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace erw

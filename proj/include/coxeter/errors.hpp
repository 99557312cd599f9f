#pragma once

#include <stdexcept>
#include <string>

namespace coxeter {

/// Malformed or out-of-range input (bad type tag, player index, game id...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested score sequence has no tournaments.
class InfeasibleScore : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exhaustive computation would exceed the configured player cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, int required_cap)
      : std::runtime_error(what), required_cap_(required_cap) {}
  int required_cap() const noexcept { return required_cap_; }

 private:
  int required_cap_;
};

/// A structural property that must hold for every interchange graph failed.
/// Raised instead of silently continuing, since it would falsify a lemma.
class LemmaViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace coxeter

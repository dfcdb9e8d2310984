#pragma once

#include <stdexcept>
#include <string>

namespace tangent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two values that must live over the same object do not.
class ObjectMismatch : public Error {
 public:
  using Error::Error;
};

/// A generator-image table violates x_j x_j' = 0 inside one factor.
class RelationViolation : public Error {
 public:
  RelationViolation(int factor, int j, int j2, const std::string& what)
      : Error(what), factor_(factor), first_(j), second_(j2) {}

  // 1-based, matching the x(i,j) display convention.
  int factor() const noexcept { return factor_; }
  int first() const noexcept { return first_; }
  int second() const noexcept { return second_; }

 private:
  int factor_, first_, second_;
};

/// A generator image has a nonzero unit coefficient.
class ConstantPartNonzero : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its configured cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Pairing legs disagree after projecting to the base.
class NotACone : public Error {
 public:
  using Error::Error;
};

class BadName : public Error {
 public:
  using Error::Error;
};

class IllTyped : public Error {
 public:
  using Error::Error;
};

/// No structural term was found within the depth budget. This is a limit of
/// the search, never evidence that the morphism is inexpressible.
class ExpressBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidPresentation : public Error {
 public:
  using Error::Error;
};

class TruncationTooLarge : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace tangent

#pragma once

#include <stdexcept>

namespace wmt {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A bound or lemma was asked for outside its hypothesis (e.g. gamma*delta >= 1).
class PreconditionViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

// Profile or radial function whose invariants do not hold.
class InvalidProfile : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input for which an operation has no meaningful answer (e.g. scaling psi == 0).
class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace wmt

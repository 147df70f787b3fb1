#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posfactor {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input violates a stated precondition (shape, Hermitian-ness, ranges).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class NotInvertible : public Error {
  public:
    using Error::Error;
};

class BlockNotInvertible : public Error {
  public:
    using Error::Error;
};

/// det is not a positive real, so the target cannot be a limit of
/// products of positive matrices.
class DeterminantObstruction : public Error {
  public:
    using Error::Error;
};

/// A commutator was requested for a matrix with nonzero trace.
class TraceObstruction : public Error {
  public:
    using Error::Error;
};

class BudgetExceeded : public Error {
  public:
    BudgetExceeded(const std::string& what, std::size_t predicted, std::size_t budget)
        : Error(what), predicted_(predicted), budget_(budget) {}

    std::size_t predicted() const noexcept { return predicted_; }
    std::size_t budget() const noexcept { return budget_; }

  private:
    std::size_t predicted_;
    std::size_t budget_;
};

class InsufficientPoints : public Error {
  public:
    InsufficientPoints(const std::string& what, std::size_t required)
        : Error(what), required_(required) {}

    std::size_t required() const noexcept { return required_; }

  private:
    std::size_t required_;
};

} // namespace posfactor

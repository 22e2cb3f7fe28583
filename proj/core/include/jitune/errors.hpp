#pragma once

#include <stdexcept>
#include <string>

namespace jitune {

/// Base class for all jitune errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A tuning key is already registered.
class DuplicateKeyError : public Error {
public:
  using Error::Error;
};

/// A candidate space with no candidates was supplied.
class EmptyCandidateSpaceError : public Error {
public:
  using Error::Error;
};

/// A parameter-value candidate space contains a repeated value.
class DuplicateCandidateError : public Error {
public:
  using Error::Error;
};

/// A key was looked up with a candidate space different from the one it was
/// registered with.
class SpaceMismatchError : public Error {
public:
  using Error::Error;
};

/// complete_call received an action that does not match the pending one
/// issued by the most recent begin_call.
class OutOfOrderCompletionError : public Error {
public:
  using Error::Error;
};

/// best_candidate was asked for before any measurement completed.
class NoMeasurementsError : public Error {
public:
  using Error::Error;
};

/// A finalized variant was inserted twice for the same key without a reset.
class DoubleFinalizeError : public Error {
public:
  using Error::Error;
};

/// A variant factory failed to produce an executable.
class FactoryError : public Error {
public:
  using Error::Error;
};

/// The cost model is undefined for fewer calls than candidates + 1.
class InsufficientCallsError : public Error {
public:
  using Error::Error;
};

/// Another call on the same key is in flight (contention policy Busy).
class BusyError : public Error {
public:
  using Error::Error;
};

/// Kernel operands have incompatible sizes.
class DimensionMismatchError : public Error {
public:
  using Error::Error;
};

} // namespace jitune

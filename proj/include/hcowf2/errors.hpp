#pragma once

#include <stdexcept>
#include <string>

namespace hcowf2 {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// A parameter is outside its legal domain (e.g. clause width k <= 2).
struct ParameterError : Error {
  using Error::Error;
};

// Two bit vectors that must share a width do not.
struct WidthMismatch : Error {
  using Error::Error;
};

// Rejection sampling hit its retry bound; the requested (n, k) is
// infeasible or pathologically tight.
struct GenerationExhausted : Error {
  using Error::Error;
};

// A FunctionDescription violates one of its structural invariants.
struct DescriptionInvalid : Error {
  using Error::Error;
};

// An operation was refused because the instance exceeds a configured
// size cap (memory / runtime guard).
struct ScaleRefused : Error {
  using Error::Error;
};

// Byte-level damage in an encoded function description: bad magic,
// truncation, trailing garbage.
struct MalformedEncoding : Error {
  using Error::Error;
};

// Structurally well-formed bytes describing a semantically invalid
// function description (reducible clause pair, duplicate Q entry, ...).
// Distinct from MalformedEncoding so callers can tell transport
// corruption from a hostile peer.
struct InvariantViolation : Error {
  using Error::Error;
};

// The byte stream under a protocol session failed (closed early, short
// read/write, socket error).
struct TransportError : Error {
  using Error::Error;
};

// The peer sent a frame that is not legal in the current session phase.
struct ProtocolViolation : Error {
  using Error::Error;
};

// A received function description does not hash to the signature that
// announced it.
struct SignatureMismatch : Error {
  using Error::Error;
};

// The formula-partitioning plan needs more nodes than the cluster has.
struct InsufficientCluster : Error {
  using Error::Error;
};

} // namespace hcowf2

#pragma once

#include <stdexcept>
#include <string>

namespace procnet {

/// Raised while wiring a network: shape mismatches, bad arity, ports with a
/// missing or duplicated endpoint.
class ConstructionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised by a running process when a construct is communicated in a way its
/// protocol forbids (data after EOT, unpaired EOTs, foreign channels).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace procnet

#pragma once

#include <stdexcept>
#include <string>

namespace credal {

// Every library failure derives from Error so callers can map kinds to exit
// codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad dimensions, out-of-range indices,
// non-normalized vertices, unknown names.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Interval constraints with no feasible distribution.
class Infeasible : public Error {
 public:
  using Error::Error;
};

// The conditioning event has probability zero under every admissible
// vertex selection, so the conditional query is undefined.
class ZeroProbabilityEvidence : public Error {
 public:
  using Error::Error;
};

// A configured resource limit (enumeration cap, vertex budget) was hit.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace credal

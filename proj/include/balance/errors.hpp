#pragma once

#include <stdexcept>
#include <string>

namespace balance {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error { using Error::Error; };
struct EndpointNotInGraph : Error { using Error::Error; };
struct EmptyGraph : Error { using Error::Error; };
struct NoEdges : Error { using Error::Error; };
struct NoClosedTriads : Error { using Error::Error; };
struct NonConsecutiveYears : Error { using Error::Error; };
struct NodeSetMismatch : Error { using Error::Error; };
struct YearOutOfRange : Error { using Error::Error; };

/// Raised when a year pair has no off-diagonal edge transitions, so growth surrogates cannot be drawn.
struct NothingToRandomize : Error { using Error::Error; };

struct IoError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };

}  // namespace balance

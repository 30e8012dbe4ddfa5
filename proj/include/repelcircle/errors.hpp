#pragma once

#include <stdexcept>

namespace repelcircle {

// Two particles closer than the collision guard; the energy would
// diverge toward -infinity.
class CollisionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Angles out of order, or a fluctuation large enough to push a
// particle across its neighbor.
class OrderingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Index or size argument outside its documented domain.
class RangeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A statistic was requested on an empty sample.
class EmptySampleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed textual input, e.g. a g-spec string.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A file could not be opened or written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace repelcircle

#pragma once

#include <stdexcept>
#include <string>

namespace atten {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_parameter : public error {
 public:
  using error::error;
};

class quadrature_failure : public error {
 public:
  using error::error;
};

/// The evidence Z(s) underflowed; the signal lies too deep in the joint tail.
class degenerate_signal : public error {
 public:
  using error::error;
};

class inadmissible_density : public error {
 public:
  using error::error;
};

class precondition_failed : public error {
 public:
  using error::error;
};

class search_exhausted : public error {
 public:
  using error::error;
};

}  // namespace atten

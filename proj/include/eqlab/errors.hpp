#ifndef EQLAB_ERRORS_HPP
#define EQLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eqlab {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A digit outside [0, base) was passed to a digit-expansion constructor.
class invalid_digit_error : public error {
 public:
  using error::error;
};

/// A point's digit precision is insufficient for the requested orbit length.
class precision_error : public error {
 public:
  using error::error;
};

/// An exact evaluation was requested where only an approximate one exists
/// (for example Fourier pushforward with a non-integer frequency scaling,
/// or the CDF of a convolution).
class unsupported_exact_error : public error {
 public:
  using error::error;
};

/// A zoom window around a center pokes outside [0,1]; callers skip the center.
class out_of_window_error : public error {
 public:
  using error::error;
};

/// A zoom window carries zero mass, so no normalized descriptor exists.
class degenerate_window_error : public error {
 public:
  using error::error;
};

/// A config or constructor argument failed validation; the message names the
/// offending field.
class validation_error : public error {
 public:
  using error::error;
};

}

#endif

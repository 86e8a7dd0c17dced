#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace holgeo {

using Cx = std::complex<double>;

/// Failure categories shared across the library. Evaluation and
/// integration never hand back silent NaNs; they return one of these.
enum class errc {
  pole,
  branch_ambiguous,
  not_ordinary,
  coefficient_pole,
  null_vector,
  on_axis,
  singular_crossing,
  hit_singularity,
  field_failure,
  branch_undefined,
  parse_error,
  invalid_argument,
};

const char* errc_name(errc code);

struct Error {
  errc code;
  std::string message;
  Cx where{0.0, 0.0};  // location in the complex plane, when meaningful
  bool has_where = false;
  int position = -1;   // byte offset for parse errors

  static Error at(errc code, std::string message, Cx where) {
    Error e{code, std::move(message)};
    e.where = where;
    e.has_where = true;
    return e;
  }
};

/// Minimal value-or-error carrier. `value()` on an error throws; callers
/// are expected to branch on `ok()` or use `value_or_throw` explicitly
/// when the invariant is established elsewhere.
template <typename T>
class Result {
public:
  Result(T value) : v_(std::move(value)) {}
  Result(Error error) : v_(std::move(error)) {}

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!ok()) throw std::runtime_error("Result::value on error: " + error().message);
    return std::get<T>(v_);
  }
  T& value() & {
    if (!ok()) throw std::runtime_error("Result::value on error: " + error().message);
    return std::get<T>(v_);
  }
  T&& value() && {
    if (!ok()) throw std::runtime_error("Result::value on error: " + error().message);
    return std::move(std::get<T>(v_));
  }

  const Error& error() const {
    if (ok()) throw std::logic_error("Result::error on value");
    return std::get<Error>(v_);
  }

  const T* operator->() const { return &value(); }
  const T& operator*() const { return value(); }

private:
  std::variant<T, Error> v_;
};

template <>
class Result<void> {
public:
  Result() = default;
  Result(Error error) : e_(std::move(error)) {}

  bool ok() const { return !e_.has_value(); }
  explicit operator bool() const { return ok(); }
  const Error& error() const { return *e_; }

private:
  std::optional<Error> e_;
};

inline Result<void> ok_result() { return Result<void>{}; }

}  // namespace holgeo

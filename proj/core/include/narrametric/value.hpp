#pragma once

#include <cassert>
#include <string>
#include <utility>
#include <variant>

namespace narrametric {

// Marker for a quantity that cannot be computed, with the reason attached.
struct Undefined {
  std::string reason;
};

// A value or the reason it is undefined. Never silently coerced to zero.
template <typename T>
class OrUndefined {
 public:
  OrUndefined(T value) : state_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  OrUndefined(Undefined undefined) : state_(std::move(undefined)) {}  // NOLINT

  bool defined() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return defined(); }

  const T& value() const {
    assert(defined());
    return std::get<T>(state_);
  }
  const T& operator*() const { return value(); }
  const T* operator->() const { return &value(); }

  T value_or(T fallback) const { return defined() ? std::get<T>(state_) : std::move(fallback); }

  // Empty for defined values.
  const std::string& reason() const {
    static const std::string kNone;
    return defined() ? kNone : std::get<Undefined>(state_).reason;
  }

 private:
  std::variant<T, Undefined> state_;
};

using MetricValue = OrUndefined<double>;

}  // namespace narrametric

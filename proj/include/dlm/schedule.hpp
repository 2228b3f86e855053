#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

namespace dlm {

/// α(0) = 1, α(k) = 1/√k.
struct RecipSqrt {};
/// α(0) = 1, α(k) = 1/k.
struct Recip {};
/// α(0) = c, α(k) = c/k^p with c > 0 and p in (0.5, 1].
struct PowerLaw {
  double c = 1.0;
  double p = 1.0;
};
/// User-supplied sequence. Flags are taken on trust.
struct CustomSchedule {
  std::function<double(std::size_t)> alpha;
  bool square_summable = false;
  std::string label = "custom";
};

/// Step-size sequence α(k), consumed at round k starting from k = 0.
class StepSchedule {
 public:
  using Variant = std::variant<RecipSqrt, Recip, PowerLaw, CustomSchedule>;

  StepSchedule(Variant v);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires std::is_constructible_v<Variant, T> && (!std::is_same_v<std::decay_t<T>, Variant>)
  StepSchedule(T s) : StepSchedule(Variant(std::move(s))) {}  // NOLINT(google-explicit-constructor)

  double operator()(std::size_t k) const;

  /// Σα = ∞ and Σα² < ∞.
  bool square_summable() const;
  /// α(0) == 1.
  bool starts_at_one() const { return (*this)(0) == 1.0; }
  bool is_recip_sqrt() const { return std::holds_alternative<RecipSqrt>(v_); }

  /// Round-trippable spec string: "recipsqrt", "recip", "powerlaw:c:p".
  std::string describe() const;

  const Variant& variant() const noexcept { return v_; }

 private:
  Variant v_;
};

/// Parses "recipsqrt", "recip" or "powerlaw:<c>:<p>".
StepSchedule parse_schedule(std::string_view spec);

}  // namespace dlm

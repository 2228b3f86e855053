#include "dlm/schedule.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "dlm/errors.hpp"

namespace dlm {

StepSchedule::StepSchedule(Variant v) : v_(std::move(v)) {
  if (const auto* pl = std::get_if<PowerLaw>(&v_)) {
    if (!(pl->c > 0.0) || !std::isfinite(pl->c)) throw InvalidArgument("powerlaw schedule needs c > 0");
    if (!(pl->p > 0.5 && pl->p <= 1.0)) throw InvalidArgument("powerlaw schedule needs p in (0.5, 1]");
  } else if (const auto* cs = std::get_if<CustomSchedule>(&v_)) {
    if (!cs->alpha) throw InvalidArgument("custom schedule needs a sequence");
  }
}

double StepSchedule::operator()(std::size_t k) const {
  const double kd = static_cast<double>(k);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RecipSqrt>) {
          return k == 0 ? 1.0 : 1.0 / std::sqrt(kd);
        } else if constexpr (std::is_same_v<T, Recip>) {
          return k == 0 ? 1.0 : 1.0 / kd;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return k == 0 ? s.c : s.c / std::pow(kd, s.p);
        } else {
          return s.alpha(k);
        }
      },
      v_);
}

bool StepSchedule::square_summable() const {
  return std::visit(
      [](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RecipSqrt>) {
          return false;  // Σ 1/k diverges
        } else if constexpr (std::is_same_v<T, CustomSchedule>) {
          return s.square_summable;
        } else {
          return true;
        }
      },
      v_);
}

std::string StepSchedule::describe() const {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RecipSqrt>) {
          return "recipsqrt";
        } else if constexpr (std::is_same_v<T, Recip>) {
          return "recip";
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "powerlaw:%.17g:%.17g", s.c, s.p);
          return buf;
        } else {
          return s.label;
        }
      },
      v_);
}

namespace {

double parse_double(std::string_view tok, std::string_view spec) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw InvalidArgument("bad number '" + std::string(tok) + "' in schedule '" + std::string(spec) + "'");
  return v;
}

}  // namespace

StepSchedule parse_schedule(std::string_view spec) {
  if (spec == "recipsqrt" || spec == "recip-sqrt") return RecipSqrt{};
  if (spec == "recip") return Recip{};
  if (spec.starts_with("powerlaw:")) {
    auto rest = spec.substr(9);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw InvalidArgument("expected powerlaw:<c>:<p>, got '" + std::string(spec) + "'");
    return PowerLaw{parse_double(rest.substr(0, colon), spec), parse_double(rest.substr(colon + 1), spec)};
  }
  throw InvalidArgument("unknown schedule '" + std::string(spec) + "'");
}

}  // namespace dlm

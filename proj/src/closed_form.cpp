#include "dmt/closed_form.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace dmt {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

void check_cut_inputs(const ChannelExponents& a) {
  if (!(a.alpha1 >= -kExponentTol && a.alpha1 <= 1.0 + kExponentTol))
    throw DomainError("alpha1 must lie in [0, 1], got " + num(a.alpha1));
  if (!(a.alpha2 >= -kExponentTol && a.alpha2 <= 1.0 + kExponentTol))
    throw DomainError("alpha2 must lie in [0, 1], got " + num(a.alpha2));
  if (!(a.alpha_sr >= -kExponentTol))
    throw DomainError("alpha_sr must be >= 0, got " + num(a.alpha_sr));
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::global: return "global";
    case Strategy::local: return "local";
    case Strategy::blind: return "blind";
    case Strategy::mimo2x2: return "mimo2x2";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  constexpr std::array all{Strategy::global, Strategy::local, Strategy::blind, Strategy::mimo2x2};
  for (Strategy s : all)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

void check_support(const ChannelExponents& a, const NetworkParams& params) {
  check_cut_inputs(a);
  if (!(a.alpha_sr <= params.eta() + kExponentTol))
    throw DomainError("alpha_sr must lie in [0, eta=" + num(params.eta()) + "], got " +
                      num(a.alpha_sr));
}

double r_star(const NetworkParams& params) { return 2.0 - 1.0 / params.eta(); }

double d_closed(double r, const NetworkParams& params) {
  const double eta = params.eta();
  const double rmax = r_star(params);
  if (!(r >= 0.0)) throw DomainError("multiplexing gain r must be >= 0, got " + num(r));
  if (!(r <= rmax + kExponentTol))
    throw DomainError("multiplexing gain r must be <= r* = 2 - 1/eta = " + num(rmax) + ", got " +
                      num(r));
  if (r >= rmax - kExponentTol) return 0.0;
  if (r <= 1.0) return std::min(eta + 2.0, 4.0) - 3.0 * r;
  if (eta >= 2.0) return (2.0 * eta - eta * r - 1.0) / (eta - r);
  return eta - 1.0 / (2.0 - r);
}

double d_mimo_2x2(double r) {
  if (!(r >= 0.0 && r <= 2.0))
    throw DomainError("multiplexing gain r must lie in [0, 2] for 2x2 MIMO, got " + num(r));
  // corner points (k, (2-k)^2) for k = 0, 1, 2
  if (r <= 1.0) return 4.0 - 3.0 * r;
  return 2.0 - r;
}

double d_blind_closed(double r, const NetworkParams& params) {
  if (!(r >= 0.0)) throw DomainError("multiplexing gain r must be >= 0, got " + num(r));
  if (!(r <= 1.0))
    throw DomainError("closed-form blind tradeoff only covers r <= 1, got r = " + num(r) +
                      "; use the numerical optimizer");
  return std::min(params.eta() + 2.0, 4.0) - 3.0 * r;
}

double s_exponent(const ChannelExponents& a, const NetworkParams& params) {
  check_support(a, params);
  const double eta = params.eta();
  if (a.alpha1 + a.alpha2 <= 1.0)
    return eta + 4.0 - 3.0 * a.alpha1 - 2.0 * a.alpha2 - a.alpha_sr;
  return eta + 3.0 - 2.0 * a.alpha1 - a.alpha2 - a.alpha_sr;
}

CutExponents cut_exponents(const ChannelExponents& a, const Schedule& sched) {
  check_cut_inputs(a);
  const double f = sched.f();
  return {a.alpha1 + f * positive_part(a.alpha_sr - a.alpha1), a.alpha1 + (1.0 - f) * a.alpha2};
}

bool in_outage(const ChannelExponents& alpha, const Schedule& sched, double r) {
  return cut_exponents(alpha, sched).min() <= r + kExponentTol;
}

namespace detail {

double equalizing_fraction(double alpha1, double alpha2, double alpha_sr) {
  const double gap = positive_part(alpha_sr - alpha1);
  const double denom = gap + alpha2;
  if (denom <= 0.0) return 1.0;
  return alpha2 / denom;
}

}  // namespace detail

Schedule f_global(const ChannelExponents& alpha) {
  check_cut_inputs(alpha);
  return Schedule(std::clamp(detail::equalizing_fraction(alpha.alpha1, alpha.alpha2, alpha.alpha_sr), 0.0, 1.0));
}

double equalized_cut(const ChannelExponents& alpha) {
  check_cut_inputs(alpha);
  const double gap = positive_part(alpha.alpha_sr - alpha.alpha1);
  const double denom = gap + alpha.alpha2;
  if (denom <= 0.0) return alpha.alpha1;
  return alpha.alpha1 + alpha.alpha2 * gap / denom;
}

}  // namespace dmt

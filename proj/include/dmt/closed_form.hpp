#pragma once

#include "dmt/types.hpp"

namespace dmt {

/// Optimal tradeoff of the 1x1x2 half-duplex relay channel (global schedule).
/// Defined on 0 <= r <= 2 - 1/eta.
double d_closed(double r, const NetworkParams& params);

/// Largest multiplexing gain with positive diversity: 2 - 1/eta.
double r_star(const NetworkParams& params);

/// 2x2 MIMO tradeoff: piecewise linear through (0,4), (1,1), (2,0).
double d_mimo_2x2(double r);

/// Blind-schedule tradeoff for the low-rate region r <= 1, min{eta+2,4} - 3r.
double d_blind_closed(double r, const NetworkParams& params);

/// Exponent of the joint density of (alpha1, alpha2, alpha_sr):
/// f(alpha) is exponentially equal to rho^{-s(alpha)}.
double s_exponent(const ChannelExponents& alpha, const NetworkParams& params);

/// Cut mutual informations normalized by log(rho).
struct CutExponents {
  double i_cs = 0.0;  ///< cut {S} | {R,D}
  double i_cd = 0.0;  ///< cut {S,R} | {D}

  double min() const { return i_cs < i_cd ? i_cs : i_cd; }
};

CutExponents cut_exponents(const ChannelExponents& alpha, const Schedule& sched);

/// True when min{i_cs, i_cd} <= r (boundary counts as outage).
bool in_outage(const ChannelExponents& alpha, const Schedule& sched, double r);

/// Listen fraction that equalizes the two cuts. When (alpha_sr - alpha1)^+ + alpha2
/// vanishes both cuts equal alpha1 for every f and f = 1 is returned.
Schedule f_global(const ChannelExponents& alpha);

/// Equalized (max over f of the min-cut) exponent for a realization.
double equalized_cut(const ChannelExponents& alpha);

namespace detail {

/// f_global without support validation; used on finite-SNR exponent estimates
/// which may leave the support box.
double equalizing_fraction(double alpha1, double alpha2, double alpha_sr);

}  // namespace detail

}  // namespace dmt

#pragma once

#include <optional>

#include "dmt/closed_form.hpp"
#include "dmt/types.hpp"

namespace dmt {

enum class InnerMode { exact_lp, grid };

struct OptimizerConfig {
  double f_grid_step = 1e-3;
  double alpha_grid_step = 0.01;
  int refine_iters = 40;
  InnerMode mode = InnerMode::exact_lp;

  void validate() const;
};

/// Minimum of s over the outage region O(r, f) with a witnessing realization.
struct OutageMinimum {
  double d = 0.0;
  ChannelExponents argmin;
};

/// min over {alpha in support : in_outage(alpha, f, r)} of s_exponent(alpha).
OutageMinimum min_s_over_outage(double r, const Schedule& sched, const NetworkParams& params,
                                const OptimizerConfig& cfg = {});

/// Same problem with alpha_sr pinned to a value in [0, eta]; the minimum runs
/// over (alpha1, alpha2) only.
OutageMinimum min_s_over_outage_fixed_sr(double r, const Schedule& sched, double alpha_sr,
                                         const NetworkParams& params,
                                         const OptimizerConfig& cfg = {});

struct ScheduleResult {
  double f_opt = 0.0;
  double d_value = 0.0;
  Strategy strategy = Strategy::global;
  double r = 0.0;
  double eta = 1.0;
  /// Worst-case realization (global) or worst-case alpha_sr (local, in alpha_sr).
  std::optional<ChannelExponents> witness;
};

/// Global schedule: min of s over {alpha : equalized_cut(alpha) <= r}.
/// Valid on 0 <= r <= r*.
ScheduleResult d_global_numeric(double r, const NetworkParams& params,
                                const OptimizerConfig& cfg = {});

/// Blind schedule: max over f of min_s_over_outage(r, f).
ScheduleResult d_blind_numeric(double r, const NetworkParams& params,
                               const OptimizerConfig& cfg = {});

/// Listen fraction maximizing the inner (alpha1, alpha2) minimum for a known
/// alpha_sr, together with the achieved exponent.
struct LocalChoice {
  double f = 0.0;
  double d = 0.0;
};
LocalChoice local_schedule_for(double r, double alpha_sr, const NetworkParams& params,
                               const OptimizerConfig& cfg = {});

/// Local schedule: min over alpha_sr of max over f of the inner minimum.
ScheduleResult d_local_numeric(double r, const NetworkParams& params,
                               const OptimizerConfig& cfg = {});

/// Tradeoff curve on r = 0, r_step, 2 r_step, ... until d reaches zero.
TradeoffCurve compute_curve(Strategy strategy, const NetworkParams& params, double r_step,
                            const OptimizerConfig& cfg = {});

}  // namespace dmt

#include "dmt/optimizers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dmt/golden.hpp"
#include "dmt/polytope.hpp"

namespace dmt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroExponent = 1e-6;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void check_rate(double r, double upper) {
  if (!(r >= 0.0)) throw DomainError("multiplexing gain r must be >= 0, got " + num(r));
  if (!(r <= upper + kExponentTol))
    throw DomainError("multiplexing gain r must be <= " + num(upper) + ", got " + num(r));
}

// s on the support box, without validation
double s_raw(double eta, double a1, double a2, double asr) {
  if (a1 + a2 <= 1.0) return eta + 4.0 - 3.0 * a1 - 2.0 * a2 - asr;
  return eta + 3.0 - 2.0 * a1 - a2 - asr;
}

bool outage_raw(double f, double r, double a1, double a2, double asr) {
  const double gap = asr > a1 ? asr - a1 : 0.0;
  const double i_cs = a1 + f * gap;
  const double i_cd = a1 + (1.0 - f) * a2;
  return std::min(i_cs, i_cd) <= r + kExponentTol;
}

double equalized_raw(double a1, double a2, double asr) {
  const double gap = asr > a1 ? asr - a1 : 0.0;
  const double denom = gap + a2;
  return denom > 0.0 ? a1 + a2 * gap / denom : a1;
}

ChannelExponents clamp_to_support(ChannelExponents a, double eta) {
  a.alpha1 = std::clamp(a.alpha1, 0.0, 1.0);
  a.alpha2 = std::clamp(a.alpha2, 0.0, 1.0);
  a.alpha_sr = std::clamp(a.alpha_sr, 0.0, eta);
  return a;
}

OutageMinimum finish(ChannelExponents witness, const NetworkParams& params) {
  witness = clamp_to_support(witness, params.eta());
  return {s_exponent(witness, params), witness};
}

// Outage region split into polytopes by (objective branch, violated cut,
// sign of alpha_sr - alpha1). Each piece has a linear objective.
struct OutagePiece {
  std::vector<poly::HalfSpace<3>> planes;
  poly::LinearObjective<3> objective;
};

std::vector<OutagePiece> outage_pieces(double r, double f, double eta, double sr_lo, double sr_hi) {
  using H = poly::HalfSpace<3>;
  const std::vector<H> box{{{-1, 0, 0}, 0.0}, {{1, 0, 0}, 1.0},     {{0, -1, 0}, 0.0},
                           {{0, 1, 0}, 1.0},  {{0, 0, -1}, -sr_lo}, {{0, 0, 1}, sr_hi}};
  std::vector<OutagePiece> pieces;
  pieces.reserve(8);
  for (int low_branch = 1; low_branch >= 0; --low_branch) {
    for (int cs_cut = 1; cs_cut >= 0; --cs_cut) {
      for (int sr_above = 1; sr_above >= 0; --sr_above) {
        OutagePiece p;
        p.planes = box;
        if (low_branch) {
          p.planes.push_back({{1, 1, 0}, 1.0});
          p.objective = {{-3, -2, -1}, eta + 4.0};
        } else {
          p.planes.push_back({{-1, -1, 0}, -1.0});
          p.objective = {{-2, -1, -1}, eta + 3.0};
        }
        if (sr_above)
          p.planes.push_back({{1, 0, -1}, 0.0});
        else
          p.planes.push_back({{-1, 0, 1}, 0.0});
        if (cs_cut)
          p.planes.push_back(sr_above ? H{{1.0 - f, 0.0, f}, r} : H{{1, 0, 0}, r});
        else
          p.planes.push_back({{1.0, 1.0 - f, 0.0}, r});
        pieces.push_back(std::move(p));
      }
    }
  }
  return pieces;
}

std::optional<poly::VertexMin<3>> exact_min_3d(double r, double f, double eta, double sr_lo,
                                               double sr_hi) {
  std::optional<poly::VertexMin<3>> best;
  for (const auto& piece : outage_pieces(r, f, eta, sr_lo, sr_hi)) {
    auto m = poly::minimize_on_polytope<3>(piece.planes, piece.objective);
    if (m) poly::keep_better(best, *m);
  }
  return best;
}

// Minimum of s over the i_cs <= r part and over the i_cd <= r part separately.
struct CutMinima {
  double cs = kInf;
  double cd = kInf;
};

CutMinima exact_cut_minima(double r, double f, double eta) {
  CutMinima out;
  const auto pieces = outage_pieces(r, f, eta, 0.0, eta);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    auto m = poly::minimize_on_polytope<3>(pieces[i].planes, pieces[i].objective);
    if (!m) continue;
    const bool cs_piece = (i / 2) % 2 == 0;  // ordering of outage_pieces
    double& slot = cs_piece ? out.cs : out.cd;
    slot = std::min(slot, m->value);
  }
  return out;
}

// alpha_sr pinned: project every piece onto (alpha1, alpha2).
std::optional<poly::VertexMin<2>> exact_min_2d(double r, double f, double eta, double sr) {
  std::optional<poly::VertexMin<2>> best;
  std::vector<poly::HalfSpace<2>> planes;
  for (const auto& piece : outage_pieces(r, f, eta, sr, sr)) {
    planes.clear();
    bool empty = false;
    for (const auto& h : piece.planes) {
      const double b = h.b - h.a[2] * sr;
      if (h.a[0] == 0.0 && h.a[1] == 0.0) {
        if (b < -poly::kFeasTol) empty = true;
        continue;
      }
      planes.push_back({{h.a[0], h.a[1]}, b});
    }
    if (empty) continue;
    poly::LinearObjective<2> obj{{piece.objective.c[0], piece.objective.c[1]},
                                 piece.objective.c0 + piece.objective.c[2] * sr};
    auto m = poly::minimize_on_polytope<2>(planes, obj);
    if (m) poly::keep_better(best, *m);
  }
  return best;
}

std::vector<double> grid_points(double lo, double hi, double step) {
  if (hi <= lo) return {lo};
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  std::vector<double> pts(n + 1);
  for (std::size_t i = 0; i <= n; ++i) pts[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
  return pts;
}

struct GridBest {
  double value = kInf;
  ChannelExponents at;
};

void scan_box(GridBest& best, double eta, double f, double r, const std::vector<double>& g1,
              const std::vector<double>& g2, const std::vector<double>& gsr) {
  for (double a1 : g1)
    for (double a2 : g2)
      for (double asr : gsr) {
        if (!outage_raw(f, r, a1, a2, asr)) continue;
        const double v = s_raw(eta, a1, a2, asr);
        if (v < best.value) best = {v, {a1, a2, asr}};
      }
}

OutageMinimum grid_min(double r, double f, const NetworkParams& params, double sr_lo, double sr_hi,
                       double step) {
  const double eta = params.eta();
  GridBest best;
  scan_box(best, eta, f, r, grid_points(0, 1, step), grid_points(0, 1, step),
           grid_points(sr_lo, sr_hi, step));
  if (best.value == kInf)
    throw SolverError("outage region is empty; alpha = 0 should always be in outage");
  // two rounds of local refinement around the incumbent
  double h = step;
  for (int round = 0; round < 2; ++round) {
    const ChannelExponents c = best.at;
    const double fine = h / 10.0;
    scan_box(best, eta, f, r, grid_points(std::max(0.0, c.alpha1 - h), std::min(1.0, c.alpha1 + h), fine),
             grid_points(std::max(0.0, c.alpha2 - h), std::min(1.0, c.alpha2 + h), fine),
             grid_points(std::max(sr_lo, c.alpha_sr - h), std::min(sr_hi, c.alpha_sr + h), fine));
    h = fine;
  }
  return finish(best.at, params);
}

double rate_upper_for_schedules() { return 2.0; }

}  // namespace

void OptimizerConfig::validate() const {
  if (!(f_grid_step > 0.0 && f_grid_step <= 1.0))
    throw DomainError("f_grid_step must lie in (0, 1], got " + num(f_grid_step));
  if (!(alpha_grid_step > 0.0 && alpha_grid_step <= 1.0))
    throw DomainError("alpha_grid_step must lie in (0, 1], got " + num(alpha_grid_step));
  if (refine_iters < 0) throw DomainError("refine_iters must be >= 0");
}

OutageMinimum min_s_over_outage(double r, const Schedule& sched, const NetworkParams& params,
                                const OptimizerConfig& cfg) {
  cfg.validate();
  if (!(r >= 0.0)) throw DomainError("multiplexing gain r must be >= 0, got " + num(r));
  const double eta = params.eta();
  if (cfg.mode == InnerMode::grid) return grid_min(r, sched.f(), params, 0.0, eta, cfg.alpha_grid_step);

  auto m = exact_min_3d(r, sched.f(), eta, 0.0, eta);
  if (!m) throw SolverError("outage region is empty; alpha = 0 should always be in outage");
  return finish({m->x[0], m->x[1], m->x[2]}, params);
}

OutageMinimum min_s_over_outage_fixed_sr(double r, const Schedule& sched, double alpha_sr,
                                         const NetworkParams& params, const OptimizerConfig& cfg) {
  cfg.validate();
  if (!(r >= 0.0)) throw DomainError("multiplexing gain r must be >= 0, got " + num(r));
  if (!(alpha_sr >= 0.0 && alpha_sr <= params.eta()))
    throw DomainError("alpha_sr must lie in [0, eta=" + num(params.eta()) + "], got " + num(alpha_sr));
  if (cfg.mode == InnerMode::grid)
    return grid_min(r, sched.f(), params, alpha_sr, alpha_sr, cfg.alpha_grid_step);

  auto m = exact_min_2d(r, sched.f(), params.eta(), alpha_sr);
  if (!m) throw SolverError("outage region is empty; alpha = 0 should always be in outage");
  return finish({m->x[0], m->x[1], alpha_sr}, params);
}

ScheduleResult d_global_numeric(double r, const NetworkParams& params, const OptimizerConfig& cfg) {
  cfg.validate();
  const double eta = params.eta();
  const double rmax = r_star(params);
  check_rate(r, rmax);

  // The equalized cut is non-decreasing in alpha1 while s is decreasing, so for
  // fixed (alpha2, alpha_sr) the best alpha1 sits on the active constraint.
  auto best_alpha1 = [r](double a2, double asr) -> std::optional<double> {
    if (equalized_raw(1.0, a2, asr) <= r + kExponentTol) return 1.0;
    if (equalized_raw(0.0, a2, asr) > r + kExponentTol) return std::nullopt;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60 && hi - lo > 1e-16; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (equalized_raw(mid, a2, asr) <= r + kExponentTol)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  };
  auto reduced = [&](double a2, double asr) {
    const auto a1 = best_alpha1(a2, asr);
    return a1 ? s_raw(eta, *a1, a2, asr) : kInf;
  };

  const double h = cfg.alpha_grid_step;
  double best_a2 = 0.0, best_sr = 0.0, best_v = kInf;
  for (double a2 : grid_points(0.0, 1.0, h))
    for (double asr : grid_points(0.0, eta, h)) {
      const double v = reduced(a2, asr);
      if (v < best_v) {
        best_v = v;
        best_a2 = a2;
        best_sr = asr;
      }
    }
  if (best_v == kInf) throw SolverError("no feasible realization for the global schedule");

  // coordinate golden-section sweeps along the active constraint
  for (int sweep = 0; sweep < 4 && cfg.refine_iters > 0; ++sweep) {
    const double lo2 = std::max(0.0, best_a2 - h), hi2 = std::min(1.0, best_a2 + h);
    auto m2 = golden_section_min([&](double a2) { return reduced(a2, best_sr); }, lo2, hi2,
                                 cfg.refine_iters);
    if (m2.value < best_v) {
      best_v = m2.value;
      best_a2 = m2.x;
    }
    const double lo_sr = std::max(0.0, best_sr - h), hi_sr = std::min(eta, best_sr + h);
    auto msr = golden_section_min([&](double asr) { return reduced(best_a2, asr); }, lo_sr, hi_sr,
                                  cfg.refine_iters);
    if (msr.value < best_v) {
      best_v = msr.value;
      best_sr = msr.x;
    }
  }

  const ChannelExponents witness =
      clamp_to_support({*best_alpha1(best_a2, best_sr), best_a2, best_sr}, eta);
  ScheduleResult res;
  res.strategy = Strategy::global;
  res.r = r;
  res.eta = eta;
  res.d_value = s_exponent(witness, params);
  res.f_opt = f_global(witness).f();
  res.witness = witness;
  return res;
}

namespace {

// Coarse grid over f in [0, 1] followed by golden-section refinement on the
// bracket around the best grid point.
template <typename Fn>
ScalarOptimum maximize_over_schedule(Fn&& value_at, const OptimizerConfig& cfg) {
  const std::vector<double> fs = grid_points(0.0, 1.0, cfg.f_grid_step);
  std::size_t best_i = 0;
  double best_v = -kInf;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const double v = value_at(fs[i]);
    if (v > best_v + kExponentTol) {
      best_v = v;
      best_i = i;
    }
  }
  ScalarOptimum best{fs[best_i], best_v};
  if (cfg.refine_iters > 0 && fs.size() > 1) {
    const double lo = fs[best_i == 0 ? 0 : best_i - 1];
    const double hi = fs[std::min(best_i + 1, fs.size() - 1)];
    const ScalarOptimum g = golden_section_max(value_at, lo, hi, cfg.refine_iters);
    if (g.value > best.value + kExponentTol) best = g;
  }
  return best;
}

}  // namespace

namespace {

// Lexicographic score of a blind schedule. The exponent d(r, f) comes first;
// schedules on a plateau of d are ranked by the larger cut-wise minimum and
// then by the same pair at a slightly lower rate.
struct BlindScore {
  std::array<double, 4> key{};

  bool better_than(const BlindScore& o) const {
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (key[i] > o.key[i] + kTieScore) return true;
      if (key[i] < o.key[i] - kTieScore) return false;
    }
    return false;
  }
  static constexpr double kTieScore = 1e-9;
};

constexpr double kRateBackoff = 1e-3;

}  // namespace

ScheduleResult d_blind_numeric(double r, const NetworkParams& params, const OptimizerConfig& cfg) {
  cfg.validate();
  check_rate(r, rate_upper_for_schedules());
  const double eta = params.eta();

  auto value = [&](double f) { return min_s_over_outage(r, Schedule(f), params, cfg).d; };
  auto score = [&](double f) {
    BlindScore sc;
    const CutMinima at = exact_cut_minima(r, f, eta);
    sc.key[0] = value(f);
    sc.key[1] = std::max(at.cs, at.cd);
    const double r_lo = std::max(0.0, r - kRateBackoff);
    const CutMinima below = exact_cut_minima(r_lo, f, eta);
    sc.key[2] = std::min(below.cs, below.cd);
    sc.key[3] = std::max(below.cs, below.cd);
    return sc;
  };

  const std::vector<double> fs = grid_points(0.0, 1.0, cfg.f_grid_step);
  std::vector<BlindScore> scores(fs.size());
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    scores[i] = score(fs[i]);
    if (scores[i].better_than(scores[best_i])) best_i = i;
  }
  double best_f = fs[best_i];
  BlindScore best = scores[best_i];

  if (cfg.refine_iters > 0 && fs.size() > 1) {
    const std::size_t lo_i = best_i == 0 ? 0 : best_i - 1;
    const std::size_t hi_i = std::min(best_i + 1, fs.size() - 1);
    const ScalarOptimum g = golden_section_max(value, fs[lo_i], fs[hi_i], cfg.refine_iters);
    if (g.value > best.key[0] + BlindScore::kTieScore) {
      // isolated peak of d
      best_f = g.x;
      best = score(g.x);
    } else {
      // plateau: bisect toward each worse grid neighbour for the edge of the
      // set of equally scored schedules
      for (std::size_t side : {lo_i, hi_i}) {
        if (side == best_i || !best.better_than(scores[side])) continue;
        double in = best_f, out = fs[side];
        BlindScore in_score = best;
        for (int it = 0; it < cfg.refine_iters; ++it) {
          const double mid = 0.5 * (in + out);
          const BlindScore ms = score(mid);
          if (!best.better_than(ms)) {
            in = mid;
            in_score = ms;
          } else {
            out = mid;
          }
        }
        // equal scores resolve to the smaller f
        if (in_score.better_than(best) || (!best.better_than(in_score) && in < best_f)) {
          best = in_score;
          best_f = in;
        }
      }
    }
  }

  ScheduleResult res;
  res.strategy = Strategy::blind;
  res.r = r;
  res.eta = eta;
  res.f_opt = best_f;
  const OutageMinimum at = min_s_over_outage(r, Schedule(best_f), params, cfg);
  res.d_value = at.d;
  res.witness = at.argmin;
  return res;
}

LocalChoice local_schedule_for(double r, double alpha_sr, const NetworkParams& params,
                               const OptimizerConfig& cfg) {
  cfg.validate();
  check_rate(r, rate_upper_for_schedules());
  auto inner = [&](double f) {
    return min_s_over_outage_fixed_sr(r, Schedule(f), alpha_sr, params, cfg).d;
  };
  const ScalarOptimum best = maximize_over_schedule(inner, cfg);
  return {best.x, best.value};
}

ScheduleResult d_local_numeric(double r, const NetworkParams& params, const OptimizerConfig& cfg) {
  cfg.validate();
  check_rate(r, rate_upper_for_schedules());
  const double eta = params.eta();
  const std::vector<double> srs = grid_points(0.0, eta, cfg.alpha_grid_step);

  std::size_t worst_i = 0;
  LocalChoice worst{0.0, kInf};
  for (std::size_t i = 0; i < srs.size(); ++i) {
    const LocalChoice c = local_schedule_for(r, srs[i], params, cfg);
    if (c.d < worst.d - kExponentTol) {
      worst = c;
      worst_i = i;
    }
  }
  double worst_sr = srs[worst_i];
  if (cfg.refine_iters > 0 && srs.size() > 1) {
    const double lo = srs[worst_i == 0 ? 0 : worst_i - 1];
    const double hi = srs[std::min(worst_i + 1, srs.size() - 1)];
    const ScalarOptimum g = golden_section_min(
        [&](double asr) { return local_schedule_for(r, asr, params, cfg).d; }, lo, hi,
        std::min(cfg.refine_iters, 20));
    if (g.value < worst.d - kExponentTol) {
      worst_sr = g.x;
      worst = local_schedule_for(r, g.x, params, cfg);
    }
  }

  ScheduleResult res;
  res.strategy = Strategy::local;
  res.r = r;
  res.eta = eta;
  res.f_opt = worst.f;
  res.d_value = worst.d;
  res.witness = ChannelExponents{0.0, 0.0, worst_sr};
  return res;
}

TradeoffCurve compute_curve(Strategy strategy, const NetworkParams& params, double r_step,
                            const OptimizerConfig& cfg) {
  if (!(r_step > 0.0)) throw DomainError("r_step must be > 0, got " + num(r_step));
  cfg.validate();
  TradeoffCurve curve;
  curve.eta = params.eta();
  curve.strategy = strategy;
  curve.r_step = r_step;

  const double upper = strategy == Strategy::mimo2x2 ? 2.0 : r_star(params);
  auto evaluate = [&](double r) -> double {
    switch (strategy) {
      case Strategy::global: return d_global_numeric(r, params, cfg).d_value;
      case Strategy::blind: return d_blind_numeric(r, params, cfg).d_value;
      case Strategy::local: return d_local_numeric(r, params, cfg).d_value;
      case Strategy::mimo2x2: return d_mimo_2x2(r);
    }
    return 0.0;
  };

  bool reached_zero = false;
  for (std::size_t k = 0;; ++k) {
    double r = static_cast<double>(k) * r_step;
    if (r > upper + 1e-9) break;
    r = std::min(r, upper);
    const double d = evaluate(r);
    if (d < kZeroExponent) {
      curve.points.push_back({r, 0.0});
      reached_zero = true;
      break;
    }
    curve.points.push_back({r, d});
  }
  if (!reached_zero) curve.points.push_back({upper, 0.0});
  return curve;
}

}  // namespace dmt

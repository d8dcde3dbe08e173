#include "dmt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

#include "dmt/closed_form.hpp"
#include "dmt/philox.hpp"

namespace dmt {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLn10 = std::numbers::ln10;

// Samples are processed in fixed blocks; per-block partial sums are reduced
// in block order so results do not depend on the worker count.
constexpr std::uint64_t kBlock = 4096;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

cplx gain_from_block(const Philox4x32::Counter& out, double variance) {
  const double u1 = 1.0 - to_unit_interval(out[0], out[1]);  // (0, 1]
  const double u2 = to_unit_interval(out[2], out[3]);
  const double mag = std::sqrt(-variance * std::log(u1));
  const double phase = 2.0 * std::numbers::pi * u2;
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

double norm_sq(const std::array<cplx, 2>& v) { return std::norm(v[0]) + std::norm(v[1]); }

// log(exp(a) + exp(b)) tolerant of -inf
double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

// ln(1 + exp(x))
double log1p_exp(double x) { return log_add(0.0, x); }

double safe_log(double x) { return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

double log_rho_checked(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be positive and finite, got " + num(rho));
  return std::log(rho);
}

// Runs fn(block_index, begin, end) over [0, n) in kBlock chunks on `workers`
// threads. Blocks are dealt round-robin so each thread touches disjoint slots.
void for_each_block(std::uint64_t n, int workers, const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& fn) {
  const std::size_t blocks = static_cast<std::size_t>((n + kBlock - 1) / kBlock);
  auto run = [&](std::size_t first) {
    for (std::size_t b = first; b < blocks; b += static_cast<std::size_t>(workers))
      fn(b, b * kBlock, std::min<std::uint64_t>(n, (b + 1) * kBlock));
  };
  if (workers <= 1 || blocks <= 1) {
    run(0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(run, static_cast<std::size_t>(w));
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

ChannelDraw draw_channel(std::uint64_t seed, std::uint32_t stream, std::uint64_t index,
                         const DrawScales& scales) {
  const Philox4x32 gen(seed);
  const auto lo = static_cast<std::uint32_t>(index);
  const auto hi = static_cast<std::uint32_t>(index >> 32);
  auto gain = [&](std::uint32_t slot, double variance) {
    return gain_from_block(gen({lo, hi, stream, slot}), variance);
  };
  ChannelDraw d;
  d.h_sr = gain(0, scales.h_sr);
  d.h_s = {gain(1, scales.h_s), gain(2, scales.h_s)};
  d.h_r = {gain(3, scales.h_r), gain(4, scales.h_r)};
  return d;
}

double log_likelihood_ratio(const ChannelDraw& d, const DrawScales& s) {
  // CN(0,1) density over CN(0,v) density at h: v exp(-|h|^2 (1 - 1/v))
  auto term = [](cplx h, double v) {
    return v == 1.0 ? 0.0 : std::log(v) - std::norm(h) * (1.0 - 1.0 / v);
  };
  return term(d.h_sr, s.h_sr) + term(d.h_s[0], s.h_s) + term(d.h_s[1], s.h_s) +
         term(d.h_r[0], s.h_r) + term(d.h_r[1], s.h_r);
}

ParallelGains sic_decompose(const ChannelDraw& d, double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be > 0, got " + num(rho));
  const double g1 = norm_sq(d.h_s);
  double parallel = 0.0;
  double perpendicular = norm_sq(d.h_r);
  if (g1 > 0.0) {
    // projection coefficient of h_r on h_s: <h_s, h_r> / ||h_s||^2
    const cplx ip = std::conj(d.h_s[0]) * d.h_r[0] + std::conj(d.h_s[1]) * d.h_r[1];
    const cplx c = ip / g1;
    const std::array<cplx, 2> perp{d.h_r[0] - c * d.h_s[0], d.h_r[1] - c * d.h_s[1]};
    parallel = std::norm(ip) / g1;
    perpendicular = norm_sq(perp);
  }
  return {g1, perpendicular + parallel / (1.0 + rho * g1)};
}

namespace {

// Per-phase log capacities in nats: listen-phase cut across {S}, direct link,
// second SIC stream.
struct PhaseLogs {
  double listen = 0.0;
  double direct = 0.0;
  double second = 0.0;
};

PhaseLogs phase_logs(const ChannelDraw& d, double rho, double eta, CutForm form) {
  const double ln_rho = log_rho_checked(rho);
  const ParallelGains g = sic_decompose(d, rho);
  const double sr_term = eta * ln_rho + safe_log(std::norm(d.h_sr));
  const double s_term = ln_rho + safe_log(g.g1_sq);
  PhaseLogs p;
  p.direct = log1p_exp(s_term);
  p.second = log1p_exp(ln_rho + safe_log(g.g2_sq));
  p.listen = form == CutForm::exact ? log1p_exp(log_add(sr_term, s_term)) : std::max(log1p_exp(sr_term), p.direct);
  return p;
}

// Both cuts are linear in f; this is the f where they meet, i.e. the per-draw
// maximizer of the min-cut.
double equalizing_schedule(const PhaseLogs& p) {
  return std::clamp(detail::equalizing_fraction(p.direct, p.second, p.listen), 0.0, 1.0);
}

}  // namespace

CutInfo cut_mutual_info(const ChannelDraw& d, double rho, double eta, double f, CutForm form) {
  const PhaseLogs p = phase_logs(d, rho, eta, form);
  return {(f * p.listen + (1.0 - f) * p.direct) / kLn2, (p.direct + (1.0 - f) * p.second) / kLn2};
}

ChannelExponents realized_exponents(const ChannelDraw& d, double rho, double eta) {
  const double ln_rho = log_rho_checked(rho);
  if (!(ln_rho > 0.0)) throw DomainError("realized exponents need rho > 1, got " + num(rho));
  const ParallelGains g = sic_decompose(d, rho);
  return {log1p_exp(ln_rho + safe_log(g.g1_sq)) / ln_rho,
          log1p_exp(ln_rho + safe_log(g.g2_sq)) / ln_rho,
          log1p_exp(eta * ln_rho + safe_log(std::norm(d.h_sr))) / ln_rho};
}

std::string describe(const ScheduleRule& rule) {
  struct Visitor {
    std::string operator()(const FixedRule& r) const { return "fixed:" + num(r.f); }
    std::string operator()(const GlobalRule&) const { return "global"; }
    std::string operator()(const LocalRule&) const { return "local"; }
    std::string operator()(const BlindRule& r) const { return r.f ? "blind:" + num(*r.f) : "blind"; }
  };
  return std::visit(Visitor{}, rule);
}

void McConfig::validate() const {
  (void)NetworkParams(eta);
  if (!(r >= 0.0)) throw DomainError("multiplexing gain r must be >= 0, got " + num(r));
  if (samples_per_point < 1) throw DomainError("samples_per_point must be >= 1");
  if (workers < 1) throw DomainError("workers must be >= 1");
  if (snr_db_list.empty()) throw DomainError("snr_db_list must not be empty");
  for (std::size_t i = 1; i < snr_db_list.size(); ++i)
    if (!(snr_db_list[i] > snr_db_list[i - 1])) throw DomainError("snr_db_list must be strictly increasing");
  const bool needs_exponents = std::holds_alternative<GlobalRule>(rule) || std::holds_alternative<LocalRule>(rule);
  if (needs_exponents && !(snr_db_list.front() > 0.0))
    throw DomainError("global and local rules need SNR > 0 dB to form realized exponents");
  if (const auto* fr = std::get_if<FixedRule>(&rule)) (void)Schedule(fr->f);
  if (const auto* br = std::get_if<BlindRule>(&rule); br && br->f) (void)Schedule(*br->f);
}

OutageEstimate make_estimate(double snr_db, std::uint64_t n_samples, std::uint64_t n_outages) {
  OutageEstimate e;
  e.snr_db = snr_db;
  e.n_samples = n_samples;
  e.n_outages = n_outages;
  e.p_out = n_samples ? static_cast<double>(n_outages) / static_cast<double>(n_samples) : 0.0;
  e.ci95_halfwidth = n_samples ? 1.96 * std::sqrt(e.p_out * (1.0 - e.p_out) / static_cast<double>(n_samples)) : 0.0;
  return e;
}

std::vector<OutageEstimate> estimate_outage(const McConfig& cfg) {
  cfg.validate();
  const NetworkParams params(cfg.eta);

  // Resolve the schedule rule to a per-draw function of the realized exponents.
  double fixed_f = 1.0 / 3.0;
  std::vector<double> local_table;  // f over the alpha_sr grid
  std::vector<double> local_grid;
  enum class Mode { constant, global, local } mode = Mode::constant;
  if (const auto* fr = std::get_if<FixedRule>(&cfg.rule)) {
    fixed_f = fr->f;
  } else if (const auto* br = std::get_if<BlindRule>(&cfg.rule)) {
    fixed_f = br->f ? *br->f : d_blind_numeric(std::min(cfg.r, 2.0), params, cfg.optimizer).f_opt;
  } else if (std::holds_alternative<GlobalRule>(cfg.rule)) {
    mode = Mode::global;
  } else {
    mode = Mode::local;
    // On alpha_sr values where every f ties asymptotically, fall back to the
    // blind schedule instead of the solver's smallest-f tie-break.
    const double r_eff = std::min(cfg.r, 2.0);
    const double f_blind = d_blind_numeric(r_eff, params, cfg.optimizer).f_opt;
    const double step = cfg.optimizer.alpha_grid_step;
    const auto n = static_cast<std::size_t>(std::ceil(cfg.eta / step - 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
      const double a = cfg.eta * static_cast<double>(i) / static_cast<double>(n);
      local_grid.push_back(a);
      const LocalChoice best = local_schedule_for(r_eff, a, params, cfg.optimizer);
      const double at_blind = min_s_over_outage_fixed_sr(r_eff, Schedule(f_blind), a, params, cfg.optimizer).d;
      local_table.push_back(at_blind >= best.d - 1e-9 ? f_blind : best.f);
    }
  }

  std::vector<OutageEstimate> out;
  out.reserve(cfg.snr_db_list.size());
  for (std::size_t k = 0; k < cfg.snr_db_list.size(); ++k) {
    const double snr_db = cfg.snr_db_list[k];
    const double rho = db_to_linear(snr_db);
    const double ln_rho = std::log(rho);
    const double target_bits = cfg.r * ln_rho / kLn2;

    auto schedule_for = [&](const ChannelDraw& d) -> double {
      switch (mode) {
        case Mode::constant: return fixed_f;
        case Mode::global: return equalizing_schedule(phase_logs(d, rho, cfg.eta, cfg.cut_form));
        case Mode::local: {
          const double a_sr = std::clamp(realized_exponents(d, rho, cfg.eta).alpha_sr, 0.0, cfg.eta);
          const double pos = a_sr / cfg.eta * static_cast<double>(local_grid.size() - 1);
          return local_table[static_cast<std::size_t>(std::lround(pos))];
        }
      }
      return fixed_f;
    };

    const std::size_t blocks = static_cast<std::size_t>((cfg.samples_per_point + kBlock - 1) / kBlock);
    std::vector<std::uint64_t> counts(blocks, 0);
    for_each_block(cfg.samples_per_point, cfg.workers, [&](std::size_t b, std::uint64_t begin, std::uint64_t end) {
      std::uint64_t c = 0;
      for (std::uint64_t i = begin; i < end; ++i) {
        const ChannelDraw d = draw_channel(cfg.seed, static_cast<std::uint32_t>(k), i);
        const CutInfo ci = cut_mutual_info(d, rho, cfg.eta, schedule_for(d), cfg.cut_form);
        if (std::min(ci.i_cs_bits, ci.i_cd_bits) <= target_bits) ++c;
      }
      counts[b] = c;
    });
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    out.push_back(make_estimate(snr_db, cfg.samples_per_point, total));
  }
  return out;
}

LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& y_var) {
  if (x.size() != y.size() || x.size() != y_var.size())
    throw DomainError("weighted_line_fit: mismatched input lengths");
  if (x.size() < 2) throw InsufficientData("weighted_line_fit needs at least two points");
  double sw = 0, swx = 0, swy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y_var[i] > 0.0)) throw DomainError("weighted_line_fit: variances must be positive");
    const double w = 1.0 / y_var[i];
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
  }
  const double xm = swx / sw, ym = swy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / y_var[i];
    sxx += w * (x[i] - xm) * (x[i] - xm);
    sxy += w * (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) throw InsufficientData("weighted_line_fit: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  fit.slope_stderr = std::sqrt(1.0 / sxx);
  return fit;
}

SlopeFit fit_slope(const std::vector<OutageEstimate>& estimates) {
  SlopeFit res;
  std::vector<double> x, y, var;
  for (const auto& e : estimates) {
    if (!(e.p_out > 0.0) || e.n_samples == 0) {
      res.excluded_snr_db.push_back(e.snr_db);
      continue;
    }
    const double n = static_cast<double>(e.n_samples);
    // delta method: var(ln p_hat) = (1 - p) / (n p)
    const double q = std::max(1.0 - e.p_out, 1.0 / n);
    x.push_back(e.snr_db / 10.0);
    y.push_back(std::log10(e.p_out));
    var.push_back(q / (n * e.p_out) / (kLn10 * kLn10));
  }
  if (x.size() < 3)
    throw InsufficientData("slope fit needs at least 3 SNR points with outages, got " + std::to_string(x.size()));
  const LineFit fit = weighted_line_fit(x, y, var);
  res.d_hat = -fit.slope;
  res.slope_stderr = fit.slope_stderr;
  res.n_used = x.size();
  return res;
}

double TailProbe::anchor_slope(double eta) const {
  switch (kind) {
    case TailKind::alpha1_marginal: return 2.0 * (1.0 - a1);
    case TailKind::alpha_sr_marginal: return eta - a_sr;
    case TailKind::joint_alpha12:
      return a1 + a2 <= 1.0 ? 4.0 - 3.0 * a1 - 2.0 * a2 : 3.0 - 2.0 * a1 - a2;
  }
  return 0.0;
}

std::string TailProbe::label() const {
  switch (kind) {
    case TailKind::alpha1_marginal: return "P[alpha1<=" + num(a1) + "]";
    case TailKind::alpha_sr_marginal: return "P[alpha_sr<=" + num(a_sr) + "]";
    case TailKind::joint_alpha12: return "P[alpha1<=" + num(a1) + ",alpha2<=" + num(a2) + "]";
  }
  return "?";
}

TailReport validate_tail_exponents(const TailConfig& cfg) {
  (void)NetworkParams(cfg.eta);
  if (cfg.samples < 1) throw DomainError("samples must be >= 1");
  if (cfg.workers < 1) throw DomainError("workers must be >= 1");
  for (double db : cfg.snr_db_list)
    if (!(db > 0.0)) throw DomainError("tail validation needs SNR > 0 dB");

  TailReport report;
  for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
    const TailProbe& probe = cfg.probes[p];
    TailProbeResult res;
    res.probe = probe;
    res.anchor = probe.anchor_slope(cfg.eta);

    for (std::size_t k = 0; k < cfg.snr_db_list.size(); ++k) {
      const double rho = db_to_linear(cfg.snr_db_list[k]);
      const double ln_rho = std::log(rho);
      // alpha_hat <= a  <=>  gain^2 <= (rho^a - 1) / rho^scale
      const double x1 = std::expm1(probe.a1 * ln_rho) / rho;
      const double x2 = std::expm1(probe.a2 * ln_rho) / rho;
      const double xsr = std::expm1(probe.a_sr * ln_rho) * std::exp(-cfg.eta * ln_rho);

      DrawScales scales;
      auto tilt = [&](double threshold) {
        return cfg.importance_sampling ? std::min(1.0, 3.0 * threshold) : 1.0;
      };
      switch (probe.kind) {
        case TailKind::alpha1_marginal: scales.h_s = tilt(x1); break;
        case TailKind::alpha_sr_marginal: scales.h_sr = tilt(xsr); break;
        case TailKind::joint_alpha12:
          scales.h_s = tilt(x1);
          scales.h_r = tilt(x2);
          break;
      }

      const auto stream = static_cast<std::uint32_t>(1000 * (p + 1) + k);
      const std::size_t blocks = static_cast<std::size_t>((cfg.samples + kBlock - 1) / kBlock);
      struct Partial {
        double s1 = 0.0, s2 = 0.0;
        std::uint64_t hits = 0;
      };
      std::vector<Partial> partial(blocks);
      for_each_block(cfg.samples, cfg.workers, [&](std::size_t b, std::uint64_t begin, std::uint64_t end) {
        Partial acc;
        for (std::uint64_t i = begin; i < end; ++i) {
          const ChannelDraw d = draw_channel(cfg.seed, stream, i, scales);
          bool hit = false;
          switch (probe.kind) {
            case TailKind::alpha1_marginal: hit = norm_sq(d.h_s) <= x1; break;
            case TailKind::alpha_sr_marginal: hit = std::norm(d.h_sr) <= xsr; break;
            case TailKind::joint_alpha12: {
              const ParallelGains g = sic_decompose(d, rho);
              hit = g.g1_sq <= x1 && g.g2_sq <= x2;
              break;
            }
          }
          if (!hit) continue;
          const double w = std::exp(log_likelihood_ratio(d, scales));
          acc.s1 += w;
          acc.s2 += w * w;
          ++acc.hits;
        }
        partial[b] = acc;
      });
      Partial tot;
      for (const auto& q : partial) {
        tot.s1 += q.s1;
        tot.s2 += q.s2;
        tot.hits += q.hits;
      }
      const double n = static_cast<double>(cfg.samples);
      TailPoint pt;
      pt.snr_db = cfg.snr_db_list[k];
      pt.p_hat = tot.s1 / n;
      pt.p_var = std::max(0.0, tot.s2 / n - pt.p_hat * pt.p_hat) / n;
      pt.hits = tot.hits;
      res.points.push_back(pt);
    }

    std::vector<double> x, y, var;
    for (const auto& pt : res.points) {
      if (pt.hits < 2 || !(pt.p_hat > 0.0)) continue;
      const double rel_var = std::max(pt.p_var / (pt.p_hat * pt.p_hat), 1e-12);
      x.push_back(pt.snr_db / 10.0);
      y.push_back(std::log10(pt.p_hat));
      var.push_back(rel_var / (kLn10 * kLn10));
    }
    if (x.size() >= 3) {
      const LineFit fit = weighted_line_fit(x, y, var);
      res.usable = true;
      res.slope = -fit.slope;
      res.slope_stderr = fit.slope_stderr;
    }
    report.probes.push_back(res);
  }
  return report;
}

}  // namespace dmt

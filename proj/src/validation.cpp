#include "dmt/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dmt/closed_form.hpp"
#include "dmt/io.hpp"
#include "dmt/montecarlo.hpp"
#include "dmt/optimizers.hpp"

namespace dmt::validation {

namespace {

using io::format_number;

class Suite {
public:
  Suite(const std::function<void(const CheckResult&)>& cb) : cb_(cb) {}

  void record(std::string name, bool pass, std::string measured) {
    results_.push_back({std::move(name), pass, std::move(measured)});
    if (cb_) cb_(results_.back());
  }

  // Runs fn; any exception becomes a FAIL with its message.
  template <class Fn>
  void check(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      record(name, false, std::string("exception: ") + e.what());
    }
  }

  std::vector<CheckResult> take() { return std::move(results_); }

private:
  std::function<void(const CheckResult&)> cb_;
  std::vector<CheckResult> results_;
};

std::vector<double> r_grid(double upper, double step) {
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double r = k * step;
    if (r > upper + 1e-9) break;
    out.push_back(std::min(r, upper));
  }
  if (out.back() < upper - 1e-9) out.push_back(upper);
  return out;
}

// log2 det(I + rho H H^H) with H = [h_s h_r], via det(I + rho H^H H).
double logdet_direct(const ChannelDraw& d, double rho) {
  const double a = std::norm(d.h_s[0]) + std::norm(d.h_s[1]);
  const double b = std::norm(d.h_r[0]) + std::norm(d.h_r[1]);
  const cplx c = std::conj(d.h_s[0]) * d.h_r[0] + std::conj(d.h_s[1]) * d.h_r[1];
  return std::log2((1.0 + rho * a) * (1.0 + rho * b) - rho * rho * std::norm(c));
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

void closed_form_checks(Suite& s) {
  s.check("r_star anchors", [&] {
    const double a = r_star(NetworkParams(1.0)), b = r_star(NetworkParams(2.0));
    s.record("r_star anchors", a == 1.0 && b == 1.5, "r*(1)=" + format_number(a) + " r*(2)=" + format_number(b));
  });

  s.check("d_closed anchors", [&] {
    const NetworkParams p2(2.0);
    const double a = d_closed(0.5, p2), b = d_closed(1.25, p2);
    double worst_edge = 0.0;
    for (double eta : {1.0, 1.5, 2.0, 3.0, 4.0, 100.0}) {
      const NetworkParams p(eta);
      worst_edge = std::max(worst_edge, std::abs(d_closed(r_star(p), p)));
    }
    const bool ok = std::abs(a - 2.5) <= 1e-12 && std::abs(b - 2.0 / 3.0) <= 1e-12 && worst_edge == 0.0;
    s.record("d_closed anchors", ok,
             "d(0.5,2)=" + format_number(a) + " d(1.25,2)=" + format_number(b) + " max|d(r*)|=" + format_number(worst_edge));
  });

  s.check("s_exponent continuity and corners", [&] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double jump = 0.0;
    for (int i = 0; i < 500; ++i) {
      const NetworkParams p(1.0 + 3.0 * u(rng));
      const double a1 = u(rng), asr = p.eta() * u(rng);
      const double a2 = 1.0 - a1;
      const double eps = 1e-9;
      const double lo = s_exponent({a1, std::max(0.0, a2 - eps), asr}, p);
      const double hi = s_exponent({a1, std::min(1.0, a2 + eps), asr}, p);
      jump = std::max(jump, std::abs(hi - lo));
    }
    const NetworkParams p(2.0);
    const double c0 = s_exponent({0, 0, 0}, p), c1 = s_exponent({1, 1, 2}, p), c2 = s_exponent({1, 0, 0}, p);
    const bool ok = jump <= 1e-7 && c0 == 6.0 && c1 == 0.0 && c2 == 3.0;
    s.record("s_exponent continuity and corners", ok,
             "max jump=" + format_number(jump) + " s(0,0,0)=" + format_number(c0) + " s(1,1,eta)=" + format_number(c1) +
                 " s(1,0,0)=" + format_number(c2) + " (eta=2; expect 6, 0, 3)");
  });

  s.check("d_closed continuity at r=1", [&] {
    double jump = 0.0;
    for (double eta : {1.25, 1.5, 2.0, 3.0, 4.0, 10.0}) {
      const NetworkParams p(eta);
      jump = std::max(jump, std::abs(d_closed(1.0 - 1e-9, p) - d_closed(1.0 + 1e-9, p)));
    }
    s.record("d_closed continuity at r=1", jump <= 1e-7, "max jump=" + format_number(jump));
  });

  s.check("large-eta limit matches 2x2 MIMO", [&] {
    const NetworkParams p(100.0);
    double err = 0.0;
    for (double r : r_grid(r_star(p), 0.01)) err = std::max(err, std::abs(d_closed(r, p) - d_mimo_2x2(r)));
    s.record("large-eta limit matches 2x2 MIMO", err <= 0.02, "eta=100 max err=" + format_number(err));
  });
}

void optimizer_checks(Suite& s) {
  s.check("exact_lp vs grid oracle", [&] {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    OptimizerConfig grid;
    grid.mode = InnerMode::grid;
    grid.alpha_grid_step = 0.005;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const NetworkParams p(1.0 + 3.0 * u(rng));
      const double r = 2.0 * u(rng);
      const Schedule f(u(rng));
      const double a = min_s_over_outage(r, f, p).d;
      const double b = min_s_over_outage(r, f, p, grid).d;
      worst = std::max(worst, std::abs(a - b));
    }
    s.record("exact_lp vs grid oracle", worst <= 0.05, "20 triples, max diff=" + format_number(worst));
  });

  s.check("witness consistency", [&] {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    bool all_out = true;
    for (int i = 0; i < 200; ++i) {
      const NetworkParams p(1.0 + 3.0 * u(rng));
      const double r = 2.0 * u(rng);
      const Schedule f(u(rng));
      const OutageMinimum m = min_s_over_outage(r, f, p);
      all_out = all_out && in_outage(m.argmin, f, r);
      worst = std::max(worst, std::abs(s_exponent(m.argmin, p) - m.d));
    }
    s.record("witness consistency", all_out && worst <= 1e-9,
             std::string(all_out ? "all witnesses in outage" : "witness outside outage") +
                 ", max |s(argmin)-d|=" + format_number(worst));
  });

  for (double eta : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    const std::string name = "global numeric vs closed form eta=" + format_number(eta);
    s.check(name, [&] {
      const NetworkParams p(eta);
      double worst = 0.0, at = 0.0;
      for (double r : r_grid(r_star(p), 0.05)) {
        const double e = std::abs(d_global_numeric(r, p).d_value - d_closed(r, p));
        if (e > worst) {
          worst = e;
          at = r;
        }
      }
      s.record(name, worst <= 0.02, "max err=" + format_number(worst) + " at r=" + format_number(at));
    });
  }

  s.check("blind schedule low-rate region", [&] {
    double d_err = 0.0, f_err = 0.0;
    for (double eta : {1.0, 2.0, 4.0})
      for (double r : {0.25, 0.5, 0.75}) {
        const NetworkParams p(eta);
        const ScheduleResult b = d_blind_numeric(r, p);
        d_err = std::max(d_err, std::abs(b.d_value - d_blind_closed(r, p)));
        f_err = std::max(f_err, std::abs(b.f_opt - 1.0 / 3.0));
      }
    s.record("blind schedule low-rate region", d_err <= 0.02 && f_err <= 0.01,
             "max |d-(min{eta+2,4}-3r)|=" + format_number(d_err) + " max |f-1/3|=" + format_number(f_err));
  });

  s.check("strategy ordering", [&] {
    double worst = -1e9;
    for (double eta : {2.0, 4.0})
      for (double r : {0.5, 1.1, 1.3}) {
        const NetworkParams p(eta);
        const double b = d_blind_numeric(r, p).d_value;
        const double l = d_local_numeric(r, p).d_value;
        const double g = d_global_numeric(r, p).d_value;
        worst = std::max({worst, b - (l + 0.02), (l + 0.02) - (g + 0.04)});
      }
    s.record("strategy ordering", worst <= 0.0, "max violation of blind<=local+0.02<=global+0.04: " + format_number(worst));
  });

  s.check("curves non-negative and non-increasing", [&] {
    bool ok = true;
    for (double eta : {1.0, 2.0, 4.0}) {
      const TradeoffCurve c = compute_curve(Strategy::global, NetworkParams(eta), 0.05);
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        ok = ok && c.points[i].d >= 0.0;
        if (i) ok = ok && c.points[i].d <= c.points[i - 1].d + 1e-12;
      }
    }
    s.record("curves non-negative and non-increasing", ok, ok ? "global curves eta=1,2,4" : "violation found");
  });
}

void montecarlo_checks(Suite& s, const SuiteOptions& opts) {
  s.check("log-det identity", [&] {
    double worst = 0.0;
    for (double rho : {1.0, 1e2, 1e4})
      for (std::uint64_t i = 0; i < 100000; ++i) {
        const ChannelDraw d = draw_channel(5, 0, i);
        const ParallelGains g = sic_decompose(d, rho);
        const double sum = std::log2(1.0 + rho * g.g1_sq) + std::log2(1.0 + rho * g.g2_sq);
        worst = std::max(worst, std::abs(sum - logdet_direct(d, rho)));
      }
    s.record("log-det identity", worst <= 1e-9, "3x10^5 draws, max |diff| bits=" + format_number(worst));
  });

  s.check("decomposition components uncorrelated", [&] {
    const std::size_t n = 1000000;
    std::vector<double> a(n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      const ChannelDraw d = draw_channel(6, 0, i);
      const double s2 = std::norm(d.h_s[0]) + std::norm(d.h_s[1]);
      const cplx ip = std::conj(d.h_s[0]) * d.h_r[0] + std::conj(d.h_s[1]) * d.h_r[1];
      const double par = std::norm(ip) / s2;
      a[i] = s2;
      b[i] = std::norm(d.h_r[0]) + std::norm(d.h_r[1]) - par;
      c[i] = par;
    }
    const double ab = correlation(a, b), ac = correlation(a, c), bc = correlation(b, c);
    const double worst = std::max({std::abs(ab), std::abs(ac), std::abs(bc)});
    s.record("decomposition components uncorrelated", worst <= 0.01,
             "corr=" + format_number(ab) + "," + format_number(ac) + "," + format_number(bc));
  });

  s.check("Monte Carlo independent of worker count", [&] {
    McConfig c;
    c.eta = 1.0;
    c.r = 0.9;
    c.snr_db_list = {10, 20};
    c.samples_per_point = 50000;
    c.seed = 42;
    c.workers = 1;
    const auto a = io::outage_to_csv(estimate_outage(c), std::nullopt);
    c.workers = 3;
    const auto b = io::outage_to_csv(estimate_outage(c), std::nullopt);
    const auto again = io::outage_to_csv(estimate_outage(c), std::nullopt);
    s.record("Monte Carlo independent of worker count", a == b && b == again,
             a == b && b == again ? "byte-identical" : "outputs differ");
  });

  s.check("outage ordering global<=local<=blind", [&] {
    McConfig c;
    c.eta = 1.0;
    c.r = 0.9;
    c.snr_db_list = {10, 20, 30};
    c.samples_per_point = 100000;
    c.workers = opts.workers;
    c.rule = GlobalRule{};
    const auto g = estimate_outage(c);
    c.rule = LocalRule{};
    const auto l = estimate_outage(c);
    c.rule = BlindRule{};
    const auto b = estimate_outage(c);
    double worst = -1.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      worst = std::max(worst, g[k].p_out - l[k].p_out - g[k].ci95_halfwidth - l[k].ci95_halfwidth);
      worst = std::max(worst, l[k].p_out - b[k].p_out - l[k].ci95_halfwidth - b[k].ci95_halfwidth);
    }
    s.record("outage ordering global<=local<=blind", worst <= 0.0,
             "max violation beyond CIs=" + format_number(worst));
  });

  s.check("outage decreasing in SNR", [&] {
    McConfig c;
    c.eta = 1.0;
    c.r = 0.9;
    c.rule = FixedRule{1.0 / 3.0};
    c.snr_db_list = {10, 20, 30};
    c.samples_per_point = 200000;
    c.workers = opts.workers;
    const auto e = estimate_outage(c);
    bool ok = true;
    for (std::size_t k = 1; k < e.size(); ++k)
      ok = ok && e[k].p_out + e[k].ci95_halfwidth < e[k - 1].p_out - e[k - 1].ci95_halfwidth;
    s.record("outage decreasing in SNR", ok,
             "p_out=" + format_number(e[0].p_out) + "," + format_number(e[1].p_out) + "," + format_number(e[2].p_out));
  });

  s.check("zero rate never in outage", [&] {
    McConfig c;
    c.r = 0.0;
    c.snr_db_list = {0, 20};
    c.samples_per_point = 20000;
    std::uint64_t total = 0;
    for (const auto& e : estimate_outage(c)) total += e.n_outages;
    s.record("zero rate never in outage", total == 0, "outages=" + std::to_string(total));
  });

  if (opts.fast) return;

  s.check("Monte Carlo slope eta=1 r=0.9 f=1/3", [&] {
    McConfig c;
    c.eta = 1.0;
    c.r = 0.9;
    c.rule = FixedRule{1.0 / 3.0};
    c.snr_db_list = {10, 15, 20, 25, 30, 35};
    c.samples_per_point = 1000000;
    c.seed = 42;
    c.workers = opts.workers;
    const SlopeFit f = fit_slope(estimate_outage(c));
    s.record("Monte Carlo slope eta=1 r=0.9 f=1/3", f.d_hat >= 0.15 && f.d_hat <= 0.45,
             "d_hat=" + format_number(f.d_hat) + " stderr=" + format_number(f.slope_stderr) + " (window [0.15,0.45])");
  });

  TailConfig tc;
  tc.samples = 10000000;
  tc.workers = opts.workers;
  const double tol[] = {0.1, 0.1, 0.3};
  s.check("tail exponents", [&] {
    const TailReport rep = validate_tail_exponents(tc);
    for (std::size_t i = 0; i < rep.probes.size(); ++i) {
      const auto& p = rep.probes[i];
      const bool ok = p.usable && std::abs(p.slope - p.anchor) <= tol[i];
      s.record("tail exponent " + p.probe.label(), ok,
               "slope=" + format_number(p.slope) + " anchor=" + format_number(p.anchor) + " +/- " + format_number(tol[i]));
    }
  });
}

void io_checks(Suite& s) {
  s.check("csv round trip", [&] {
    std::vector<TradeoffCurve> curves{compute_curve(Strategy::mimo2x2, NetworkParams(1.0), 0.25),
                                      compute_curve(Strategy::global, NetworkParams(2.0), 0.1)};
    const std::string a = io::curves_to_csv(curves);
    const std::string b = io::outage_to_csv({make_estimate(10, 100, 7), make_estimate(20, 100, 0)},
                                            SlopeFit{0.3, 0.01, 2, {}});
    const bool ok = io::serialize_csv(io::parse_csv(a)) == a && io::serialize_csv(io::parse_csv(b)) == b;
    s.record("csv round trip", ok, ok ? "curve and outage files reproduce exactly" : "mismatch");
  });
}

}  // namespace

std::vector<CheckResult> run_suite(const SuiteOptions& opts, const std::function<void(const CheckResult&)>& on_result) {
  Suite s(on_result);
  closed_form_checks(s);
  optimizer_checks(s);
  montecarlo_checks(s, opts);
  io_checks(s);
  return s.take();
}

std::string format_line(const CheckResult& c) {
  return std::string(c.pass ? "PASS " : "FAIL ") + c.name + ": " + c.measured;
}

}  // namespace dmt::validation

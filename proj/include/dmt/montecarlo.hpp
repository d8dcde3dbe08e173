#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dmt/optimizers.hpp"
#include "dmt/types.hpp"

namespace dmt {

using cplx = std::complex<double>;

/// One quasi-static channel realization.
struct ChannelDraw {
  cplx h_sr;                 ///< source -> relay
  std::array<cplx, 2> h_s;   ///< source -> destination antennas
  std::array<cplx, 2> h_r;   ///< relay -> destination antennas
};

/// Per-gain proposal variances. All ones is the physical model.
struct DrawScales {
  double h_sr = 1.0;
  double h_s = 1.0;
  double h_r = 1.0;
};

/// Deterministic draw keyed by (seed, stream, index). Each complex gain is
/// CN(0, scale).
ChannelDraw draw_channel(std::uint64_t seed, std::uint32_t stream, std::uint64_t index,
                         const DrawScales& scales = {});

/// Log of the likelihood ratio p(draw) / q(draw) for a draw produced with
/// `scales` in place of unit variances.
double log_likelihood_ratio(const ChannelDraw& draw, const DrawScales& scales);

/// Gains of the two parallel streams seen by an MMSE-SIC receiver.
struct ParallelGains {
  double g1_sq = 0.0;
  double g2_sq = 0.0;
};

ParallelGains sic_decompose(const ChannelDraw& draw, double rho);

enum class CutForm {
  exact,       ///< f log(1 + rho^eta |h_sr|^2 + rho ||h_s||^2) for the listen phase
  max_approx,  ///< f max{log(1 + rho^eta |h_sr|^2), log(1 + rho ||h_s||^2)}
};

/// Cut mutual informations in bits per channel use.
struct CutInfo {
  double i_cs_bits = 0.0;
  double i_cd_bits = 0.0;
};

CutInfo cut_mutual_info(const ChannelDraw& draw, double rho, double eta, double f,
                        CutForm form = CutForm::exact);

/// Realized exponents log(1 + x) / log(rho) of a draw; rho must exceed 1.
/// Values are not clamped to the asymptotic support.
ChannelExponents realized_exponents(const ChannelDraw& draw, double rho, double eta);

double db_to_linear(double db);

struct FixedRule {
  double f = 1.0 / 3.0;
};
struct GlobalRule {};
struct LocalRule {};
struct BlindRule {
  std::optional<double> f;  ///< empty: use the blind optimizer's schedule
};
using ScheduleRule = std::variant<FixedRule, GlobalRule, LocalRule, BlindRule>;

std::string describe(const ScheduleRule& rule);

struct McConfig {
  double eta = 1.0;
  double r = 0.5;
  ScheduleRule rule = FixedRule{};
  std::vector<double> snr_db_list;
  std::uint64_t samples_per_point = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  CutForm cut_form = CutForm::exact;
  OptimizerConfig optimizer;  ///< used to resolve local and blind rules

  void validate() const;
};

struct OutageEstimate {
  double snr_db = 0.0;
  double p_out = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t n_outages = 0;
  double ci95_halfwidth = 0.0;
};

OutageEstimate make_estimate(double snr_db, std::uint64_t n_samples, std::uint64_t n_outages);

std::vector<OutageEstimate> estimate_outage(const McConfig& cfg);

/// Weighted least-squares line through (x, y) with per-point variances of y.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};
LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& y_var);

struct SlopeFit {
  double d_hat = 0.0;
  double slope_stderr = 0.0;
  std::size_t n_used = 0;
  std::vector<double> excluded_snr_db;  ///< points with zero outages
};

/// Negated slope of log10 p_out against log10 rho. Throws InsufficientData
/// with fewer than three points carrying outages.
SlopeFit fit_slope(const std::vector<OutageEstimate>& estimates);

// ---------------------------------------------------------------------------
// Tail exponents of the realized channel exponents.

enum class TailKind { alpha1_marginal, alpha_sr_marginal, joint_alpha12 };

struct TailProbe {
  TailKind kind = TailKind::alpha1_marginal;
  double a1 = 0.5;
  double a2 = 0.5;
  double a_sr = 0.5;

  /// Decay exponent predicted by the asymptotic density.
  double anchor_slope(double eta) const;
  std::string label() const;
};

struct TailConfig {
  double eta = 1.0;
  std::vector<double> snr_db_list{30, 35, 40, 45, 50};
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  int workers = 1;
  bool importance_sampling = true;
  std::vector<TailProbe> probes{{TailKind::alpha1_marginal, 0.5, 0.0, 0.0},
                                {TailKind::alpha_sr_marginal, 0.0, 0.0, 0.5},
                                {TailKind::joint_alpha12, 0.25, 0.25, 0.0}};
};

struct TailPoint {
  double snr_db = 0.0;
  double p_hat = 0.0;
  double p_var = 0.0;      ///< variance of p_hat
  std::uint64_t hits = 0;  ///< samples falling in the event
};

struct TailProbeResult {
  TailProbe probe;
  double anchor = 0.0;
  std::vector<TailPoint> points;
  bool usable = false;  ///< false when fewer than three points had hits
  double slope = 0.0;
  double slope_stderr = 0.0;
};

struct TailReport {
  std::vector<TailProbeResult> probes;
};

TailReport validate_tail_exponents(const TailConfig& cfg);

}  // namespace dmt

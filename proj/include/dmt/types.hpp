#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dmt {

/// Absolute tolerance for exponent-space equality and boundary checks.
inline constexpr double kExponentTol = 1e-12;

/// Raised when an argument lies outside the domain of a formula.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Raised when a solver hits a state that should be unreachable.
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a fit does not have enough usable points.
class InsufficientData : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One network instance. The S->R link has average SNR rho^eta when the
/// S->D and R->D links have average SNR rho.
class NetworkParams {
public:
  explicit NetworkParams(double eta) : eta_(eta) {
    if (!(eta >= 1.0))
      throw DomainError("proximity gain eta must satisfy eta >= 1, got " + std::to_string(eta));
  }

  double eta() const { return eta_; }

private:
  double eta_;
};

/// A realization point in exponent space.
struct ChannelExponents {
  double alpha1 = 0.0;   ///< first parallel stream (||h_s||^2)
  double alpha2 = 0.0;   ///< second parallel stream (after SIC)
  double alpha_sr = 0.0; ///< source-relay link

  friend bool operator==(const ChannelExponents&, const ChannelExponents&) = default;
};

/// Throws DomainError unless alpha lies in [0,1]x[0,1]x[0,eta].
void check_support(const ChannelExponents& alpha, const NetworkParams& params);

/// Fraction of time the relay listens.
class Schedule {
public:
  explicit Schedule(double f) : f_(f) {
    if (!(f >= 0.0 && f <= 1.0))
      throw DomainError("listen fraction f must lie in [0, 1], got " + std::to_string(f));
  }

  double f() const { return f_; }

private:
  double f_;
};

enum class Strategy { global, local, blind, mimo2x2 };

std::string_view to_string(Strategy s);
/// Parses "global", "local", "blind" or "mimo2x2".
std::optional<Strategy> parse_strategy(std::string_view name);

struct CurvePoint {
  double r = 0.0;
  double d = 0.0;
};

struct TradeoffCurve {
  double eta = 1.0;
  Strategy strategy = Strategy::global;
  double r_step = 0.0;
  std::vector<CurvePoint> points;
};

}  // namespace dmt

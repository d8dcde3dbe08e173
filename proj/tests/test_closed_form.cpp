#include "doctest.h"

#include <random>

#include "dmt/closed_form.hpp"
#include "oracles.hpp"

using namespace dmt;

TEST_CASE("network params reject eta below one") {
  CHECK_THROWS_AS(NetworkParams(0.5), DomainError);
  CHECK_THROWS_AS(NetworkParams(std::nan("")), DomainError);
  CHECK(NetworkParams(1.5).eta() == 1.5);
}

TEST_CASE("schedule range") {
  CHECK_THROWS_AS(Schedule(-0.01), DomainError);
  CHECK_THROWS_AS(Schedule(1.01), DomainError);
  CHECK(Schedule(0.0).f() == 0.0);
  CHECK(Schedule(1.0).f() == 1.0);
}

TEST_CASE("r_star") {
  CHECK(r_star(NetworkParams(1.0)) == 1.0);
  CHECK(r_star(NetworkParams(2.0)) == 1.5);
  CHECK(r_star(NetworkParams(1e9)) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("d_closed examples") {
  CHECK(d_closed(1.0, NetworkParams(1.0)) == 0.0);
  CHECK(d_closed(1.5, NetworkParams(2.0)) == 0.0);
  CHECK(d_closed(0.5, NetworkParams(2.0)) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(d_closed(1.25, NetworkParams(2.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(d_closed(1.5, NetworkParams(1.5)), DomainError);
  CHECK_THROWS_AS(d_closed(-0.1, NetworkParams(1.5)), DomainError);
}

TEST_CASE("d_closed matches the direct formula on a grid") {
  for (double eta : {1.0, 1.25, 1.5, 1.9, 2.0, 2.5, 3.0, 4.0, 10.0})
    for (int k = 0; k <= 200; ++k) {
      const double r = r_star(NetworkParams(eta)) * k / 200.0;
      CHECK(d_closed(r, NetworkParams(eta)) == doctest::Approx(oracle::closed_form_d(r, eta)).epsilon(1e-12));
    }
}

TEST_CASE("d_closed continuity at r=1 and zero at r_star") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(1.0, 100.0);
  for (int i = 0; i < 500; ++i) {
    const NetworkParams p(u(rng));
    if (r_star(p) > 1.0) {
      // right branch evaluated at r = 1
      const double right = p.eta() >= 2 ? (2 * p.eta() - p.eta() - 1) / (p.eta() - 1) : p.eta() - 1.0;
      CHECK(std::abs(d_closed(1.0, p) - right) <= 1e-12);
    }
    CHECK(std::abs(d_closed(r_star(p), p)) <= 1e-12);
  }
}

TEST_CASE("d_closed monotone in r and eta, bounded by 2x2 MIMO") {
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    const double eta = 1.0 + 99.0 * i / (n - 1);
    const double eta_next = 1.0 + 99.0 * (i + 1) / (n - 1);
    const NetworkParams p(eta);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      const double r = r_star(p) * k / (n - 1);
      const double d = d_closed(r, p);
      CHECK(d <= prev + 1e-12);
      CHECK(d <= d_mimo_2x2(r) + 1e-12);
      if (i + 1 < n) CHECK(d <= d_closed(r, NetworkParams(eta_next)) + 1e-12);
      prev = d;
    }
  }
  const NetworkParams p(100.0);
  double gap = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double r = r_star(p) * k / 1000.0;
    gap = std::max(gap, d_mimo_2x2(r) - d_closed(r, p));
  }
  CHECK(gap <= 0.02);
}

TEST_CASE("d_mimo_2x2") {
  CHECK(d_mimo_2x2(0.0) == 4.0);
  CHECK(d_mimo_2x2(1.0) == 1.0);
  CHECK(d_mimo_2x2(0.5) == 2.5);
  CHECK(d_mimo_2x2(2.0) == 0.0);
  CHECK_THROWS_AS(d_mimo_2x2(2.1), DomainError);
}

TEST_CASE("d_blind_closed") {
  CHECK(d_blind_closed(0.5, NetworkParams(1.0)) == 1.5);
  CHECK(d_blind_closed(1.0, NetworkParams(3.0)) == 1.0);
  CHECK(d_blind_closed(0.0, NetworkParams(2.0)) == 4.0);
  CHECK_THROWS_AS(d_blind_closed(1.1, NetworkParams(2.0)), DomainError);
}

TEST_CASE("s_exponent") {
  CHECK(s_exponent({1, 1, 2}, NetworkParams(2.0)) == 0.0);
  CHECK(s_exponent({0, 0, 0}, NetworkParams(2.0)) == 6.0);
  CHECK_THROWS_AS(s_exponent({1.1, 0, 0}, NetworkParams(2.0)), DomainError);
  CHECK_THROWS_AS(s_exponent({0, 0, 2.5}, NetworkParams(2.0)), DomainError);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const NetworkParams p(1.0 + 4.0 * u(rng));
    const double a1 = u(rng), asr = p.eta() * u(rng);
    // both branch expressions agree on the plane a1 + a2 = 1
    const double a2 = 1.0 - a1;
    CHECK(std::abs((p.eta() + 4 - 3 * a1 - 2 * a2 - asr) - (p.eta() + 3 - 2 * a1 - a2 - asr)) <= 1e-12);
    CHECK(std::abs(s_exponent({a1, std::min(1.0, a2 + 1e-10), asr}, p) - s_exponent({a1, a2, asr}, p)) <= 1e-9);
    // minimum 0 only at (1, 1, eta)
    const ChannelExponents a{u(rng), u(rng), p.eta() * u(rng)};
    CHECK(s_exponent(a, p) > 0.0);
    CHECK(s_exponent(a, p) == doctest::Approx(oracle::s_of(p.eta(), a.alpha1, a.alpha2, a.alpha_sr)));
  }
}

TEST_CASE("cut exponents") {
  const auto c = cut_exponents({0.5, 0.8, 1.2}, Schedule(0.5));
  CHECK(c.i_cs == doctest::Approx(0.85));
  CHECK(c.i_cd == doctest::Approx(0.9));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const ChannelExponents a{u(rng), u(rng), 3.0 * u(rng)};
    const auto z = cut_exponents(a, Schedule(0.0));
    CHECK(z.i_cs == a.alpha1);
    CHECK(z.i_cd == doctest::Approx(a.alpha1 + a.alpha2));
    const double f1 = u(rng), f2 = u(rng);
    const auto lo = cut_exponents(a, Schedule(std::min(f1, f2)));
    const auto hi = cut_exponents(a, Schedule(std::max(f1, f2)));
    CHECK(lo.i_cs <= hi.i_cs + 1e-15);
    CHECK(lo.i_cd >= hi.i_cd - 1e-15);
    if (a.alpha_sr <= a.alpha1) CHECK(cut_exponents(a, Schedule(f1)).i_cs == a.alpha1);
  }
}

TEST_CASE("in_outage") {
  CHECK(in_outage({1, 1, 1}, Schedule(1.0 / 3.0), 1.0));
  CHECK_FALSE(in_outage({1, 1, 2}, Schedule(1.0 / 3.0), 0.5));
  CHECK(in_outage({0, 0, 0}, Schedule(0.7), 0.1));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const ChannelExponents a{u(rng), u(rng), 2.0 * u(rng)};
    const Schedule f(u(rng));
    const double r1 = 2.0 * u(rng), r2 = r1 + u(rng);
    if (in_outage(a, f, r1)) CHECK(in_outage(a, f, r2));
  }
}

TEST_CASE("f_global") {
  CHECK(f_global({0.5, 1, 1.5}).f() == 0.5);
  CHECK(f_global({0.3, 0, 0.3}).f() == 1.0);
  const ChannelExponents below{0.6, 0.4, 0.2};
  CHECK(f_global(below).f() == 1.0);
  const auto c = cut_exponents(below, Schedule(1.0));
  CHECK(c.i_cs == doctest::Approx(0.6));
  CHECK(c.i_cd == doctest::Approx(0.6));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const ChannelExponents a{u(rng), u(rng), 4.0 * u(rng)};
    if (std::max(0.0, a.alpha_sr - a.alpha1) + a.alpha2 <= 0) continue;
    const auto c2 = cut_exponents(a, f_global(a));
    CHECK(std::abs(c2.i_cs - c2.i_cd) <= 1e-12);
    CHECK(equalized_cut(a) == doctest::Approx(oracle::equalized(a.alpha1, a.alpha2, a.alpha_sr)).epsilon(1e-12));
  }
}

TEST_CASE("strategy names") {
  for (auto s : {Strategy::global, Strategy::local, Strategy::blind, Strategy::mimo2x2})
    CHECK(parse_strategy(to_string(s)) == s);
  CHECK_FALSE(parse_strategy("optimal").has_value());
}

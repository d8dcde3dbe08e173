#include "doctest.h"

#include <random>

#include "dmt/optimizers.hpp"
#include "oracles.hpp"

using namespace dmt;

TEST_CASE("optimizer config validation") {
  OptimizerConfig c;
  CHECK_NOTHROW(c.validate());
  c.f_grid_step = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.alpha_grid_step = -1.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.refine_iters = -1;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("min_s_over_outage examples") {
  CHECK(min_s_over_outage(1.0, Schedule(1.0 / 3.0), NetworkParams(2.0)).d == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(min_s_over_outage(0.5, Schedule(1.0 / 3.0), NetworkParams(1.0)).d == doctest::Approx(1.5).epsilon(1e-12));
  for (double eta : {1.0, 1.5, 2.0, 4.0}) {
    for (double f : {0.01, 0.3, 0.99}) {
      const auto m = min_s_over_outage(0.0, Schedule(f), NetworkParams(eta));
      CHECK(m.d == doctest::Approx(std::min(eta + 2, 4.0)).epsilon(1e-12));
      CHECK(m.d == doctest::Approx(oracle::min_s_fixed_f(0.0, f, eta, 0.01)).epsilon(1e-9));
    }
    // f = 0 or 1 leaves a cut equal to alpha1 alone: the 1x2 exponent 2
    for (double f : {0.0, 1.0}) {
      CHECK(min_s_over_outage(0.0, Schedule(f), NetworkParams(eta)).d == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(oracle::min_s_fixed_f(0.0, f, eta, 0.01) == doctest::Approx(2.0).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(min_s_over_outage(-0.1, Schedule(0.5), NetworkParams(2.0)), DomainError);
}

TEST_CASE("exact inner minimum agrees with brute force and with grid mode") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  OptimizerConfig grid;
  grid.mode = InnerMode::grid;
  grid.alpha_grid_step = 0.005;
  for (int i = 0; i < 20; ++i) {
    const double eta = 1.0 + 3.0 * u(rng), r = 2.0 * u(rng), f = u(rng);
    const NetworkParams p(eta);
    const double exact = min_s_over_outage(r, Schedule(f), p).d;
    CHECK(std::abs(exact - min_s_over_outage(r, Schedule(f), p, grid).d) <= 0.05);
    CHECK(std::abs(exact - oracle::min_s_fixed_f(r, f, eta, 0.005)) <= 0.02);
    // exact is a true minimum, so never above the brute-force upper bound
    CHECK(exact <= oracle::min_s_fixed_f(r, f, eta, 0.005) + 1e-9);
  }
}

TEST_CASE("witness consistency") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const NetworkParams p(1.0 + 3.0 * u(rng));
    const double r = 2.0 * u(rng);
    const Schedule f(u(rng));
    const auto m = min_s_over_outage(r, f, p);
    CHECK(in_outage(m.argmin, f, r));
    CHECK(std::abs(s_exponent(m.argmin, p) - m.d) <= 1e-9);
    const double sr = p.eta() * u(rng);
    const auto m2 = min_s_over_outage_fixed_sr(r, f, sr, p);
    CHECK(m2.argmin.alpha_sr == sr);
    CHECK(in_outage(m2.argmin, f, r));
    CHECK(std::abs(s_exponent(m2.argmin, p) - m2.d) <= 1e-9);
    CHECK(std::abs(m2.d - oracle::min_s_fixed_f_sr(r, f.f(), sr, p.eta(), 0.002)) <= 0.01);
    CHECK(m2.d >= m.d - 1e-9);
  }
}

TEST_CASE("minimizer ties resolve deterministically") {
  // At r = 0 every point with alpha1 = 0 and a zero cut is a candidate.
  const auto a = min_s_over_outage(0.0, Schedule(0.4), NetworkParams(2.0));
  const auto b = min_s_over_outage(0.0, Schedule(0.4), NetworkParams(2.0));
  CHECK(a.argmin == b.argmin);
  CHECK(a.argmin.alpha1 == 0.0);
}

TEST_CASE("global numeric matches the closed form away from eta near 2") {
  for (double eta : {1.0, 1.5, 3.0, 4.0}) {
    const NetworkParams p(eta);
    for (int k = 0;; ++k) {
      const double r = std::min(0.05 * k, r_star(p));
      CHECK(std::abs(d_global_numeric(r, p).d_value - d_closed(r, p)) <= 1e-6);
      if (r >= r_star(p)) break;
    }
  }
  CHECK(d_global_numeric(0.5, NetworkParams(2.0)).d_value == doctest::Approx(2.5).epsilon(1e-9));
  CHECK_THROWS_AS(d_global_numeric(1.5, NetworkParams(1.5)), DomainError);
}

TEST_CASE("global numeric matches brute force for every eta") {
  for (double eta : {1.0, 1.5, 2.0, 2.5, 3.0, 4.0}) {
    const NetworkParams p(eta);
    for (double r : {0.2, 0.6, 1.0, 1.1, 1.25, 1.4}) {
      if (r > r_star(p)) continue;
      const double num = d_global_numeric(r, p).d_value;
      const double brute = oracle::global_d(r, eta, 0.005);
      CHECK(num <= brute + 1e-9);
      CHECK(brute - num <= 0.02);
    }
  }
}

TEST_CASE("global numeric at eta=2 finds the corner below the closed form") {
  const NetworkParams p(2.0);
  for (double r : {1.1, 1.2, 1.25, 1.3, 1.35, 1.4, 1.45}) {
    const double expect = std::min(oracle::closed_form_d(r, 2.0), oracle::corner_candidate(r, 2.0));
    CHECK(d_global_numeric(r, p).d_value == doctest::Approx(expect).epsilon(1e-6));
  }
  // the closed-form value 2/3 at r = 1.25 is not attained
  CHECK(d_global_numeric(1.25, p).d_value < 2.0 / 3.0 - 0.02);
}

TEST_CASE("global result carries a consistent witness") {
  for (double eta : {1.0, 2.0, 4.0})
    for (double r : {0.0, 0.3, 0.9, 1.2}) {
      const NetworkParams p(eta);
      if (r > r_star(p)) continue;
      const auto res = d_global_numeric(r, p);
      REQUIRE(res.witness.has_value());
      CHECK(equalized_cut(*res.witness) <= r + 1e-9);
      CHECK(s_exponent(*res.witness, p) == doctest::Approx(res.d_value).epsilon(1e-9));
      CHECK(res.f_opt == doctest::Approx(f_global(*res.witness).f()));
      CHECK(res.strategy == Strategy::global);
    }
}

TEST_CASE("blind schedule in the low-rate region") {
  for (double eta : {1.0, 2.0, 4.0})
    for (double r : {0.25, 0.5, 0.75}) {
      const NetworkParams p(eta);
      const auto b = d_blind_numeric(r, p);
      CHECK(std::abs(b.d_value - (std::min(eta + 2, 4.0) - 3 * r)) <= 0.02);
      CHECK(std::abs(b.f_opt - 1.0 / 3.0) <= 0.01);
      CHECK(b.f_opt >= 0.0);
      CHECK(b.f_opt <= 1.0);
    }
  CHECK(d_blind_numeric(0.75, NetworkParams(1.0)).d_value == doctest::Approx(0.75).epsilon(1e-6));
}

TEST_CASE("blind against brute force above r=1") {
  for (double eta : {2.0, 4.0})
    for (double r : {1.1, 1.5}) {
      const double num = d_blind_numeric(r, NetworkParams(eta)).d_value;
      CHECK(std::abs(num - oracle::blind_d(r, eta, 0.01, 0.01)) <= 0.03);
    }
  CHECK(d_blind_numeric(1.5, NetworkParams(4.0)).d_value < d_global_numeric(1.5, NetworkParams(4.0)).d_value - 1e-3);
}

TEST_CASE("local schedule") {
  CHECK(d_local_numeric(0.0, NetworkParams(2.0)).d_value == doctest::Approx(4.0).epsilon(1e-9));
  for (double eta : {1.0, 2.0, 4.0})
    for (double r : {0.25, 0.75}) {
      const NetworkParams p(eta);
      CHECK(std::abs(d_local_numeric(r, p).d_value - d_blind_numeric(r, p).d_value) <= 0.02);
    }
  const NetworkParams p4(4.0);
  const double b = d_blind_numeric(1.5, p4).d_value, l = d_local_numeric(1.5, p4).d_value,
               g = d_global_numeric(1.5, p4).d_value;
  CHECK(b <= l + 0.02);
  CHECK(l <= g + 0.02);
  const double num = d_local_numeric(1.3, NetworkParams(2.0)).d_value;
  CHECK(std::abs(num - oracle::local_d(1.3, 2.0, 0.02, 0.01, 0.01)) <= 0.03);
  const auto choice = local_schedule_for(1.2, 1.5, NetworkParams(2.0));
  CHECK(choice.f >= 0.0);
  CHECK(choice.f <= 1.0);
  CHECK(choice.d == doctest::Approx(min_s_over_outage_fixed_sr(1.2, Schedule(choice.f), 1.5, NetworkParams(2.0)).d));
  CHECK_THROWS_AS(local_schedule_for(1.2, 2.5, NetworkParams(2.0)), DomainError);
}

TEST_CASE("strategy ordering on a grid") {
  for (double eta : {2.0, 4.0})
    for (double r : {0.5, 1.0, 1.2, 1.4}) {
      const NetworkParams p(eta);
      const double b = d_blind_numeric(r, p).d_value, l = d_local_numeric(r, p).d_value,
                   g = d_global_numeric(r, p).d_value;
      CHECK(b <= l + 0.02);
      CHECK(l + 0.02 <= g + 0.04);
    }
}

TEST_CASE("compute_curve") {
  const auto g = compute_curve(Strategy::global, NetworkParams(1.0), 0.25);
  const std::vector<CurvePoint> expect{{0, 3}, {0.25, 2.25}, {0.5, 1.5}, {0.75, 0.75}, {1, 0}};
  REQUIRE(g.points.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(g.points[i].r == doctest::Approx(expect[i].r));
    CHECK(g.points[i].d == doctest::Approx(expect[i].d).epsilon(1e-9));
  }
  CHECK(g.points.back().d == 0.0);

  const auto m = compute_curve(Strategy::mimo2x2, NetworkParams(1.0), 0.5);
  const std::vector<CurvePoint> mimo{{0, 4}, {0.5, 2.5}, {1, 1}, {1.5, 0.5}, {2, 0}};
  REQUIRE(m.points.size() == mimo.size());
  for (std::size_t i = 0; i < mimo.size(); ++i) CHECK(m.points[i].d == doctest::Approx(mimo[i].d));

  const auto b = compute_curve(Strategy::blind, NetworkParams(2.0), 0.5);
  REQUIRE(b.points.size() >= 3);
  for (int i = 0; i < 3; ++i) CHECK(b.points[i].d == doctest::Approx(4 - 3 * b.points[i].r).epsilon(1e-6));

  CHECK_THROWS_AS(compute_curve(Strategy::global, NetworkParams(1.0), 0.0), DomainError);
}

TEST_CASE("curves are non-negative and non-increasing") {
  for (auto st : {Strategy::global, Strategy::blind})
    for (double eta : {1.0, 2.0, 4.0}) {
      const auto c = compute_curve(st, NetworkParams(eta), 0.1);
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        CHECK(c.points[i].d >= 0.0);
        if (i) {
          CHECK(c.points[i].r > c.points[i - 1].r);
          CHECK(c.points[i].d <= c.points[i - 1].d + 1e-9);
        }
      }
    }
}

TEST_CASE("evaluation order does not change results") {
  const NetworkParams p(2.0);
  const std::vector<double> rs{0.1, 0.7, 1.1, 1.3, 1.45};
  std::vector<double> fwd, rev(rs.size());
  for (double r : rs) fwd.push_back(d_blind_numeric(r, p).d_value);
  for (std::size_t i = rs.size(); i-- > 0;) rev[i] = d_blind_numeric(rs[i], p).d_value;
  CHECK(fwd == rev);
}

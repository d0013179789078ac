#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "falconer/drop.hpp"
#include "falconer/generators.hpp"

using namespace falconer;

TEST_CASE("drop_S") {
  CHECK(drop_S(Seq(std::vector<double>{})) == 0.0);
  CHECK(drop_S(Seq({-1.0, -1.0})) == 2.0);
  CHECK(drop_S(Seq({1.0, -1.0, -1.0, 1.0})) == 1.0);
  CHECK(drop_S(Seq({0.5, 0.25})) == 0.0);
}

TEST_CASE("is_tau_good") {
  CHECK(is_tau_good(IntPartition({0, 1, 2, 4, 8}), 0.5));
  CHECK_FALSE(is_tau_good(IntPartition({0, 2, 4}), 0.0));  // first gap must be 1
  CHECK(is_tau_good(IntPartition({0, 1, 2}), 0.5));
  CHECK(is_tau_good(IntPartition({0, 1, 2, 3}), 0.0));
  CHECK_FALSE(is_tau_good(IntPartition({0, 1, 2, 3}), 0.9));  // gap 1 < 0.9*2
}

TEST_CASE("M_of") {
  CHECK(M_of(Seq({0.2, 0.0, 1.0}), IntPartition({0, 1, 3})) == 0.0);
  CHECK(M_of(Seq({-1.0, -1.0}), IntPartition({0, 1, 2})) == 2.0);
  CHECK_THROWS_AS(M_of(Seq({1.0, 1.0}), IntPartition({0, 1})), std::invalid_argument);
}

TEST_CASE("M_of refinement monotonicity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    int L = 4 + static_cast<int>(rng() % 8);
    std::vector<double> sig(L);
    for (auto& x : sig) x = u(rng);
    Seq s(sig);
    // coarse partition, then refine by inserting one point
    std::vector<long> pts{0, L / 2, L};
    IntPartition coarse(pts);
    std::vector<long> fine_pts{0, L / 4 == 0 ? 1 : L / 4, L / 2, L};
    if (fine_pts[1] >= fine_pts[2]) fine_pts.erase(fine_pts.begin() + 1);
    IntPartition fine(fine_pts);
    CHECK(M_of(s, fine) >= M_of(s, coarse) - 1e-12);
  }
}

TEST_CASE("M_tau basics") {
  CHECK(M_tau(Seq({0.3, 0.3, 0.3, 0.3}), 0.3).value == 0.0);
  CHECK(M_tau(Seq(std::vector<double>(7, -1.0)), 0.3).value == 7.0);
  auto r = M_tau(Seq({-1.0, -1.0}), 0.5);
  CHECK(r.value == 2.0);
  CHECK(r.partition.points == std::vector<long>{0, 1, 2});
  CHECK_THROWS_AS(M_tau(Seq({1.0}), 1.0), std::invalid_argument);
}

TEST_CASE("M_tau equals brute-force enumeration") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    int L = 1 + static_cast<int>(rng() % 12);
    std::vector<double> sig(L);
    for (auto& x : sig) x = u(rng);
    Seq s(sig);
    for (double tau : {0.1, 0.3}) {
      CHECK(M_tau(s, tau).value == M_tau_bruteforce(s, tau));  // bitwise equal
    }
  }
}

TEST_CASE("M_tau nonincreasing as tau decreases") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> sig(10);
    for (auto& x : sig) x = u(rng);
    Seq s(sig);
    double prev = -1.0;
    for (double tau : {0.45, 0.3, 0.15, 0.0}) {
      double v = M_tau(s, tau).value;
      if (prev >= 0.0) CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("total_drop_of") {
  PLFunction id({0.0, 1.0}, {0.0, 1.0});
  RealPartition geo(
      {1.0, 0.5, 0.25, 0.125, 0.0625}, 0.0625);
  CHECK(total_drop_of(id, geo).value == 0.0);
  CHECK(total_drop_of(id, geo).tail_valid);
  CHECK(total_drop_of(id, geo).tail_bound == Catch::Approx(0.125));

  PLFunction neg({0.0, 1.0}, {0.0, -1.0});
  std::vector<double> pts;
  double delta = std::ldexp(1.0, -10);
  for (double x = 1.0; x >= delta; x *= 0.5) pts.push_back(x);
  RealPartition p(pts, delta);
  CHECK(total_drop_of(neg, p).value == Catch::Approx(1.0 - delta));
  CHECK_FALSE(total_drop_of(neg, p).tail_valid);

  // tent with the plain halving partition only drops across the peak
  auto f = tent(0.0);
  CHECK(total_drop_of(f, p).value == Catch::Approx(0.5));

  CHECK_THROWS_AS(RealPartition({1.0, 0.4}, 0.4), std::invalid_argument);  // ratio > 2
  CHECK_THROWS_AS(RealPartition({1.0, 0.5}, 0.6), std::invalid_argument);  // below delta
}

TEST_CASE("total_drop_inf on monotone and tent functions") {
  PLFunction id({0.0, 1.0}, {0.0, 1.0});
  CHECK(total_drop_inf(id, 8, 1e-4).value == 0.0);

  for (double u : {0.0, 0.1, 0.3}) {
    auto td = total_drop_inf(tent(u), 32, 0x1p-20);
    double exact = (1.0 - 2.0 * u) / 3.0;
    CHECK(std::abs(td.value - exact) <= 0.01 * exact);
    CHECK(td.tail_valid);
    CHECK(td.tail_bound == Catch::Approx(2.0 * 0x1p-20));
  }
  CHECK_THROWS_AS(total_drop_inf(id, 2, 1e-4), std::invalid_argument);
}

TEST_CASE("total_drop_inf upper value is nonincreasing in grid resolution") {
  auto f = tent(0.12);
  double prev = std::numeric_limits<double>::infinity();
  for (int g : {4, 8, 16, 32}) {
    double v = total_drop_inf(f, g, 0x1p-12, /*enrich=*/false).value;
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
  // enrichment can only improve on the plain grid
  CHECK(total_drop_inf(f, 8, 0x1p-12, true).value <=
        total_drop_inf(f, 8, 0x1p-12, false).value + 1e-12);
}

TEST_CASE("sigma_to_f interpolates prefix sums") {
  std::size_t ell = 50;
  auto f1 = sigma_to_f(Seq(std::vector<double>(ell, 1.0)), -1.0, 1.0, 0.04);
  for (std::size_t j = 10; j <= ell; j += 5)
    CHECK(f1(static_cast<double>(j) / ell) ==
          Catch::Approx(static_cast<double>(j) / ell).margin(1e-12));

  auto f2 = sigma_to_f(Seq(std::vector<double>(ell, -1.0)), -1.0, 1.0, 0.04);
  for (std::size_t j = 10; j <= ell; j += 5)
    CHECK(f2(static_cast<double>(j) / ell) ==
          Catch::Approx(-static_cast<double>(j) / ell).margin(1e-12));

  // precondition violation: prefix sums escape the band
  std::vector<double> bad(ell, 1.0);
  CHECK_THROWS_AS(sigma_to_f(Seq(bad), -1.0, 0.0, 0.001), std::invalid_argument);
}

TEST_CASE("sigma_to_f band property on random admissible sequences") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t ell = 100;
  const double zeta = 0.04;
  int built = 0;
  while (built < 20) {
    std::vector<double> sig(ell);
    for (auto& x : sig) x = u(rng);
    Seq s(sig);
    double gamma = -1.0, Gamma = 1.0;
    bool ok = true;
    for (std::size_t j = 1; j <= ell && ok; ++j) {
      double pj = s.prefix(j);
      ok = pj >= gamma * j - zeta * ell && pj <= Gamma * j + zeta * ell;
    }
    if (!ok) continue;
    ++built;
    auto f = sigma_to_f(s, gamma, Gamma, zeta);
    double rz = std::sqrt(zeta);
    // (a): exact prefix interpolation on the matched range
    for (std::size_t j = static_cast<std::size_t>(std::ceil(rz * ell)); j <= ell; ++j)
      CHECK(f(static_cast<double>(j) / ell) == Catch::Approx(s.prefix(j) / ell).margin(1e-12));
    // (b): the linear band holds on all of [0,1]
    for (int k = 0; k <= 200; ++k) {
      double x = k / 200.0;
      CHECK(f(x) >= (gamma - rz) * x - 1e-9);
      CHECK(f(x) <= (Gamma + rz) * x + 1e-9);
    }
  }
}

TEST_CASE("check_sigmatof_inequality") {
  std::size_t ell = 60;
  Seq ones(std::vector<double>(ell, 1.0));
  auto f1 = sigma_to_f(ones, -1.0, 1.0, 0.01);
  CHECK(check_sigmatof_inequality(ones, 0.1, 0.01, f1, 0.0));

  Seq negs(std::vector<double>(ell, -1.0));
  auto f2 = sigma_to_f(negs, -1.0, 1.0, 0.01);
  CHECK(check_sigmatof_inequality(negs, 0.1, 0.01, f2, 0.0));
}

TEST_CASE("stability envelope pieces and continuity") {
  CHECK(stability_envelope_eval(0.0, 1.0 / 42.0, 0.0) == 0.0);
  double eta = 1.0 / 42.0;
  StabilityEnvelope env(0.0, eta);
  CHECK(env(env.t1) == Catch::Approx(env.t1 - 3.0 * eta));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uu(0.0, 1.0 / 3.0);
  std::uniform_real_distribution<double> ue(1e-4, 1.0 / 21.0);
  for (int t = 0; t < 100; ++t) {
    StabilityEnvelope e(uu(rng), ue(rng));
    for (double x : e.junctions()) {
      if (x <= 0.0 || x >= 1.0) continue;
      double left = e(std::nextafter(x, 0.0));
      double right = e(std::nextafter(x, 1.0));
      CHECK(std::abs(left - right) <= 1e-12);
    }
    // 1-Lipschitz in x
    double prev = e(0.0);
    for (int k = 1; k <= 128; ++k) {
      double x = k / 128.0;
      double v = e(x);
      CHECK(std::abs(v - prev) <= 1.0 / 128.0 + 1e-12);
      prev = v;
    }
  }
  CHECK_THROWS_AS(stability_envelope_eval(0.5, 0.01, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(stability_envelope_eval(0.1, 0.2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(stability_envelope_eval(0.1, 0.01, 1.5), std::invalid_argument);
}

TEST_CASE("corollary checkpoints at the rational endpoints") {
  auto r142 = corollary_checkpoints(0.0, Variant::c142);
  CHECK(r142.eta == Catch::Approx(1.0 / 42.0).margin(1e-15));
  CHECK(r142.xi == Catch::Approx(5.0 / 7.0).margin(1e-15));
  CHECK(r142.t1 == Catch::Approx(1.0 / 3.0).margin(1e-15));
  CHECK(r142.all_pass());

  auto r257 = corollary_checkpoints(0.0, Variant::c257);
  CHECK(r257.eta == Catch::Approx(2.0 / 57.0).margin(1e-15));
  CHECK(r257.xi == Catch::Approx(14.0 / 19.0).margin(1e-15));
  CHECK(r257.t1 == Catch::Approx(1.0 / 3.0).margin(1e-15));
  CHECK(r257.all_pass());

  auto mid = corollary_checkpoints(0.04, Variant::c142);
  CHECK(mid.all_pass());
  CHECK(mid.xi_equality_residual <= 1e-12);

  CHECK_THROWS_AS(corollary_checkpoints(0.05, Variant::c142), std::invalid_argument);
  CHECK_THROWS_AS(corollary_checkpoints(0.07, Variant::c257), std::invalid_argument);
}

TEST_CASE("tent and the flat line are consistent with the dichotomy") {
  for (auto v : {Variant::c142, Variant::c257}) {
    for (double u : {0.0, 0.02}) {
      auto cp = corollary_params(u, v);
      // the tent attains the maximal drop, so it must satisfy the envelope
      auto f = tent(u);
      for (int k = 0; k <= 400; ++k) {
        double x = cp.xi * k / 400.0;
        CHECK(f(x) >= corollary_target(u, v, x) - 1e-12);
      }
      // f = ux violates the envelope but has zero drop
      PLFunction line({0.0, 1.0}, {0.0, u});
      bool violates = false;
      for (int k = 1; k <= 400; ++k) {
        double x = cp.xi * k / 400.0;
        if (line(x) < corollary_target(u, v, x) - 1e-12) violates = true;
      }
      CHECK(violates);
      CHECK(total_drop_inf(line, 8, 1e-4).value == Catch::Approx(0.0).margin(1e-12));
    }
  }
}

TEST_CASE("dichotomy falsifier finds no inconsistencies") {
  for (auto v : {Variant::c142, Variant::c257}) {
    auto rep = dichotomy_falsifier(0.02, v, 500, 42);
    CHECK(rep.trials == 500);
    CHECK(rep.envelope_violations > 0);  // random walks do dip below the line
    CHECK(rep.drop_inconsistencies == 0);
  }
}

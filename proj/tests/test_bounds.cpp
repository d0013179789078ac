#include <catch2/catch_amalgamated.hpp>

#include "falconer/bounds.hpp"

using namespace falconer;

TEST_CASE("exact rational constants at u = 0") {
  CHECK(phi(Rational(0)) == Rational(29, 42));
  CHECK(chi(Rational(0)) == Rational(40, 57));
  CHECK(corollary_eta(Rational(0), Variant::c142) == Rational(1, 42));
  CHECK(corollary_eta(Rational(0), Variant::c257) == Rational(2, 57));
  CHECK(corollary_xi(Rational(0), Variant::c142) == Rational(5, 7));
  CHECK(corollary_xi(Rational(0), Variant::c257) == Rational(14, 19));
  CHECK(corollary_t1(Rational(0), Variant::c142) == Rational(1, 3));
  CHECK(corollary_t1(Rational(0), Variant::c257) == Rational(1, 3));
}

TEST_CASE("identities hold exactly in rational arithmetic") {
  for (int k = 0; k <= 8; ++k) {
    Rational u(k, 200);  // covers [0, 0.04]
    Rational lhs = phi(u);
    CHECK(lhs == Rational(2) * (1 + u) / 3 + corollary_eta(u, Variant::c142));
    CHECK(lhs == corollary_xi(u, Variant::c142) -
                     (Rational(1) - 2 * u) * corollary_eta(u, Variant::c142));
  }
  for (int k = 0; k <= 12; ++k) {
    Rational u(k, 200);  // covers [0, 0.06]
    Rational lhs = chi(u);
    CHECK(lhs == Rational(2) * (1 + u) / 3 + corollary_eta(u, Variant::c257));
    CHECK(lhs == corollary_xi(u, Variant::c257) -
                     (Rational(1) - 4 * u) * corollary_eta(u, Variant::c257));
  }
}

TEST_CASE("identities hold at 1e-12 in floating point") {
  for (int k = 0; k <= 100; ++k) {
    double u = 0.04 * k / 100.0;
    auto p = bound_params(u);
    CHECK(std::abs(p.phi - (p.xi_phi - (1 - 2 * u) * p.eta_phi)) <= 1e-12);
    CHECK(std::abs(p.phi - (2 * (1 + u) / 3 + p.eta_phi)) <= 1e-12);
  }
  for (int k = 0; k <= 100; ++k) {
    double u = 0.06 * k / 100.0;
    auto p = bound_params(u);
    CHECK(std::abs(p.chi - (p.xi_chi - (1 - 4 * u) * p.eta_chi)) <= 1e-12);
    CHECK(std::abs(p.chi - (2 * (1 + u) / 3 + p.eta_chi)) <= 1e-12);
  }
}

TEST_CASE("frozen point evaluations") {
  CHECK(phi(0.037) == Catch::Approx(0.716193159745).margin(1e-10));
  CHECK(chi(0.05) == Catch::Approx(0.733980582524).margin(1e-10));
}

TEST_CASE("strict improvements over the base constants") {
  for (int k = 1; k <= 50; ++k) {
    CHECK(phi(0.04 * k / 50.0) > 29.0 / 42.0);
    CHECK(chi(0.06 * k / 50.0) > 40.0 / 57.0);
  }
}

TEST_CASE("range guards of the corollaries") {
  for (int k = 0; k <= 50; ++k) {
    double u = 0.04 * k / 50.0;
    auto cp = corollary_params(u, Variant::c142);
    CHECK(cp.eta < 1.0 / 40.0);
    CHECK(cp.t1 >= 1.0 / 3.0 - 1e-15);
    CHECK(cp.xi > 2.0 * cp.t1);
    CHECK(cp.xi > 2.0 / 3.0);
    CHECK(cp.xi < 1.0);
  }
  for (int k = 0; k <= 50; ++k) {
    double u = 0.06 * k / 50.0;
    auto cp = corollary_params(u, Variant::c257);
    CHECK(cp.eta < 1.0 / 28.0);  // endpoint value 2/57 rules out 1/29
    CHECK(cp.t1 >= 1.0 / 3.0 - 1e-15);
    CHECK(cp.xi > 2.0 * cp.t1);
  }
  CHECK_THROWS_AS(corollary_params(-0.01, Variant::c142), std::invalid_argument);
  CHECK_THROWS_AS(corollary_params(0.041, Variant::c142), std::invalid_argument);
}

TEST_CASE("compare_bounds rows") {
  auto base = compare_bounds(1.0);
  CHECK(base.ks_pinned == Catch::Approx(2.0 / 3.0));
  CHECK(base.liu == Catch::Approx(2.0 / 3.0));
  CHECK(base.ks_full == Catch::Approx(2.0 / 3.0 + 1.0 / 54.0));
  REQUIRE(base.new_pinned.has_value());
  REQUIRE(base.new_full.has_value());
  CHECK(*base.new_pinned == Catch::Approx(29.0 / 42.0));
  CHECK(*base.new_full == Catch::Approx(40.0 / 57.0));

  auto mid = compare_bounds(1.02);
  REQUIRE(mid.new_pinned.has_value());
  CHECK(*mid.new_pinned > mid.liu);

  auto far = compare_bounds(1.25);
  CHECK_FALSE(far.new_pinned.has_value());
  CHECK(far.liu == Catch::Approx(1.0));
  CHECK(far.best_pinned == Catch::Approx(1.0));

  CHECK_THROWS_AS(compare_bounds(0.9), std::invalid_argument);
  CHECK_THROWS_AS(compare_bounds(1.5), std::invalid_argument);
}

TEST_CASE("crossovers against the 4s/3 - 2/3 line") {
  auto liu = [](double s) { return bound_liu(s); };
  double r1 = crossover([](double s) { return phi(s - 1.0); }, liu, 1.03, 1.04);
  CHECK(r1 > 1.035);
  CHECK(r1 < 1.040);
  CHECK(r1 == Catch::Approx(1.0373).margin(2e-3));

  double r2 = crossover([](double s) { return chi(s - 1.0); }, liu, 1.04, 1.06);
  CHECK(r2 > 1.050);
  CHECK(r2 < 1.060);

  CHECK_THROWS_AS(crossover([](double s) { return s + 1.0; }, [](double s) { return s; },
                            0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("a perturbed phi coefficient breaks the identity check") {
  // mutation test: the 1e-12 identity gate must catch a wrong coefficient
  auto phi_bad = [](double u) {
    double num = 29 + 19.0001 * u + 6 * u * u + 8 * u * u * u - 8 * u * u * u * u;
    double den = 42 - 15 * u + 30 * u * u - 12 * u * u * u;
    return num / den;
  };
  double worst = 0.0;
  for (int k = 0; k <= 100; ++k) {
    double u = 0.04 * k / 100.0;
    double eta = corollary_eta(u, Variant::c142);
    worst = std::max(worst, std::abs(phi_bad(u) - (2 * (1 + u) / 3 + eta)));
  }
  CHECK(worst > 1e-12);
}

TEST_CASE("bound params ell_prime") {
  auto p = bound_params(0.0);
  CHECK(p.ell_prime(100, Variant::c142) == 71);  // floor(5/7 * 100)
  CHECK(p.ell_prime(100, Variant::c257) == 73);  // floor(14/19 * 100)
  CHECK(p.xi_phi > 2.0 / 3.0);
  CHECK(p.xi_phi < 1.0);
}

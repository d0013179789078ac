#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "falconer/io.hpp"
#include "falconer/measure.hpp"

using namespace falconer;

namespace {

DyadicMeasure uniform_measure(int T, int dim, int depth) {
  std::map<CubeIndex, double> leaves;
  std::uint64_t n = 1ull << (depth * T);
  double m = 1.0 / std::pow(2.0, dim * depth * T);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (dim == 1) {
      leaves[{i, 0}] = m;
    } else {
      for (std::uint64_t j = 0; j < n; ++j) leaves[{i, j}] = m;
    }
  }
  return DyadicMeasure(Params{T, 0.1, 0.1}, dim, depth, std::move(leaves));
}

DyadicMeasure chain_measure(int T, int dim, int depth, CubeIndex leaf = {0, 0}) {
  return DyadicMeasure(Params{T, 0.1, 0.1}, dim, depth, {{leaf, 1.0}});
}

}  // namespace

TEST_CASE("cube_of_point basics") {
  auto q = cube_of_point(std::array{0.0, 0.0}, 1, 1);
  CHECK(q.index == CubeIndex{0, 0});
  CHECK(q.side() == 0.5);

  auto q2 = cube_of_point(std::array{0.75, 0.25}, 1, 1);
  CHECK(q2.index == CubeIndex{1, 0});

  auto q3 = cube_of_point(std::array{0.3, 0.9}, 1, 2);
  CHECK(q3.index == CubeIndex{1, 3});
  CHECK(q3.side() == 0.25);

  CHECK_THROWS_AS(cube_of_point(std::array{1.0, 0.0}, 1, 1), std::domain_error);
  CHECK_THROWS_AS(cube_of_point(std::array{-0.1, 0.0}, 1, 1), std::domain_error);
}

TEST_CASE("cube_of_point nesting") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::array<double, 2> x{u(rng), u(rng)};
    int T = 1 + static_cast<int>(rng() % 3);
    int j = static_cast<int>(rng() % 5);
    auto parent = cube_of_point(x, j, T);
    auto child = cube_of_point(x, j + 1, T);
    CHECK(child.ancestor(j) == parent);
  }
}

TEST_CASE("coarsen identity, root, idempotence") {
  auto mu = uniform_measure(1, 2, 3);
  auto same = coarsen(mu, 3);
  CHECK(same.leaves() == mu.leaves());

  auto root = coarsen(mu, 0);
  REQUIRE(root.leaves().size() == 1);
  CHECK(root.leaves().begin()->second == Catch::Approx(1.0));

  auto a = coarsen(mu, 2);
  auto b1 = coarsen(a, 1);
  auto b2 = coarsen(mu, 1);
  CHECK(b1.leaves() == b2.leaves());

  CHECK_THROWS_AS(coarsen(mu, 4), std::invalid_argument);
}

TEST_CASE("coarsen agrees with mu on coarse cubes") {
  auto mu = uniform_measure(2, 2, 2);
  auto c = coarsen(mu, 1);
  for (auto& [idx, m] : c.leaves()) CHECK(m == Catch::Approx(mu.mass(1, idx)));
}

TEST_CASE("regularize points and sets") {
  auto single = regularize_points<2>({{0.3, 0.4}}, 2, 1);
  CHECK(single.size() == 1);

  // two points in the same leaf collapse
  auto two = regularize_points<2>({{0.30, 0.40}, {0.31, 0.41}}, 1, 1);
  CHECK(two.size() == 1);

  auto full = uniform_measure(1, 2, 2);
  auto sup = dyadic_support(full);
  CHECK(sup.size() == 16);
  auto coarse = regularize_set(sup, 1);
  CHECK(coarse.size() == 4);
  auto fine = regularize_set(coarse, 2);
  CHECK(fine.size() == 16);
}

TEST_CASE("regularize_points in one dimension") {
  auto one = regularize_points<1>({{0.3}}, 3, 1);
  CHECK(one.size() == 1);
  CHECK(one.dim() == 1);
  auto two = regularize_points<1>({{0.1}, {0.9}}, 2, 1);
  CHECK(two.size() == 2);
  CHECK(box_count(two, 0) == 1);
}

TEST_CASE("restrict_normalize") {
  Params p{1, 0.1, 0.1};
  DyadicMeasure mu(p, 2, 1,
                   {{{0, 0}, 0.25}, {{0, 1}, 0.25}, {{1, 0}, 0.25}, {{1, 1}, 0.25}});
  DyadicSet a(1, 2, 1, {{0, 0}, {1, 1}});
  auto r = restrict_normalize(mu, a);
  CHECK(r.mass(1, {0, 0}) == Catch::Approx(0.5));
  CHECK(r.mass(1, {1, 1}) == Catch::Approx(0.5));

  auto full = restrict_normalize(mu, dyadic_support(mu));
  CHECK(full.leaves() == mu.leaves());

  DyadicMeasure mu3(p, 1, 2, {{{0, 0}, 0.1}, {{1, 0}, 0.3}, {{2, 0}, 0.6}});
  DyadicSet first_two(1, 1, 2, {{0, 0}, {1, 0}});
  auto r3 = restrict_normalize(mu3, first_two);
  CHECK(r3.mass(2, {0, 0}) == Catch::Approx(0.25));
  CHECK(r3.mass(2, {1, 0}) == Catch::Approx(0.75));
  double total = 0.0;
  for (auto& [idx, m] : r3.leaves()) total += m;
  CHECK(std::abs(total - 1.0) <= 1e-15);  // renormalized arithmetic

  DyadicSet off(1, 1, 2, {{3, 0}});
  CHECK_THROWS_AS(restrict_normalize(mu3, off), std::domain_error);
  DyadicSet wrong_depth(1, 1, 1, {{0, 0}});
  CHECK_THROWS_AS(restrict_normalize(mu3, wrong_depth), std::invalid_argument);
}

TEST_CASE("dyadic_support") {
  CHECK(dyadic_support(uniform_measure(1, 2, 2)).size() == 16);
  CHECK(dyadic_support(chain_measure(1, 2, 3)).size() == 1);
  // zero-mass leaves are dropped at construction
  Params p{1, 0.1, 0.1};
  DyadicMeasure mu(p, 1, 1, {{{0, 0}, 1.0}, {{1, 0}, 0.0}});
  CHECK(dyadic_support(mu).size() == 1);
}

TEST_CASE("box_count") {
  // full interval in dim 1
  std::set<CubeIndex> all;
  for (std::uint64_t i = 0; i < 8; ++i) all.insert({i, 0});
  DyadicSet full(1, 1, 3, std::move(all));
  CHECK(box_count(full, 3) == 8);
  CHECK(box_count(full, 0) == 1);

  // one point covered at several levels
  for (int ell = 0; ell < 6; ++ell)
    CHECK(regularize_points<2>({{0.371, 0.82}}, ell, 1).size() == 1);

  // two leaves sharing a parent
  DyadicSet sibs(1, 2, 2, {{0, 0}, {0, 1}});
  CHECK(box_count(sibs, 1) == 1);
}

TEST_CASE("box_count monotone in level") {
  std::mt19937_64 rng(11);
  std::set<CubeIndex> leaves;
  for (int i = 0; i < 40; ++i) leaves.insert({rng() % 16, rng() % 16});
  DyadicSet a(1, 2, 4, std::move(leaves));
  for (int ell = 0; ell < 4; ++ell) {
    auto lo = box_count(a, ell);
    auto hi = box_count(a, ell + 1);
    CHECK(lo <= hi);
    CHECK(hi <= (1ull << (2 * 1)) * lo);
  }
}

TEST_CASE("measure invariants") {
  auto mu = uniform_measure(2, 2, 2);
  double total = 0.0;
  for (auto& [idx, m] : mu.leaves()) total += m;
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(mu.consistent());

  CHECK_THROWS_AS(DyadicMeasure(Params{1, 0.1, 0.1}, 2, 1, {{{0, 0}, 0.5}}),
                  std::invalid_argument);  // masses must sum to 1
  CHECK_THROWS_AS(DyadicMeasure(Params{1, 0.1, 0.1}, 2, 1, {{{0, 0}, 1.5}, {{1, 0}, -0.5}}),
                  std::invalid_argument);  // nonnegative
  CHECK_THROWS_AS(DyadicMeasure(Params{1, 0.1, 0.1}, 2, 1, {{{2, 0}, 1.0}}),
                  std::invalid_argument);  // index range
}

TEST_CASE("measure and set files round-trip bit-exactly") {
  std::mt19937_64 rng(23);
  std::map<CubeIndex, double> leaves;
  double total = 0.0;
  for (int i = 0; i < 37; ++i) {
    double m = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    leaves[{rng() % 16, rng() % 16}] += m;
    total += m;
  }
  for (auto& [idx, m] : leaves) m /= total;
  // force an exact unit sum the same way the constructor does
  DyadicMeasure mu(Params{2, 0.1, 0.1}, 2, 2, leaves);

  std::stringstream ss;
  write_measure(ss, mu);
  auto back = read_measure(ss);
  REQUIRE(back.leaves().size() == mu.leaves().size());
  for (auto& [idx, m] : mu.leaves()) {
    REQUIRE(back.leaves().count(idx) == 1);
    CHECK(back.leaves().at(idx) == m);  // bit-exact
  }
  CHECK(back.T() == mu.T());
  CHECK(back.depth() == mu.depth());

  auto sup = dyadic_support(mu);
  std::stringstream s2;
  write_set(s2, sup);
  auto sup2 = read_set(s2);
  CHECK(sup2.leaves() == sup.leaves());
  CHECK(sup2.dim() == sup.dim());
}

#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "falconer/bounds.hpp"
#include "falconer/distance.hpp"
#include "falconer/drop.hpp"
#include "falconer/energy.hpp"
#include "falconer/generators.hpp"
#include "falconer/io.hpp"
#include "falconer/regularity.hpp"

namespace falconer {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace verify_detail {

inline DyadicMeasure random_measure(int T, int depth, std::mt19937_64& rng,
                                    int max_children = 6) {
  std::map<CubeIndex, double> leaves;
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::uint64_t nch = 1ull << (2 * T);
  auto rec = [&](auto&& self, CubeIndex idx, int level, double mass) -> void {
    if (level == depth) {
      leaves[idx] += mass;
      return;
    }
    int k = 1 + static_cast<int>(rng() % std::min<std::uint64_t>(max_children, nch));
    std::vector<std::uint64_t> cells(nch);
    std::iota(cells.begin(), cells.end(), 0);
    std::shuffle(cells.begin(), cells.end(), rng);
    cells.resize(k);
    std::vector<double> ws(k);
    double s = 0.0;
    for (auto& x : ws) s += (x = w(rng));
    for (int i = 0; i < k; ++i) {
      std::uint64_t c = cells[i];
      self(self, {(idx[0] << T) | (c >> T), (idx[1] << T) | (c & ((1ull << T) - 1))},
           level + 1, mass * ws[i] / s);
    }
  };
  rec(rec, {0, 0}, 0, 1.0);
  return DyadicMeasure(Params{T, 0.1, 0.1}, 2, depth, std::move(leaves));
}

inline DyadicSet full_square(int T, int depth) {
  std::set<CubeIndex> leaves;
  std::uint64_t n = 1ull << (depth * T);
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < n; ++j) leaves.insert({i, j});
  return DyadicSet(T, 2, depth, std::move(leaves));
}

inline DyadicSet cantor_half(int depth) {
  std::set<CubeIndex> leaves{{0, 0}};
  for (int j = 0; j < depth; ++j) {
    std::set<CubeIndex> next;
    for (auto& idx : leaves) {
      next.insert({idx[0] * 4 + 0, 0});
      next.insert({idx[0] * 4 + 3, 0});
    }
    leaves = std::move(next);
  }
  return DyadicSet(2, 1, depth, std::move(leaves));
}

template <typename Fn>
CriterionResult timed(int id, const std::string& name, Fn&& fn) {
  CriterionResult res;
  res.id = id;
  res.name = name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    auto [pass, detail] = fn();
    res.pass = pass;
    res.detail = detail;
  } catch (const std::exception& e) {
    res.pass = false;
    res.detail = std::string("exception: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

inline std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

}  // namespace verify_detail

/// Frozen constants for the empirically calibrated criteria. The energy
/// constants started at C_E = 8, C_T = 16 and were re-calibrated once
/// against the observed worst gap (~4.1, flat in ell) to C_E = 1, C_T = 6,
/// then frozen.
struct VerifyConfig {
  double energy_C_E = 1.0;  // per-level slack in the energy agreement bound
  double energy_C_T = 6.0;  // additive slack in the energy agreement bound
  double sigmatof_tau = 0.002;
  double sigmatof_zeta = 0.0025;
  double sigmatof_slack = 1.0;  // coefficient of log2(ell)/ell
  long falsifier_trials = 10000;
  std::uint64_t seed = 42;
};

inline std::vector<CriterionResult> run_acceptance(const VerifyConfig& cfg = {}) {
  using verify_detail::timed;
  using verify_detail::fmt;
  std::vector<CriterionResult> out;

  out.push_back(timed(1, "exact constants phi(0)=29/42, chi(0)=40/57", [&] {
    bool ok = phi(Rational(0)) == Rational(29, 42) && chi(Rational(0)) == Rational(40, 57);
    return std::pair{ok, std::string("rational arithmetic, zero tolerance")};
  }));

  out.push_back(timed(2, "bound identities at 1e-12 on 100-point grids", [&] {
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k) {
      double u = 0.04 * k / 100.0;
      auto p = bound_params(u);
      worst = std::max(worst, std::abs(p.phi - (p.xi_phi - (1 - 2 * u) * p.eta_phi)));
      worst = std::max(worst, std::abs(p.phi - (2 * (1 + u) / 3 + p.eta_phi)));
    }
    for (int k = 0; k <= 100; ++k) {
      double u = 0.06 * k / 100.0;
      auto p = bound_params(u);
      worst = std::max(worst, std::abs(p.chi - (p.xi_chi - (1 - 4 * u) * p.eta_chi)));
      worst = std::max(worst, std::abs(p.chi - (2 * (1 + u) / 3 + p.eta_chi)));
    }
    return std::pair{worst <= 1e-12, "max residual " + fmt(worst, 3)};
  }));

  out.push_back(timed(3, "crossovers against 4s/3 - 2/3", [&] {
    auto liu = [](double s) { return bound_liu(s); };
    double r1 = crossover([](double s) { return phi(s - 1.0); }, liu, 1.03, 1.04);
    double r2 = crossover([](double s) { return chi(s - 1.0); }, liu, 1.04, 1.06);
    bool ok = r1 > 1.035 && r1 < 1.040 && r2 > 1.050 && r2 < 1.060;
    return std::pair{ok, "phi/liu at s=" + fmt(r1, 8) + ", chi/liu at s=" + fmt(r2, 8)};
  }));

  out.push_back(timed(4, "corollary checkpoints on 50-point grids", [&] {
    int fails = 0;
    double worst_res = 0.0;
    for (int k = 0; k < 50; ++k) {
      auto r1 = corollary_checkpoints(0.04 * k / 49.0, Variant::c142);
      auto r2 = corollary_checkpoints(0.06 * k / 49.0, Variant::c257);
      if (!r1.all_pass()) ++fails;
      if (!r2.all_pass()) ++fails;
      worst_res = std::max({worst_res, r1.xi_equality_residual, r2.xi_equality_residual});
    }
    return std::pair{fails == 0 && worst_res <= 1e-12,
                     "failures " + std::to_string(fails) + ", worst xi-equality residual " +
                         fmt(worst_res, 3)};
  }));

  out.push_back(timed(5, "tent total drop within 1% of (1-2u)/3", [&] {
    double worst_rel = 0.0;
    for (double u : {0.0, 0.1, 0.3}) {
      double exact = (1.0 - 2.0 * u) / 3.0;
      double got = total_drop_inf(tent(u), 32, 0x1p-20).value;
      worst_rel = std::max(worst_rel, std::abs(got - exact) / exact);
    }
    return std::pair{worst_rel <= 0.01, "worst relative error " + fmt(worst_rel, 4)};
  }));

  out.push_back(timed(6, "M_tau DP equals exhaustive enumeration (500 cases)", [&] {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int mismatches = 0;
    for (int t = 0; t < 500; ++t) {
      int L = 1 + static_cast<int>(rng() % 12);
      std::vector<double> sig(L);
      for (auto& x : sig) x = u(rng);
      Seq s(sig);
      for (double tau : {0.1, 0.3})
        if (M_tau(s, tau).value != M_tau_bruteforce(s, tau)) ++mismatches;
    }
    return std::pair{mismatches == 0, "mismatches " + std::to_string(mismatches)};
  }));

  out.push_back(timed(7, "regular decomposition properties on 100 random measures", [&] {
    std::mt19937_64 rng(cfg.seed + 7);
    const double eps = 0.25;
    int fails = 0;
    for (int t = 0; t < 100; ++t) {
      int T = 1 + static_cast<int>(rng() % 3);
      int depth = 1 + static_cast<int>(rng() % 4);
      auto mu = verify_detail::random_measure(T, depth, rng);
      double m = static_cast<double>(T) * depth;
      double threshold = std::exp2(-eps * m) / std::pow(2.0 * 2 * T + 2, depth);
      auto cls = decompose(mu, eps);
      double covered = 0.0;
      bool ok = true;
      for (auto& c : cls) {
        covered += c.mass;
        if (c.mass < threshold - 1e-15) ok = false;
        if (!is_regular(c.conditional, c.sigma)) ok = false;
        if (!c.sigma.in_unit_band(1e-9)) ok = false;
      }
      if (covered < 1.0 - std::exp2(-eps * m) - 1e-12) ok = false;
      if (!ok) ++fails;
    }
    return std::pair{fails == 0, "failing measures " + std::to_string(fails) + "/100"};
  }));

  out.push_back(timed(8, "discrete vs regular-formula energy on 50 measures", [&] {
    std::mt19937_64 rng(cfg.seed + 8);
    const std::vector<double> grid{-1.0, -0.5, 0.0, 0.5};
    double worst_gap = 0.0;
    int fails = 0;
    for (int t = 0; t < 50; ++t) {
      int ell = 2 + static_cast<int>(rng() % 5);
      std::vector<double> sig;
      double leaves = 1.0;
      for (int j = 0; j < ell; ++j) {
        double s;
        do {
          s = grid[rng() % grid.size()];
        } while (leaves * std::exp2(2.0 * (s + 1.0)) > 4096.0);
        leaves *= std::exp2(2.0 * (s + 1.0));
        sig.push_back(s);
      }
      auto mu = cantor_regular(2, ell, Seq(sig), rng());
      double s_exp = 1.05 + 0.4 * static_cast<double>(rng() % 100) / 100.0;
      double gap = std::abs(riesz_energy_discrete(mu, s_exp).log2_value -
                            riesz_energy_regular_log(Seq(sig), s_exp, 2));
      double budget = cfg.energy_C_E * (ell + 1) + cfg.energy_C_T;
      worst_gap = std::max(worst_gap, gap / budget);
      if (gap > budget) ++fails;
    }
    return std::pair{fails == 0, "worst gap/budget ratio " + fmt(worst_gap, 4)};
  }));

  out.push_back(timed(9, "box-counting dimension sanity", [&] {
    auto square = verify_detail::full_square(1, 2);
    std::vector<std::pair<int, std::size_t>> counts;
    for (int ell = 4; ell <= 10; ++ell)
      counts.push_back({ell, pinned_distance_cover(square, {0.0, 0.0}, ell).count()});
    double slope_sq = box_dimension_estimate(counts, 1);

    auto cantor = verify_detail::cantor_half(6);
    std::vector<std::pair<int, std::size_t>> cc;
    for (int ell = 0; ell <= 6; ++ell) cc.push_back({ell, box_count(cantor, ell)});
    double slope_c = box_dimension_estimate(cc, 2);

    bool ok = std::abs(slope_sq - 1.0) <= 0.05 && std::abs(slope_c - 0.5) <= 0.05;
    return std::pair{ok, "square slope " + fmt(slope_sq, 4) + ", cantor slope " + fmt(slope_c, 4)};
  }));

  out.push_back(timed(10, "separated squares on 50 frostman measures + adversarial chain", [&] {
    std::mt19937_64 rng(cfg.seed + 10);
    int fails = 0;
    for (int t = 0; t < 50; ++t) {
      auto mu = random_frostman(2, 4, 1.2, rng());
      double L = frostman_constant(mu, 1.2);
      try {
        auto res = separated_squares(mu, 1.2, L);
        double floor_mass = std::pow(std::max(2.0, L), -6.0);
        if (res.mass1 < floor_mass || res.mass2 < floor_mass) ++fails;
        if (res.q1.dist_to(res.q2) < res.q.side / 100.0 - 1e-15) ++fails;
      } catch (const std::exception&) {
        ++fails;
      }
    }
    bool chain_ok = false;
    try {
      DyadicMeasure chain(Params{2, 0.1, 0.1}, 2, 3, {{{11, 50}, 1.0}});
      separated_squares(chain, 1.2, 100.0);
    } catch (const ResolutionExhausted&) {
      chain_ok = true;
    }
    return std::pair{fails == 0 && chain_ok,
                     "failures " + std::to_string(fails) + "/50, chain " +
                         (chain_ok ? "resolution-exhausted as required" : "DID NOT ERROR")};
  }));

  out.push_back(timed(11, "falsification suites (dichotomy + sequence-to-function)", [&] {
    long bad = 0, violations = 0;
    for (auto v : {Variant::c142, Variant::c257}) {
      auto rep = dichotomy_falsifier(0.02, v, cfg.falsifier_trials, cfg.seed);
      bad += rep.drop_inconsistencies;
      violations += rep.envelope_violations;
    }
    // random suite for the M_tau / total-drop transfer inequality
    std::mt19937_64 rng(cfg.seed + 11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int transfer_fails = 0;
    for (int t = 0; t < 200; ++t) {
      std::size_t ell = 40 + rng() % 40;
      std::vector<double> sig(ell);
      for (auto& x : sig) x = u(rng);
      Seq s(sig);
      // entries in [-1,1] keep prefix sums inside [-j, j], so the band
      // holds with gamma = -1, Gamma = 1 for any zeta
      auto f = sigma_to_f(s, -1.0, 1.0, cfg.sigmatof_zeta);
      if (!check_sigmatof_inequality(s, cfg.sigmatof_tau, cfg.sigmatof_zeta, f,
                                     cfg.sigmatof_slack))
        ++transfer_fails;
    }
    bool ok = bad == 0 && transfer_fails == 0;
    return std::pair{ok, "drop inconsistencies " + std::to_string(bad) + " (" +
                             std::to_string(violations) + " envelope violations probed), " +
                             "transfer failures " + std::to_string(transfer_fails) + "/200"};
  }));

  return out;
}

/// Prints one pass/fail line per criterion; returns true when all pass.
inline bool print_acceptance(std::ostream& os, const std::vector<CriterionResult>& results) {
  bool all = true;
  for (auto& r : results) {
    all = all && r.pass;
    os << (r.pass ? "PASS" : "FAIL") << "  [" << std::setw(2) << r.id << "] " << r.name
       << "  (" << std::fixed << std::setprecision(2) << r.seconds << "s)\n      " << r.detail
       << "\n";
    os.unsetf(std::ios::fixed);
  }
  os << (all ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << " (" << results.size()
     << " total)\n";
  return all;
}

}  // namespace falconer

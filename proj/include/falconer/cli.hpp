#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "falconer/bounds.hpp"
#include "falconer/distance.hpp"
#include "falconer/drop.hpp"
#include "falconer/energy.hpp"
#include "falconer/generators.hpp"
#include "falconer/io.hpp"
#include "falconer/report.hpp"
#include "falconer/verify.hpp"

namespace falconer::cli {

namespace detail {

inline std::array<double, 2> parse_pin(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("pin must be given as X,Y");
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

inline std::pair<int, int> parse_levels(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) {
    int v = std::stoi(s);
    return {v, v};
  }
  return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
}

inline Seq parse_sigma_arg(const std::string& list, const std::string& file) {
  if (!file.empty()) return load_file(file, [](std::istream& in) { return read_seq(in); });
  if (std::filesystem::exists(list))
    return load_file(list, [](std::istream& in) { return read_seq(in); });
  try {
    std::vector<double> xs;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) xs.push_back(std::stod(tok));
    if (xs.empty()) throw std::invalid_argument("empty");
    return Seq(std::move(xs));
  } catch (const std::exception&) {
    throw std::runtime_error("--sigma: '" + list + "' is neither a readable file nor a comma list");
  }
}

// Writes to the file when given, else to stdout.
struct Sink {
  std::string path;
  std::ofstream file;
  std::ostream& get() {
    if (path.empty()) return std::cout;
    if (!file.is_open()) {
      file.open(path);
      if (!file) throw std::runtime_error("cannot open for writing: " + path);
    }
    return file;
  }
};

inline Variant parse_variant(const std::string& v) {
  if (v == "c142") return Variant::c142;
  if (v == "c257") return Variant::c257;
  throw std::invalid_argument("variant must be c142 or c257");
}

}  // namespace detail

/// Entry point shared by the binary and the tests. Returns the process
/// exit code: 0 success, 1 argument or domain error, 2 verification
/// failure.
inline int dispatch(std::vector<std::string> args) {
  CLI::App app{"falconer-lab: dyadic-measure decomposition, drop combinatorics, "
               "distance-set bounds"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default(true);

  std::string format = "csv";
  app.add_option("--format", format, "table output format: csv, json or svg (plots)")
      ->check(CLI::IsMember({"csv", "json", "svg"}));

  int exit_code = 0;

  // ---- generate ----------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "construct test measures, sets and functions");
  gen->require_subcommand(1);
  struct {
    int T = 2, ell = 3;
    double s = 1.2, u = 0.0;
    std::uint64_t seed = 1;
    std::string sigma, sigma_file, out;
  } g;

  auto* gcantor = gen->add_subcommand("cantor", "sigma-regular Cantor measure");
  gcantor->add_option("--T", g.T);
  gcantor->add_option("--ell", g.ell);
  gcantor->add_option("--sigma", g.sigma, "comma-separated sigma entries");
  gcantor->add_option("--sigma-file", g.sigma_file);
  gcantor->add_option("--seed", g.seed);
  gcantor->add_option("--out", g.out);
  gcantor->callback([&] {
    auto mu = cantor_regular(g.T, g.ell, detail::parse_sigma_arg(g.sigma, g.sigma_file), g.seed);
    detail::Sink sink{g.out};
    write_measure(sink.get(), mu);
  });

  auto* gsep = gen->add_subcommand("separated", "well-separated square configuration");
  gsep->add_option("--T", g.T);
  gsep->add_option("--ell", g.ell);
  gsep->add_option("--s", g.s);
  gsep->add_option("--out", g.out);
  gsep->callback([&] {
    auto set = well_separated(g.T, g.ell, g.s);
    detail::Sink sink{g.out};
    write_set(sink.get(), set);
  });

  auto* gfrost = gen->add_subcommand("frostman", "random measure with mass caps");
  gfrost->add_option("--T", g.T);
  gfrost->add_option("--ell", g.ell);
  gfrost->add_option("--s", g.s);
  gfrost->add_option("--seed", g.seed);
  gfrost->add_option("--out", g.out);
  gfrost->callback([&] {
    auto mu = random_frostman(g.T, g.ell, g.s, g.seed);
    detail::Sink sink{g.out};
    write_measure(sink.get(), mu);
  });

  auto* gtent = gen->add_subcommand("tent", "extremal tent function");
  gtent->add_option("--u", g.u);
  gtent->add_option("--out", g.out);
  gtent->callback([&] {
    detail::Sink sink{g.out};
    write_plfunction(sink.get(), tent(g.u));
  });

  // ---- decompose ---------------------------------------------------------
  struct {
    std::string measure, out;
    double epsilon = 0.25;
    double min_class_mass = -1.0;
  } d;
  auto* dec = app.add_subcommand("decompose", "pigeonhole a measure into regular classes");
  dec->add_option("--measure", d.measure)->required();
  dec->add_option("--epsilon", d.epsilon);
  dec->add_option("--min-class-mass", d.min_class_mass, "override the class discard threshold");
  dec->add_option("--out", d.out);
  dec->callback([&] {
    auto mu = load_file(d.measure, [](std::istream& in) { return read_measure(in); });
    std::optional<double> override_mass;
    if (d.min_class_mass >= 0.0) override_mass = d.min_class_mass;
    auto classes = decompose(mu, d.epsilon, override_mass);
    detail::Sink sink{d.out};
    auto& os = sink.get();
    os << "classes " << classes.size() << "\n";
    for (std::size_t i = 0; i < classes.size(); ++i) {
      os << "class " << i << "\n";
      os << "  mass " << CsvTable::num(classes[i].mass) << "\n";
      os << "  leaves " << classes[i].set.size() << "\n";
      os << "  sigma";
      for (double s : classes[i].sigma.entries()) os << ' ' << CsvTable::num(s);
      os << "\n";
    }
  });

  // ---- energy ------------------------------------------------------------
  struct {
    std::string measure, method = "discrete", out;
    double s = 1.2, scale = 1.0;
  } e;
  auto* en = app.add_subcommand("energy", "Riesz s-energy of a measure");
  en->add_option("--measure", e.measure)->required();
  en->add_option("--s", e.s)->required();
  en->add_option("--method", e.method)->check(CLI::IsMember({"discrete", "regular"}));
  en->add_option("--scale", e.scale, "length rescaling of all distances");
  en->add_option("--out", e.out);
  en->callback([&] {
    auto mu = load_file(e.measure, [](std::istream& in) { return read_measure(in); });
    EnergyReport rep;
    if (e.method == "discrete") {
      rep = riesz_energy_discrete(mu, e.s, e.scale);
    } else {
      auto classes = decompose(mu, 0.25);
      if (classes.empty()) throw std::runtime_error("energy: no regular class found");
      rep = riesz_energy_regular(classes.front().sigma, e.s, mu.T());
    }
    detail::Sink sink{e.out};
    auto& os = sink.get();
    os << "s " << CsvTable::num(rep.s) << "\n";
    os << "method " << rep.method << "\n";
    os << "value " << CsvTable::num(rep.value) << "\n";
    os << "log2_value " << CsvTable::num(rep.log2_value) << "\n";
  });

  // ---- drop --------------------------------------------------------------
  auto* drop_cmd = app.add_subcommand("drop", "prefix-drop combinatorics");
  drop_cmd->require_subcommand(1);
  struct {
    std::string sigma, sigma_file, f_file, out, variant = "c142";
    double tau = 0.1, delta = 0x1p-20, zeta = 0.01, gamma = -1.0, Gamma = 1.0;
    double u = 0.0, eta = 1.0 / 42.0, slack = 4.0;
    int grid = 32, samples = 200;
    long trials = 1000;
    std::uint64_t seed = 42;
    bool check = false;
  } dr;

  auto* ds = drop_cmd->add_subcommand("s", "total drop S(sigma)");
  ds->add_option("--sigma", dr.sigma);
  ds->add_option("--sigma-file", dr.sigma_file);
  ds->callback([&] {
    std::cout << "S " << CsvTable::num(drop_S(detail::parse_sigma_arg(dr.sigma, dr.sigma_file)))
              << "\n";
  });

  auto* dm = drop_cmd->add_subcommand("mtau", "M_tau via partition DP");
  dm->add_option("--sigma", dr.sigma);
  dm->add_option("--sigma-file", dr.sigma_file);
  dm->add_option("--tau", dr.tau);
  dm->callback([&] {
    auto res = M_tau(detail::parse_sigma_arg(dr.sigma, dr.sigma_file), dr.tau);
    std::cout << "M_tau " << CsvTable::num(res.value) << "\npartition";
    for (long p : res.partition.points) std::cout << ' ' << p;
    std::cout << "\n";
  });

  auto* dt = drop_cmd->add_subcommand("totaldrop", "upper approximation of T(f)");
  dt->add_option("--f", dr.f_file)->required();
  dt->add_option("--grid", dr.grid);
  dt->add_option("--delta", dr.delta);
  dt->callback([&] {
    auto f = load_file(dr.f_file, [](std::istream& in) { return read_plfunction(in); });
    auto td = total_drop_inf(f, dr.grid, dr.delta);
    std::cout << "upper_value " << CsvTable::num(td.value) << "\n";
    std::cout << "tail_bound " << CsvTable::num(td.tail_bound) << "\n";
    std::cout << "tail_valid " << (td.tail_valid ? "true" : "false") << "\n";
  });

  auto* dsf = drop_cmd->add_subcommand("sigmatof", "sequence-to-function construction");
  dsf->add_option("--sigma", dr.sigma);
  dsf->add_option("--sigma-file", dr.sigma_file);
  dsf->add_option("--gamma", dr.gamma);
  dsf->add_option("--Gamma", dr.Gamma);
  dsf->add_option("--zeta", dr.zeta);
  dsf->add_option("--out", dr.out);
  dsf->add_flag("--check", dr.check, "also verify the M_tau transfer inequality");
  dsf->add_option("--tau", dr.tau);
  dsf->add_option("--slack", dr.slack);
  dsf->callback([&] {
    auto sigma = detail::parse_sigma_arg(dr.sigma, dr.sigma_file);
    auto f = sigma_to_f(sigma, dr.gamma, dr.Gamma, dr.zeta);
    detail::Sink sink{dr.out};
    write_plfunction(sink.get(), f);
    if (dr.check) {
      bool ok = check_sigmatof_inequality(sigma, dr.tau, dr.zeta, f, dr.slack);
      std::cout << "transfer_inequality " << (ok ? "holds" : "VIOLATED") << "\n";
      if (!ok) exit_code = 2;
    }
  });

  auto* denv = drop_cmd->add_subcommand("envelope", "stability lower envelope");
  denv->add_option("--u", dr.u);
  denv->add_option("--eta", dr.eta);
  denv->add_option("--samples", dr.samples);
  denv->add_option("--out", dr.out);
  denv->callback([&] {
    StabilityEnvelope env(dr.u, dr.eta);
    detail::Sink sink{dr.out};
    bool svg = format == "svg" || (!dr.out.empty() && dr.out.size() > 4 &&
                                   dr.out.substr(dr.out.size() - 4) == ".svg");
    if (svg) {
      SvgPlot plot("stability envelope (u=" + CsvTable::num(dr.u) +
                       ", eta=" + CsvTable::num(dr.eta) + ")",
                   "x", "lower bound on f");
      std::vector<std::array<double, 2>> pts;
      for (int k = 0; k <= dr.samples; ++k) {
        double x = static_cast<double>(k) / dr.samples;
        pts.push_back({x, env(x)});
      }
      plot.add_series("envelope", pts);
      plot.write(sink.get());
    } else {
      CsvTable table({"x", "envelope"});
      for (int k = 0; k <= dr.samples; ++k) {
        double x = static_cast<double>(k) / dr.samples;
        table.add_row_values({x, env(x)});
      }
      if (format == "json")
        table.write_json(sink.get());
      else
        table.write(sink.get());
    }
  });

  auto* dchk = drop_cmd->add_subcommand("checkpoints", "corollary checkpoint verification");
  dchk->add_option("--u", dr.u)->required();
  dchk->add_option("--variant", dr.variant)->check(CLI::IsMember({"c142", "c257"}));
  dchk->callback([&] {
    auto rep = corollary_checkpoints(dr.u, detail::parse_variant(dr.variant));
    std::cout << "eta " << CsvTable::num(rep.eta) << "\nxi " << CsvTable::num(rep.xi)
              << "\nt1 " << CsvTable::num(rep.t1) << "\n";
    std::cout << "guards eta<" << CsvTable::num(rep.eta_guard) << ":" << (rep.eta_ok ? "ok" : "FAIL")
              << " t1>=1/3:" << (rep.t1_ok ? "ok" : "FAIL")
              << " 2t1<xi<=1:" << (rep.xi_ok ? "ok" : "FAIL") << "\n";
    for (int i = 0; i < 3; ++i)
      std::cout << "checkpoint x=" << CsvTable::num(rep.check_x[i]) << " envelope "
                << CsvTable::num(rep.envelope_at[i]) << " target "
                << CsvTable::num(rep.target_at[i]) << " "
                << (rep.checkpoint_ok[i] ? "ok" : "FAIL") << "\n";
    std::cout << "xi_equality_residual " << CsvTable::num(rep.xi_equality_residual) << " "
              << (rep.xi_equality_ok ? "ok" : "FAIL") << "\n";
    if (!rep.all_pass()) exit_code = 2;
  });

  auto* dfal = drop_cmd->add_subcommand("falsify", "randomized dichotomy falsifier");
  dfal->add_option("--u", dr.u)->required();
  dfal->add_option("--variant", dr.variant)->check(CLI::IsMember({"c142", "c257"}));
  dfal->add_option("--trials", dr.trials);
  dfal->add_option("--seed", dr.seed);
  dfal->callback([&] {
    auto rep = dichotomy_falsifier(dr.u, detail::parse_variant(dr.variant), dr.trials, dr.seed);
    std::cout << "trials " << rep.trials << "\n";
    std::cout << "envelope_violations " << rep.envelope_violations << "\n";
    std::cout << "drop_inconsistencies " << rep.drop_inconsistencies << "\n";
    std::cout << "threshold " << CsvTable::num(rep.threshold) << "\n";
    std::cout << "tolerance " << CsvTable::num(rep.tolerance) << "\n";
    if (rep.drop_inconsistencies > 0) exit_code = 2;
  });

  // ---- bounds ------------------------------------------------------------
  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form bound functions");
  bounds_cmd->require_subcommand(1);
  struct {
    double u = 0.0, s_from = 1.001, s_to = 1.06, step = 0.001;
    std::string out, pair = "phi-liu";
  } b;

  auto* beval = bounds_cmd->add_subcommand("eval", "evaluate all derived quantities at u");
  beval->add_option("--u", b.u)->required();
  beval->callback([&] {
    if (b.u < 0.0 || b.u > 0.06)
      std::cerr << "warning: u outside the stated ranges (phi: [0,0.04], chi: [0,0.06]); "
                   "values are extrapolations\n";
    else if (b.u > 0.04)
      std::cerr << "warning: u outside phi's stated range [0,0.04]; phi-side values are "
                   "extrapolations\n";
    auto p = bound_params(b.u);
    std::cout << "u " << CsvTable::num(p.u) << "\ns " << CsvTable::num(p.s) << "\n";
    std::cout << "phi " << CsvTable::num(p.phi) << "\nchi " << CsvTable::num(p.chi) << "\n";
    if (b.u == 0.0) std::cout << "phi_exact 29/42\nchi_exact 40/57\n";
    std::cout << "eta_phi " << CsvTable::num(p.eta_phi) << "\nxi_phi " << CsvTable::num(p.xi_phi)
              << "\nt1_phi " << CsvTable::num(p.t1_phi) << "\n";
    std::cout << "eta_chi " << CsvTable::num(p.eta_chi) << "\nxi_chi " << CsvTable::num(p.xi_chi)
              << "\nt1_chi " << CsvTable::num(p.t1_chi) << "\n";
  });

  auto* bcmp = bounds_cmd->add_subcommand("compare", "tabulate all bounds against s");
  bcmp->add_option("--s-from", b.s_from);
  bcmp->add_option("--s-to", b.s_to);
  bcmp->add_option("--step", b.step);
  bcmp->add_option("--out", b.out);
  bcmp->callback([&] {
    detail::Sink sink{b.out};
    bool svg = format == "svg" ||
               (!b.out.empty() && b.out.size() > 4 && b.out.substr(b.out.size() - 4) == ".svg");
    std::vector<BoundRow> rows;
    for (double s = b.s_from; s <= b.s_to + 1e-12; s += b.step) rows.push_back(compare_bounds(s));
    if (svg) {
      SvgPlot plot("distance set dimension bounds", "s", "lower bound");
      std::vector<std::array<double, 2>> ks, liu, ksf, np, nf, npx, nfx;
      for (auto& r : rows) {
        ks.push_back({r.s, r.ks_pinned});
        liu.push_back({r.s, r.liu});
        ksf.push_back({r.s, r.ks_full});
        if (r.new_pinned)
          np.push_back({r.s, *r.new_pinned});
        else
          npx.push_back({r.s, phi(r.s - 1.0)});
        if (r.new_full)
          nf.push_back({r.s, *r.new_full});
        else
          nfx.push_back({r.s, chi(r.s - 1.0)});
      }
      plot.add_series("2s/3 (pinned)", ks);
      plot.add_series("4s/3-2/3 (pinned)", liu);
      plot.add_series("2/3+1/54 (full)", ksf);
      plot.add_series("phi(s-1) (pinned)", np);
      plot.add_series("chi(s-1) (full)", nf);
      // continuations past the stated validity edges, visually marked
      if (!npx.empty()) plot.add_series("phi beyond stated range", npx, /*dashed=*/true);
      if (!nfx.empty()) plot.add_series("chi beyond stated range", nfx, /*dashed=*/true);
      plot.write(sink.get());
      return;
    }
    CsvTable table({"s", "ks_pinned", "liu", "ks_full", "new_pinned", "new_full",
                    "best_pinned", "best_full"});
    for (auto& r : rows) {
      std::vector<std::string> row{
          CsvTable::num(r.s),
          CsvTable::num(r.ks_pinned),
          CsvTable::num(r.liu),
          CsvTable::num(r.ks_full),
          r.new_pinned ? CsvTable::num(*r.new_pinned) : "",
          r.new_full ? CsvTable::num(*r.new_full) : "",
          CsvTable::num(r.best_pinned),
          CsvTable::num(r.best_full)};
      table.add_row(row);
    }
    if (format == "json")
      table.write_json(sink.get());
    else
      table.write(sink.get());
  });

  auto* bx = bounds_cmd->add_subcommand("crossover", "root of new bound minus Liu's line");
  bx->add_option("--pair", b.pair)->check(CLI::IsMember({"phi-liu", "chi-liu"}));
  bx->callback([&] {
    double root = b.pair == "phi-liu"
                      ? crossover([](double s) { return phi(s - 1.0); },
                                  [](double s) { return bound_liu(s); }, 1.03, 1.04)
                      : crossover([](double s) { return chi(s - 1.0); },
                                  [](double s) { return bound_liu(s); }, 1.04, 1.06);
    std::cout << "pair " << b.pair << "\nroot " << CsvTable::num(root) << "\n";
  });

  // ---- distset -----------------------------------------------------------
  auto* dist_cmd = app.add_subcommand("distset", "distance-set covers and experiments");
  dist_cmd->require_subcommand(1);
  struct {
    std::string set, measure, pin = "0,0", levels = "4..8", out;
    double s = 1.2, L = 10.0, tau = 0.1, epsilon = 0.25;
  } x;

  auto emit_counts = [&](const DyadicSet& set, std::optional<std::array<double, 2>> pin,
                         std::pair<int, int> levels, detail::Sink& sink) {
    CsvTable table({"ell", "N", "log2N_over_Tell"});
    std::vector<std::pair<int, std::size_t>> counts;
    for (int ell = levels.first; ell <= levels.second; ++ell) {
      std::size_t n = pin ? pinned_distance_cover(set, *pin, ell).count()
                          : distance_cover(set, ell).count();
      counts.push_back({ell, n});
      table.add_row_values({static_cast<double>(ell), static_cast<double>(n),
                            std::log2(static_cast<double>(n)) / (set.T() * ell)});
    }
    auto& os = sink.get();
    if (format == "json")
      table.write_json(os);
    else
      table.write(os);
    if (counts.size() >= 3)
      os << "# slope " << CsvTable::num(box_dimension_estimate(counts, set.T())) << "\n";
  };

  auto* xp = dist_cmd->add_subcommand("pinned", "pinned distance set box counts");
  xp->add_option("--set", x.set)->required();
  xp->add_option("--pin", x.pin);
  xp->add_option("--levels", x.levels);
  xp->add_option("--out", x.out);
  xp->callback([&] {
    auto set = load_file(x.set, [](std::istream& in) { return read_set(in); });
    detail::Sink sink{x.out};
    emit_counts(set, detail::parse_pin(x.pin), detail::parse_levels(x.levels), sink);
  });

  auto* xf = dist_cmd->add_subcommand("full", "full distance set box counts");
  xf->add_option("--set", x.set)->required();
  xf->add_option("--levels", x.levels);
  xf->add_option("--out", x.out);
  xf->callback([&] {
    auto set = load_file(x.set, [](std::istream& in) { return read_set(in); });
    detail::Sink sink{x.out};
    emit_counts(set, std::nullopt, detail::parse_levels(x.levels), sink);
  });

  auto* xs = dist_cmd->add_subcommand("sepsquares", "good/bad square descent");
  xs->add_option("--measure", x.measure)->required();
  xs->add_option("--s", x.s);
  xs->add_option("--L", x.L);
  xs->callback([&] {
    auto mu = load_file(x.measure, [](std::istream& in) { return read_measure(in); });
    auto res = separated_squares(mu, x.s, x.L);
    std::cout << "Q " << CsvTable::num(res.q.x0) << "," << CsvTable::num(res.q.y0) << " side "
              << CsvTable::num(res.q.side) << "\n";
    std::cout << "Q1 " << CsvTable::num(res.q1.x0) << "," << CsvTable::num(res.q1.y0)
              << " side " << CsvTable::num(res.q1.side) << " mass " << CsvTable::num(res.mass1)
              << "\n";
    std::cout << "Q2 " << CsvTable::num(res.q2.x0) << "," << CsvTable::num(res.q2.y0)
              << " side " << CsvTable::num(res.q2.side) << " mass " << CsvTable::num(res.mass2)
              << "\n";
    std::cout << "separation " << CsvTable::num(res.q1.dist_to(res.q2)) << "\n";
    std::cout << "descent_steps " << res.descent_steps << "\n";
    std::cout << "frostman_surrogate " << CsvTable::num(res.frostman_surrogate) << " (L "
              << CsvTable::num(x.L) << ", hypothesis " << (res.frostman_ok ? "holds" : "VIOLATED")
              << ")\n";
  });

  auto* xpl = dist_cmd->add_subcommand("pipeline", "HEURISTIC predicted vs measured exponent");
  xpl->add_option("--measure", x.measure)->required();
  xpl->add_option("--pin", x.pin);
  xpl->add_option("--tau", x.tau);
  xpl->add_option("--epsilon", x.epsilon);
  xpl->callback([&] {
    auto mu = load_file(x.measure, [](std::istream& in) { return read_measure(in); });
    auto rep = pipeline_predict(mu, x.tau, x.epsilon, detail::parse_pin(x.pin));
    std::cout << "HEURISTIC report (no correctness claim)\n";
    std::cout << "class_mass " << CsvTable::num(rep.class_mass) << "\n";
    std::cout << "M_tau " << CsvTable::num(rep.m_tau) << "\n";
    std::cout << "predicted_exponent " << CsvTable::num(rep.predicted_exponent) << "\n";
    std::cout << "measured_boxes " << rep.boxes << "\n";
    std::cout << "measured_exponent " << CsvTable::num(rep.measured_exponent) << "\n";
  });

  // ---- verify ------------------------------------------------------------
  auto* ver = app.add_subcommand("verify", "acceptance criteria suite");
  struct {
    std::string what = "all";
    long trials = 10000;
    std::uint64_t seed = 42;
    std::string out;
  } v;
  ver->add_option("what", v.what)->check(CLI::IsMember({"all"}));
  ver->add_option("--trials", v.trials, "falsifier trials");
  ver->add_option("--seed", v.seed);
  ver->add_option("--out", v.out);
  ver->callback([&] {
    VerifyConfig cfg;
    cfg.falsifier_trials = v.trials;
    cfg.seed = v.seed;
    auto results = run_acceptance(cfg);
    detail::Sink sink{v.out};
    bool ok = print_acceptance(sink.get(), results);
    if (!ok) exit_code = 2;
  });

  // ---- parse and run -----------------------------------------------------
  // allow global flags like --format after the subcommand name
  auto enable_fallthrough = [](auto&& self, CLI::App* a) -> void {
    for (auto* sc : a->get_subcommands({})) {
      sc->fallthrough();
      self(self, sc);
    }
  };
  enable_fallthrough(enable_fallthrough, &app);

  std::vector<const char*> argv;
  argv.push_back("falconer");
  for (auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}

}  // namespace falconer::cli

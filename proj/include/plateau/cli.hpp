// Command-line front end shared by the binary and the tests: every subcommand
// is a pure function of a JSON config, writes its artifacts plus a manifest
// (full config + tool version + wall time), and can be re-executed bit-for-bit
// from that manifest.
//
// Exit codes: 0 success, 2 config error, 3 budget refusal, 4 assertion
// failure in a check subcommand.
#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "plateau/csv.hpp"
#include "plateau/lace.hpp"
#include "plateau/svg.hpp"
#include "plateau/torus_srw.hpp"
#include "plateau/version.hpp"
#include "plateau/wsaw_mc.hpp"

namespace plateau {
namespace cli {

using json = nlohmann::json;

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> outputs;
  json report;
};

namespace detail {

inline std::string resolve_out(const json& cfg, const std::string& fallback) {
  std::string out = cfg.value("out", "");
  if (out.empty()) out = fallback;
  std::filesystem::path p(out);
  if (p.is_relative()) {
    const char* dir = std::getenv("PLATEAU_OUT_DIR");
    if (dir && *dir) p = std::filesystem::path(dir) / p;
  }
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  return p.string();
}

inline std::string stem_of(const std::string& path) {
  std::filesystem::path p(path);
  return (p.parent_path() / p.stem()).string();
}

inline void write_manifest(const std::string& stem, const json& cfg, double wall_s,
                           const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "plateau";
  m["version"] = kVersion;
  m["subcommand"] = cfg.value("subcommand", "");
  m["config"] = cfg;
  m["wall_time_s"] = wall_s;
  m["outputs"] = outputs;
  std::ofstream f(stem + ".manifest.json");
  f << m.dump(2) << "\n";
}

inline std::pair<int, int> parse_window(const std::string& s) {
  auto pos = s.find(':');
  if (pos == std::string::npos) throw std::invalid_argument("window must be lo:hi");
  return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 1))};
}

// z from {z | z_omega | rho (+ p, coefficient form z = z0 - rho * r^{-p})}
inline double resolve_z(const json& cfg, int d, int r = 0) {
  int given = int(cfg.contains("z")) + int(cfg.contains("z_omega")) + int(cfg.contains("rho"));
  if (given != 1)
    throw std::invalid_argument("give exactly one of z, z-omega, rho");
  if (cfg.contains("z")) return cfg["z"].get<double>();
  if (cfg.contains("z_omega")) return cfg["z_omega"].get<double>() / (2.0 * d);
  if (r <= 0) throw std::invalid_argument("rho form needs a torus period");
  double p = cfg.value("p", 2.0);
  return 1.0 / (2.0 * d) - cfg["rho"].get<double>() * std::pow(double(r), -p);
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline RunResult run_srw(const json& cfg) {
  RunResult rr;
  srw::GreenParams p;
  p.dim = cfg.at("dim").get<int>();
  if (cfg.contains("mu") == cfg.contains("mu_omega"))
    throw std::invalid_argument("give exactly one of mu, mu-omega");
  p.mu = cfg.contains("mu") ? cfg["mu"].get<double>()
                            : cfg["mu_omega"].get<double>() / (2.0 * p.dim);
  p.box = cfg.value("box", 20);
  p.nmax = cfg.value("nmax", 200);
  p.grid = cfg.value("grid", 0);
  if (p.grid == 0) {
    // wide enough for the box; high dimensions need a compact grid
    p.grid = p.dim <= 3 ? std::max(64, 2 * p.box + 4) : 32;
    p.grid += p.grid % 2;
    if (p.dim > 3 && 2 * p.box >= p.grid)
      throw std::invalid_argument("srw: for d > 3 use --box <= 14 or give --grid explicitly");
  }

  srw::GreenResult series = srw::green_series(p);
  srw::GreenResult four = srw::green_fourier(p);

  std::string out = detail::resolve_out(cfg, "srw.csv");
  io::write_field_csv(out, series.table.to_field());
  rr.outputs.push_back(out);
  std::string fout = detail::stem_of(out) + ".fourier.csv";
  io::write_field_csv(fout, four.table.to_field());
  rr.outputs.push_back(fout);

  rr.report["mu_omega"] = p.mu_omega();
  rr.report["series_tail"] = series.series_tail;
  rr.report["box_loss"] = series.box_loss;
  rr.report["quad_budget"] = four.quad_budget;
  rr.report["critical_warning"] = four.critical_warning;
  if (p.mu > 0 && p.mu_omega() <= 1.0) rr.report["m0"] = srw::mass_m0(p.dim, p.mu);

  if (cfg.contains("fit_window")) {
    auto [lo, hi] = detail::parse_window(cfg["fit_window"].get<std::string>());
    auto rep = srw::fit_massive_decay(p, cfg.value("fit_axis", 0), lo, hi);
    rr.report["fit"] = {{"rate", rep.fit.rate},         {"power", rep.fit.power},
                        {"amplitude", rep.fit.amplitude}, {"residual", rep.fit.residual},
                        {"m0", rep.m0},                  {"rate_in_band", rep.rate_in_band}};
    if (cfg.value("plot", false)) {
      io::PlotSpec spec{"loglog-fit", "on-axis decay", "n", "C(n e1)", false, true};
      io::PlotSeries data, fitln;
      for (int n = lo; n <= hi; ++n) {
        data.x.push_back(n);
        data.y.push_back(series.at(Point::unit(p.dim, 0) * n));
      }
      data.line = false;
      fitln.points = false;
      fitln.color = "#d62728";
      for (int n = lo; n <= hi; ++n) {
        fitln.x.push_back(n);
        fitln.y.push_back(rep.fit.amplitude * std::pow(n, -rep.fit.power) *
                          std::exp(-rep.fit.rate * n));
      }
      char ann[128];
      std::snprintf(ann, sizeof(ann), "rate=%.5f power=%.3f residual=%.2e", rep.fit.rate,
                    rep.fit.power, rep.fit.residual);
      std::string plotf = detail::stem_of(out) + ".svg";
      io::emit_plot(spec, {data, fitln}, ann, plotf);
      rr.outputs.push_back(plotf);
    }
  }
  return rr;
}

inline RunResult run_torus_srw(const json& cfg) {
  RunResult rr;
  const int d = cfg.at("dim").get<int>();
  const int r = cfg.at("period").get<int>();
  const double z = detail::resolve_z(cfg, d, r);
  const std::string route = cfg.value("route", "fourier");
  std::string out = detail::resolve_out(cfg, "torus-srw.csv");

  rr.report["z"] = z;
  rr.report["z_omega"] = z * 2 * d;
  rr.report["chi0"] = srw::chi0(z * 2 * d);

  if (route == "fourier" || route == "solve") {
    FieldTable t = route == "fourier" ? torus::green_fourier(d, r, z)
                                      : torus::green_solve(d, r, z);
    io::write_field_csv(out, t);
    rr.outputs.push_back(out);
    rr.report["sum"] = t.sum();
  } else if (route == "unfold") {
    torus::UnfoldResult u = torus::green_unfold(d, r, z, cfg.value("shells", 3));
    io::write_field_csv(out, u.table);
    rr.outputs.push_back(out);
    rr.report["tail_bound"] = u.tail_bound;
    rr.report["sum"] = u.table.sum();
  } else if (route == "mc") {
    auto kw = torus::killed_walk_mc(d, r, z, cfg.value("samples", std::uint64_t(1000000)),
                                    cfg.value("seed", std::uint64_t(1)), cfg.value("shards", 1));
    std::vector<std::string> header = io::coord_header(d, "x");
    header.push_back("mean");
    header.push_back("stderr");
    std::vector<std::vector<double>> rows;
    kw.mean.for_each([&](const Point& x, double m) {
      std::vector<double> row;
      for (int i = 0; i < d; ++i) row.push_back(x.c[i]);
      row.push_back(m);
      row.push_back(kw.se.at(x));
      rows.push_back(std::move(row));
    });
    io::write_csv(out, header, rows);
    rr.outputs.push_back(out);
    rr.report["chi_mc"] = kw.chi_mean;
    rr.report["chi_se"] = kw.chi_se;
  } else {
    throw std::invalid_argument("route must be fourier|solve|unfold|mc");
  }

  if (cfg.value("plateau_check", false)) {
    auto rep = torus::plateau_check(d, r, z, cfg.value("c3", 0.5), cfg.value("grid", 0));
    rr.report["plateau"] = {{"c1_emp", rep.c1_emp},     {"c2_emp", rep.c2_emp},
                            {"in_regime", rep.in_regime}, {"positive", rep.positive},
                            {"corner_ratio", rep.corner_ratio},
                            {"d4_weakened_min", rep.d4_weakened_min}};
    if (rep.asserted && !rep.positive) rr.exit_code = 4;
  }

  if (cfg.value("plot", false) && route != "mc") {
    io::Csv data = io::read_csv(out);
    // profile by sup-norm shell
    std::vector<double> sx, sy;
    for (int s = 0; s <= r / 2; ++s) {
      double best = 0;
      bool found = false;
      for (auto& row : data.rows) {
        int sup = 0;
        for (int i = 0; i < d; ++i) sup = std::max(sup, int(std::abs(row[std::size_t(i)])));
        if (sup == s) {
          best += row[std::size_t(d)];
          found = true;
        }
      }
      if (found) {
        int cnt = 0;
        for (auto& row : data.rows) {
          int sup = 0;
          for (int i = 0; i < d; ++i) sup = std::max(sup, int(std::abs(row[std::size_t(i)])));
          if (sup == s) ++cnt;
        }
        sx.push_back(s);
        sy.push_back(best / cnt);
      }
    }
    io::PlotSpec spec{"profile", "torus two-point profile", "shell ||x||_inf", "C^T(x)", false,
                      true};
    io::PlotSeries ser;
    ser.x = sx;
    ser.y = sy;
    std::string plotf = detail::stem_of(out) + ".svg";
    io::emit_plot(spec, {ser}, "", plotf);
    rr.outputs.push_back(plotf);
  }
  return rr;
}

inline RunResult run_wsaw(const json& cfg) {
  RunResult rr;
  const int d = cfg.at("dim").get<int>();
  const double beta = cfg.at("beta").get<double>();
  const int nmax = cfg.at("nmax").get<int>();
  std::string geoms = cfg.value("geometry", "zd");
  Geometry geom = Geometry::lattice(d);
  if (geoms.rfind("torus:", 0) == 0)
    geom = Geometry::torus(d, std::stoi(geoms.substr(6)));
  else if (geoms != "zd")
    throw std::invalid_argument("geometry must be zd or torus:R");

  const std::string obs = cfg.value("observable", "series");
  std::string out = detail::resolve_out(cfg, "wsaw.csv");

  if (obs == "unfold-check") {
    if (!geom.is_torus()) throw std::invalid_argument("unfold-check needs torus geometry");
    auto rep = wsaw::unfolding_check(d, geom.period, nmax, beta);
    rr.report = {{"walks", rep.walks},
                 {"factorization_ok", rep.factorization_ok},
                 {"pigeonhole_ok", rep.pigeonhole_ok},
                 {"coeffwise_ok", rep.coeffwise_ok},
                 {"max_coeff_gap", rep.max_coeff_gap},
                 {"max_factorization_err", rep.max_factorization_err}};
    if (!(rep.factorization_ok && rep.pigeonhole_ok && rep.coeffwise_ok)) rr.exit_code = 4;
    return rr;
  }

  wsaw::WsawParams p;
  p.dim = d;
  p.beta = beta;
  p.geom = geom;
  p.nmax = nmax;
  p.force = cfg.value("force", false);
  p.shards = cfg.value("shards", 1);
  wsaw::SeriesTable series = wsaw::enumerate_two_point(p);

  if (obs == "series") {
    std::vector<std::string> header{"n"};
    for (auto& h : io::coord_header(d, "x")) header.push_back(h);
    header.push_back("coeff");
    std::vector<std::vector<double>> rows;
    for (int n = 0; n <= nmax; ++n)
      for (std::int64_t i = 0; i < series.slice_size(); ++i) {
        double c = series.coeff_by_id(n, i);
        if (c == 0.0) continue;
        Point x = series.point_of(i);
        std::vector<double> row{double(n)};
        for (int j = 0; j < d; ++j) row.push_back(x.c[j]);
        row.push_back(c);
        rows.push_back(std::move(row));
      }
    io::write_csv(out, header, rows);
    rr.outputs.push_back(out);
  } else if (obs == "chi") {
    std::vector<std::vector<double>> rows;
    for (int n = 0; n <= nmax; ++n) rows.push_back({double(n), series.chi_coeff(n)});
    io::write_csv(out, {"n", "chi_n"}, rows);
    rr.outputs.push_back(out);
    if (cfg.contains("z") || cfg.contains("z_omega")) {
      double z = detail::resolve_z(cfg, d);
      bool tail = false;
      rr.report["chi"] = wsaw::susceptibility(series, z, &tail);
      rr.report["tail_flag"] = tail;
    }
  } else if (obs == "bubble") {
    double z = detail::resolve_z(cfg, d);
    rr.report["bubble"] = wsaw::bubble(series, z, cfg.value("m", 0.0));
    rr.report["z"] = z;
  } else if (obs == "mass") {
    double z = detail::resolve_z(cfg, d);
    auto [lo, hi] = detail::parse_window(cfg.at("fit_window").get<std::string>());
    DecayFit f = wsaw::mass_estimate(series, z, lo, hi);
    rr.report = {{"rate", f.rate}, {"power", f.power}, {"amplitude", f.amplitude},
                 {"residual", f.residual}, {"z", z}};
  } else if (obs == "zc") {
    auto zc = wsaw::zc_estimate(series);
    rr.report = {{"zc", zc.value}, {"uncertainty", zc.uncertainty}, {"monotone", zc.monotone}};
  } else {
    throw std::invalid_argument("unknown observable: " + obs);
  }
  return rr;
}

inline RunResult run_wsaw_mc(const json& cfg) {
  RunResult rr;
  mc::McConfig mcfg;
  mcfg.dim = cfg.at("dim").get<int>();
  mcfg.beta = cfg.at("beta").get<double>();
  mcfg.samples = cfg.value("samples", std::uint64_t(1000000));
  mcfg.seed = cfg.value("seed", std::uint64_t(1));
  mcfg.shards = cfg.value("shards", 1);
  if (cfg.value("estimator", "geometric") == std::string("geometric")) {
    mcfg.estimator = mc::Estimator::Geometric;
  } else {
    mcfg.estimator = mc::Estimator::FixedLength;
    mcfg.n_cut = cfg.value("n_cut", 0);
  }
  const std::string obs = cfg.value("observable", "two-point");
  std::string out = detail::resolve_out(cfg, "wsaw-mc.csv");

  if (obs == "window-chi") {
    std::vector<int> rs = cfg.at("r_list").get<std::vector<int>>();
    auto rep = mc::window_susceptibility(mcfg.dim, mcfg.beta, rs, cfg.value("c4", 1.0),
                                         cfg.at("zc_hat").get<double>(), mcfg.samples,
                                         mcfg.seed, mcfg.shards, cfg.value("n_cut", 0));
    std::vector<std::vector<double>> rows;
    for (auto& row : rep.rows)
      rows.push_back({double(row.r), row.z_star, row.chi_t, row.chi_t_se, row.n_eff});
    io::write_csv(out, {"r", "z_star", "chi_t", "stderr", "n_eff"}, rows);
    rr.outputs.push_back(out);
    rr.report = {{"slope", rep.slope}, {"slope_se", rep.slope_se},
                 {"asserted", rep.asserted}, {"slope_ok", rep.slope_ok}};
    if (rep.asserted && !rep.slope_ok) rr.exit_code = 4;
    if (cfg.value("plot", false)) {
      io::PlotSpec spec{"window-scaling", "window susceptibility", "r", "chi^T(z_*)", true, true};
      io::PlotSeries ser;
      for (auto& row : rep.rows) {
        ser.x.push_back(row.r);
        ser.y.push_back(row.chi_t);
      }
      char ann[96];
      std::snprintf(ann, sizeof(ann), "slope=%.3f (d/2=%.1f)", rep.slope, mcfg.dim / 2.0);
      std::string plotf = detail::stem_of(out) + ".svg";
      io::emit_plot(spec, {ser}, ann, plotf);
      rr.outputs.push_back(plotf);
    }
    return rr;
  }

  mcfg.r = cfg.at("period").get<int>();
  if (cfg.value("window", false)) {
    double zc_hat = cfg.at("zc_hat").get<double>();
    double c4 = cfg.value("c4", 1.0);
    mcfg.z = zc_hat - c4 * std::sqrt(mcfg.beta) * std::pow(double(mcfg.r), -0.5 * mcfg.dim);
    if (mcfg.dim <= 4) throw std::invalid_argument("window rule requires d > 4");
  } else {
    mcfg.z = detail::resolve_z(cfg, mcfg.dim, mcfg.r);
  }

  if (obs == "two-point") {
    mc::McTable t = mc::sample_two_point(mcfg);
    std::vector<std::string> header = io::coord_header(mcfg.dim, "x");
    header.push_back("mean");
    header.push_back("stderr");
    std::vector<std::vector<double>> rows;
    TorusIndex idx(mcfg.dim, mcfg.r);
    for (std::int64_t i = 0; i < idx.count; ++i) {
      Point x = idx.unpack(i);
      std::vector<double> row;
      for (int j = 0; j < mcfg.dim; ++j) row.push_back(x.c[j]);
      row.push_back(t.mean[std::size_t(i)]);
      row.push_back(t.se[std::size_t(i)]);
      rows.push_back(std::move(row));
    }
    io::write_csv(out, header, rows);
    rr.outputs.push_back(out);
    rr.report = {{"chi", t.chi_mean}, {"chi_se", t.chi_se}, {"n_eff", t.n_eff},
                 {"tail_last_term", t.tail_last_term}, {"z", mcfg.z}};
  } else if (obs == "plateau-scan") {
    auto rep = mc::plateau_scan(mcfg);
    std::vector<std::vector<double>> rows;
    for (auto& row : rep.shells)
      rows.push_back({double(row.shell), double(row.repr.c[0]), row.mean, row.se,
                      rep.table.n_eff});
    io::write_csv(out, {"shell", "x_repr", "mean", "stderr", "n_eff"}, rows);
    rr.outputs.push_back(out);
    rr.report = {{"A", rep.A},       {"B", rep.B},
                 {"B_se", rep.B_se}, {"plateau_ratio", rep.plateau_ratio},
                 {"chi_mc", rep.chi_mc}, {"monotone", rep.monotone},
                 {"verdict", rep.verdict}, {"z", mcfg.z}};
    if (cfg.value("plot", false)) {
      io::PlotSpec spec{"profile", "torus WSAW profile", "shell ||x||_inf", "G^T", false, false};
      io::PlotSeries ser, fitln;
      for (auto& row : rep.shells) {
        ser.x.push_back(row.shell);
        ser.y.push_back(row.mean);
        ser.yerr.push_back(row.se);
        fitln.x.push_back(row.shell);
        fitln.y.push_back(rep.A * std::pow(std::max(1.0, double(row.shell)), -(mcfg.dim - 2)) +
                          rep.B);
      }
      ser.line = false;
      fitln.points = false;
      fitln.color = "#d62728";
      char ann[96];
      std::snprintf(ann, sizeof(ann), "B=%.3e  B r^d/chi=%.2f", rep.B, rep.plateau_ratio);
      std::string plotf = detail::stem_of(out) + ".svg";
      io::emit_plot(spec, {ser, fitln}, ann, plotf);
      rr.outputs.push_back(plotf);
    }
  } else {
    throw std::invalid_argument("unknown observable: " + obs);
  }
  return rr;
}

inline RunResult run_lace(const json& cfg) {
  RunResult rr;
  const int d = cfg.at("dim").get<int>();
  wsaw::WsawParams p = wsaw::WsawParams::zd(d, cfg.at("beta").get<double>(),
                                            cfg.at("nmax").get<int>());
  p.force = cfg.value("force", false);
  p.shards = cfg.value("shards", 1);
  wsaw::SeriesTable series = wsaw::enumerate_two_point(p);

  if (cfg.contains("scan")) {
    std::vector<double> zs = cfg["scan"].get<std::vector<double>>();
    auto [lo, hi] = detail::parse_window(cfg.value("fit_window", "2:6"));
    auto rep = lace::mass_identity_check(series, zs, lo, hi, cfg.value("grid", 0));
    std::string out = detail::resolve_out(cfg, "lace-scan.csv");
    std::vector<std::vector<double>> rows;
    for (auto& row : rep.rows)
      rows.push_back({row.z, row.chi, row.m_hat, row.lhs, row.rhs, row.rel_residual});
    io::write_csv(out, {"z", "chi", "m_hat", "lhs", "rhs", "rel_residual"}, rows);
    rr.outputs.push_back(out);
    rr.report = {{"zc", rep.zc},
                 {"zc_uncertainty", rep.zc_uncertainty},
                 {"c_sq_estimate", rep.c_sq_estimate},
                 {"a_estimate", rep.a_estimate}};
    return rr;
  }

  double z = detail::resolve_z(cfg, d);
  lace::LaceSolution sol = lace::decompose(series, z, cfg.value("tilt", 0.0),
                                           cfg.value("grid", 0));
  rr.report = {{"lambda", sol.lm.lambda},
               {"mu_omega", sol.lm.mu_omega},
               {"mu_in_range", sol.lm.mu_in_range},
               {"pi_moment0", sol.pi_hat0},
               {"pi_moment2", sol.pi_moment2},
               {"pi_abs_sum", sol.pi_abs_sum},
               {"e_moment_residuals", {sol.e_moment0, sol.e_moment2}},
               {"f_sup_weighted", sol.f_sup_weighted},
               {"c_sup_weighted", sol.c_sup_weighted},
               {"f_route_residual", sol.f_route_residual},
               {"identity_residual", sol.gf_delta_residual},
               {"chi_gap", sol.chi_gap},
               {"trunc_sensitivity", sol.trunc_sensitivity},
               {"chi", sol.chi},
               {"z", z}};
  if (cfg.contains("out")) {
    std::string out = detail::resolve_out(cfg, "lace.csv");
    lace::PiResult pr = lace::pi_from_g(series, z, cfg.value("grid", 0));
    io::write_field_csv(out, pr.pi.to_field());
    rr.outputs.push_back(out);
    std::string kout = detail::stem_of(out) + ".pihat.csv";
    io::write_sym_spectrum_csv(kout, pr.pi_hat);
    rr.outputs.push_back(kout);
  }
  return rr;
}

inline RunResult run_plot(const json& cfg) {
  RunResult rr;
  io::Csv data = io::read_csv(cfg.at("in").get<std::string>());
  std::string kind = cfg.at("kind").get<std::string>();
  std::string out = detail::resolve_out(cfg, "plot.svg");
  int xc = cfg.value("xcol", 0);
  int yc = cfg.value("ycol", int(data.header.size()) - 1);
  io::PlotSeries ser;
  for (auto& row : data.rows) {
    ser.x.push_back(row[std::size_t(xc)]);
    ser.y.push_back(row[std::size_t(yc)]);
  }
  std::string ann;
  std::vector<io::PlotSeries> series{ser};
  io::PlotSpec spec;
  spec.kind = kind;
  spec.xlabel = data.header[std::size_t(xc)];
  spec.ylabel = data.header[std::size_t(yc)];
  spec.title = cfg.value("title", kind);
  if (kind == "loglog-fit" || kind == "window-scaling") {
    spec.logx = spec.logy = true;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ser.x.size(); ++i)
      if (ser.x[i] > 0 && ser.y[i] > 0) {
        lx.push_back(std::log(ser.x[i]));
        ly.push_back(std::log(ser.y[i]));
      }
    LinearFit f = fit_linear(lx, ly);
    double resid = 0;
    for (std::size_t i = 0; i < lx.size(); ++i)
      resid = std::max(resid, std::abs(ly[i] - f.intercept - f.slope * lx[i]));
    char buf[96];
    std::snprintf(buf, sizeof(buf), "slope=%.4f residual=%.2e", f.slope, resid);
    ann = buf;
    io::PlotSeries fitln;
    fitln.points = false;
    fitln.color = "#d62728";
    for (std::size_t i = 0; i < ser.x.size(); ++i)
      if (ser.x[i] > 0) {
        fitln.x.push_back(ser.x[i]);
        fitln.y.push_back(std::exp(f.intercept + f.slope * std::log(ser.x[i])));
      }
    series.push_back(fitln);
    ser.line = false;
  } else if (kind == "profile") {
    spec.logy = cfg.value("logy", false);
  } else {
    throw std::invalid_argument("kind must be profile|loglog-fit|window-scaling");
  }
  io::emit_plot(spec, series, ann, out);
  rr.outputs.push_back(out);
  return rr;
}

inline RunResult run(const json& cfg);

inline RunResult run_rerun(const json& cfg) {
  std::ifstream f(cfg.at("manifest").get<std::string>());
  if (!f) throw std::invalid_argument("cannot open manifest");
  json m = json::parse(f);
  return run(m.at("config"));
}

inline RunResult run(const json& cfg) {
  const std::string sub = cfg.at("subcommand").get<std::string>();
  auto t0 = std::chrono::steady_clock::now();
  RunResult rr;
  if (sub == "srw")
    rr = run_srw(cfg);
  else if (sub == "torus-srw")
    rr = run_torus_srw(cfg);
  else if (sub == "wsaw")
    rr = run_wsaw(cfg);
  else if (sub == "wsaw-mc")
    rr = run_wsaw_mc(cfg);
  else if (sub == "lace")
    rr = run_lace(cfg);
  else if (sub == "plot")
    rr = run_plot(cfg);
  else if (sub == "rerun")
    return run_rerun(cfg);
  else
    throw std::invalid_argument("unknown subcommand: " + sub);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!rr.outputs.empty())
    detail::write_manifest(detail::stem_of(rr.outputs.front()), cfg, wall, rr.outputs);
  return rr;
}

}  // namespace cli
}  // namespace plateau

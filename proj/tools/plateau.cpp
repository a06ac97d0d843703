// plateau: lattice Green functions, torus plateau checks, weakly
// self-avoiding walk enumeration/Monte Carlo, and lace numerics in one CLI.
//
// Config precedence: flags > --config file > built-in defaults; the merged
// config is echoed into the run manifest next to the outputs.
#include <CLI11.hpp>

#include "plateau/cli.hpp"

namespace {

using plateau::cli::json;

// only flags the user actually passed make it into the config
struct Collect {
  CLI::App* app;
  json& cfg;

  void flag(const std::string& name, const std::string& key) {
    if (app->count(name)) cfg[key] = true;
  }
  template <typename T>
  void opt(CLI::Option* o, const std::string& key, const T& value) {
    if (o->count()) cfg[key] = value;
  }
};

int dispatch(json cfg, const std::string& config_file) {
  if (!config_file.empty()) {
    std::ifstream f(config_file);
    if (!f) throw std::invalid_argument("cannot open config file: " + config_file);
    json base = json::parse(f);
    base.update(cfg);  // flags win over the config file
    cfg = std::move(base);
  }
  plateau::cli::RunResult rr = plateau::cli::run(cfg);
  if (!rr.report.is_null()) std::cout << rr.report.dump(2) << "\n";
  return rr.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plateau: walk two-point functions on Z^d and the torus"};
  app.require_subcommand(1);
  std::string config_file;
  app.add_option("--config", config_file, "JSON config file (flags take precedence)");

  json cfg;
  double mu = 0, mu_omega = 0, z = 0, z_omega = 0, rho = 0, pexp = 2.0, beta = 0, m = 0,
         c3 = 0.5, c4 = 1.0, zc_hat = 0, tilt = 0;
  int dim = 1, box = 20, nmax = 8, grid = 0, period = 3, shells = 3, shards = 1, n_cut = 0,
      xcol = 0, ycol = -1;
  std::uint64_t samples = 1000000, seed = 1;
  std::string fit_window, route = "fourier", geometry = "zd", observable, out, estimator,
              r_list, scan, kind, in_file, title;
  bool plot = false, force = false, plateau_check = false, window = false, logy = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out, "output file; PLATEAU_OUT_DIR prefixes relative paths");
    sub->add_flag("--plot", plot, "emit an SVG plot beside the output");
    sub->add_option("--config", config_file, "JSON config file (flags take precedence)");
  };

  CLI::App* srw = app.add_subcommand("srw", "lattice Green function on Z^d");
  srw->add_option("--dim", dim)->required();
  auto* o_mu = srw->add_option("--mu", mu, "fugacity");
  auto* o_muo = srw->add_option("--mu-omega", mu_omega, "mu times Omega = 2d");
  srw->add_option("--box", box, "box radius L");
  srw->add_option("--nmax", nmax, "series cutoff N")->default_val(200);
  srw->add_option("--grid", grid, "quadrature points per axis (even)")->default_val(64);
  srw->add_option("--fit-window", fit_window, "a:b window for the on-axis decay fit");
  add_common(srw);

  CLI::App* tsrw = app.add_subcommand("torus-srw", "SRW two-point function on the torus");
  tsrw->add_option("--dim", dim)->required();
  tsrw->add_option("--period", period)->required();
  auto* t_z = tsrw->add_option("--z", z);
  auto* t_zo = tsrw->add_option("--z-omega", z_omega);
  auto* t_rho = tsrw->add_option("--rho", rho, "z = z0 - rho r^{-p}");
  tsrw->add_option("--p", pexp, "exponent in the rho form")->default_val(2.0);
  tsrw->add_option("--route", route, "fourier|solve|unfold|mc");
  tsrw->add_option("--shells", shells, "unfold image cutoff");
  tsrw->add_option("--samples", samples);
  tsrw->add_option("--seed", seed);
  tsrw->add_option("--shards", shards);
  tsrw->add_option("--grid", grid, "quadrature override for the Z^d reference");
  tsrw->add_flag("--plateau-check", plateau_check, "compare against the Z^d values");
  tsrw->add_option("--c3", c3, "regime constant c3'");
  add_common(tsrw);

  CLI::App* ws = app.add_subcommand("wsaw", "weakly self-avoiding walk by exact enumeration");
  ws->add_option("--dim", dim)->required();
  ws->add_option("--beta", beta)->required();
  ws->add_option("--nmax", nmax)->required();
  ws->add_option("--geometry", geometry, "zd or torus:R");
  ws->add_option("--observable", observable, "series|chi|bubble|mass|zc|unfold-check")
      ->default_val("series");
  auto* w_z = ws->add_option("--z", z);
  auto* w_zo = ws->add_option("--z-omega", z_omega);
  ws->add_option("--m", m, "tilt for the bubble");
  ws->add_option("--fit-window", fit_window);
  ws->add_option("--shards", shards);
  ws->add_flag("--force", force, "override the node-budget refusal");
  add_common(ws);

  CLI::App* wm = app.add_subcommand("wsaw-mc", "WSAW torus Monte Carlo");
  wm->add_option("--dim", dim)->required();
  wm->add_option("--beta", beta)->required();
  wm->add_option("--period", period);
  auto* m_z = wm->add_option("--z", z);
  auto* m_zo = wm->add_option("--z-omega", z_omega);
  wm->add_flag("--window", window, "z from the scaling-window rule");
  wm->add_option("--zc-hat", zc_hat, "critical point estimate for the window rule");
  wm->add_option("--c4", c4, "window-rule constant");
  wm->add_option("--samples", samples);
  wm->add_option("--shards", shards);
  wm->add_option("--seed", seed);
  wm->add_option("--estimator", estimator, "geometric|fixed")->default_val("geometric");
  wm->add_option("--n-cut", n_cut, "cutoff for the fixed-length-sum estimator");
  wm->add_option("--observable", observable, "two-point|plateau-scan|window-chi")
      ->default_val("two-point");
  wm->add_option("--r-list", r_list, "comma-separated radii for window-chi");
  add_common(wm);

  CLI::App* lc = app.add_subcommand("lace", "lace-expansion decomposition");
  lc->add_option("--dim", dim)->required();
  lc->add_option("--beta", beta)->required();
  lc->add_option("--nmax", nmax)->required();
  auto* l_z = lc->add_option("--z", z);
  auto* l_zo = lc->add_option("--z-omega", z_omega);
  lc->add_option("--grid", grid);
  lc->add_option("--tilt", tilt, "exponential tilt m");
  lc->add_option("--scan", scan, "comma-separated z grid for the mass-identity scan");
  lc->add_option("--fit-window", fit_window);
  lc->add_option("--shards", shards);
  lc->add_flag("--force", force);
  add_common(lc);

  CLI::App* pl = app.add_subcommand("plot", "re-emit a plot from persisted CSV data");
  pl->add_option("--kind", kind, "profile|loglog-fit|window-scaling")->required();
  pl->add_option("--in", in_file)->required();
  pl->add_option("--xcol", xcol);
  pl->add_option("--ycol", ycol);
  pl->add_option("--title", title);
  pl->add_flag("--logy", logy);
  pl->add_option("--out", out);

  CLI::App* rr = app.add_subcommand("rerun", "re-execute a run from its manifest");
  std::string manifest;
  rr->add_option("manifest", manifest)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    json err{{"error", std::string(e.what())}, {"code", 2}};
    std::cerr << err.dump() << "\n";
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    cfg["subcommand"] = name;
    Collect c{sub, cfg};
    // flags > config file > defaults: only record what the user passed, so
    // the config-file merge in dispatch() keeps the right precedence
    auto put_int = [&](const char* flag, const char* key, int v) {
      if (sub->count(flag)) cfg[key] = v;
    };
    auto put_u64 = [&](const char* flag, const char* key, std::uint64_t v) {
      if (sub->count(flag)) cfg[key] = v;
    };
    auto put_dbl = [&](const char* flag, const char* key, double v) {
      if (sub->count(flag)) cfg[key] = v;
    };
    auto put_str = [&](const char* flag, const char* key, const std::string& v) {
      if (sub->count(flag)) cfg[key] = v;
    };
    if (name == "srw") {
      put_int("--dim", "dim", dim);
      c.opt(o_mu, "mu", mu);
      c.opt(o_muo, "mu_omega", mu_omega);
      put_int("--box", "box", box);
      put_int("--nmax", "nmax", nmax);
      put_int("--grid", "grid", grid);
      put_str("--fit-window", "fit_window", fit_window);
    } else if (name == "torus-srw") {
      put_int("--dim", "dim", dim);
      put_int("--period", "period", period);
      c.opt(t_z, "z", z);
      c.opt(t_zo, "z_omega", z_omega);
      c.opt(t_rho, "rho", rho);
      put_dbl("--p", "p", pexp);
      put_str("--route", "route", route);
      put_int("--shells", "shells", shells);
      put_u64("--samples", "samples", samples);
      put_u64("--seed", "seed", seed);
      put_int("--shards", "shards", shards);
      put_int("--grid", "grid", grid);
      if (plateau_check) cfg["plateau_check"] = true;
      put_dbl("--c3", "c3", c3);
    } else if (name == "wsaw") {
      put_int("--dim", "dim", dim);
      put_dbl("--beta", "beta", beta);
      put_int("--nmax", "nmax", nmax);
      put_str("--geometry", "geometry", geometry);
      put_str("--observable", "observable", observable);
      c.opt(w_z, "z", z);
      c.opt(w_zo, "z_omega", z_omega);
      put_dbl("--m", "m", m);
      put_str("--fit-window", "fit_window", fit_window);
      put_int("--shards", "shards", shards);
      if (force) cfg["force"] = true;
    } else if (name == "wsaw-mc") {
      put_int("--dim", "dim", dim);
      put_dbl("--beta", "beta", beta);
      put_int("--period", "period", period);
      c.opt(m_z, "z", z);
      c.opt(m_zo, "z_omega", z_omega);
      if (window) cfg["window"] = true;
      put_dbl("--zc-hat", "zc_hat", zc_hat);
      put_dbl("--c4", "c4", c4);
      put_u64("--samples", "samples", samples);
      put_int("--shards", "shards", shards);
      put_u64("--seed", "seed", seed);
      if (sub->count("--estimator"))
        cfg["estimator"] = estimator == "fixed" ? "fixed" : "geometric";
      put_int("--n-cut", "n_cut", n_cut);
      put_str("--observable", "observable", observable);
      if (!r_list.empty()) {
        std::vector<int> rs;
        std::stringstream ss(r_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) rs.push_back(std::stoi(tok));
        cfg["r_list"] = rs;
      }
    } else if (name == "lace") {
      put_int("--dim", "dim", dim);
      put_dbl("--beta", "beta", beta);
      put_int("--nmax", "nmax", nmax);
      c.opt(l_z, "z", z);
      c.opt(l_zo, "z_omega", z_omega);
      put_int("--grid", "grid", grid);
      put_dbl("--tilt", "tilt", tilt);
      if (!scan.empty()) {
        std::vector<double> zs;
        std::stringstream ss(scan);
        std::string tok;
        while (std::getline(ss, tok, ',')) zs.push_back(std::stod(tok));
        cfg["scan"] = zs;
      }
      put_str("--fit-window", "fit_window", fit_window);
      put_int("--shards", "shards", shards);
      if (force) cfg["force"] = true;
    } else if (name == "plot") {
      cfg["kind"] = kind;
      cfg["in"] = in_file;
      put_int("--xcol", "xcol", xcol);
      if (ycol >= 0) cfg["ycol"] = ycol;
      if (!title.empty()) cfg["title"] = title;
      if (logy) cfg["logy"] = true;
    } else if (name == "rerun") {
      cfg["manifest"] = manifest;
    }
    if (!out.empty()) cfg["out"] = out;
    if (plot) cfg["plot"] = true;
    return dispatch(cfg, config_file);
  } catch (const plateau::budget_error& e) {
    json err{{"error", std::string(e.what())}, {"code", 3}};
    std::cerr << err.dump() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    json err{{"error", std::string(e.what())}, {"code", 2}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    json err{{"error", std::string(e.what())}, {"code", 2}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json err{{"error", std::string(e.what())}, {"code", 1}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}

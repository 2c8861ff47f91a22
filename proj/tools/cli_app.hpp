#pragma once

// Command-line front end. `dispatch` is the whole program minus process
// plumbing so that tests can drive it in-process.
//
// Exit codes: 0 success, 1 validation or computation failure, 2 usage error,
// 3 configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dressed_modes/dressed_modes.hpp"

namespace dressed_modes::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConfig = 3;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct GridSpec {
  double start_ghz = 0.0;
  double stop_ghz = 0.0;
  std::size_t count = 0;
};

/// START:STOP:COUNT, endpoints inclusive.
inline GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c) ||
      a.empty() || b.empty() || c.empty()) {
    throw UsageError("grid must be START:STOP:COUNT, got '" + text + "'");
  }
  try {
    std::size_t pos = 0;
    g.start_ghz = std::stod(a, &pos);
    if (pos != a.size()) throw std::invalid_argument(a);
    g.stop_ghz = std::stod(b, &pos);
    if (pos != b.size()) throw std::invalid_argument(b);
    const long n = std::stol(c, &pos);
    if (pos != c.size() || n < 1) throw std::invalid_argument(c);
    g.count = static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw UsageError("grid must be START:STOP:COUNT, got '" + text + "'");
  }
  if (g.count > 1 && !(g.stop_ghz > g.start_ghz)) {
    throw UsageError("grid STOP must exceed START");
  }
  return g;
}

/// Comma-separated positive integers.
inline std::vector<int> parse_schedule(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t pos = 0;
      const int n = std::stoi(item, &pos);
      if (pos != item.size() || n < 1) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::exception&) {
      throw UsageError("schedule entries must be positive integers, got '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("empty schedule");
  return out;
}

struct Options {
  std::string config_path;
  std::string state = "g";
  int levels = 0;  // 0: take run.levels from the config
  std::string grid;
  std::string schedule = "100,200,400,800";
  std::string method = "both";
  std::string out_path;
  std::optional<std::uint64_t> seed;
  bool json = false;
  bool csv = false;
  double wedge_angle_deg = 120.0;
  int wedge_modes = 5;
};

class Runner {
 public:
  Runner(const Options& o, std::ostream& out, std::ostream& err)
      : o_(o), out_(out), err_(err) {}

  int spectrum() {
    const auto cfg = config();
    const auto q = cfg.qubit.with_state(state());
    const auto b = boundary_for_state(q, cfg.device, levels(cfg));
    const ResonatorFunction res(cfg.device.length());
    const auto s = find_eigenvalues(res, b);
    const double v = cfg.device.velocity();
    if (format_csv(false)) {
      std::vector<CsvRow> rows;
      for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        const auto& e = s.eigenvalues[i];
        rows.push_back({static_cast<double>(i), e.lambda, rad_to_hz(v * std::sqrt(e.lambda)),
                        e.residual});
      }
      return emit_csv_out("spectrum", cfg,
                          {{"index", "lambda_per_m2", "frequency_hz", "residual"}}, rows);
    }
    nlohmann::json j;
    j["state"] = o_.state;
    j["levels"] = levels(cfg);
    j["boundary"] = boundary_json(b);
    j["eigenvalues_hz"] = nlohmann::json::array();
    j["brackets"] = nlohmann::json::array();
    for (const auto& e : s.eigenvalues) {
      j["eigenvalues_hz"].push_back(rad_to_hz(v * std::sqrt(e.lambda)));
      j["brackets"].push_back({e.bracket_lo, e.bracket_hi});
    }
    const double margin = level_repulsion_margin(s, b);
    j["margins"] = {{"level_repulsion", std::isfinite(margin) ? nlohmann::json(margin)
                                                             : nlohmann::json(nullptr)}};
    bool interlaced = true;
    for (const auto& iv : s.intervals) interlaced = interlaced && iv.interlacing_satisfied;
    j["interlacing_satisfied"] = interlaced;
    return emit_json_out("spectrum", cfg, j);
  }

  int sweep() {
    const auto cfg = config();
    if (o_.grid.empty()) throw UsageError("sweep needs --omega-q-ghz START:STOP:COUNT");
    const auto grid = omega_grid(parse_grid(o_.grid));
    const auto sw = sweep_qubit_frequency(cfg.device, cfg.qubit, grid, state(), levels(cfg));
    std::vector<CsvRow> rows;
    for (const auto& p : sw.points) {
      rows.push_back({rad_to_ghz(p.omega_q), rad_to_ghz(p.branch_lo), rad_to_ghz(p.branch_hi),
                      rad_to_ghz(p.gap())});
    }
    return emit_table("sweep", cfg,
                      {{"omega_q_ghz", "branch_lo_ghz", "branch_hi_ghz", "gap_ghz"}}, rows);
  }

  int chi() {
    const auto cfg = config();
    const auto r = analyze_dispersive(cfg.device, cfg.qubit, levels(cfg));
    nlohmann::json j;
    j["chi_mhz"] = rad_to_mhz(r.chi);
    j["chi_closed_form_mhz"] = rad_to_mhz(r.chi_closed);
    j["chi_perturbative_linearized_mhz"] = rad_to_mhz(r.chi_perturbative_linearized);
    j["chi_perturbative_exact_mhz"] = rad_to_mhz(r.chi_perturbative_exact);
    j["delta_omega_g_mhz"] = rad_to_mhz(r.delta_omega_g);
    j["delta_omega_e_mhz"] = rad_to_mhz(r.delta_omega_e);
    j["detuning_ghz"] = rad_to_ghz(r.detuning);
    j["n_crit"] = r.n_crit;
    j["flags"] = {{"g_over_delta", r.flags.g_over_delta},
                  {"validity", to_string(r.flags.validity)},
                  {"straddling", r.flags.straddling}};
    return emit_json_out("chi", cfg, j);
  }

  int rabi() {
    const auto cfg = config();
    const auto& dev = cfg.device;
    const double wr = dev.fundamental_omega();
    const double g = resolve_coupling(cfg.qubit, dev);
    std::vector<double> grid;
    if (o_.grid.empty()) {
      // +/- 10 g, capped at half the fundamental so strong couplings stay
      // clear of zero frequency and of the next Dirichlet pole at 2 omega_r.
      const double span = std::min(10.0 * g, 0.5 * wr);
      grid = linear_grid(wr - span, wr + span, 201);
    } else {
      grid = omega_grid(parse_grid(o_.grid));
    }
    const bool want_jc = o_.method != "sl";
    const bool want_sl = o_.method != "jc";
    CrossingSweep jc, sl;
    if (want_jc) jc = jc_sweep(wr, g, grid);
    if (want_sl) sl = sweep_qubit_frequency(dev, cfg.qubit, grid, QubitState::g, levels(cfg));

    CsvSchema schema;
    std::vector<CsvRow> rows;
    if (want_jc && want_sl) {
      schema.columns = {"omega_q_ghz", "jc_lo", "jc_hi", "sl_lo", "sl_hi", "diff"};
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& a = jc.points[i];
        const auto& b = sl.points[i];
        const double diff = std::max(std::abs(a.branch_lo - b.branch_lo),
                                     std::abs(a.branch_hi - b.branch_hi));
        rows.push_back({rad_to_ghz(grid[i]), rad_to_ghz(a.branch_lo), rad_to_ghz(a.branch_hi),
                        rad_to_ghz(b.branch_lo), rad_to_ghz(b.branch_hi), rad_to_ghz(diff)});
      }
    } else {
      const auto& s = want_jc ? jc : sl;
      const std::string p = want_jc ? "jc" : "sl";
      schema.columns = {"omega_q_ghz", p + "_lo", p + "_hi"};
      for (const auto& pt : s.points) {
        rows.push_back({rad_to_ghz(pt.omega_q), rad_to_ghz(pt.branch_lo), rad_to_ghz(pt.branch_hi)});
      }
    }
    return emit_table("rabi", cfg, schema, rows);
  }

  int multimode() {
    const auto cfg = o_.config_path.empty() ? std::optional<Config>{} : std::optional(config());
    MultimodeModel m;
    if (cfg) {
      m.omega_1 = cfg->device.fundamental_omega();
      m.g1 = resolve_coupling(cfg->qubit, cfg->device);
      m.omega_q = cfg->qubit.omega_q;
      m.anharmonicity = cfg->qubit.anharmonicity;
    } else {
      const auto dev = standard_device();
      const auto q = standard_transmon();
      m.omega_1 = dev.fundamental_omega();
      m.g1 = *q.coupling;
      m.omega_q = q.omega_q;
      m.anharmonicity = q.anharmonicity;
    }
    const auto schedule = parse_schedule(o_.schedule);
    const auto rep = divergence_report(m, schedule);
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      rows.push_back({static_cast<double>(schedule[i]), rad_to_ghz(rep.lamb[i]),
                      rad_to_ghz(rep.chi[i])});
    }
    nlohmann::json fit = {
        {"lamb_fit", {{"slope_ghz_per_mode", rad_to_ghz(rep.lamb_fit.slope)},
                      {"intercept_ghz", rad_to_ghz(rep.lamb_fit.intercept)},
                      {"r_squared", rep.lamb_fit.r_squared},
                      {"degenerate", rep.lamb_fit.degenerate}}},
        {"chi_increments_ghz", nlohmann::json::array()},
        {"chi_increment_ratios", rep.increment_ratios},
        {"chi_degenerate", rep.chi_degenerate},
        {"chi_term_form", "g_n^2 alpha / (Delta_n (Delta_n + alpha))"}};
    for (double x : rep.chi_increments) fit["chi_increments_ghz"].push_back(rad_to_ghz(x));

    const CsvSchema schema{{"n_max", "lamb_ghz", "chi_ghz"}};
    if (format_json(false)) {
      nlohmann::json j = fit;
      j["rows"] = nlohmann::json::array();
      for (const auto& r : rows) j["rows"].push_back({{"n_max", r[0]}, {"lamb_ghz", r[1]}, {"chi_ghz", r[2]}});
      return emit_json_out("multimode", cfg, j);
    }
    const int rc = emit_csv_out("multimode", cfg, schema, rows);
    if (!o_.out_path.empty()) write_text(o_.out_path + ".fit.json", json_text(fit));
    return rc;
  }

  int parity() {
    const auto cfg = config();
    if (!cfg.second_qubit) throw ConfigError("parity needs qubit2.* keys in the config");
    const auto two = from_two_boundaries(cfg.device, cfg.qubit, *cfg.second_qubit, levels(cfg));
    const auto freqs = state_frequencies(two.model);
    const auto rep = parity_degeneracy_check(two.model);
    const int n = cfg.run.fock_cutoff;
    const auto h = dispersive_hamiltonian_matrix(two.model, n);
    const auto single = single_qubit_commutators(two.model.chi1, n);

    nlohmann::json j;
    for (auto s : kJointStates) {
      const int i = static_cast<int>(s);
      j["frequencies_ghz"][std::string(to_string(s))] = rad_to_ghz(freqs[i]);
      j["summed_boundary_ghz"][std::string(to_string(s))] = rad_to_ghz(two.summed_exact[i]);
    }
    j["omega_r_ghz"] = rad_to_ghz(two.model.omega_r);
    j["chi1_mhz"] = rad_to_mhz(two.model.chi1);
    j["chi2_mhz"] = rad_to_mhz(two.model.chi2);
    j["odd_gap_mhz"] = rad_to_mhz(rep.odd_gap);
    j["even_gap_mhz"] = rad_to_mhz(rep.even_gap);
    j["additivity_deviation_hz"] = rad_to_hz(two.max_deviation);
    j["additivity_deviation_renormalized_hz"] = rad_to_hz(two.max_deviation_renormalized);
    j["commutator_norms"] = {{"h_disp_parity", commutator(h, parity_operator(n)).norm()},
                             {"h_int_sigma_z", single.h_sz},
                             {"h_int_sigma_x", single.h_sx},
                             {"sigma_x_identity_residual", single.sx_residual}};
    j["protected"] = nlohmann::json::array();
    if (rep.odd_coherence_protected) j["protected"].push_back("ge-eg");
    if (rep.even_coherence_protected) j["protected"].push_back("gg-ee");
    return emit_json_out("parity", cfg, j);
  }

  int wedge() {
    if (!(o_.wedge_modes >= 1)) throw UsageError("--modes must be >= 1");
    const auto geom = WedgeGeometry::create(o_.wedge_angle_deg * std::numbers::pi / 180.0);
    nlohmann::json j;
    j["angle_rad"] = geom.angle();
    j["modes"] = nlohmann::json::array();
    double worst = 0.0;
    for (int n = 1; n <= o_.wedge_modes; ++n) {
      const auto [a, b] = lz_domain_violation(n, geom);
      j["modes"].push_back({{"n", n}, {"mu", wedge_mu(n, geom)},
                            {"laplacian_eigenvalue", laplacian_eigenvalue(n, geom)},
                            {"lz_wall_values", {a, b}}});
      for (int m = n + 1; m <= o_.wedge_modes; ++m) {
        worst = std::max(worst, std::abs(wedge_mode_overlap(n, m, geom)));
      }
    }
    j["max_offdiagonal_overlap"] = worst;
    if (format_json(false)) return emit_json_out("wedge", std::nullopt, j);
    std::vector<CsvRow> rows;
    for (int n = 1; n <= o_.wedge_modes; ++n) {
      rows.push_back({static_cast<double>(n), wedge_mu(n, geom), laplacian_eigenvalue(n, geom)});
    }
    return emit_csv_out("wedge", std::nullopt, {{"n", "mu", "laplacian_eigenvalue"}}, rows);
  }

  int validate() {
    const std::uint64_t seed = o_.seed.value_or(RunOptions{}.seed);
    const auto results = run_acceptance(seed);
    bool ok = true;
    nlohmann::json j = nlohmann::json::array();
    std::ostringstream lines;
    for (const auto& r : results) {
      ok = ok && r.passed;
      lines << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << " (" << r.name
            << "): measured " << format_number(r.measured) << ", tolerance "
            << format_number(r.tolerance) << " | " << r.detail << '\n';
      j.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed},
                   {"measured", r.measured}, {"tolerance", r.tolerance}, {"detail", r.detail}});
    }
    if (format_json(false)) {
      emit_json_out("validate", std::nullopt, {{"seed", seed}, {"criteria", j}, {"passed", ok}});
    } else {
      emit_text("validate", std::nullopt, lines.str());
    }
    return ok ? kExitOk : kExitFailure;
  }

 private:
  Config config() const {
    if (o_.config_path.empty()) throw UsageError("--config is required");
    return load_config(o_.config_path);
  }

  QubitState state() const { return parse_qubit_state(o_.state); }

  int levels(const Config& cfg) const { return o_.levels ? o_.levels : cfg.run.levels; }

  static std::vector<double> omega_grid(const GridSpec& g) {
    auto grid = linear_grid(g.start_ghz, g.stop_ghz, g.count);
    for (double& x : grid) x = ghz_to_rad(x);
    return grid;
  }

  bool format_csv(bool default_csv) const { return o_.csv || (default_csv && !o_.json); }
  bool format_json(bool default_json) const { return o_.json || (default_json && !o_.csv); }

  static nlohmann::json boundary_json(const RationalBoundary& b) {
    nlohmann::json poles = nlohmann::json::array();
    for (const auto& p : b.poles()) {
      poles.push_back({{"lambda", p.location}, {"delta", p.residue}, {"label", p.label}});
    }
    return {{"beta", b.beta()}, {"gamma", b.gamma()}, {"poles", poles}};
  }

  int emit_table(const std::string& cmd, const std::optional<Config>& cfg,
                 const CsvSchema& schema, const std::vector<CsvRow>& rows) {
    if (format_json(false)) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : rows) {
        nlohmann::json row;
        for (std::size_t i = 0; i < schema.columns.size(); ++i) row[schema.columns[i]] = r[i];
        j.push_back(row);
      }
      return emit_json_out(cmd, cfg, j);
    }
    return emit_csv_out(cmd, cfg, schema, rows);
  }

  int emit_csv_out(const std::string& cmd, const std::optional<Config>& cfg,
                   const CsvSchema& schema, const std::vector<CsvRow>& rows) {
    return emit_text(cmd, cfg, csv_string(schema, rows));
  }

  int emit_json_out(const std::string& cmd, const std::optional<Config>& cfg,
                    const nlohmann::json& j) {
    return emit_text(cmd, cfg, json_text(j));
  }

  int emit_text(const std::string& cmd, const std::optional<Config>& cfg,
                const std::string& text) {
    if (o_.out_path.empty()) {
      out_ << text;
      return kExitOk;
    }
    write_text(o_.out_path, text);
    RunManifest m;
    m.subcommand = cmd;
    if (cfg) {
      for (const auto& [k, v] : cfg->snapshot) m.config[k] = v;
      m.seed = cfg->run.seed;
    }
    if (o_.seed) m.seed = *o_.seed;
    m.outputs = {o_.out_path};
    nlohmann::json j = m.to_json();
    j["options"] = {{"state", o_.state}, {"levels", o_.levels}, {"grid", o_.grid},
                    {"nmax_schedule", o_.schedule}, {"method", o_.method},
                    {"format", o_.json ? "json" : o_.csv ? "csv" : "default"}};
    write_text(o_.out_path + ".manifest.json", json_text(j));
    err_ << "wrote " << o_.out_path << '\n';
    return kExitOk;
  }

  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
};

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dressed resonator modes from eigenparameter-dependent boundary conditions",
               "dressed_modes"};
  app.require_subcommand(1, 1);
  Options o;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", o.config_path, "device/qubit config file");
    if (needs_config) c->required();
    sub->add_option("--out", o.out_path, "output file (a .manifest.json is written beside it)");
    sub->add_option("--seed", o.seed, "seed for randomized checks");
    auto* j = sub->add_flag("--json", o.json, "emit JSON");
    auto* c2 = sub->add_flag("--csv", o.csv, "emit CSV");
    j->excludes(c2);
  };
  const auto add_state = [&](CLI::App* sub) {
    sub->add_option("--state", o.state, "qubit state")->check(CLI::IsMember({"g", "e"}));
    sub->add_option("--levels", o.levels, "transmon levels")->check(CLI::IsMember({2, 3}));
  };

  auto* spectrum = app.add_subcommand("spectrum", "dressed eigenvalues for one qubit state");
  add_common(spectrum, true);
  add_state(spectrum);

  auto* sweep = app.add_subcommand("sweep", "avoided-crossing sweep over the qubit frequency");
  add_common(sweep, true);
  add_state(sweep);
  sweep->add_option("--omega-q-ghz", o.grid, "START:STOP:COUNT")->required();

  auto* chi = app.add_subcommand("chi", "dispersive shift and regime flags");
  add_common(chi, true);
  chi->add_option("--levels", o.levels, "transmon levels")->check(CLI::IsMember({2, 3}));

  auto* rabi = app.add_subcommand("rabi", "JC vs boundary-value branches through resonance");
  add_common(rabi, true);
  rabi->add_option("--method", o.method, "jc, sl or both")
      ->check(CLI::IsMember({"jc", "sl", "both"}));
  rabi->add_option("--omega-q-ghz", o.grid, "START:STOP:COUNT (default: omega_r +/- 10 g)");
  rabi->add_option("--levels", o.levels, "transmon levels")->check(CLI::IsMember({2, 3}));

  auto* multimode = app.add_subcommand("multimode", "Lamb and chi partial sums over the mode ladder");
  add_common(multimode, false);
  multimode->add_option("--nmax-schedule", o.schedule, "comma-separated cutoffs");

  auto* parity = app.add_subcommand("parity", "two-qubit frequency map and parity checks");
  add_common(parity, true);
  parity->add_option("--levels", o.levels, "transmon levels")->check(CLI::IsMember({2, 3}));

  auto* wedge = app.add_subcommand("wedge", "azimuthal modes of a Dirichlet wedge");
  add_common(wedge, false);
  wedge->add_option("--angle-deg", o.wedge_angle_deg, "opening angle in degrees");
  wedge->add_option("--modes", o.wedge_modes, "number of modes");

  auto* validate = app.add_subcommand("validate", "run every acceptance check");
  add_common(validate, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  Runner run(o, out, err);
  try {
    if (*spectrum) return run.spectrum();
    if (*sweep) return run.sweep();
    if (*chi) return run.chi();
    if (*rabi) return run.rabi();
    if (*multimode) return run.multimode();
    if (*parity) return run.parity();
    if (*wedge) return run.wedge();
    if (*validate) return run.validate();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  err << app.help();
  return kExitUsage;
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("dressed_modes");
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace dressed_modes::cli

// Copyright (c) 2026 The cavred authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0.txt
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cavred/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "cavred/analysis.hpp"
#include "cavred/config.hpp"
#include "cavred/io.hpp"

namespace cavred::cli {

  namespace fs = std::filesystem;

  namespace {

    struct CommonOptions {
      std::string config_path;
      std::string preset;
      std::vector<std::string> overrides;
      std::string out_dir;
      int threads = 1;
    };

    void add_common(CLI::App* app, CommonOptions& o) {
      app->add_option("--config", o.config_path, "Scenario file (.json or sectioned text)");
      app->add_option("--preset", o.preset, "Start from a named parameter set");
      app->add_option("--set", o.overrides, "Override a key, e.g. --set detector.T=10")->take_all();
      app->add_option("--out", o.out_dir, "Output directory");
      app->add_option("--threads", o.threads, "Worker thread cap")->check(CLI::PositiveNumber);
    }

    config::RawConfig raw_config(const CommonOptions& o, const std::string& default_preset = "") {
      config::RawConfig raw;
      if (!o.preset.empty()) raw = config::preset(o.preset);
      else if (o.config_path.empty() && !default_preset.empty()) raw = config::preset(default_preset);
      if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ConfigError("", "cannot open " + o.config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        const auto file = fs::path(o.config_path).extension() == ".json" ? config::parse_json(ss.str())
                                                                         : config::parse_text(ss.str());
        for (const auto& [k, v] : file) raw[k] = v;
      }
      if (raw.empty()) throw ConfigError("", "no configuration given (use --config or --preset)");
      for (const auto& a : o.overrides) config::apply_override(raw, a);
      return raw;
    }

    fs::path output_dir(const CommonOptions& o) {
      fs::path dir = ".";
      if (!o.out_dir.empty()) dir = o.out_dir;
      else if (const char* env = std::getenv("CAVRED_OUT_DIR"); env && *env) dir = env;
      fs::create_directories(dir);
      return dir;
    }

    std::ofstream open_output(const fs::path& path) {
      std::ofstream f(path);
      if (!f) throw Error("cannot write " + path.string());
      return f;
    }

    void finish(const fs::path& dir, const std::string& command, const std::string& hash,
                const std::vector<std::string>& outputs) {
      io::Manifest m;
      m.command = command;
      m.config_hash = hash;
      m.timestamp = io::utc_timestamp();
      m.outputs = outputs;
      io::write_manifest(dir, m);
    }

    void print_warnings(const config::ScenarioConfig& cfg, std::ostream& err) {
      for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
    }

    int cmd_spectrum(const CommonOptions& o, std::optional<double> cutoff, std::ostream& out, std::ostream& err) {
      const auto cfg = config::build(raw_config(o));
      print_warnings(cfg, err);
      const double cut = cutoff ? *cutoff : cfg.spectrum_cutoff;
      if (!(cut > 0.0)) throw ConfigError("numerics.cutoff", "required for the spectrum command (or pass --cutoff)");
      const auto& cs = cfg.scenario.field.cross_section;
      const auto spectrum = geometry::enumerate_spectrum(cs, cut);
      const auto dir = output_dir(o);
      auto f = open_output(dir / "spectrum.csv");
      io::write_spectrum_csv(f, cs, spectrum);
      finish(dir, "spectrum", cfg.hash(), {"spectrum.csv"});
      out << spectrum.modes.size() << " eigenpairs with lambda <= " << io::format_double(cut) << '\n';
      return exit_ok;
    }

    int cmd_decompose(const CommonOptions& o, std::optional<std::size_t> count, std::ostream& out, std::ostream& err) {
      const auto cfg = config::build(raw_config(o));
      print_warnings(cfg, err);
      const auto& sc = cfg.scenario;
      const auto& sm = sc.detector.smearing;
      if (sm.kind == detector::SmearingKind::pointlike)
        throw ConfigError("detector.smearing", "decompose needs an extended smearing (pointlike has no finite norm)");
      const std::size_t n = count ? *count : cfg.n_subfields;
      const auto& cs = sc.field.cross_section;
      const auto curve = analysis::l2_truncation_curve(cs, sm, n);
      // Axial profiles are normalized Gaussians of width sigma.
      const double axial_norm = 1.0 / (2.0 * std::sqrt(numerics::pi) * sm.sigma);
      std::vector<io::SubfieldRow> rows;
      for (std::size_t k = 0; k < curve.delta.size(); ++k) {
        io::SubfieldRow row;
        row.mode = curve.modes[k];
        row.j = row.mode.sorted_index;
        row.effective_mass = subfields::effective_mass(sc.field, row.mode.eigenvalue);
        const double c = detector::transverse_coefficient(cs, sm, row.mode);
        row.norm_squared = c * c * axial_norm;
        row.cumulative_delta_l2 = curve.delta[k];
        rows.push_back(row);
      }
      const auto dir = output_dir(o);
      auto f = open_output(dir / "decompose.csv");
      io::write_subfields_csv(f, rows);
      finish(dir, "decompose", cfg.hash(), {"decompose.csv"});
      out << rows.size() << " coupled subfields; delta_L2 after the last: "
          << io::format_double(rows.empty() ? 1.0 : rows.back().cumulative_delta_l2)
          << (curve.from_parseval ? "" : " (norm from closed form)") << '\n';
      return exit_ok;
    }

    int cmd_probability(const CommonOptions& o, std::ostream& out, std::ostream& err) {
      const auto cfg = config::build(raw_config(o));
      print_warnings(cfg, err);
      const auto r = response::transition_probability(cfg.scenario, cfg.controls);
      const auto dir = output_dir(o);
      auto f = open_output(dir / "probability.csv");
      io::write_response_csv(f, r);
      finish(dir, "probability", cfg.hash(), {"probability.csv"});
      constexpr double ln10 = 2.302585092994045684;
      out << "P_plus/(g^2/hbar^2)  = " << io::format_double(r.P_plus) << "  (log10 " << io::format_double(r.log_P_plus / ln10)
          << ")\n";
      out << "P_minus/(g^2/hbar^2) = " << io::format_double(r.P_minus) << "  (log10 "
          << io::format_double(r.log_P_minus / ln10) << ")\n";
      out << "subfields = " << r.per_subfield.size() << "\nconverged = " << (r.converged ? "true" : "false")
          << "\ntail_estimate = " << io::format_double(r.tail_estimate) << '\n';
      if (!r.converged) {
        err << "error: mode sum did not converge (tail estimate " << io::format_double(r.tail_estimate) << ")\n";
        return exit_not_converged;
      }
      return exit_ok;
    }

    std::vector<double> log_grid(double a, double b, int points) {
      std::vector<double> g(points);
      for (int i = 0; i < points; ++i) g[i] = a * std::pow(b / a, static_cast<double>(i) / (points - 1));
      return g;
    }

    int cmd_fig2(const CommonOptions& o, std::ostream& out, std::ostream& err) {
      constexpr std::size_t n_max = 60;
      std::vector<config::ScenarioConfig> cfgs;
      for (const char* name : {"fig2-yellow", "fig2-green"}) {
        CommonOptions c = o;
        c.preset = name;
        c.config_path.clear();
        cfgs.push_back(config::build(raw_config(c)));
        print_warnings(cfgs.back(), err);
      }
      const auto& base = cfgs.front().scenario;
      const auto l2 = analysis::l2_truncation_curve(base.field.cross_section, base.detector.smearing, n_max);
      std::vector<analysis::ConvergenceCurve> curves;
      for (const auto& c : cfgs)
        curves.push_back(analysis::convergence_scan(c.scenario, n_max, response::Ordering::ascending_mass,
                                                    detector::Sign::minus, c.controls));
      const auto dir = output_dir(o);
      {
        auto f = open_output(dir / "fig2.csv");
        f << "n_sub,delta_l2,delta_p_minus_yellow,delta_p_minus_green\n";
        for (std::size_t n = 1; n <= n_max; ++n)
          f << n << ',' << io::format_double(n <= l2.delta.size() ? l2.delta[n - 1] : 0.0) << ','
            << io::format_double(curves[0].points[n - 1].delta) << ',' << io::format_double(curves[1].points[n - 1].delta)
            << '\n';
      }
      {
        std::vector<analysis::PlotSeries> series(3);
        series[0].label = "delta_L2";
        series[1].label = "delta_P- beta=inf";
        series[2].label = "delta_P- beta=0.1";
        for (std::size_t n = 1; n <= n_max; ++n) {
          for (auto& s : series) s.x.push_back(static_cast<double>(n));
          series[0].log10_y.push_back(std::log10(n <= l2.delta.size() ? l2.delta[n - 1] : 0.0));
          series[1].log10_y.push_back(curves[0].points[n - 1].log10_delta);
          series[2].log10_y.push_back(curves[1].points[n - 1].log10_delta);
        }
        auto f = open_output(dir / "fig2.svg");
        analysis::write_svg_plot(f, "Relative truncation errors, square cavity", "N_sub", series, false);
      }
      finish(dir, "figure fig2", io::hex64(io::fnv1a(cfgs[0].canonical_json() + cfgs[1].canonical_json())),
             {"fig2.csv", "fig2.svg"});
      const char* names[] = {"yellow (beta=inf)", "green (beta=0.1)"};
      for (int k = 0; k < 2; ++k)
        out << names[k] << ": delta_P-(1) = " << io::format_double(curves[k].points[0].delta)
            << ", first N with delta_P- < 1%: " << curves[k].first_below(0.01) << '\n';
      out << "delta_L2(1) = " << io::format_double(l2.delta.front()) << '\n';
      return exit_ok;
    }

    int cmd_sweep_figure(const std::string& name, const CommonOptions& o, std::ostream& out, std::ostream& err) {
      const auto cfg = config::build(raw_config(o, name));
      print_warnings(cfg, err);
      analysis::SweepSpec spec;
      spec.variable = analysis::SweepVariable::omega_T;
      spec.grid = log_grid(1.0, 100.0, 21);
      spec.fixed = cfg.scenario;
      spec.n_sub = {1, 2, 3, 5, 10};
      spec.ordering = cfg.controls.ordering;
      spec.controls = cfg.controls;
      std::vector<analysis::SweepOutput> outputs = {analysis::SweepOutput::delta_p_plus, analysis::SweepOutput::delta_p_minus};
      if (name == "fig4") outputs = {analysis::SweepOutput::delta_p_minus};
      const auto table = analysis::sweep(spec, outputs);
      const auto dir = output_dir(o);
      {
        auto f = open_output(dir / (name + ".csv"));
        analysis::write_sweep_csv(f, table);
      }
      {
        auto f = open_output(dir / (name + ".svg"));
        analysis::write_svg_plot(f, name == "fig3" ? "Gaussian switching" : "Sudden switching", "Omega T",
                                 analysis::sweep_series(table), true);
      }
      finish(dir, "figure " + name, cfg.hash(), {name + ".csv", name + ".svg"});
      out << table.rows.size() << " rows written to " << (dir / (name + ".csv")).string() << '\n';
      return exit_ok;
    }

  } // namespace

  int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Subfield decomposition and detector response in cavities", "cavred"};
    app.require_subcommand(1);
    app.set_version_flag("--version", io::tool_version);

    CommonOptions spectrum_opts, decompose_opts, probability_opts, figure_opts;
    std::optional<double> cutoff;
    std::optional<std::size_t> n_subfields;
    std::string figure_name;

    auto* spectrum = app.add_subcommand("spectrum", "Sorted transverse eigenvalues");
    add_common(spectrum, spectrum_opts);
    spectrum->add_option("--cutoff", cutoff, "Eigenvalue cutoff");

    auto* decompose = app.add_subcommand("decompose", "Subfield masses, smearing norms and L2 truncation error");
    add_common(decompose, decompose_opts);
    decompose->add_option("--n-subfields", n_subfields, "Number of coupled subfields to list");

    auto* probability = app.add_subcommand("probability", "Transition probabilities per subfield");
    add_common(probability, probability_opts);

    auto* figure = app.add_subcommand("figure", "Figure data: fig2, fig3, fig4");
    add_common(figure, figure_opts);
    figure->add_option("name", figure_name, "Figure name")->required()->check(CLI::IsMember({"fig2", "fig3", "fig4"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? exit_ok : exit_config;
    }

    auto threads_of = [&]() {
      if (*spectrum) return spectrum_opts.threads;
      if (*decompose) return decompose_opts.threads;
      if (*probability) return probability_opts.threads;
      return figure_opts.threads;
    };

    try {
      numerics::set_thread_limit(threads_of());
      if (*spectrum) return cmd_spectrum(spectrum_opts, cutoff, out, err);
      if (*decompose) return cmd_decompose(decompose_opts, n_subfields, out, err);
      if (*probability) return cmd_probability(probability_opts, out, err);
      if (figure_name == "fig2") return cmd_fig2(figure_opts, out, err);
      return cmd_sweep_figure(figure_name, figure_opts, out, err);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << '\n';
      return exit_config;
    } catch (const ConvergenceError& e) {
      err << "error: " << e.what() << " (estimate " << io::format_double(e.estimate()) << ", bound "
          << io::format_double(e.error_bound()) << ")\n";
      return exit_not_converged;
    } catch (const DomainError& e) {
      err << "invalid input: " << e.what() << '\n';
      return exit_config;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return exit_failure;
    }
  }

} // namespace cavred::cli

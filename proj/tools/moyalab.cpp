// Copyright 2026 The moyalab Authors
// SPDX-License-Identifier: Apache-2.0

// moyalab command line. Every subcommand reads the same option set; a JSON
// config file (--config) supplies defaults and explicit flags override it.

#include "moyalab/fock.hpp"
#include "moyalab/io.hpp"
#include "moyalab/propagators.hpp"
#include "moyalab/quadrature.hpp"
#include "moyalab/semiclassical.hpp"
#include "moyalab/sweep.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

using namespace moyalab;

namespace {

// Flag values plus the options they came from, so only given flags override.
struct Flags {
  std::string config;
  std::string mode;
  double e_m = 0, e_n = 0;
  int m = 0, n = 0, sign = 1;
  std::vector<double> hbars, epsilons;
  std::vector<std::string> kinds, methods;
  double time = 1.0;
  std::string flow_mode, shift_model, output_dir;
  int x1_nr = 0, x1_nth = 0;
  std::uint64_t seed = 0;
  QuadSpec quad;
  bool no_clamp = false;

  std::vector<std::pair<CLI::Option*, std::function<void(SweepConfig&)>>> setters;

  template <typename T>
  void add(CLI::App* app, const std::string& name, T& var, const std::string& help,
           std::function<void(SweepConfig&)> apply) {
    setters.emplace_back(app->add_option(name, var, help), std::move(apply));
  }

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config, "JSON config file");
    add(app, "--mode", mode, "fixed_energy | fixed_quantum", [this](SweepConfig& c) { c.mode = parse_pair_mode(mode); });
    add(app, "--e-m", e_m, "energy of level m (fixed_energy)", [this](SweepConfig& c) { c.e_m = e_m; });
    add(app, "--e-n", e_n, "energy of level n (fixed_energy)", [this](SweepConfig& c) { c.e_n = e_n; });
    add(app, "-m", m, "quantum number m (switches to fixed_quantum)", [this](SweepConfig& c) {
      c.m = m;
      c.mode = PairMode::fixed_quantum;
    });
    add(app, "-n", n, "quantum number n (switches to fixed_quantum)", [this](SweepConfig& c) {
      c.n = n;
      c.mode = PairMode::fixed_quantum;
    });
    add(app, "--sign", sign, "+1 or -1", [this](SweepConfig& c) { c.sign = sign; });
    add(app, "--hbar", hbars, "hbar value(s)", [this](SweepConfig& c) { c.hbars = hbars; });
    add(app, "--epsilon", epsilons, "coupling value(s)", [this](SweepConfig& c) { c.epsilons = epsilons; });
    add(app, "--kind", kinds, "quadratic | cubic | quartic", [this](SweepConfig& c) {
      c.kinds.clear();
      for (const auto& k : kinds) c.kinds.push_back(parse_interaction_kind(k));
    });
    add(app, "--method", methods, "exact | liouville | semiclassical", [this](SweepConfig& c) {
      c.methods.clear();
      for (const auto& k : methods) c.methods.push_back(parse_method(k));
    });
    add(app, "--time", time, "interaction time", [this](SweepConfig& c) { c.time = time; });
    add(app, "--flow-mode", flow_mode, "oscillator_plus_perturbation | perturbation_only",
        [this](SweepConfig& c) { c.flow_mode = parse_flow_mode(flow_mode); });
    add(app, "--shift-model", shift_model, "closed_form | numeric_flow", [this](SweepConfig& c) {
      c.shift_model = shift_model == "numeric_flow" ? ShiftModel::numeric_flow : ShiftModel::closed_form;
      if (shift_model != "numeric_flow" && shift_model != "closed_form")
        throw DomainError("unknown shift model '" + shift_model + "'");
    });
    add(app, "-o,--output-dir", output_dir, "output directory", [this](SweepConfig& c) { c.output_dir = output_dir; });
    add(app, "--x1-nr", x1_nr, "radial intervals of the x1 grid", [this](SweepConfig& c) { c.x1_nr = x1_nr; });
    add(app, "--x1-nth", x1_nth, "angular samples of the x1 grid", [this](SweepConfig& c) { c.x1_nth = x1_nth; });
    add(app, "--seed", seed, "probe-point seed", [this](SweepConfig& c) { c.seed = seed; });
    add(app, "--radial-panels", quad.radial_panels, "", [this](SweepConfig& c) { c.quad.radial_panels = quad.radial_panels; });
    add(app, "--panel-order", quad.panel_order, "", [this](SweepConfig& c) { c.quad.panel_order = quad.panel_order; });
    add(app, "--angular-samples", quad.angular_samples, "",
        [this](SweepConfig& c) { c.quad.angular_samples = quad.angular_samples; });
    add(app, "--refinement", quad.refinement, "", [this](SweepConfig& c) { c.quad.refinement = quad.refinement; });
    add(app, "--max-refinements", quad.max_refinements, "",
        [this](SweepConfig& c) { c.quad.max_refinements = quad.max_refinements; });
    add(app, "--tolerance", quad.tolerance, "absolute quadrature tolerance",
        [this](SweepConfig& c) { c.quad.tolerance = quad.tolerance; });
    add(app, "--relative-tolerance", quad.relative_tolerance, "",
        [this](SweepConfig& c) { c.quad.relative_tolerance = quad.relative_tolerance; });
    add(app, "--caustic-width", quad.caustic_width_multiplier, "caustic layer width multiplier",
        [this](SweepConfig& c) { c.quad.caustic_width_multiplier = quad.caustic_width_multiplier; });
    setters.emplace_back(app->add_flag("--no-clamp", no_clamp, "do not clamp caustic layers"),
                         [](SweepConfig& c) { c.quad.clamp_caustics = false; });
  }

  SweepConfig resolve(SweepConfig base = {}) const {
    SweepConfig c = config.empty() ? std::move(base) : load_config(config, std::move(base));
    for (const auto& [opt, apply] : setters)
      if (opt->count() > 0) apply(c);
    c.validate();
    return c;
  }
};

struct Single {
  FockPair pair;
  InteractionSpec in;
  DeltaOptions opt;
  PolarGrid x1;
};

Single single_point(const SweepConfig& c) {
  const ResolvedPair rp = resolve_pair(c, c.hbars.front());
  if (!rp.rounding.empty()) std::cerr << "rounded: " << rp.rounding << "\n";
  Single s;
  s.pair = rp.pair;
  s.in = {c.kinds.front(), c.epsilons.front(), c.time, c.flow_mode};
  s.opt.quad = c.quad;
  s.opt.policy = {c.quad.clamp_caustics, c.quad.caustic_width_multiplier};
  s.opt.shift_model = c.shift_model;
  s.x1 = default_x1_grid(s.pair, c.x1_nr, c.x1_nth);
  return s;
}

std::vector<std::pair<std::string, std::string>> point_header(const Single& s) {
  return {{"m", std::to_string(s.pair.m)},       {"n", std::to_string(s.pair.n)},
          {"sign", std::to_string(s.pair.sign)}, {"hbar", format_double(s.pair.hbar)},
          {"kind", to_string(s.in.kind)},        {"epsilon", format_double(s.in.epsilon)},
          {"flow_mode", to_string(s.in.mode)},   {"time", format_double(s.in.time)}};
}

void print_field_summary(const ReducedField& d) {
  std::printf("%-14s status %-27s max|dW1| %-12.6g estimate %-12.6g L1 %.6g\n", to_string(d.method),
              to_string(d.status), d.max_abs, d.estimate, d.l1);
}

PolarGrid dump_grid(const FockPair& pair, int nr, int nth) {
  const RingGeometry g(pair);
  return PolarGrid(0.0, 1.2 * g.r_plus, nr, std::max(nth, (8 * pair.l() + 3) / 4 * 4));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moyalab: entangled-oscillator phase-space numerics"};
  app.require_subcommand(1);

  Flags wf, mf, cf, ef, df, sf;
  std::string source = "exact", out_file;
  int level = -1, nr = 96, nth = 128;

  auto* wigner = app.add_subcommand("wigner", "dump an exact or semiclassical Wigner function");
  wf.attach(wigner);
  wigner->add_option("--level", level, "oscillator level (default: m)");
  wigner->add_option("--source", source, "exact | semiclassical")->check(CLI::IsMember({"exact", "semiclassical"}));
  wigner->add_option("--nr", nr, "radial grid intervals");
  wigner->add_option("--nth", nth, "angular grid samples");
  wigner->add_option("-f,--file", out_file, "output file (default <output-dir>/wigner.dat)");

  auto* moyal = app.add_subcommand("moyal", "dump the Moyal function of |m><n|");
  mf.attach(moyal);
  moyal->add_option("--source", source, "exact | semiclassical")->check(CLI::IsMember({"exact", "semiclassical"}));
  moyal->add_option("--nr", nr, "radial grid intervals");
  moyal->add_option("--nth", nth, "angular grid samples");
  moyal->add_option("-f,--file", out_file, "output file (default <output-dir>/moyal.dat)");

  auto* compare = app.add_subcommand("compare", "semiclassical minus exact Moyal function, with the mid-ring L2 error");
  cf.attach(compare);
  compare->add_option("--nr", nr, "radial grid intervals");
  compare->add_option("--nth", nth, "angular grid samples");
  compare->add_option("-f,--file", out_file, "output file (default <output-dir>/compare.dat)");

  auto* evolve = app.add_subcommand("evolve", "one interaction, every requested method");
  ef.attach(evolve);

  auto* deltaw = app.add_subcommand("deltaw", "single dW1 evaluation");
  df.attach(deltaw);
  deltaw->add_option("-f,--file", out_file, "also dump the field here");

  double lambda = 0.5, eps = 1.0;
  std::vector<double> airy_hbars{0.05, 0.02, 0.01, 0.005};
  auto* airy = app.add_subcommand("airy-check", "toy integral against its Airy reference");
  airy->add_option("--lambda", lambda);
  airy->add_option("--eps", eps);
  airy->add_option("--hbars", airy_hbars);

  int workers = 0, stop_after = -1;
  bool no_resume = false;
  auto* sweep = app.add_subcommand("sweep", "full (hbar, epsilon) scan");
  sf.attach(sweep);
  sweep->add_option("--workers", workers, "worker threads (default MOYALAB_WORKERS or all cores)");
  sweep->add_option("--stop-after", stop_after, "stop after this many new records (resume later)");
  sweep->add_flag("--no-resume", no_resume, "ignore an existing journal");

  std::string report_path;
  auto* report = app.add_subcommand("report", "convergence summary of a finished sweep");
  report->add_option("path", report_path, "sweep.json or its directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*wigner) {
      const SweepConfig c = wf.resolve();
      const Single s = single_point(c);
      const int k = level >= 0 ? level : s.pair.m;
      const FockPair lp(k, k, 1, s.pair.hbar);
      const FieldMeta meta{lp.hbar, k, k, 1, source};
      const auto f = PhaseSpaceField::sample(
          dump_grid(lp, nr, nth),
          [&](const PhasePoint& x) {
            return Complex(source == "exact" ? exact_wigner(k, x, lp.hbar) : semi_wigner(k, lp.hbar, x), 0.0);
          },
          false, meta);
      const auto path = out_file.empty() ? std::filesystem::path(c.output_dir) / "wigner.dat" : std::filesystem::path(out_file);
      write_field(f, path);
      std::printf("wrote %s (%d points)\n", path.string().c_str(), f.size());
    } else if (*moyal) {
      const SweepConfig c = mf.resolve();
      const Single s = single_point(c);
      const FieldMeta meta{s.pair.hbar, s.pair.m, s.pair.n, s.pair.sign, source};
      const auto f = PhaseSpaceField::sample(
          dump_grid(s.pair, nr, nth),
          [&](const PhasePoint& x) {
            return source == "exact" ? moyal_laguerre(s.pair.m, s.pair.n, x, s.pair.hbar) : semi_moyal(s.pair, x);
          },
          true, meta);
      const auto path = out_file.empty() ? std::filesystem::path(c.output_dir) / "moyal.dat" : std::filesystem::path(out_file);
      write_field(f, path);
      std::printf("wrote %s (%d points)\n", path.string().c_str(), f.size());
    } else if (*compare) {
      const SweepConfig c = cf.resolve();
      for (double h : c.hbars) {
        const FockPair p = resolve_pair(c, h).pair;
        const FidelityResult fr = semiclassical_fidelity(p);
        std::printf("hbar %-8g m %-4d n %-4d mid-ring relative L2 %.6g  (band %.4g..%.4g)\n", h, p.m, p.n,
                    fr.relative_l2, fr.r_a, fr.r_b);
      }
      const Single s = single_point(c);
      const FieldMeta meta{s.pair.hbar, s.pair.m, s.pair.n, s.pair.sign, "semiclassical-exact"};
      const auto f = PhaseSpaceField::sample(
          dump_grid(s.pair, nr, nth),
          [&](const PhasePoint& x) { return semi_moyal(s.pair, x) - moyal_laguerre(s.pair.m, s.pair.n, x, s.pair.hbar); },
          true, meta);
      const auto path = out_file.empty() ? std::filesystem::path(c.output_dir) / "compare.dat" : std::filesystem::path(out_file);
      write_field(f, path);
      std::printf("wrote %s\n", path.string().c_str());
    } else if (*evolve) {
      SweepConfig base;
      base.methods = {Method::exact, Method::liouville, Method::semiclassical};
      const SweepConfig c = ef.resolve(base);
      const Single s = single_point(c);
      std::printf("pair (%d,%d) sign %+d hbar %g, %s eps %g t %g (%s)\n", s.pair.m, s.pair.n, s.pair.sign,
                  s.pair.hbar, to_string(s.in.kind), s.in.epsilon, s.in.time, to_string(s.in.mode));
      for (Method m : c.methods) {
        try {
          const ReducedField d = delta_w1(s.pair, s.in, m, s.x1, s.opt);
          print_field_summary(d);
          write_field(d, std::filesystem::path(c.output_dir) / (std::string("dw1_") + to_string(m) + ".dat"),
                      point_header(s));
        } catch (const Error& e) {
          std::printf("%-14s error: %s\n", to_string(m), e.what());
        }
      }
    } else if (*deltaw) {
      SweepConfig base;
      base.methods = {Method::semiclassical};
      const SweepConfig c = df.resolve(base);
      const Single s = single_point(c);
      const ReducedField d = delta_w1(s.pair, s.in, c.methods.front(), s.x1, s.opt);
      std::printf("pair (%d,%d) sign %+d hbar %g, %s eps %g\n", s.pair.m, s.pair.n, s.pair.sign, s.pair.hbar,
                  to_string(s.in.kind), s.in.epsilon);
      print_field_summary(d);
      for (const auto& [k, v] : d.diagnostics) std::printf("  %-32s %.10g\n", k.c_str(), v);
      if (!out_file.empty()) write_field(d, out_file, point_header(s));
      return d.status == QuadStatus::non_converged ? 3 : 0;
    } else if (*airy) {
      std::printf("%-8s %-22s %-22s %-12s %-12s\n", "hbar", "toy", "airy_reference", "rel_error", "tail_resid");
      for (double h : airy_hbars) {
        const ToyResult t = toy_integral(lambda, eps, h);
        const ToyResult tail = toy_integral_tail(lambda, eps, h);
        const double ref = airy_reference(lambda, eps, h);
        std::printf("%-8g %-22.15g %-22.15g %-12.4g %-12.4g\n", h, t.value, ref, std::abs(t.value - ref) / std::abs(ref),
                    std::abs(t.value + tail.value - ref) / std::abs(t.value));  // relative to |toy|
      }
    } else if (*sweep) {
      const SweepConfig c = sf.resolve();
      SweepControl ctl;
      ctl.workers = workers;
      ctl.stop_after = stop_after;
      ctl.resume = !no_resume;
      const int total = static_cast<int>(sweep_points(c).size());
      ctl.on_record = [total](const SweepRecord& r) {
        std::printf("[%d/%d] hbar %-6g (%d,%d) %-8s eps %-6g %-14s %-27s max|dW1| %.4g\n", r.index + 1, total, r.hbar,
                    r.m, r.n, to_string(r.kind), r.epsilon, to_string(r.method), r.status.c_str(), r.max_abs);
        std::fflush(stdout);
      };
      const SweepOutcome o = run_sweep(c, ctl);
      for (const auto& note : o.rounding) std::printf("rounded: %s\n", note.c_str());
      if (o.resumed) std::printf("resumed %d records from the journal\n", o.resumed);
      if (!o.complete) {
        std::printf("stopped after %zu of %d records; rerun to resume\n", o.records.size(), total);
        return 0;
      }
      std::printf("\n%s", format_report(convergence_report(o.records)).c_str());
      std::printf("wrote %s/{records.csv,sweep.json,timings.csv}\n", c.output_dir.c_str());
    } else if (*report) {
      std::filesystem::path p(report_path);
      if (std::filesystem::is_directory(p)) p /= "sweep.json";
      const SweepDocument doc = document_from_json(json::parse(read_text(p)));
      for (const auto& note : doc.rounding) std::printf("rounded: %s\n", note.c_str());
      std::printf("%s", format_report(convergence_report(doc.records)).c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "moyalab: %s\n", e.what());
    return 1;
  }
  return 0;
}

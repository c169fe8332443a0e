// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qubo/qubo.hpp"

namespace qubo {
namespace cli {

namespace fs = std::filesystem;

inline std::string with_suffix(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  fs::path stem = p.stem();
  stem += suffix;
  stem += p.extension();
  return (p.parent_path() / stem).string();
}

inline std::string manifest_path(const std::string& out) {
  fs::path p(out);
  p += ".manifest.json";
  return p.string();
}

inline bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

struct LoadedModel {
  IsingModel model;
  nlohmann::json meta;
  double energy_shift = 0.0;  // model-units energy = qubo_cost + energy_shift
  QuboProblem qubo;
};

/// Loads .qubo text or model JSON; either way yields the QUBO to enumerate
/// and the shift that maps raw costs into the input model's energy units.
inline LoadedModel load_model(const std::string& path) {
  const std::string text = read_file(path);
  if (ends_with(path, ".qubo")) {
    std::vector<std::string> warnings;
    QuboProblem p = parse_qubo_text(text, &warnings);
    for (const auto& w : warnings) std::cerr << path << ": " << w << "\n";
    return LoadedModel{qubo_to_ising(p), nlohmann::json::object(), 0.0, p};
  }
  std::vector<std::string> warnings;
  ModelDocument doc = read_model_json(text, &warnings);
  for (const auto& w : warnings) std::cerr << path << ": " << w << "\n";
  QuboProblem p = ising_to_qubo(doc.model);
  const double shift = doc.model.offset() - qubo_offset_c0(p);
  return LoadedModel{std::move(doc.model), std::move(doc.meta), shift, std::move(p)};
}

struct GenArgs {
  std::string klass;
  int n = 0;
  int m = 0;  // 0 = default n+1
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t stream = 0;
  int count = 1;
  std::uint64_t min_degeneracy = 1;
  std::uint64_t max_attempts = 1000000;
  int gauge_family = 0;
  std::string out;
};

inline nlohmann::json gen_params_json(const GenArgs& a) {
  nlohmann::json params;
  params["class"] = a.klass;
  params["n"] = a.n;
  if (a.klass == "2sat") {
    params["m"] = a.m ? a.m : a.n + 1;
    params["min_degeneracy"] = a.min_degeneracy;
    params["max_attempts"] = a.max_attempts;
  }
  if (a.klass != "reg") {
    params["seed"] = a.seed;
    params["stream"] = a.stream;
  }
  params["count"] = a.count;
  params["gauge_family"] = a.gauge_family;
  params["out"] = a.out;
  return params;
}

inline int run_gen(GenArgs a) {
  if (a.klass != "reg" && !a.seed_given) {
    std::random_device rd;
    a.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "no --seed given; using auto-generated seed " << a.seed
              << " (recorded in the manifest)\n";
  }
  std::vector<std::string> outputs;

  for (int inst = 0; inst < a.count; ++inst) {
    const std::string out =
        a.count > 1 ? with_suffix(a.out, "_" + std::to_string(inst)) : a.out;
    GeneratorSeed gs{a.seed, a.stream + static_cast<std::uint64_t>(inst)};

    IsingModel model(1);
    nlohmann::json meta;
    if (a.klass == "reg") {
      model = gen_reg(a.n);
      meta["class"] = "REG";
    } else if (a.klass == "ran") {
      model = gen_ran(a.n, gs);
      meta["class"] = "RAN";
      meta["seed"] = gs.seed;
      meta["stream"] = gs.stream_id;
    } else if (a.klass == "2sat") {
      const int m = a.m ? a.m : a.n + 1;
      TwoSatGenStats stats;
      TwoSatInstance t = gen_2sat(a.n, m, gs, a.min_degeneracy, a.max_attempts, &stats);
      model = twosat_to_ising(t);
      meta["class"] = "2SAT";
      meta["seed"] = gs.seed;
      meta["stream"] = gs.stream_id;
      meta["m"] = m;
      meta["min_degeneracy"] = a.min_degeneracy;
      meta["attempts"] = stats.attempts;
      meta["first_excited_degeneracy"] = stats.first_excited;
      meta["clauses"] = clauses_to_json(t);
    } else {
      std::cerr << "unknown class '" << a.klass << "' (expected reg|ran|2sat)\n";
      return 1;
    }

    write_file(out, write_model_json(model, meta));
    outputs.push_back(out);

    if (a.gauge_family > 0) {
      // Family streams live beside the per-instance streams, far away.
      GeneratorSeed fam{a.seed, a.stream + 0x67617567ULL + static_cast<std::uint64_t>(inst) * 1024};
      auto members = random_gauge_family(model, a.gauge_family, fam);
      for (int t = 0; t < a.gauge_family; ++t) {
        nlohmann::json gmeta = meta;
        gmeta["gauge_of"] = out;
        gmeta["gauge_stream"] = fam.stream_id + static_cast<std::uint64_t>(t);
        auto flips = nlohmann::json::array();
        for (int f : members[static_cast<std::size_t>(t)].flips) flips.push_back(f + 1);
        gmeta["flips"] = flips;
        const std::string gout = with_suffix(out, "_g" + std::to_string(t));
        write_file(gout, write_model_json(members[static_cast<std::size_t>(t)].model, gmeta));
        outputs.push_back(gout);
      }
    }
  }

  write_file(manifest_path(a.out), write_manifest_json("gen", gen_params_json(a), outputs));
  return 0;
}

inline int run_convert(const std::string& to, const std::string& in, const std::string& out) {
  if (to == "qubo") {
    LoadedModel lm = load_model(in);
    write_file(out, write_qubo_text(lm.qubo));
  } else if (to == "ising") {
    const std::string text = read_file(in);
    std::vector<std::string> warnings;
    QuboProblem p = parse_qubo_text(text, &warnings);
    for (const auto& w : warnings) std::cerr << in << ": " << w << "\n";
    nlohmann::json meta;
    meta["converted_from"] = in;
    write_file(out, write_model_json(qubo_to_ising(p), meta));
  } else {
    std::cerr << "unknown conversion target '" << to << "' (expected ising|qubo)\n";
    return 1;
  }
  return 0;
}

struct SolveArgs {
  bool exact = false;
  bool sa = false;
  std::size_t k = 6037;
  unsigned workers = 0;
  bool force = false;
  int sweeps = 1000;
  double beta0 = 0.1;
  double beta1 = 10.0;
  int restarts = 1000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t stream = 0;
  std::optional<double> target;
  std::string klass;
  std::string instance_id;
  std::string in;
  std::string out;
  std::uint64_t progress = 0;
};

inline int run_solve_exact(const SolveArgs& a) {
  LoadedModel lm = load_model(a.in);
  SolveOptions opts;
  opts.k = a.k;
  opts.workers = a.workers;
  opts.force = a.force;
  if (const char* env = std::getenv("QUBO_MAX_N")) opts.guard_n = std::atoi(env);
  if (a.progress) {
    opts.progress_interval = a.progress;
    opts.progress = [](std::uint64_t visited, double current_min) {
      std::cerr << "visited " << visited << ", current min " << current_min << "\n";
    };
  }

  LowEnergySpectrum s = solve_exact(lm.qubo, a.k, opts);
  const double shift = lm.energy_shift;
  for (auto& st : s.states) st.energy += shift;
  s.min_cost += shift;
  s.next_lowest_cost += shift;
  s.max_cost += shift;

  nlohmann::json meta;
  meta["source"] = a.in;
  meta["k"] = a.k;
  if (lm.meta.contains("class")) meta["class"] = lm.meta["class"];

  const std::string out = a.out.empty() ? a.in + ".spectrum.json" : a.out;
  write_file(out, write_spectrum_json(s, shift, meta));
  std::cout << "ground energy " << detail::format_g17(s.min_cost) << " config "
            << Configuration(s.min_config, s.n).to_string() << " degeneracy "
            << s.ground_degeneracy << "\n";

  nlohmann::json params;
  params["input"] = a.in;
  params["k"] = a.k;
  params["workers"] = a.workers;
  params["force"] = a.force;
  write_file(manifest_path(out), write_manifest_json("solve-exact", params, {out}));
  return 0;
}

inline int run_solve_sa(SolveArgs a) {
  if (!a.seed_given) {
    std::random_device rd;
    a.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "no --seed given; using auto-generated seed " << a.seed
              << " (recorded in the manifest)\n";
  }
  LoadedModel lm = load_model(a.in);
  AnnealParams params;
  params.sweeps = a.sweeps;
  params.beta_start = a.beta0;
  params.beta_end = a.beta1;
  params.restarts = a.restarts;

  ProblemClass klass = problem_class_from_string(
      !a.klass.empty() ? a.klass
                       : lm.meta.contains("class") ? lm.meta["class"].get<std::string>() : "");
  const std::string id = !a.instance_id.empty() ? a.instance_id : fs::path(a.in).stem().string();
  GeneratorSeed gs{a.seed, a.stream};

  if (a.target) {
    // Targets are expressed in the input model's energy units (the same
    // domain solve --exact reports); estimate_success works on H alone.
    const double target_h = *a.target - lm.model.offset();
    SuccessRecord rec = estimate_success(lm.model, target_h, params, gs, klass, id);
    std::cout << write_success_csv({rec});
    if (!a.out.empty()) write_file(a.out, write_success_csv({rec}));
  } else {
    AnnealResult best = anneal_once(lm.model, params, gs);
    for (int r = 1; r < params.restarts; ++r) {
      AnnealResult res = anneal_once(lm.model, params, gs.derived(static_cast<std::uint64_t>(r)));
      if (res.best_energy < best.best_energy ||
          (res.best_energy == best.best_energy && res.best_config.bits < best.best_config.bits))
        best = res;
    }
    std::cout << "best energy " << detail::format_g17(best.best_energy + lm.model.offset())
              << " config " << best.best_config.to_string() << "\n";
  }

  nlohmann::json mparams;
  mparams["input"] = a.in;
  mparams["sweeps"] = a.sweeps;
  mparams["beta0"] = a.beta0;
  mparams["beta1"] = a.beta1;
  mparams["restarts"] = a.restarts;
  mparams["seed"] = a.seed;
  mparams["stream"] = a.stream;
  if (a.target) mparams["target"] = *a.target;
  std::vector<std::string> outputs;
  if (!a.out.empty()) outputs.push_back(a.out);
  if (!a.out.empty())
    write_file(manifest_path(a.out), write_manifest_json("solve-sa", mparams, outputs));
  return 0;
}

inline int run_analyze(const std::string& in, const std::string& hamming_out,
                       const std::string& spacing_out, const std::string& mode, bool spread) {
  SpectrumDocument doc = read_spectrum_json(read_file(in));
  if (hamming_out.empty() && spacing_out.empty() && !spread) {
    std::cerr << "analyze: nothing to do (pass --hamming, --spacing and/or --spread)\n";
    return 1;
  }
  if (!hamming_out.empty())
    write_file(hamming_out, write_histogram_csv(hamming_histogram(doc.spectrum, in)));
  if (!spacing_out.empty()) {
    SpacingMode m = SpacingMode::distinct;
    if (mode == "consecutive")
      m = SpacingMode::consecutive;
    else if (mode != "distinct") {
      std::cerr << "unknown --mode '" << mode << "' (expected distinct|consecutive)\n";
      return 1;
    }
    write_file(spacing_out, write_histogram_csv(level_spacings(doc.spectrum, m, kDefaultTol, in)));
  }
  if (spread)
    std::cout << "spread " << detail::format_g17(spectrum_spread(doc.spectrum)) << "\n";
  return 0;
}

inline int run_fit(const std::string& input, const std::string& crossover, const std::string& out) {
  auto records = read_success_csv(read_file(input));
  if (records.empty()) {
    std::cerr << "fit: no records in " << input << "\n";
    return 2;
  }
  CrossoverSpec spec = CrossoverSpec::none();
  if (crossover == "auto")
    spec = CrossoverSpec::automatic();
  else if (crossover != "none")
    spec = CrossoverSpec::fixed(detail::parse_double(crossover, 0));

  auto summaries = mean_success_by_n(records);
  std::string csv;
  bool first = true;
  for (ProblemClass klass :
       {ProblemClass::REG, ProblemClass::RAN, ProblemClass::TWOSAT, ProblemClass::OTHER}) {
    std::vector<std::pair<double, double>> points;
    for (const auto& s : summaries)
      if (s.class_label == klass) points.emplace_back(static_cast<double>(s.n), s.mean);
    if (points.empty()) continue;
    ScalingFit fit = fit_scaling(points, spec);
    std::string chunk = write_fit_csv(fit, to_string(klass));
    if (!first) chunk = chunk.substr(chunk.find('\n') + 1);  // drop repeated header
    csv += chunk;
    first = false;
  }
  if (out.empty())
    std::cout << csv;
  else
    write_file(out, csv);
  return 0;
}

inline int run_predict(int n, std::uint64_t units, int ref_n, std::uint64_t ref_units,
                       double ref_time) {
  ElapsedPrediction pred = predict_elapsed(n, units, ref_time, ref_n, ref_units);
  std::cout << "n,units,predicted_ops,s_ref,predicted_seconds\n";
  std::cout << n << ',' << units << ',' << u128_to_string(predicted_ops(n)) << ','
            << detail::format_g17(pred.s_ref) << ',' << detail::format_g17(pred.seconds) << "\n";
  return 0;
}

}  // namespace cli

/// Command-line entry point: 0 on success, 1 on usage errors, 2 on
/// generation/solver/file failures.
inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Generate, solve and analyze QUBO/Ising problem instances"};
  app.require_subcommand(1);

  cli::GenArgs gen;
  auto* cgen = app.add_subcommand("gen", "Generate problem instances");
  cgen->add_option("--class", gen.klass, "Problem class: reg|ran|2sat")->required();
  cgen->add_option("--n", gen.n, "Variable count")->required();
  cgen->add_option("--m", gen.m, "Clause count (2sat; default n+1)");
  auto* seed_opt = cgen->add_option("--seed", gen.seed, "Generator seed");
  cgen->add_option("--stream", gen.stream, "Base stream id (instance i uses stream+i)");
  cgen->add_option("--count", gen.count, "Number of instances");
  cgen->add_option("--min-degeneracy", gen.min_degeneracy,
                   "Minimum first-excited degeneracy (2sat)");
  cgen->add_option("--max-attempts", gen.max_attempts, "Rejection sampling budget (2sat)");
  cgen->add_option("--gauge-family", gen.gauge_family, "Also write this many gauge transforms");
  cgen->add_option("-o,--out", gen.out, "Output model JSON path")->required();

  std::string conv_to, conv_in, conv_out;
  auto* cconv = app.add_subcommand("convert", "Convert between .qubo text and model JSON");
  cconv->add_option("--to", conv_to, "Target format: ising|qubo")->required();
  cconv->add_option("input", conv_in, "Input path")->required();
  cconv->add_option("output", conv_out, "Output path")->required();

  cli::SolveArgs solve;
  auto* csolve = app.add_subcommand("solve", "Solve an instance exactly or by annealing");
  auto* exact_flag = csolve->add_flag("--exact", solve.exact, "Exhaustive enumeration");
  auto* sa_flag = csolve->add_flag("--sa", solve.sa, "Simulated annealing");
  exact_flag->excludes(sa_flag);
  csolve->add_option("--k", solve.k, "States to keep (exact; default 6037)");
  csolve->add_option("--workers", solve.workers, "Worker count (exact; default hardware)");
  csolve->add_flag("--force", solve.force, "Override the enumeration size guard");
  csolve->add_option("--progress", solve.progress, "Progress report interval in visits (exact)");
  csolve->add_option("--sweeps", solve.sweeps, "Sweeps per restart (sa)");
  csolve->add_option("--beta0", solve.beta0, "Initial inverse temperature (sa)");
  csolve->add_option("--beta1", solve.beta1, "Final inverse temperature (sa)");
  csolve->add_option("--restarts", solve.restarts, "Independent restarts (sa)");
  auto* sa_seed = csolve->add_option("--seed", solve.seed, "Annealing seed (sa)");
  csolve->add_option("--stream", solve.stream, "Base stream id (sa)");
  csolve->add_option("--target", solve.target, "Known ground energy; emit a success record (sa)");
  csolve->add_option("--class", solve.klass, "Class label for the success record (sa)");
  csolve->add_option("--id", solve.instance_id, "Instance id for the success record (sa)");
  csolve->add_option("input", solve.in, "Model JSON or .qubo file")->required();
  csolve->add_option("-o,--out", solve.out, "Output path");

  std::string an_in, an_hamming, an_spacing, an_mode = "distinct";
  bool an_spread = false;
  auto* can = app.add_subcommand("analyze", "Landscape statistics of a spectrum file");
  can->add_option("--hamming", an_hamming, "Write the Hamming histogram CSV here");
  can->add_option("--spacing", an_spacing, "Write the level-spacing histogram CSV here");
  can->add_option("--mode", an_mode, "Spacing semantics: distinct|consecutive");
  can->add_flag("--spread", an_spread, "Print the spectrum spread");
  can->add_option("input", an_in, "Spectrum JSON path")->required();

  std::string fit_in, fit_crossover = "none", fit_out;
  auto* cfit = app.add_subcommand("fit", "Exponential scaling fit of success probabilities");
  cfit->add_option("--input", fit_in, "Success-record CSV")->required();
  cfit->add_option("--crossover", fit_crossover, "none|auto|<n>");
  cfit->add_option("-o,--out", fit_out, "Output CSV path (default stdout)");

  int pr_n = 0;
  std::uint64_t pr_units = 0, pr_ref_units = 4;
  int pr_ref_n = 44;
  double pr_ref_time = 1562.0;
  auto* cpred = app.add_subcommand("predict", "Enumeration cost and elapsed-time predictor");
  cpred->add_option("--n", pr_n, "Problem size")->required();
  cpred->add_option("--units", pr_units, "Processing units")->required();
  cpred->add_option("--ref-n", pr_ref_n, "Reference problem size");
  cpred->add_option("--ref-units", pr_ref_units, "Reference unit count");
  cpred->add_option("--ref-time", pr_ref_time, "Reference elapsed seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cgen->parsed()) {
      gen.seed_given = seed_opt->count() > 0;
      return cli::run_gen(gen);
    }
    if (cconv->parsed()) return cli::run_convert(conv_to, conv_in, conv_out);
    if (csolve->parsed()) {
      if (solve.exact == solve.sa) {
        std::cerr << "solve: pass exactly one of --exact / --sa\n";
        return 1;
      }
      solve.seed_given = sa_seed->count() > 0;
      return solve.exact ? cli::run_solve_exact(solve) : cli::run_solve_sa(solve);
    }
    if (can->parsed()) return cli::run_analyze(an_in, an_hamming, an_spacing, an_mode, an_spread);
    if (cfit->parsed()) return cli::run_fit(fit_in, fit_crossover, fit_out);
    if (cpred->parsed()) return cli::run_predict(pr_n, pr_units, pr_ref_n, pr_ref_units, pr_ref_time);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace qubo

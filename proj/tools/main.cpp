// onegrab command line: sample-size planning for one-time-grab multi-model
// fitting. Emits JSON (minsize/prob/demo) or CSV (curve/compare) on stdout;
// diagnostics go to stderr as a single-line JSON object.
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "onegrab/baselines.hpp"
#include "onegrab/bounds.hpp"
#include "onegrab/demo.hpp"
#include "onegrab/hypergeom.hpp"
#include "onegrab/montecarlo.hpp"
#include "onegrab/rng.hpp"
#include "onegrab/sizing.hpp"

namespace {

using json = nlohmann::ordered_json;

// Exact probabilities are only reported up to this population size; the DP is
// polynomial but the constant gets unpleasant past it.
constexpr std::int64_t kExactReportLimit = 2000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PopulationArgs {
  std::int64_t population = 0;
  std::int64_t structure_size = 0;
  std::int64_t structures = 0;
  std::vector<std::int64_t> structure_sizes;
};

void add_population_options(CLI::App* cmd, PopulationArgs& args) {
  cmd->add_option("--population", args.population, "total number of points N")
      ->required();
  cmd->add_option("--structure-size", args.structure_size,
                  "points per structure (with --structures)");
  cmd->add_option("--structures", args.structures,
                  "number of structures (with --structure-size)");
  cmd->add_option("--structure-sizes", args.structure_sizes,
                  "comma-separated per-structure sizes")
      ->delimiter(',');
}

onegrab::PopulationSpec resolve_population(const PopulationArgs& args) {
  const bool uniform = args.structure_size > 0 || args.structures > 0;
  const bool listed = !args.structure_sizes.empty();
  if (uniform == listed) {
    throw UsageError(
        "give either --structure-size with --structures, or --structure-sizes");
  }
  std::vector<std::int64_t> sizes = args.structure_sizes;
  if (uniform) {
    if (args.structure_size <= 0 || args.structures <= 0) {
      throw UsageError("--structure-size and --structures must both be positive");
    }
    sizes.assign(static_cast<std::size_t>(args.structures), args.structure_size);
  }
  return onegrab::validate_population(args.population, std::move(sizes));
}

onegrab::BoundVariant parse_variant(const std::string& p0,
                                    const std::string& delta) {
  onegrab::BoundVariant variant;
  if (p0 == "paper") {
    variant.p0_form = onegrab::P0Form::paper_literal;
  } else if (p0 == "safe") {
    variant.p0_form = onegrab::P0Form::safe;
  } else if (p0 == "exp") {
    variant.p0_form = onegrab::P0Form::exponential;
  } else {
    throw UsageError("unknown --p0 form: " + p0);
  }
  if (delta == "grab") {
    variant.delta_binomial = onegrab::DeltaBinomial::grab_choose;
  } else if (delta == "structure") {
    variant.delta_binomial = onegrab::DeltaBinomial::structure_choose;
  } else if (delta == "strict") {
    variant.delta_binomial = onegrab::DeltaBinomial::strict;
  } else {
    throw UsageError("unknown --delta form: " + delta);
  }
  return variant;
}

json variant_json(const onegrab::BoundVariant& variant) {
  return json{{"p0", onegrab::to_string(variant.p0_form)},
              {"delta", onegrab::to_string(variant.delta_binomial)}};
}

void emit(const json& value) {
  std::fputs(value.dump(2).c_str(), stdout);
  std::fputc('\n', stdout);
}

struct Grid {
  std::vector<double> values;
};

Grid parse_grid(const std::string& text) {
  const auto first = text.find(':');
  const auto second = text.find(':', first == std::string::npos ? 0 : first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw UsageError("--confidence-grid expects lo:hi:step");
  }
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  try {
    lo = std::stod(text.substr(0, first));
    hi = std::stod(text.substr(first + 1, second - first - 1));
    step = std::stod(text.substr(second + 1));
  } catch (const std::exception&) {
    throw UsageError("--confidence-grid expects numeric lo:hi:step");
  }
  if (!(step > 0.0) || hi < lo) {
    throw UsageError("--confidence-grid needs lo <= hi and step > 0");
  }
  const auto count =
      static_cast<std::int64_t>(std::llround((hi - lo) / step)) + 1;
  if (count < 1 || count > 10000) {
    throw UsageError("--confidence-grid resolves to an unreasonable row count");
  }
  Grid grid;
  for (std::int64_t i = 0; i < count; ++i) {
    const double p = lo + static_cast<double>(i) * step;
    if (!(p > 0.0 && p < 1.0)) {
      throw UsageError("--confidence-grid values must lie strictly in (0, 1)");
    }
    grid.values.push_back(p);
  }
  return grid;
}

// ---- subcommand payloads ---------------------------------------------------

struct MinsizeArgs {
  PopulationArgs population;
  std::int64_t dof = 0;
  double confidence = 0.0;
  std::string method = "bound";
  std::string p0 = "safe";
  std::string delta = "strict";
  std::int64_t trials = 200;
  std::uint64_t seed = 0;
  int threads = 0;
  CLI::Option* seed_opt = nullptr;
};

int run_minsize(const MinsizeArgs& args) {
  const onegrab::PopulationSpec spec = resolve_population(args.population);
  const onegrab::Requirement req(args.dof, args.confidence);
  const onegrab::BoundVariant variant = parse_variant(args.p0, args.delta);

  onegrab::SizingMethod method = onegrab::SizingMethod::bound;
  if (args.method == "exact") method = onegrab::SizingMethod::exact;
  if (args.method == "mc") method = onegrab::SizingMethod::mc;
  onegrab::McOptions mc;
  mc.trials = args.trials;
  mc.seed = args.seed;
  mc.threads = args.threads;
  if (method == onegrab::SizingMethod::mc && args.seed_opt->count() == 0) {
    throw UsageError("--seed is required for --method mc");
  }

  const onegrab::SizingResult result =
      onegrab::min_grab_size(spec, req, method, variant, mc);
  emit(json{{"r", result.r},
            {"method", onegrab::to_string(result.method)},
            {"achieved", result.achieved},
            {"variant", variant_json(result.variant)},
            {"fallback_used", result.fallback_used}});
  return 0;
}

struct ProbArgs {
  PopulationArgs population;
  std::int64_t grab_size = 0;
  std::int64_t dof = 0;
  std::string p0 = "safe";
  std::string delta = "strict";
  std::int64_t trials = 200;
  std::uint64_t seed = 0;
  int threads = 0;
};

int run_prob(const ProbArgs& args) {
  const onegrab::PopulationSpec spec = resolve_population(args.population);
  const onegrab::BoundVariant variant = parse_variant(args.p0, args.delta);
  const onegrab::BoundBreakdown breakdown =
      onegrab::joint_lower_bound(spec, args.dof, args.grab_size, variant);

  json bound{{"p0_per_structure", breakdown.p0_per_structure},
             {"delta_per_structure", breakdown.delta_per_structure},
             {"lower_bound", breakdown.joint_lower_bound},
             {"variant", variant_json(breakdown.variant)}};
  std::vector<bool> fallback(breakdown.exact_tail_fallback.begin(),
                             breakdown.exact_tail_fallback.end());
  bound["exact_tail_fallback"] = fallback;

  json exact;
  if (spec.total_points <= kExactReportLimit) {
    exact = onegrab::joint_success_exact(spec, args.dof, args.grab_size).linear;
  }

  const onegrab::MCEstimate estimate = onegrab::estimate_success(
      spec, args.dof, args.grab_size, args.trials, args.seed, args.threads);

  emit(json{{"r", args.grab_size},
            {"dof", args.dof},
            {"bound", bound},
            {"exact", exact},
            {"mc", json{{"p_hat", estimate.p_hat},
                        {"std_err", estimate.std_err},
                        {"successes", estimate.successes},
                        {"trials", estimate.trials},
                        {"seed", estimate.master_seed}}}});
  return 0;
}

struct CurveArgs {
  PopulationArgs population;
  std::int64_t dof = 0;
  std::string grid_text;
  std::string format = "csv";
  std::string p0 = "safe";
  std::string delta = "strict";
  std::int64_t trials = 200;
  std::int64_t repeats = 10;
  std::uint64_t seed = 0;
  int threads = 0;
};

int run_curve(const CurveArgs& args) {
  const onegrab::PopulationSpec spec = resolve_population(args.population);
  const onegrab::BoundVariant variant = parse_variant(args.p0, args.delta);
  const Grid grid = parse_grid(args.grid_text);
  if (args.repeats < 1) throw UsageError("--repeats must be at least 1");
  const bool with_exact = spec.total_points <= kExactReportLimit;

  // One batch of coverage samples per repetition, shared across the whole
  // grid so the estimated r is non-decreasing in P within each repetition.
  std::vector<std::vector<std::int64_t>> batches;
  batches.reserve(static_cast<std::size_t>(args.repeats));
  for (std::int64_t rep = 0; rep < args.repeats; ++rep) {
    batches.push_back(onegrab::coverage_samples(
        spec, args.dof, args.trials,
        onegrab::derive_stream_seed(args.seed, static_cast<std::uint64_t>(rep)),
        args.threads));
  }

  struct Row {
    double p_target = 0.0;
    std::int64_t r_bound = 0;
    std::int64_t r_exact = 0;
    double r_mc_mean = 0.0;
    double r_mc_std = 0.0;
  };
  std::vector<Row> rows;
  for (const double p : grid.values) {
    const onegrab::Requirement req(args.dof, p);
    Row row;
    row.p_target = p;
    row.r_bound = onegrab::min_grab_size(spec, req, onegrab::SizingMethod::bound,
                                         variant)
                      .r;
    if (with_exact) {
      row.r_exact =
          onegrab::min_grab_size(spec, req, onegrab::SizingMethod::exact).r;
    }
    double sum = 0.0;
    std::vector<double> estimates;
    estimates.reserve(batches.size());
    for (const auto& batch : batches) {
      const auto r = static_cast<double>(
          onegrab::min_r_from_samples(batch, req).r);
      estimates.push_back(r);
      sum += r;
    }
    row.r_mc_mean = sum / static_cast<double>(estimates.size());
    double sq = 0.0;
    for (const double e : estimates) {
      sq += (e - row.r_mc_mean) * (e - row.r_mc_mean);
    }
    row.r_mc_std = estimates.size() > 1
                       ? std::sqrt(sq / static_cast<double>(estimates.size() - 1))
                       : 0.0;
    rows.push_back(row);
  }

  if (args.format == "json") {
    json out = json::array();
    for (const Row& row : rows) {
      json item{{"p_target", row.p_target},
                {"r_bound", row.r_bound},
                {"r_exact", with_exact ? json(row.r_exact) : json()},
                {"r_mc_mean", row.r_mc_mean},
                {"r_mc_std", row.r_mc_std}};
      out.push_back(item);
    }
    emit(out);
    return 0;
  }
  if (args.format != "csv") throw UsageError("--format must be csv or json");

  std::fputs("p_target,r_bound,r_exact,r_mc_mean,r_mc_std\n", stdout);
  char line[256];
  for (const Row& row : rows) {
    char exact_field[32] = "";
    if (with_exact) {
      std::snprintf(exact_field, sizeof exact_field, "%" PRId64, row.r_exact);
    }
    std::snprintf(line, sizeof line, "%.6g,%" PRId64 ",%s,%.6g,%.6g\n",
                  row.p_target, row.r_bound, exact_field, row.r_mc_mean,
                  row.r_mc_std);
    std::fputs(line, stdout);
  }
  return 0;
}

struct CompareArgs {
  PopulationArgs population;
  std::int64_t dof = 0;
  double confidence = 0.0;
  std::string p0 = "safe";
  std::string delta = "strict";
};

int run_compare(const CompareArgs& args) {
  const onegrab::PopulationSpec spec = resolve_population(args.population);
  const onegrab::Requirement req(args.dof, args.confidence);
  const onegrab::BoundVariant variant = parse_variant(args.p0, args.delta);

  std::vector<onegrab::BaselineReport> reports;
  {
    onegrab::BaselineReport grab;
    grab.method_name = "one_grab_bound";
    grab.hypotheses = 1;
    grab.points_touched =
        onegrab::min_grab_size(spec, req, onegrab::SizingMethod::bound, variant)
            .r;
    reports.push_back(std::move(grab));
  }
  if (spec.total_points <= kExactReportLimit) {
    onegrab::BaselineReport grab;
    grab.method_name = "one_grab_exact";
    grab.hypotheses = 1;
    grab.points_touched =
        onegrab::min_grab_size(spec, req, onegrab::SizingMethod::exact).r;
    reports.push_back(std::move(grab));
  }
  reports.push_back(onegrab::sequential_total(spec, args.dof, args.confidence));

  std::fputs("method,hypotheses,points_touched\n", stdout);
  char line[256];
  for (const auto& report : reports) {
    std::snprintf(line, sizeof line, "%s,%" PRId64 ",%" PRId64 "\n",
                  report.method_name.c_str(), report.hypotheses,
                  report.points_touched);
    std::fputs(line, stdout);
  }
  return 0;
}

struct DemoArgs {
  PopulationArgs population;
  std::string geometry = "line2d";
  double noise = 0.01;
  double threshold = 0.03;
  double confidence = 0.95;
  std::string method = "bound";
  std::string p0 = "safe";
  std::string delta = "strict";
  std::int64_t grab_size = -1;
  std::int64_t trials = 200;
  std::uint64_t seed = 0;
  std::string export_scene_path;
};

int run_demo(const DemoArgs& args) {
  const onegrab::PopulationSpec spec = resolve_population(args.population);
  const onegrab::Geometry geometry = args.geometry == "plane3d"
                                         ? onegrab::Geometry::plane3d
                                         : onegrab::Geometry::line2d;
  const std::int64_t dof = onegrab::dof_for(geometry);
  if (args.trials < 1) throw UsageError("--trials must be at least 1");

  std::int64_t r_used = args.grab_size;
  if (r_used < 0) {
    const onegrab::Requirement req(dof, args.confidence);
    onegrab::SizingMethod method = onegrab::SizingMethod::bound;
    if (args.method == "exact") method = onegrab::SizingMethod::exact;
    if (args.method == "mc") method = onegrab::SizingMethod::mc;
    onegrab::McOptions mc;
    mc.trials = args.trials;
    mc.seed = onegrab::derive_stream_seed(args.seed, 0x73697a65);  // sizing stream
    r_used = onegrab::min_grab_size(spec, req, method,
                                    parse_variant(args.p0, args.delta), mc)
                 .r;
  }
  if (r_used > spec.total_points) {
    throw onegrab::DomainError("--r exceeds the population size");
  }

  std::int64_t coverage_hits = 0;
  double recovery_sum = 0.0;
  const auto structures = static_cast<double>(spec.structure_count());
  for (std::int64_t trial = 0; trial < args.trials; ++trial) {
    const onegrab::SyntheticScene scene = onegrab::generate_scene(
        spec, geometry, args.noise,
        onegrab::derive_stream_seed(args.seed,
                                    2 * static_cast<std::uint64_t>(trial)));
    if (trial == 0 && !args.export_scene_path.empty()) {
      std::ofstream out(args.export_scene_path);
      if (!out) throw UsageError("cannot open " + args.export_scene_path);
      onegrab::write_scene(out, scene);
    }
    const onegrab::DemoOutcome outcome = onegrab::run_demo_trial(
        scene, r_used, args.threshold,
        onegrab::derive_stream_seed(args.seed,
                                    2 * static_cast<std::uint64_t>(trial) + 1));
    if (outcome.coverage_success) ++coverage_hits;
    recovery_sum += static_cast<double>(outcome.recovered_models) / structures;
  }

  emit(json{{"coverage_rate", static_cast<double>(coverage_hits) /
                                  static_cast<double>(args.trials)},
            {"recovery_rate", recovery_sum / static_cast<double>(args.trials)},
            {"r_used", r_used}});
  return 0;
}

void print_error(const char* code, const std::string& message) {
  const json line{{"error", code}, {"message", message}};
  std::fputs(line.dump().c_str(), stderr);
  std::fputc('\n', stderr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sample-size planning for one-time-grab multi-structure fitting"};
  app.require_subcommand(1);

  MinsizeArgs minsize;
  CLI::App* minsize_cmd = app.add_subcommand(
      "minsize", "minimal grab size meeting a coverage requirement");
  add_population_options(minsize_cmd, minsize.population);
  minsize_cmd->add_option("--dof", minsize.dof, "points needed per structure")
      ->required();
  minsize_cmd
      ->add_option("--confidence", minsize.confidence, "target probability P")
      ->required();
  minsize_cmd->add_option("--method", minsize.method, "sizing method")
      ->check(CLI::IsMember({"bound", "exact", "mc"}));
  minsize_cmd->add_option("--p0", minsize.p0, "zero-hit bound form")
      ->check(CLI::IsMember({"paper", "safe", "exp"}));
  minsize_cmd->add_option("--delta", minsize.delta, "delta binomial form")
      ->check(CLI::IsMember({"grab", "structure", "strict"}));
  minsize_cmd->add_option("--trials", minsize.trials, "mc trials");
  minsize.seed_opt =
      minsize_cmd->add_option("--seed", minsize.seed, "mc master seed");
  minsize_cmd->add_option("--threads", minsize.threads, "worker threads");

  ProbArgs prob;
  CLI::App* prob_cmd = app.add_subcommand(
      "prob", "coverage probability of a fixed grab size");
  add_population_options(prob_cmd, prob.population);
  prob_cmd->add_option("--r", prob.grab_size, "grab size")->required();
  prob_cmd->add_option("--dof", prob.dof, "points needed per structure")
      ->required();
  prob_cmd->add_option("--p0", prob.p0, "zero-hit bound form")
      ->check(CLI::IsMember({"paper", "safe", "exp"}));
  prob_cmd->add_option("--delta", prob.delta, "delta binomial form")
      ->check(CLI::IsMember({"grab", "structure", "strict"}));
  prob_cmd->add_option("--trials", prob.trials, "mc trials");
  prob_cmd->add_option("--seed", prob.seed, "mc master seed")->required();
  prob_cmd->add_option("--threads", prob.threads, "worker threads");

  CurveArgs curve;
  CLI::App* curve_cmd = app.add_subcommand(
      "curve", "r versus target probability over a confidence grid");
  add_population_options(curve_cmd, curve.population);
  curve_cmd->add_option("--dof", curve.dof, "points needed per structure")
      ->required();
  curve_cmd
      ->add_option("--confidence-grid", curve.grid_text, "grid as lo:hi:step")
      ->required();
  curve_cmd->add_option("--format", curve.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  curve_cmd->add_option("--p0", curve.p0, "zero-hit bound form")
      ->check(CLI::IsMember({"paper", "safe", "exp"}));
  curve_cmd->add_option("--delta", curve.delta, "delta binomial form")
      ->check(CLI::IsMember({"grab", "structure", "strict"}));
  curve_cmd->add_option("--trials", curve.trials, "coverage samples per repeat");
  curve_cmd->add_option("--repeats", curve.repeats, "mc sizing repetitions");
  curve_cmd->add_option("--seed", curve.seed, "mc master seed")->required();
  curve_cmd->add_option("--threads", curve.threads, "worker threads");

  CompareArgs compare;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "sample budget against iterative baselines");
  add_population_options(compare_cmd, compare.population);
  compare_cmd->add_option("--dof", compare.dof, "points needed per structure")
      ->required();
  compare_cmd
      ->add_option("--confidence", compare.confidence, "target probability P")
      ->required();
  compare_cmd->add_option("--p0", compare.p0, "zero-hit bound form")
      ->check(CLI::IsMember({"paper", "safe", "exp"}));
  compare_cmd->add_option("--delta", compare.delta, "delta binomial form")
      ->check(CLI::IsMember({"grab", "structure", "strict"}));

  DemoArgs demo;
  CLI::App* demo_cmd = app.add_subcommand(
      "demo", "synthetic multi-structure detection experiment");
  add_population_options(demo_cmd, demo.population);
  demo_cmd->add_option("--geometry", demo.geometry, "scene geometry")
      ->check(CLI::IsMember({"line2d", "plane3d"}));
  demo_cmd->add_option("--noise", demo.noise, "perpendicular noise sigma");
  demo_cmd->add_option("--threshold", demo.threshold, "inlier threshold tau");
  demo_cmd->add_option("--confidence", demo.confidence, "target probability P");
  demo_cmd->add_option("--method", demo.method, "sizing method for r")
      ->check(CLI::IsMember({"bound", "exact", "mc"}));
  demo_cmd->add_option("--p0", demo.p0, "zero-hit bound form")
      ->check(CLI::IsMember({"paper", "safe", "exp"}));
  demo_cmd->add_option("--delta", demo.delta, "delta binomial form")
      ->check(CLI::IsMember({"grab", "structure", "strict"}));
  demo_cmd->add_option("--r", demo.grab_size, "explicit grab size override");
  demo_cmd->add_option("--trials", demo.trials, "experiment repetitions");
  demo_cmd->add_option("--seed", demo.seed, "master seed")->required();
  demo_cmd->add_option("--export-scene", demo.export_scene_path,
                       "write the first scene to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    std::fputs(app.help().c_str(), stderr);
    print_error("usage", error.what());
    return 2;
  }

  try {
    if (minsize_cmd->parsed()) return run_minsize(minsize);
    if (prob_cmd->parsed()) return run_prob(prob);
    if (curve_cmd->parsed()) return run_curve(curve);
    if (compare_cmd->parsed()) return run_compare(compare);
    if (demo_cmd->parsed()) return run_demo(demo);
    print_error("usage", "no subcommand given");
    return 2;
  } catch (const UsageError& error) {
    print_error("usage", error.what());
    return 2;
  } catch (const onegrab::Infeasible& error) {
    print_error("infeasible", error.what());
    return 3;
  } catch (const onegrab::Error& error) {
    print_error("domain", error.what());
    return 4;
  } catch (const std::exception& error) {
    print_error("internal", error.what());
    return 4;
  }
}

// Copyright 2026 the ucal authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <sstream>

#include "ucal/dataset.hpp"
#include "ucal/ecdf.hpp"
#include "ucal/error.hpp"
#include "ucal/estimators.hpp"
#include "ucal/io.hpp"
#include "ucal/oracle_check.hpp"
#include "ucal/patching.hpp"
#include "ucal/serialize.hpp"
#include "ucal/utilities.hpp"

namespace ucal::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string preds;
  std::string labels;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t bins = 15;
  std::string bin_kind = "equal-weight";
  std::vector<std::string> utilities;
  std::string family = "linear";
  std::size_t m = 1500;
  double delta = 0.05;
  double epsilon = 0.01;
  std::size_t max_iters = 1000;
  std::string step_rule = "theoretical";
  std::size_t augment = 0;
  int threads = 1;
  bool header = false;
  bool renormalize = false;

  // command-specific extras
  std::string class_weights = "uniform";
  std::string fixed;
  std::string patch;
  std::string history;
  bool keep_utilities = false;
  std::string kind;
  std::size_t n = 0;
  std::size_t classes = 0;
  std::size_t support = 0;
  std::string spec;
  std::size_t trials = 1000;
  std::size_t n_max = 200;
  std::size_t c_max = 8;
  bool inject_fault = false;
};

LabeledPredictions load_validated(const Options& o, ValidationReport* report_out = nullptr) {
  LabeledPredictions raw = io::read_labeled(o.preds, o.labels, o.header);
  ValidationReport report = validate(raw, o.renormalize);
  LabeledPredictions data = report.corrected;
  if (report_out != nullptr) *report_out = std::move(report);
  return data;
}

// Expands one --utility argument into labelled specs.
std::vector<UtilitySpec> parse_utility(const std::string& arg, std::size_t C) {
  auto suffix = [&](const std::string& prefix) -> std::optional<std::string> {
    if (arg.rfind(prefix + ":", 0) == 0) return arg.substr(prefix.size() + 1);
    return std::nullopt;
  };
  auto to_index = [&](const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || s.empty()) throw DomainError("bad number in utility selection '" + arg + "'");
    return static_cast<std::size_t>(v);
  };

  if (arg == "top-class" || arg == "top_class") return {family::TopClass{}};
  if (arg == "class-wise" || arg == "class_wise") {
    std::vector<UtilitySpec> out;
    for (std::size_t c = 0; c < C; ++c) out.emplace_back(family::ClassWise{c});
    return out;
  }
  if (arg == "top-k" || arg == "top_k") {
    std::vector<UtilitySpec> out;
    for (std::size_t k = 1; k <= C; ++k) out.emplace_back(family::TopK{k});
    return out;
  }
  if (arg == "comb") return comb_pool(C);
  if (arg == "dcg") return dcg_pool();
  if (auto s = suffix("class-wise")) return {family::ClassWise{to_index(*s)}};
  if (auto s = suffix("top-k")) return {family::TopK{to_index(*s)}};
  if (auto s = suffix("dcg")) {
    try {
      return {family::Dcg{std::stod(*s)}};
    } catch (const std::exception&) {
      throw DomainError("bad gamma in utility selection '" + arg + "'");
    }
  }
  if (!fs::exists(arg)) throw DomainError("unknown utility '" + arg + "' (not a keyword or an existing file)");
  return {utility_from_json(parse_json(io::read_text(arg)))};
}

std::vector<UtilitySpec> parse_utilities(const std::vector<std::string>& args, std::size_t C) {
  std::vector<UtilitySpec> out;
  for (const auto& a : args) {
    for (auto& spec : parse_utility(a, C)) {
      check_utility(spec, C);
      out.push_back(std::move(spec));
    }
  }
  return out;
}

BinKind parse_bin_kind(const std::string& s) {
  return s == "equal-width" ? BinKind::EqualWidth : BinKind::EqualWeight;
}

fs::path with_extension(const std::string& path, const char* ext) {
  fs::path p(path);
  p.replace_extension(ext);
  return p;
}

int cmd_validate(const Options& o, std::ostream& out) {
  ValidationReport report;
  const LabeledPredictions data = load_validated(o, &report);
  Json j;
  j["n"] = data.size();
  j["C"] = data.num_classes();
  j["max_row_sum_deviation"] = report.max_row_sum_deviation;
  j["worst_row"] = report.worst_row;
  j["min_entry"] = report.min_entry;
  j["rows_outside_tolerance"] = report.rows_outside_tolerance;
  j["label_violations"] = report.label_violations;
  j["renormalized"] = report.renormalized;
  j["valid"] = true;
  if (!o.fixed.empty()) io::write_text(o.fixed, io::format_predictions_csv(data.probs()));
  if (o.out.empty()) {
    out << dump_json(j);
  } else {
    io::write_text(o.out, dump_json(j));
  }
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const LabeledPredictions data = load_validated(o);
  std::vector<std::pair<std::string, UtilitySpec>> selected;
  for (auto& spec : parse_utilities(o.utilities, data.num_classes())) {
    std::string id = utility_id(spec);
    selected.emplace_back(std::move(id), std::move(spec));
  }
  ReportOptions options;
  options.bin_kind = parse_bin_kind(o.bin_kind);
  options.bins = o.bins;
  options.empirical_class_weights = o.class_weights == "empirical";
  options.threads = o.threads;
  const auto report = evaluate_report(data, selected, options);
  const std::string text = dump_json(report_to_json(report));
  if (o.out.empty()) {
    out << text;
  } else {
    io::write_text(o.out, text);
  }
  return kExitOk;
}

int cmd_ecdf(const Options& o, std::ostream& out) {
  const LabeledPredictions data = load_validated(o);
  const SampledFamily family = o.family == "rank" ? SampledFamily::Rank : SampledFamily::Linear;
  EcdfResult result = ecdf_evaluate(data, family, o.m, o.seed, o.threads, o.keep_utilities);
  result.delta = o.delta;
  result.band_halfwidth = dkw_band(o.m, o.delta);
  io::write_text(o.out, ecdf_csv(result));
  const fs::path sidecar = with_extension(o.out, ".json");
  io::write_text(sidecar, dump_json(ecdf_sidecar_json(result)));
  out << "wrote " << o.out << " and " << sidecar.string() << "\n";
  return kExitOk;
}

int cmd_patch_fit(const Options& o, std::ostream& out) {
  const LabeledPredictions data = load_validated(o);
  PatchConfig config;
  config.pool = parse_utilities(o.utilities, data.num_classes());
  if (o.augment > 0) config.augment = AugmentParams{o.augment, o.seed};
  config.epsilon = o.epsilon;
  config.max_iters = o.max_iters;
  config.step_rule = o.step_rule == "armijo" ? StepRule::Armijo : StepRule::Theoretical;
  config.threads = o.threads;
  const PatchSequence seq = fit(data, config);

  io::write_text(o.out, dump_json(patch_sequence_to_json(seq)));
  std::string history = "iteration,err,brier,step\n";
  for (std::size_t t = 0; t < seq.history.size(); ++t) {
    const auto& h = seq.history[t];
    history += std::to_string(t) + "," + io::format_double(h.err) + "," + io::format_double(h.brier_after) + "," +
               io::format_double(h.step) + "\n";
  }
  const fs::path history_path = o.history.empty() ? with_extension(o.out, ".history.csv") : fs::path(o.history);
  io::write_text(history_path, history);
  out << "patches: " << seq.records.size() << ", final err " << io::format_double(seq.final_err)
      << (seq.converged ? " (converged)" : " (iteration cap)") << "\n";
  return kExitOk;
}

int cmd_patch_apply(const Options& o, std::ostream&) {
  const PatchSequence seq = patch_sequence_from_json(parse_json(io::read_text(o.patch)));
  Matrix probs = io::read_predictions_csv(o.preds, o.header);
  if (probs.cols() != seq.num_classes) {
    throw DomainError("patch sequence expects " + std::to_string(seq.num_classes) + " classes, predictions have " +
                      std::to_string(probs.cols()));
  }
  // Validation needs labels; patching does not. Check the simplex rows with
  // placeholder labels.
  const std::size_t rows = probs.rows();
  LabeledPredictions checked(std::move(probs), std::vector<Label>(rows, 0));
  const auto report = validate(checked, o.renormalize);
  io::write_text(o.out, io::format_predictions_csv(transform(report.corrected.probs(), seq, o.threads)));
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  LabeledPredictions data;
  FiniteDistribution dist;
  if (o.kind == "two-point") {
    data = gen_two_point(o.n);
    dist = two_point_population();
  } else if (o.kind == "calibrated") {
    if (o.classes < 2) throw DomainError("synth calibrated needs --c >= 2");
    std::tie(data, dist) = gen_calibrated(o.n, o.classes, o.support, o.seed);
  } else {
    if (o.spec.empty()) throw DomainError("synth miscalibrated needs --spec");
    const FiniteDistribution law = distribution_from_json(parse_json(io::read_text(o.spec)));
    std::tie(data, dist) = gen_miscalibrated(law, o.n, o.seed);
  }
  const std::string prefix = o.out;
  io::write_text(prefix + ".preds.csv", io::format_predictions_csv(data.probs()));
  io::write_text(prefix + ".labels.csv", io::format_labels_csv(data.labels()));
  io::write_text(prefix + ".population.json", dump_json(distribution_to_json(dist)));
  out << "wrote " << data.size() << " rows, C=" << data.num_classes() << " to " << prefix << ".*\n";
  return kExitOk;
}

int cmd_oracle_check(const Options& o, std::ostream& out) {
  OracleCheckConfig config;
  config.trials = o.trials;
  config.n_max = o.n_max;
  config.c_max = o.c_max;
  config.seed = o.seed;
  config.inject_fault = o.inject_fault;
  const auto summary = run_oracle_check(config);
  out << "oracle-check: " << summary.trials << " trials, " << summary.failures << " failures, max |diff| "
      << io::format_double(summary.max_abs_diff) << "\n";
  if (summary.failures > 0) {
    out << "FAIL " << summary.first_failure << "\n";
    return kExitCheckFailed;
  }
  out << "PASS\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Utility-aware multiclass calibration: evaluation, eCDFs and patching", "ucal"};
  app.require_subcommand(1);
  Options o;

  auto add_data = [&](CLI::App* sub, bool labels_required = true) {
    sub->add_option("--preds", o.preds, "Predictions CSV (n rows, C columns)")->required();
    auto* lab = sub->add_option("--labels", o.labels, "Labels CSV (n rows, one class index each)");
    if (labels_required) lab->required();
    sub->add_flag("--header", o.header, "Skip the first line of the predictions CSV");
    sub->add_flag("--renormalize", o.renormalize, "Clamp entries to [0,1] and rescale rows to sum to 1");
  };
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "Worker threads (outputs do not depend on it)")
        ->check(CLI::Range(1, 1024));
  };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "Master seed"); };
  auto add_utilities = [&](CLI::App* sub, const char* help) {
    sub->add_option("--utility", o.utilities, help)->take_all()->allow_extra_args(false);
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check predictions and labels");
  add_data(validate_cmd);
  validate_cmd->add_option("--out", o.out, "Report JSON (default: stdout)");
  validate_cmd->add_option("--fixed", o.fixed, "Write the corrected predictions CSV here");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Metric report: accuracy, Brier, binned and utility calibration");
  add_data(evaluate_cmd);
  evaluate_cmd->add_option("--out", o.out, "Report JSON (default: stdout)");
  evaluate_cmd->add_option("--bins", o.bins, "Number of bins for TCE/CWE")->check(CLI::Range(1, 1000000));
  evaluate_cmd->add_option("--bin-kind", o.bin_kind, "Binning scheme")
      ->check(CLI::IsMember({"equal-weight", "equal-width"}));
  evaluate_cmd->add_option("--class-weights", o.class_weights, "CWE class weights")
      ->check(CLI::IsMember({"uniform", "empirical"}));
  add_utilities(evaluate_cmd,
                "Utility: top-class, class-wise[:c], top-k[:K], comb, dcg[:gamma], or a UtilitySpec JSON path");
  add_threads(evaluate_cmd);
  add_seed(evaluate_cmd);

  auto* ecdf_cmd = app.add_subcommand("ecdf", "eCDF of calibration errors over sampled utilities");
  add_data(ecdf_cmd);
  ecdf_cmd->add_option("--out", o.out, "eCDF CSV; the JSON sidecar goes next to it")->required();
  ecdf_cmd->add_option("--family", o.family, "Sampled utility family")->check(CLI::IsMember({"linear", "rank"}));
  ecdf_cmd->add_option("--m", o.m, "Number of sampled utilities")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  ecdf_cmd->add_option("--delta", o.delta, "DKW band confidence parameter")->check(CLI::Range(1e-300, 1.0));
  ecdf_cmd->add_flag("--keep-utilities", o.keep_utilities, "Store sampled specs and errors in the sidecar");
  add_seed(ecdf_cmd);
  add_threads(ecdf_cmd);

  auto* fit_cmd = app.add_subcommand("patch-fit", "Fit an iterative patch sequence");
  add_data(fit_cmd);
  fit_cmd->add_option("--out", o.out, "PatchSequence JSON")->required();
  fit_cmd->add_option("--history", o.history, "History CSV (default: <out>.history.csv)");
  fit_cmd->add_option("--epsilon", o.epsilon, "Target tolerance");
  fit_cmd->add_option("--max-iters", o.max_iters, "Iteration cap");
  fit_cmd->add_option("--step-rule", o.step_rule, "Step size rule")->check(CLI::IsMember({"theoretical", "armijo"}));
  fit_cmd->add_option("--augment", o.augment, "Extra sampled rank/linear utilities per iteration (0 = off)");
  add_utilities(fit_cmd, "Witness pool (default: comb)");
  add_seed(fit_cmd);
  add_threads(fit_cmd);

  auto* apply_cmd = app.add_subcommand("patch-apply", "Apply a patch sequence to predictions");
  add_data(apply_cmd, false);
  apply_cmd->add_option("--patch", o.patch, "PatchSequence JSON")->required();
  apply_cmd->add_option("--out", o.out, "Patched predictions CSV")->required();
  add_threads(apply_cmd);

  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset and its population law");
  synth_cmd->add_option("--kind", o.kind, "Generator")
      ->required()
      ->check(CLI::IsMember({"two-point", "calibrated", "miscalibrated"}));
  synth_cmd->add_option("--n", o.n, "Rows (two-point: rows per group)")->required();
  synth_cmd->add_option("--c", o.classes, "Classes (calibrated)");
  synth_cmd->add_option("--support", o.support, "Support size (calibrated)");
  synth_cmd->add_option("--spec", o.spec, "FiniteDistribution JSON (miscalibrated)");
  synth_cmd->add_option("--out", o.out, "Output prefix")->required();
  add_seed(synth_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare the fast estimator with brute force");
  oracle_cmd->add_option("--trials", o.trials, "Random instances");
  oracle_cmd->add_option("--n-max", o.n_max, "Largest instance size")->check(CLI::Range(std::size_t{1}, kOracleMaxRows));
  oracle_cmd->add_option("--c-max", o.c_max, "Largest class count")->check(CLI::Range(std::size_t{2}, std::size_t{4096}));
  oracle_cmd->add_flag("--inject-fault", o.inject_fault, "Corrupt one residual on the fast path (self-test)")
      ->group("Testing");
  add_seed(oracle_cmd);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(o, out);
    if (evaluate_cmd->parsed()) return cmd_evaluate(o, out);
    if (ecdf_cmd->parsed()) return cmd_ecdf(o, out);
    if (fit_cmd->parsed()) return cmd_patch_fit(o, out);
    if (apply_cmd->parsed()) return cmd_patch_apply(o, out);
    if (synth_cmd->parsed()) return cmd_synth(o, out);
    if (oracle_cmd->parsed()) return cmd_oracle_check(o, out);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitDomain;
}

}  // namespace ucal::cli

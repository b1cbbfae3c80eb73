#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI/CLI.hpp>
#include <nlohmann/json.hpp>

#include "model_io.hpp"
#include "report_io.hpp"
#include "secomp/coloring.hpp"
#include "secomp/protocol.hpp"
#include "secomp/rate_region.hpp"

namespace secomp::cli {

using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
      return kExitParse;
    case ErrorCode::kNegativeMass:
    case ErrorCode::kMassSumOutOfTolerance:
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kDeltaOutOfRange:
    case ErrorCode::kArgumentOutOfRange:
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kWrongCaseTag:
    case ErrorCode::kRecoverySetContainsSelf:
    case ErrorCode::kWrongShape:
    case ErrorCode::kWrongArity:
    case ErrorCode::kRateVectorInfeasible:
      return kExitInvalidSpec;
    case ErrorCode::kEnumerationCapExceeded:
    case ErrorCode::kCapExceeded:
      return kExitCap;
    case ErrorCode::kNumericalFailure:
    case ErrorCode::kNoConsistentSequence:
      return kExitNumerical;
    case ErrorCode::kIndexOutOfRange:
      return kExitInternal;
  }
  return kExitInternal;
}

namespace {

int thread_count(int flag) {
  if (const char* env = std::getenv("SECOMP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  return std::max(1, flag);
}

void emit(const json& doc, const std::string& format, const std::string& path,
          std::ostream& out) {
  const std::string text = format == "tsv" ? to_tsv(doc) : doc.dump(2) + "\n";
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::kParseError, "cannot write '" + path + "'");
  file << text;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::kSecurelyComputable: return kExitOk;
    case Verdict::kNotSecurelyComputable: return kExitNotComputable;
    default: return kExitUndecided;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secure computability analysis, protocol simulation and coloring experiments"};
  app.require_subcommand(1);

  std::string format = "json";
  std::string output;
  int threads = 1;
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "tsv"}))
      ->capture_default_str();
  app.add_option("--output,-o", output, "Write the report to a file");
  app.add_option("--threads", threads, "Worker thread cap (SECOMP_THREADS overrides)")
      ->check(CLI::PositiveNumber);
  app.fallthrough();

  auto* analyze = app.add_subcommand("analyze", "Rate-region analysis of a model file");
  std::string model_path;
  analyze->add_option("model", model_path, "Model file")->required();

  auto* table = app.add_subcommand("table", "Four-row verdict table on BSS(delta)");
  double delta = 0.0;
  table->add_option("--delta", delta, "Crossover probability")->required();

  auto* simulate = app.add_subcommand("simulate", "Run the two-stage protocol");
  ProtocolConfig cfg;
  std::vector<double> rates;
  bool no_encrypt = false;
  simulate->add_option("model", model_path, "Model file")->required();
  simulate->add_option("--n", cfg.n, "Block length")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", cfg.seed, "Seed")->required();
  simulate->add_option("--slack", cfg.slack, "Rate slack above the LP vertex")->capture_default_str();
  simulate->add_option("--trials", cfg.trials, "Monte Carlo blocks")->capture_default_str();
  simulate->add_option("--cap", cfg.enumeration_cap, "Cap on enumerated joint sequences")
      ->capture_default_str();
  simulate->add_option("--rates", rates, "Rate vector replacing the LP vertex");
  simulate->add_flag("--allow-infeasible", cfg.allow_infeasible_rates,
                     "Accept --rates outside the constraint set");
  simulate->add_flag("--no-encrypt", no_encrypt, "Send stage-2 codewords in the clear");

  auto* colour = app.add_subcommand("coloring", "Balanced coloring experiments");
  coloring::UniformTemplate tmpl;
  std::vector<std::size_t> ds;
  int trials = 200;
  std::uint64_t seed = 1;
  colour->add_option("--u-size", tmpl.u_size, "Points of uniform U")->required();
  colour->add_option("--r", tmpl.r, "Colors")->required()->check(CLI::PositiveNumber);
  colour->add_option("--rprime", tmpl.r_prime, "Range of h")->required()->check(CLI::PositiveNumber);
  colour->add_option("--lambda", tmpl.lambda, "Lambda in (0, 1)")->required();
  colour->add_option("--trials", trials, "Colorings per d")->required();
  colour->add_option("--seed", seed, "Seed")->required();
  colour->add_option("--d", ds, "Values of d, each dividing --u-size (default: u-size)");

  auto* model_cmd = app.add_subcommand("model", "Print a BSS table-row model file");
  int row = 1;
  model_cmd->add_option("--row", row, "Table row")->required()->check(CLI::Range(1, 4));
  model_cmd->add_option("--delta", delta, "Crossover probability")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const int workers = thread_count(threads);
    if (analyze->parsed()) {
      const Model model = load_model(model_path);
      const AnalysisReport rep = secomp::analyze(model.src, model.fns);
      emit(envelope("analyze", 0, rep), format, output, out);
      return verdict_exit(rep.verdict);
    }
    if (table->parsed()) {
      emit(envelope("table", 0, example1_table(delta)), format, output, out);
      return kExitOk;
    }
    if (simulate->parsed()) {
      const Model model = load_model(model_path);
      cfg.encrypt = !no_encrypt;
      cfg.threads = workers;
      if (!rates.empty()) cfg.rates = RateVector{rates};
      const RunReport rep = run_protocol(model.src, model.fns, cfg).report;
      emit(envelope("simulate", cfg.seed, rep), format, output, out);
      return kExitOk;
    }
    if (colour->parsed()) {
      if (ds.empty()) ds.push_back(tmpl.u_size);
      json sweep = json::array();
      for (std::size_t d : ds) {
        coloring::UniformTemplate t = tmpl;
        t.d = d;
        const auto hyp = coloring::check_hypotheses(coloring::make_uniform_instance(t));
        const auto ex = coloring::failure_rate_experiment(t, trials, seed, workers);
        sweep.push_back({{"hypotheses", hyp}, {"experiment", ex}});
      }
      emit(envelope("coloring", seed, json{{"sweep", sweep}}), format, output, out);
      return kExitOk;
    }
    if (model_cmd->parsed()) {
      const Model model{make_bss(delta), example1_row(row)};
      json doc = model_to_json(model);
      doc["bss_delta"] = delta;
      emit(doc, format, output, out);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace secomp::cli

// reviewflow CLI: run / validate / consensus / eval
//
// Exit codes: 0 success, 1 validation or config error, 2 runtime error,
// 3 partial success (some rows failed; outputs were still written).
// Diagnostics go to stderr; data goes to files or stdout only.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reviewflow/config.hpp"
#include "reviewflow/consensus.hpp"
#include "reviewflow/dataset.hpp"
#include "reviewflow/metrics.hpp"
#include "reviewflow/workflow.hpp"

namespace rf = reviewflow;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitPartial = 3;

rf::DataFormat parse_format(const std::string& name) {
  return rf::data_format_from_name(name);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw rf::IoError("cannot write " + path.string());
  out << text;
  if (!out) throw rf::IoError("write failed for " + path.string());
}

struct RunArgs {
  std::string workflow;
  std::string input;
  std::string output;
  std::string format = "csv";
  std::string report;
  std::string env_file;
};

int cmd_run(const RunArgs& args) {
  try {
    if (!args.env_file.empty()) rf::load_env_file(args.env_file);
    rf::WorkflowConfig config;
    try {
      config = rf::load_config(args.workflow);
    } catch (const rf::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }

    const rf::DataFormat format = parse_format(args.format);
    const rf::Dataset dataset = rf::read_dataset(args.input, format);

    rf::AgentRegistry agents = config.build_agent_registry();
    rf::ProviderRegistry providers = config.build_provider_registry();

    const auto issues = rf::validate_schema(config.schema(), dataset.table.columns(),
                                            agents, providers);
    if (!issues.empty()) {
      for (const auto& issue : issues) {
        std::cerr << "error: " << issue.to_string() << "\n";
      }
      return kExitConfig;
    }

    rf::RunReport report =
        rf::run_workflow(config.schema(), dataset.table, agents, providers);

    rf::write_dataset(report.table, args.output, format);
    if (!args.report.empty()) {
      write_text_file(args.report, report.to_json() + "\n");
    }

    if (!report.failures.empty()) {
      std::cerr << "warning: " << report.failures.size()
                << " call(s) failed; see the run report\n";
      return kExitPartial;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

struct ValidateArgs {
  std::string workflow;
  std::string input;
  std::string format = "csv";
  std::string env_file;
};

int cmd_validate(const ValidateArgs& args) {
  try {
    if (!args.env_file.empty()) rf::load_env_file(args.env_file);
    rf::WorkflowConfig config;
    try {
      config = rf::load_config(args.workflow);
    } catch (const rf::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }

    if (!args.input.empty()) {
      const rf::Dataset dataset =
          rf::read_dataset(args.input, parse_format(args.format));
      rf::AgentRegistry agents = config.build_agent_registry();
      rf::ProviderRegistry providers = config.build_provider_registry();
      const auto issues = rf::validate_schema(
          config.schema(), dataset.table.columns(), agents, providers);
      if (!issues.empty()) {
        for (const auto& issue : issues) {
          std::cerr << "error: " << issue.to_string() << "\n";
        }
        return kExitConfig;
      }
    }

    std::cout << "ok: " << config.providers.size() << " provider(s), "
              << config.agents.size() << " agent(s), " << config.rounds.size()
              << " round(s)\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

struct ConsensusArgs {
  std::string input;
  std::string output;
  std::vector<std::string> junior;
  std::string senior;
  std::string out_col = "final_score";
  std::string format = "csv";
  int neutral = 3;
};

int cmd_consensus(const ConsensusArgs& args) {
  try {
    const rf::DataFormat format = parse_format(args.format);
    const rf::Dataset dataset = rf::read_dataset(args.input, format);

    rf::ConsensusConfig config;
    config.junior1_column = args.junior[0];
    config.junior2_column = args.junior[1];
    config.senior_column = args.senior;
    config.output_column = args.out_col;
    config.neutral_score = args.neutral;

    for (const auto& column : {config.junior1_column, config.junior2_column,
                               config.senior_column}) {
      if (!dataset.table.has_column(column)) {
        std::cerr << "error: input has no column '" << column << "'\n";
        return kExitConfig;
      }
    }

    const rf::ConsensusResult result =
        rf::apply_consensus(dataset.table, config);
    rf::write_dataset(result.table, args.output, format);

    if (!result.failures.empty()) {
      for (const auto& failure : result.failures) {
        std::cerr << "warning: row " << failure.row << ": " << failure.message
                  << "\n";
      }
      return kExitPartial;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

struct EvalArgs {
  std::string input;
  std::string score_col;
  std::string label_col;
  std::string thresholds;
  std::string roc_out;
  std::string report;
  std::string format = "csv";
};

std::vector<rf::ThresholdStrategy> parse_thresholds(const std::string& spec) {
  if (spec.empty()) return rf::ThresholdStrategy::all_three();
  std::vector<rf::ThresholdStrategy> strategies;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string part = spec.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (part.empty()) {
      throw rf::ConfigError("bad --thresholds value '" + spec + "'");
    }
    const rf::Decimal threshold = rf::Decimal::parse_or_throw(part);
    std::string name = "t" + threshold.to_string();
    for (const auto& canonical : rf::ThresholdStrategy::all_three()) {
      if (canonical.threshold == threshold) name = canonical.name;
    }
    strategies.push_back({name, threshold});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return strategies;
}

int cmd_eval(const EvalArgs& args) {
  std::vector<rf::ThresholdStrategy> strategies;
  try {
    strategies = parse_thresholds(args.thresholds);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    const rf::Dataset dataset =
        rf::read_dataset(args.input, parse_format(args.format));
    const rf::MetricsReport report =
        rf::evaluate(dataset.table, args.score_col, args.label_col, strategies);

    std::cout << report.to_text();
    if (!args.report.empty()) {
      write_text_file(args.report, report.to_json() + "\n");
    }
    if (!args.roc_out.empty()) {
      const rf::ExtractedScores extracted =
          rf::extract_scores(dataset.table, args.score_col, args.label_col);
      std::string csv = "fpr,tpr\n";
      for (const auto& [fpr, tpr] : rf::roc_points(extracted.data)) {
        char line[80];
        std::snprintf(line, sizeof(line), "%.12g,%.12g\n", fpr, tpr);
        csv += line;
      }
      write_text_file(args.roc_out, csv);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Config-driven multi-agent review workflows over tabular data"};
  app.set_version_flag("--version", std::string("reviewflow ") + kVersion);
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Execute a workflow over a dataset");
  run->add_option("--workflow", run_args.workflow, "Workflow config file")
      ->required();
  run->add_option("--input", run_args.input, "Input dataset")->required();
  run->add_option("--output", run_args.output, "Enriched output dataset")
      ->required();
  run->add_option("--format", run_args.format, "Dataset format: csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  run->add_option("--report", run_args.report, "Write the run report JSON here");
  run->add_option("--env-file", run_args.env_file,
                  "Load KEY=VALUE credentials before running");

  ValidateArgs validate_args;
  CLI::App* validate = app.add_subcommand(
      "validate", "Check a workflow config without any provider calls");
  validate->add_option("--workflow", validate_args.workflow, "Workflow config file")
      ->required();
  validate->add_option("--input", validate_args.input,
                       "Optional dataset to validate column references against");
  validate->add_option("--format", validate_args.format,
                       "Dataset format: csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  validate->add_option("--env-file", validate_args.env_file,
                       "Load KEY=VALUE credentials first");

  ConsensusArgs consensus_args;
  CLI::App* consensus = app.add_subcommand(
      "consensus", "Apply the junior/senior consensus rule to score columns");
  consensus->add_option("--input", consensus_args.input, "Input dataset")
      ->required();
  consensus->add_option("--output", consensus_args.output, "Output dataset")
      ->required();
  consensus
      ->add_option("--junior", consensus_args.junior,
                   "Junior score column (give exactly twice)")
      ->expected(2)
      ->required();
  consensus->add_option("--senior", consensus_args.senior, "Senior score column")
      ->required();
  consensus->add_option("--out-col", consensus_args.out_col,
                        "Name of the appended final-score column");
  consensus->add_option("--format", consensus_args.format,
                        "Dataset format: csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  consensus->add_option("--neutral", consensus_args.neutral,
                        "Neutral score that forces escalation when tied");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "Score predictions against ground-truth labels");
  eval->add_option("--input", eval_args.input, "Input dataset")->required();
  eval->add_option("--score-col", eval_args.score_col, "Score column")
      ->required();
  eval->add_option("--label-col", eval_args.label_col, "0/1 label column")
      ->required();
  eval->add_option("--thresholds", eval_args.thresholds,
                   "Comma-separated thresholds (default 1.5,3.0,4.5)");
  eval->add_option("--roc-out", eval_args.roc_out,
                   "Write ROC points (fpr,tpr CSV) here");
  eval->add_option("--report", eval_args.report, "Write the metrics JSON here");
  eval->add_option("--format", eval_args.format, "Dataset format: csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(run_args);
  if (validate->parsed()) return cmd_validate(validate_args);
  if (consensus->parsed()) return cmd_consensus(consensus_args);
  if (eval->parsed()) return cmd_eval(eval_args);
  return kExitConfig;
}

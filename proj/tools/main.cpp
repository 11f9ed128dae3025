// gafsm: estimate finite-state decision models from grouped choice data,
// cross-validate hyper-parameters, and run the noisy repeated-game simulator.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gafsm/analysis.hpp"
#include "gafsm/dataset.hpp"
#include "gafsm/fitness.hpp"
#include "gafsm/ga.hpp"
#include "gafsm/model_selection.hpp"
#include "gafsm/serialize.hpp"
#include "gafsm/simulator.hpp"
#include "gafsm/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

struct SchemaFlags {
  std::string period_col = "period";
  std::string outcome_col = "outcome";
  std::string group_col = "group";
  std::string predictors;      // comma separated; empty = all other columns
  std::string labels = "c,d";  // outcome labels in index order

  void attach(CLI::App* cmd) {
    cmd->add_option("--period-col", period_col, "Period column name")->capture_default_str();
    cmd->add_option("--outcome-col", outcome_col, "Outcome column name")->capture_default_str();
    cmd->add_option("--group-col", group_col, "Group column name (used when present)")
        ->capture_default_str();
    cmd->add_option("--predictors", predictors,
                    "Comma-separated predictor columns (default: all other columns)");
    cmd->add_option("--outcome-labels", labels, "Comma-separated outcome labels, index order")
        ->capture_default_str();
  }

  gafsm::TableSchema schema() const {
    gafsm::TableSchema s;
    s.period_column = period_col;
    s.outcome_column = outcome_col;
    s.group_column = group_col;
    if (!predictors.empty()) s.predictor_columns = split_list(predictors);
    s.action_labels = split_list(labels);
    return s;
  }

  json to_json() const {
    return {{"period_col", period_col},
            {"outcome_col", outcome_col},
            {"group_col", group_col},
            {"predictors", predictors},
            {"outcome_labels", labels}};
  }
};

struct GaFlags {
  int population = 175;
  double crossover = 0.8;
  double mutation = 0.1;
  double elitism = 0.05;
  int max_gens = 500;
  int stagnation = 100;
  std::string selection = "rank";
  int threads = 0;
  std::string priors;  // comma-separated registry names

  void attach(CLI::App* cmd) {
    cmd->add_option("--pop", population, "Population size")->capture_default_str();
    cmd->add_option("--crossover", crossover, "Single-point crossover probability")
        ->capture_default_str();
    cmd->add_option("--mutation", mutation, "Per-bit mutation probability")
        ->capture_default_str();
    cmd->add_option("--elitism", elitism, "Elite fraction copied unchanged")
        ->capture_default_str();
    cmd->add_option("--max-gens", max_gens, "Maximum generations")->capture_default_str();
    cmd->add_option("--stagnation", stagnation,
                    "Stop after this many generations without improvement")
        ->capture_default_str();
    cmd->add_option("--selection", selection, "Parent selection: rank or proportional")
        ->check(CLI::IsMember({"rank", "proportional"}))
        ->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads for fitness evaluation (0 = all)")
        ->capture_default_str();
    cmd->add_option("--prior", priors,
                    "Comma-separated built-in strategies seeded into the population");
  }

  gafsm::GaConfig config(std::uint64_t seed) const {
    gafsm::GaConfig c;
    c.population_size = population;
    c.crossover_prob = crossover;
    c.mutation_prob = mutation;
    c.elitism_fraction = elitism;
    c.max_generations = max_gens;
    c.stagnation_generations = stagnation;
    c.selection = selection == "proportional" ? gafsm::SelectionScheme::FitnessProportional
                                              : gafsm::SelectionScheme::LinearRank;
    c.threads = threads;
    c.seed = seed;
    for (const std::string& name : split_list(priors)) {
      c.prior_machines.push_back(gafsm::builtin_strategy(name));
    }
    return c;
  }

  json to_json(std::uint64_t seed) const {
    return {{"pop", population},      {"crossover", crossover}, {"mutation", mutation},
            {"elitism", elitism},     {"max_gens", max_gens},   {"stagnation", stagnation},
            {"selection", selection}, {"threads", threads},     {"prior", priors},
            {"seed", seed}};
  }
};

json base_document(const std::string& command) {
  json doc;
  doc["tool"] = {{"name", "gafsm"}, {"version", gafsm::kVersion}};
  doc["command"] = command;
  return doc;
}

// Opens the target up front so a bad path fails before any long computation
// runs; empty or "-" writes to stdout.
class DocumentSink {
 public:
  explicit DocumentSink(const std::string& path) {
    if (!path.empty() && path != "-") {
      out_.open(path);
      if (!out_) throw std::runtime_error("cannot write output file: " + path);
    }
  }

  void write(const json& doc) {
    if (out_.is_open()) {
      out_ << doc.dump(2) << "\n";
    } else {
      std::cout << doc.dump(2) << "\n";
    }
  }

 private:
  std::ofstream out_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (const std::string& item : split_list(text)) {
    values.push_back(std::stoi(item));
  }
  return values;
}

// noise grids accept "0.1", "0.1,0.3", or "0:0.5:0.025"
std::vector<double> parse_noise_grid(const std::string& text) {
  const auto colon = text.find(':');
  std::vector<double> levels;
  if (colon == std::string::npos) {
    for (const std::string& item : split_list(text)) {
      levels.push_back(std::stod(item));
    }
    return levels;
  }
  const auto second = text.find(':', colon + 1);
  if (second == std::string::npos) {
    throw std::invalid_argument("noise range must be lo:hi:step");
  }
  const double lo = std::stod(text.substr(0, colon));
  const double hi = std::stod(text.substr(colon + 1, second - colon - 1));
  const double step = std::stod(text.substr(second + 1));
  if (step <= 0.0) throw std::invalid_argument("noise range step must be positive");
  for (double level = lo; level <= hi + 1e-12; level += step) {
    levels.push_back(level);
  }
  return levels;
}

int cmd_evolve(const std::string& data_path, const SchemaFlags& schema_flags,
               const GaFlags& ga_flags, int states, std::uint64_t seed, double test_frac,
               const std::string& out_path, const std::string& dot_path) {
  const auto start = std::chrono::steady_clock::now();
  const gafsm::Dataset full = gafsm::load_table(data_path, schema_flags.schema());
  DocumentSink sink(out_path);
  std::ofstream dot;
  if (!dot_path.empty()) {
    dot.open(dot_path);
    if (!dot) throw std::runtime_error("cannot write DOT file: " + dot_path);
  }

  json doc = base_document("evolve");
  doc["config"] = {{"data", data_path},
                   {"states", states},
                   {"test_frac", test_frac},
                   {"schema", schema_flags.to_json()},
                   {"ga", ga_flags.to_json(seed)}};
  doc["dataset"] = gafsm::dataset_fingerprint(full);

  gafsm::Dataset train = full;
  std::optional<gafsm::Dataset> test;
  if (test_frac > 0.0) {
    auto [train_part, test_part] =
        gafsm::split_train_test(full, gafsm::SplitSpec{1.0 - test_frac, seed});
    train = std::move(train_part);
    test = std::move(test_part);
    doc["split"] = {{"train_groups", train.num_groups()},
                    {"test_groups", test->num_groups()},
                    {"train_rows", train.num_rows()},
                    {"test_rows", test->num_rows()}};
  }

  const gafsm::ChromosomeLayout layout{states, train.num_actions(), train.num_columns()};
  gafsm::EvolveResult result = gafsm::evolve(train, layout, ga_flags.config(seed));
  result.identifiability = gafsm::identifiability(result.best_fsm, train);
  result.importance = gafsm::variable_importance(result.best_fsm, train);
  if (test) result.test_accuracy = gafsm::accuracy(result.best_fsm, *test).accuracy;

  doc["result"] = gafsm::evolve_result_to_json(result);
  doc["timings"] = {{"total_seconds", seconds_since(start)}};

  if (dot.is_open()) {
    dot << gafsm::to_dot(result.best_fsm, gafsm::accessibility_mask(result.best_fsm, 0));
  }
  sink.write(doc);
  return 0;
}

int cmd_cv(const std::string& data_path, const SchemaFlags& schema_flags, const GaFlags& ga_flags,
           const std::string& states, int folds, std::uint64_t seed, bool do_subset_search,
           int max_predictors, const std::string& out_path) {
  const auto start = std::chrono::steady_clock::now();
  const gafsm::Dataset data = gafsm::load_table(data_path, schema_flags.schema());
  DocumentSink sink(out_path);

  json doc = base_document("cv");
  doc["config"] = {{"data", data_path},
                   {"states", states},
                   {"folds", folds},
                   {"subset_search", do_subset_search},
                   {"max_predictors", max_predictors},
                   {"seed", seed},
                   {"schema", schema_flags.to_json()},
                   {"ga", ga_flags.to_json(seed)}};
  doc["dataset"] = gafsm::dataset_fingerprint(data);

  const std::vector<int> state_counts = parse_int_list(states);
  if (do_subset_search) {
    if (state_counts.size() != 1) {
      throw std::invalid_argument("subset search uses a single --states value");
    }
    const std::vector<gafsm::CvCell> ranked = gafsm::subset_search(
        data, max_predictors, state_counts[0], ga_flags.config(seed), folds, seed);
    gafsm::CvResult as_result;
    as_result.table = ranked;
    as_result.best_index = 0;
    doc["result"] = gafsm::cv_result_to_json(as_result);
  } else {
    gafsm::HyperGrid grid;
    grid.state_counts = state_counts;
    grid.folds = folds;
    grid.seed = seed;
    doc["result"] =
        gafsm::cv_result_to_json(gafsm::cross_validate(data, grid, ga_flags.config(seed)));
  }
  doc["timings"] = {{"total_seconds", seconds_since(start)}};
  sink.write(doc);
  return 0;
}

int cmd_simulate(const std::string& player, const std::string& opponent, const std::string& noise,
                 const std::string& condition, int periods, int game_length, int reps,
                 std::uint64_t seed, const std::string& design_name, bool recover, int states,
                 const GaFlags& ga_flags, const std::string& out_dir, const std::string& out_path,
                 const std::string& table_path) {
  const auto start = std::chrono::steady_clock::now();

  gafsm::ExperimentDesign design;
  if (design_name == "paper") {
    design = gafsm::reference_design();
    if (noise != "0") design.noise_levels = parse_noise_grid(noise);
  } else if (!design_name.empty()) {
    throw std::invalid_argument("unknown design '" + design_name + "' (available: paper)");
  } else {
    design.pairings = {{player, opponent}};
    design.conditions = {condition == "opponent-only" ? gafsm::NoiseCondition::OpponentOnly
                                                      : gafsm::NoiseCondition::BothNoisy};
    if (condition == "all") {
      design.conditions = {gafsm::NoiseCondition::BothNoisy, gafsm::NoiseCondition::OpponentOnly};
    }
    design.noise_levels = parse_noise_grid(noise);
    design.replicates = 1;
  }
  // desk-scale overrides
  if (reps > 0) design.replicates = reps;
  if (periods > 0) design.periods = periods;
  design.game_length = game_length;
  design.base_seed = seed;
  design.validate();
  DocumentSink sink(out_path);

  json doc = base_document("simulate");
  json levels = json::array();
  for (double level : design.noise_levels) levels.push_back(level);
  json pairings = json::array();
  for (const auto& [p, o] : design.pairings) pairings.push_back({{"player", p}, {"opponent", o}});
  doc["config"] = {{"pairings", pairings},
                   {"noise_levels", levels},
                   {"conditions", design.conditions.size()},
                   {"replicates", design.replicates},
                   {"periods", design.periods},
                   {"game_length", design.game_length},
                   {"seed", seed},
                   {"out_dir", out_dir},
                   {"recover", recover},
                   {"states", states},
                   {"ga", ga_flags.to_json(seed)}};

  const gafsm::Manifest manifest = gafsm::run_experiment(design, out_dir);
  doc["manifest_entries"] = manifest.entries.size();
  const std::string manifest_path = (std::filesystem::path(out_dir) / "manifest.json").string();
  {
    std::ofstream out(manifest_path);
    if (!out) throw std::runtime_error("cannot write manifest: " + manifest_path);
    out << gafsm::manifest_to_json(manifest).dump(2) << "\n";
  }
  doc["manifest_file"] = manifest_path;

  if (recover) {
    const gafsm::ChromosomeLayout layout{states, 2, 4};
    const std::vector<gafsm::RecoveryRow> rows =
        gafsm::recovery_study(design, layout, ga_flags.config(seed));
    doc["result"] = {{"recovery", gafsm::recovery_rows_to_json(rows)}};
    if (!table_path.empty()) {
      std::ofstream table(table_path);
      if (!table) throw std::runtime_error("cannot write table: " + table_path);
      table << "player,opponent,condition,noise,replicate,model_error,best_fitness\n";
      for (const gafsm::RecoveryRow& row : rows) {
        table << row.condition.player << ',' << row.condition.opponent << ','
              << gafsm::to_string(row.condition.condition) << ',' << row.condition.noise << ','
              << row.condition.replicate << ',' << row.model_error << ',' << row.best_fitness
              << "\n";
      }
    }
  }

  doc["timings"] = {{"total_seconds", seconds_since(start)}};
  sink.write(doc);
  return 0;
}

int cmd_evaluate(const std::string& strategy, const std::string& machine_path,
                 const std::string& data_path, const SchemaFlags& schema_flags,
                 const std::string& out_path) {
  const auto start = std::chrono::steady_clock::now();
  if (strategy.empty() == machine_path.empty()) {
    throw std::invalid_argument("provide exactly one of --strategy or --machine");
  }
  const gafsm::Fsm machine =
      strategy.empty() ? gafsm::load_fsm(machine_path) : gafsm::builtin_strategy(strategy);
  const gafsm::Dataset data = gafsm::load_table(data_path, schema_flags.schema());
  DocumentSink sink(out_path);

  const gafsm::FitnessReport report = gafsm::accuracy(machine, data, true);

  json doc = base_document("evaluate");
  doc["config"] = {{"strategy", strategy},
                   {"machine", machine_path},
                   {"data", data_path},
                   {"schema", schema_flags.to_json()}};
  doc["dataset"] = gafsm::dataset_fingerprint(data);
  doc["result"] = {{"accuracy", report.accuracy},
                   {"rows", report.row_count},
                   {"per_group_accuracy", *report.per_group_accuracy},
                   {"machine", gafsm::fsm_to_json(machine)}};
  doc["timings"] = {{"total_seconds", seconds_since(start)}};
  sink.write(doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-state decision-model estimation by genetic algorithm"};
  app.set_version_flag("--version", std::string("gafsm ") + gafsm::kVersion);
  app.require_subcommand(1);

  auto* evolve_cmd = app.add_subcommand("evolve", "Estimate a machine from a data file");
  std::string ev_data, ev_out, ev_dot;
  SchemaFlags ev_schema;
  GaFlags ev_ga;
  int ev_states = 2;
  std::uint64_t ev_seed = 0;
  double ev_test_frac = 0.0;
  evolve_cmd->add_option("--data", ev_data, "Input CSV file")->required();
  evolve_cmd->add_option("--states", ev_states, "Number of machine states")
      ->capture_default_str();
  evolve_cmd->add_option("--seed", ev_seed, "Master seed")->capture_default_str();
  evolve_cmd->add_option("--test-frac", ev_test_frac,
                         "Hold out this fraction of groups for test accuracy");
  evolve_cmd->add_option("--out", ev_out, "Run document path (default: stdout)");
  evolve_cmd->add_option("--dot", ev_dot, "Write the best machine as a Graphviz file");
  ev_schema.attach(evolve_cmd);
  ev_ga.attach(evolve_cmd);

  auto* cv_cmd = app.add_subcommand("cv", "Cross-validate hyper-parameters");
  std::string cv_data, cv_states = "2", cv_out;
  SchemaFlags cv_schema;
  GaFlags cv_ga;
  int cv_folds = 10;
  std::uint64_t cv_seed = 0;
  bool cv_subsets = false;
  int cv_max_predictors = 3;
  cv_cmd->add_option("--data", cv_data, "Input CSV file")->required();
  cv_cmd->add_option("--states", cv_states, "Comma-separated state counts, e.g. 2,3,4")
      ->capture_default_str();
  cv_cmd->add_option("--folds", cv_folds, "Fold count")->capture_default_str();
  cv_cmd->add_option("--seed", cv_seed, "Master seed")->capture_default_str();
  cv_cmd->add_flag("--subset-search", cv_subsets,
                   "Rank all predictor subsets up to --max-predictors");
  cv_cmd->add_option("--max-predictors", cv_max_predictors,
                     "Largest subset size for --subset-search (must be < 4)")
      ->capture_default_str();
  cv_cmd->add_option("--out", cv_out, "Run document path (default: stdout)");
  cv_schema.attach(cv_cmd);
  cv_ga.attach(cv_cmd);

  auto* sim_cmd = app.add_subcommand("simulate", "Generate noisy repeated-game datasets");
  std::string sim_player = "tft", sim_opponent = "tft", sim_noise = "0", sim_condition = "both";
  std::string sim_design, sim_dir = "simdata", sim_out, sim_table;
  GaFlags sim_ga;
  int sim_periods = 0, sim_reps = 0, sim_states = 2, sim_game_length = 200;
  std::uint64_t sim_seed = 0;
  bool sim_recover = false;
  sim_cmd->add_option("--player", sim_player, "Player strategy name")->capture_default_str();
  sim_cmd->add_option("--opponent", sim_opponent, "Opponent strategy name")
      ->capture_default_str();
  sim_cmd->add_option("--noise", sim_noise, "Noise level(s): value, list, or lo:hi:step")
      ->capture_default_str();
  sim_cmd->add_option("--condition", sim_condition, "both, opponent-only, or all")
      ->check(CLI::IsMember({"both", "opponent-only", "all"}))
      ->capture_default_str();
  sim_cmd->add_option("--periods", sim_periods, "Total periods per replicate (default 4000)");
  sim_cmd->add_option("--game-length", sim_game_length,
                      "Restart play every this many periods (0 = one continuous game)")
      ->capture_default_str();
  sim_cmd->add_option("--reps", sim_reps, "Replicates per condition (default 1; design: 25)");
  sim_cmd->add_option("--seed", sim_seed, "Base seed")->capture_default_str();
  sim_cmd->add_option("--design", sim_design, "Named full design: paper");
  sim_cmd->add_flag("--recover", sim_recover,
                    "Re-estimate each replicate and tabulate model error");
  sim_cmd->add_option("--states", sim_states, "State count used by --recover")
      ->capture_default_str();
  sim_cmd->add_option("--out-dir", sim_dir, "Directory for dataset files and manifest")
      ->capture_default_str();
  sim_cmd->add_option("--out", sim_out, "Run document path (default: stdout)");
  sim_cmd->add_option("--table", sim_table, "Recovery table CSV path");
  sim_ga.attach(sim_cmd);

  auto* eval_cmd = app.add_subcommand("evaluate", "Score a fixed machine on a data file");
  std::string eval_strategy, eval_machine, eval_data, eval_out;
  SchemaFlags eval_schema;
  eval_cmd->add_option("--strategy", eval_strategy, "Built-in strategy name");
  eval_cmd->add_option("--machine", eval_machine, "Machine JSON file");
  eval_cmd->add_option("--data", eval_data, "Input CSV file")->required();
  eval_cmd->add_option("--out", eval_out, "Run document path (default: stdout)");
  eval_schema.attach(eval_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (evolve_cmd->parsed()) {
      return cmd_evolve(ev_data, ev_schema, ev_ga, ev_states, ev_seed, ev_test_frac, ev_out,
                        ev_dot);
    }
    if (cv_cmd->parsed()) {
      return cmd_cv(cv_data, cv_schema, cv_ga, cv_states, cv_folds, cv_seed, cv_subsets,
                    cv_max_predictors, cv_out);
    }
    if (sim_cmd->parsed()) {
      return cmd_simulate(sim_player, sim_opponent, sim_noise, sim_condition, sim_periods,
                          sim_game_length, sim_reps, sim_seed, sim_design, sim_recover,
                          sim_states, sim_ga, sim_dir, sim_out, sim_table);
    }
    if (eval_cmd->parsed()) {
      return cmd_evaluate(eval_strategy, eval_machine, eval_data, eval_schema, eval_out);
    }
  } catch (const gafsm::LoadError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}

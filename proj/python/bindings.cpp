#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gafsm/analysis.hpp"
#include "gafsm/codec.hpp"
#include "gafsm/dataset.hpp"
#include "gafsm/fitness.hpp"
#include "gafsm/fsm.hpp"
#include "gafsm/ga.hpp"
#include "gafsm/model_selection.hpp"
#include "gafsm/rng.hpp"
#include "gafsm/simulator.hpp"
#include "gafsm/version.hpp"

namespace py = pybind11;
using namespace gafsm;

PYBIND11_MODULE(_gafsm, m) {
  m.doc() = "Finite-state decision-model estimation by genetic algorithm";
  m.attr("__version__") = kVersion;

  // codec
  py::class_<ChromosomeLayout>(m, "ChromosomeLayout")
      .def(py::init<>())
      .def(py::init([](int states, int actions, int columns) {
             ChromosomeLayout layout{states, actions, columns};
             layout.validate();
             return layout;
           }),
           py::arg("num_states"), py::arg("num_actions"), py::arg("num_columns"))
      .def_readwrite("num_states", &ChromosomeLayout::num_states)
      .def_readwrite("num_actions", &ChromosomeLayout::num_actions)
      .def_readwrite("num_columns", &ChromosomeLayout::num_columns)
      .def("length", [](const ChromosomeLayout& layout) { return chromosome_length(layout); })
      .def("__eq__", [](const ChromosomeLayout& a, const ChromosomeLayout& b) { return a == b; });

  py::class_<Chromosome>(m, "Chromosome")
      .def(py::init<>())
      .def(py::init([](BitVec bits, const ChromosomeLayout& layout) {
             Chromosome chrom{std::move(bits), layout};
             chrom.validate();
             return chrom;
           }),
           py::arg("bits"), py::arg("layout"))
      .def_readwrite("bits", &Chromosome::bits)
      .def_readwrite("layout", &Chromosome::layout)
      .def("__eq__", [](const Chromosome& a, const Chromosome& b) { return a == b; });

  m.def("gray_to_binary", &gray_to_binary, py::arg("bits"));
  m.def("binary_to_gray", &binary_to_gray, py::arg("bits"));
  m.def("chromosome_length", &chromosome_length, py::arg("layout"));

  // machine
  py::class_<Fsm>(m, "Fsm")
      .def(py::init<>())
      .def_readwrite("num_states", &Fsm::num_states)
      .def_readwrite("num_actions", &Fsm::num_actions)
      .def_readwrite("action_vector", &Fsm::action_vector)
      .def_readwrite("state_matrix", &Fsm::state_matrix)
      .def_readwrite("initial_state", &Fsm::initial_state)
      .def_readwrite("predictor_names", &Fsm::predictor_names)
      .def_readwrite("action_labels", &Fsm::action_labels)
      .def_readwrite("column_labels", &Fsm::column_labels)
      .def("validate", &Fsm::validate)
      .def("column_label", &Fsm::column_label, py::arg("column"))
      .def("__eq__", [](const Fsm& a, const Fsm& b) { return a == b; });

  m.def(
      "decode_chromosome",
      [](const Chromosome& chrom, const std::optional<std::vector<std::string>>& predictors,
         const std::optional<std::vector<std::string>>& actions) {
        if (predictors && actions) return decode_chromosome(chrom, *predictors, *actions);
        return decode_chromosome(chrom);
      },
      py::arg("chromosome"), py::arg("predictor_names") = std::nullopt,
      py::arg("action_labels") = std::nullopt);
  m.def("encode_chromosome", &encode_chromosome, py::arg("fsm"));
  m.def("column_index", &column_index, py::arg("predictor_bits"));

  py::class_<PredictionTrace>(m, "PredictionTrace")
      .def_readonly("predicted_actions", &PredictionTrace::predicted_actions)
      .def_readonly("visited_states", &PredictionTrace::visited_states)
      .def_readonly("matches", &PredictionTrace::matches);

  m.def("predict_sequence", &predict_sequence, py::arg("fsm"), py::arg("rows"));
  m.def("to_dot", &to_dot, py::arg("fsm"), py::arg("accessible") = std::nullopt);

  // dataset
  py::class_<Row>(m, "Row")
      .def(py::init<>())
      .def(py::init([](int period, int outcome, BitVec predictors) {
             return Row{period, outcome, std::move(predictors)};
           }),
           py::arg("period"), py::arg("outcome"), py::arg("predictors"))
      .def_readwrite("period", &Row::period)
      .def_readwrite("outcome", &Row::outcome)
      .def_readwrite("predictors", &Row::predictors);

  py::class_<Group>(m, "Group")
      .def(py::init<>())
      .def_readwrite("id", &Group::id)
      .def_readwrite("rows", &Group::rows);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("groups", &Dataset::groups)
      .def_readwrite("predictor_names", &Dataset::predictor_names)
      .def_readwrite("action_labels", &Dataset::action_labels)
      .def("num_rows", &Dataset::num_rows)
      .def("num_groups", &Dataset::num_groups)
      .def("num_predictors", &Dataset::num_predictors)
      .def("validate", &Dataset::validate)
      .def("__eq__", [](const Dataset& a, const Dataset& b) { return a == b; });

  py::class_<TableSchema>(m, "TableSchema")
      .def(py::init<>())
      .def_readwrite("period_column", &TableSchema::period_column)
      .def_readwrite("outcome_column", &TableSchema::outcome_column)
      .def_readwrite("group_column", &TableSchema::group_column)
      .def_readwrite("predictor_columns", &TableSchema::predictor_columns)
      .def_readwrite("action_labels", &TableSchema::action_labels);

  m.def("load_table", &load_table, py::arg("path"), py::arg("schema") = TableSchema{});
  m.def("write_table",
        py::overload_cast<const Dataset&, const std::string&>(&write_table), py::arg("data"),
        py::arg("path"));
  m.def("table_to_string", &table_to_string, py::arg("data"));
  m.def("binarize", &binarize, py::arg("values"), py::arg("threshold"));
  m.def("binarize_median", &binarize_median, py::arg("values"));
  m.def(
      "split_train_test",
      [](const Dataset& data, double train_fraction, std::uint64_t seed) {
        return split_train_test(data, SplitSpec{train_fraction, seed});
      },
      py::arg("data"), py::arg("train_fraction") = 0.8, py::arg("seed") = 0);
  m.def("fold_assignments", &fold_assignments, py::arg("data"), py::arg("k"), py::arg("seed") = 0);
  m.def("project_predictors", &project_predictors, py::arg("data"), py::arg("predictor_indices"));

  // fitness
  py::class_<FitnessReport>(m, "FitnessReport")
      .def_readonly("accuracy", &FitnessReport::accuracy)
      .def_readonly("row_count", &FitnessReport::row_count)
      .def_readonly("per_group_accuracy", &FitnessReport::per_group_accuracy);

  m.def("accuracy", &accuracy, py::arg("fsm"), py::arg("data"), py::arg("per_group") = false);
  m.def(
      "evaluate_population",
      [](const std::vector<Chromosome>& population, const Dataset& data, int threads) {
        return evaluate_population(population, data, threads);
      },
      py::arg("chromosomes"), py::arg("data"), py::arg("threads") = 0);

  // ga
  py::enum_<SelectionScheme>(m, "SelectionScheme")
      .value("LinearRank", SelectionScheme::LinearRank)
      .value("FitnessProportional", SelectionScheme::FitnessProportional);

  py::class_<GaConfig>(m, "GaConfig")
      .def(py::init<>())
      .def_readwrite("population_size", &GaConfig::population_size)
      .def_readwrite("crossover_prob", &GaConfig::crossover_prob)
      .def_readwrite("mutation_prob", &GaConfig::mutation_prob)
      .def_readwrite("elitism_fraction", &GaConfig::elitism_fraction)
      .def_readwrite("max_generations", &GaConfig::max_generations)
      .def_readwrite("stagnation_generations", &GaConfig::stagnation_generations)
      .def_readwrite("seed", &GaConfig::seed)
      .def_readwrite("selection", &GaConfig::selection)
      .def_readwrite("prior_machines", &GaConfig::prior_machines)
      .def_readwrite("threads", &GaConfig::threads)
      .def_readwrite("cache_fitness", &GaConfig::cache_fitness);

  py::class_<GenerationStats>(m, "GenerationStats")
      .def_readonly("best", &GenerationStats::best)
      .def_readonly("median", &GenerationStats::median);

  py::class_<IdentifiabilityReport>(m, "IdentifiabilityReport")
      .def_readonly("base_fitness", &IdentifiabilityReport::base_fitness)
      .def_readonly("identifiable", &IdentifiabilityReport::identifiable)
      .def_readonly("min_delta", &IdentifiabilityReport::min_delta);

  py::class_<ImportanceReport>(m, "ImportanceReport")
      .def_readonly("predictor_names", &ImportanceReport::predictor_names)
      .def_readonly("scores", &ImportanceReport::scores);

  py::class_<EvolveResult>(m, "EvolveResult")
      .def_readonly("best_chromosome", &EvolveResult::best_chromosome)
      .def_readonly("best_fsm", &EvolveResult::best_fsm)
      .def_readonly("best_fitness", &EvolveResult::best_fitness)
      .def_readonly("generation_log", &EvolveResult::generation_log)
      .def_readonly("generations_run", &EvolveResult::generations_run)
      .def_readonly("identifiability", &EvolveResult::identifiability)
      .def_readonly("importance", &EvolveResult::importance)
      .def_readonly("test_accuracy", &EvolveResult::test_accuracy);

  m.def("init_population", &init_population, py::arg("config"), py::arg("layout"));
  m.def("linear_rank_probabilities", &linear_rank_probabilities, py::arg("fitness"));
  m.def(
      "single_point_crossover",
      [](const Chromosome& a, const Chromosome& b, std::uint64_t seed) {
        Rng rng(seed);
        return single_point_crossover(a, b, rng);
      },
      py::arg("a"), py::arg("b"), py::arg("seed"));
  m.def(
      "uniform_mutation",
      [](const Chromosome& chrom, double rate, std::uint64_t seed) {
        Rng rng(seed);
        return uniform_mutation(chrom, rate, rng);
      },
      py::arg("chromosome"), py::arg("rate"), py::arg("seed"));
  m.def("evolve", &evolve, py::arg("data"), py::arg("layout"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  // analysis
  m.def("identifiability", &identifiability, py::arg("fsm"), py::arg("data"));
  m.def("variable_importance", &variable_importance, py::arg("fsm"), py::arg("data"));
  m.def("accessibility_mask", &accessibility_mask, py::arg("truth"), py::arg("own_predictor") = 0);
  m.def("model_error",
        py::overload_cast<const Fsm&, const Fsm&, const std::vector<std::vector<bool>>&>(
            &model_error),
        py::arg("estimated"), py::arg("truth"), py::arg("mask"));
  m.def("model_error", py::overload_cast<const Fsm&, const Fsm&, int>(&model_error),
        py::arg("estimated"), py::arg("truth"), py::arg("own_predictor") = 0);
  m.def("builtin_strategy", &builtin_strategy, py::arg("name"));
  m.def("builtin_strategy_names", &builtin_strategy_names);

  // model selection
  py::class_<HyperGrid>(m, "HyperGrid")
      .def(py::init<>())
      .def_readwrite("state_counts", &HyperGrid::state_counts)
      .def_readwrite("predictor_subsets", &HyperGrid::predictor_subsets)
      .def_readwrite("metric", &HyperGrid::metric)
      .def_readwrite("folds", &HyperGrid::folds)
      .def_readwrite("seed", &HyperGrid::seed);

  py::class_<CvCell>(m, "CvCell")
      .def_readonly("states", &CvCell::states)
      .def_readonly("predictors", &CvCell::predictors)
      .def_readonly("fold_scores", &CvCell::fold_scores)
      .def_readonly("mean_score", &CvCell::mean_score);

  py::class_<CvResult>(m, "CvResult")
      .def_readonly("table", &CvResult::table)
      .def_readonly("best_index", &CvResult::best_index)
      .def("best", &CvResult::best, py::return_value_policy::copy);

  m.def("cross_validate", &cross_validate, py::arg("data"), py::arg("grid"),
        py::arg("ga_config"), py::call_guard<py::gil_scoped_release>());
  m.def("subset_search", &subset_search, py::arg("data"), py::arg("max_predictors"),
        py::arg("num_states"), py::arg("ga_config"), py::arg("folds") = 10, py::arg("seed") = 0,
        py::call_guard<py::gil_scoped_release>());

  py::class_<ReductionResult>(m, "ReductionResult")
      .def_readonly("full_run", &ReductionResult::full_run)
      .def_readonly("full_importance", &ReductionResult::full_importance)
      .def_readonly("kept_predictors", &ReductionResult::kept_predictors)
      .def_readonly("reduced_data", &ReductionResult::reduced_data)
      .def_readonly("reduced_run", &ReductionResult::reduced_run);

  m.def("importance_guided_reduction", &importance_guided_reduction, py::arg("data"),
        py::arg("keep"), py::arg("num_states"), py::arg("ga_config"),
        py::call_guard<py::gil_scoped_release>());

  // simulator
  py::class_<MatchConfig>(m, "MatchConfig")
      .def(py::init<>())
      .def_readwrite("player", &MatchConfig::player)
      .def_readwrite("opponent", &MatchConfig::opponent)
      .def_readwrite("player_noise", &MatchConfig::player_noise)
      .def_readwrite("opponent_noise", &MatchConfig::opponent_noise)
      .def_readwrite("periods", &MatchConfig::periods)
      .def_readwrite("seed", &MatchConfig::seed)
      .def_readwrite("player_stream", &MatchConfig::player_stream)
      .def_readwrite("opponent_stream", &MatchConfig::opponent_stream);

  py::class_<MatchSummary>(m, "MatchSummary")
      .def_readonly("player_coop_rate", &MatchSummary::player_coop_rate)
      .def_readonly("opponent_coop_rate", &MatchSummary::opponent_coop_rate)
      .def_readonly("player_mean_payoff", &MatchSummary::player_mean_payoff)
      .def_readonly("opponent_mean_payoff", &MatchSummary::opponent_mean_payoff);

  py::class_<MatchResult>(m, "MatchResult")
      .def_readonly("player_data", &MatchResult::player_data)
      .def_readonly("opponent_data", &MatchResult::opponent_data)
      .def_readonly("summary", &MatchResult::summary);

  m.def("play_match", &play_match, py::arg("config"));

  py::enum_<NoiseCondition>(m, "NoiseCondition")
      .value("BothNoisy", NoiseCondition::BothNoisy)
      .value("OpponentOnly", NoiseCondition::OpponentOnly);

  py::class_<ExperimentDesign>(m, "ExperimentDesign")
      .def(py::init<>())
      .def_readwrite("pairings", &ExperimentDesign::pairings)
      .def_readwrite("noise_levels", &ExperimentDesign::noise_levels)
      .def_readwrite("conditions", &ExperimentDesign::conditions)
      .def_readwrite("replicates", &ExperimentDesign::replicates)
      .def_readwrite("periods", &ExperimentDesign::periods)
      .def_readwrite("game_length", &ExperimentDesign::game_length)
      .def_readwrite("base_seed", &ExperimentDesign::base_seed)
      .def("condition_count", &ExperimentDesign::condition_count);

  m.def("reference_design", &reference_design);

  py::class_<ConditionSpec>(m, "ConditionSpec")
      .def_readonly("player", &ConditionSpec::player)
      .def_readonly("opponent", &ConditionSpec::opponent)
      .def_readonly("condition", &ConditionSpec::condition)
      .def_readonly("noise", &ConditionSpec::noise)
      .def_readonly("replicate", &ConditionSpec::replicate)
      .def_readonly("seed", &ConditionSpec::seed);

  py::class_<ManifestEntry>(m, "ManifestEntry")
      .def_readonly("condition", &ManifestEntry::condition)
      .def_readonly("periods", &ManifestEntry::periods)
      .def_readonly("file", &ManifestEntry::file);

  py::class_<Manifest>(m, "Manifest").def_readonly("entries", &Manifest::entries);

  m.def("run_experiment", &run_experiment, py::arg("design"), py::arg("out_dir"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<RecoveryRow>(m, "RecoveryRow")
      .def_readonly("condition", &RecoveryRow::condition)
      .def_readonly("model_error", &RecoveryRow::model_error)
      .def_readonly("best_fitness", &RecoveryRow::best_fitness);

  m.def("recovery_study", &recovery_study, py::arg("design"), py::arg("layout"),
        py::arg("ga_config"), py::call_guard<py::gil_scoped_release>());
}

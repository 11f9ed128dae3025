#include "gafsm/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace gafsm {

using nlohmann::json;

json fsm_to_json(const Fsm& fsm) {
  json doc;
  doc["num_states"] = fsm.num_states;
  doc["num_actions"] = fsm.num_actions;
  doc["initial_state"] = fsm.initial_state;
  doc["action_vector"] = fsm.action_vector;
  doc["state_matrix"] = fsm.state_matrix;
  doc["predictor_names"] = fsm.predictor_names;
  doc["action_labels"] = fsm.action_labels;
  if (!fsm.column_labels.empty()) doc["column_labels"] = fsm.column_labels;
  return doc;
}

Fsm fsm_from_json(const json& doc) {
  Fsm fsm;
  fsm.num_states = doc.at("num_states").get<int>();
  fsm.num_actions = doc.at("num_actions").get<int>();
  fsm.initial_state = doc.value("initial_state", 1);
  fsm.action_vector = doc.at("action_vector").get<std::vector<int>>();
  fsm.state_matrix = doc.at("state_matrix").get<std::vector<std::vector<int>>>();
  fsm.predictor_names = doc.at("predictor_names").get<std::vector<std::string>>();
  fsm.action_labels = doc.at("action_labels").get<std::vector<std::string>>();
  if (doc.contains("column_labels")) {
    fsm.column_labels = doc.at("column_labels").get<std::vector<std::string>>();
  }
  fsm.validate();
  return fsm;
}

Fsm load_fsm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open machine file: " + path);
  json doc;
  in >> doc;
  // accept either a bare machine document or a full run document
  if (doc.contains("result") && doc["result"].contains("machine")) {
    return fsm_from_json(doc["result"]["machine"]);
  }
  if (doc.contains("machine")) return fsm_from_json(doc["machine"]);
  return fsm_from_json(doc);
}

json identifiability_to_json(const IdentifiabilityReport& report) {
  json doc;
  doc["base_fitness"] = report.base_fitness;
  doc["identifiable"] = report.identifiable;
  doc["min_delta"] = report.min_delta;
  return doc;
}

json importance_to_json(const ImportanceReport& report) {
  json doc;
  doc["predictor_names"] = report.predictor_names;
  doc["scores"] = report.scores;
  return doc;
}

json evolve_result_to_json(const EvolveResult& result) {
  json doc;
  doc["best_fitness"] = result.best_fitness;
  doc["generations_run"] = result.generations_run;
  doc["machine"] = fsm_to_json(result.best_fsm);
  doc["chromosome"] = result.best_chromosome.bits;
  json log = json::array();
  for (const GenerationStats& stats : result.generation_log) {
    log.push_back({{"best", stats.best}, {"median", stats.median}});
  }
  doc["generation_log"] = log;
  if (result.identifiability) {
    doc["identifiability"] = identifiability_to_json(*result.identifiability);
  }
  if (result.importance) doc["importance"] = importance_to_json(*result.importance);
  if (result.test_accuracy) doc["test_accuracy"] = *result.test_accuracy;
  return doc;
}

json cv_result_to_json(const CvResult& result) {
  json table = json::array();
  for (const CvCell& cell : result.table) {
    table.push_back({{"states", cell.states},
                     {"predictors", cell.predictors},
                     {"fold_scores", cell.fold_scores},
                     {"mean_score", cell.mean_score}});
  }
  json doc;
  doc["table"] = table;
  doc["best_index"] = result.best_index;
  doc["best"] = table[result.best_index];
  return doc;
}

namespace {

json condition_to_json(const ConditionSpec& spec) {
  return {{"player", spec.player},
          {"opponent", spec.opponent},
          {"condition", to_string(spec.condition)},
          {"noise", spec.noise},
          {"replicate", spec.replicate},
          {"seed", spec.seed}};
}

}  // namespace

json recovery_rows_to_json(const std::vector<RecoveryRow>& rows) {
  json out = json::array();
  for (const RecoveryRow& row : rows) {
    json entry = condition_to_json(row.condition);
    entry["model_error"] = row.model_error;
    entry["best_fitness"] = row.best_fitness;
    out.push_back(std::move(entry));
  }
  return out;
}

json manifest_to_json(const Manifest& manifest) {
  json entries = json::array();
  for (const ManifestEntry& entry : manifest.entries) {
    json doc = condition_to_json(entry.condition);
    doc["periods"] = entry.periods;
    doc["file"] = entry.file;
    entries.push_back(std::move(doc));
  }
  return {{"entries", entries}};
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

json dataset_fingerprint(const Dataset& data) {
  std::ostringstream hex;
  hex << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0')
      << fnv1a64(table_to_string(data));
  return {{"rows", data.num_rows()},
          {"groups", data.num_groups()},
          {"predictors", data.predictor_names},
          {"action_labels", data.action_labels},
          {"hash", hex.str()}};
}

}  // namespace gafsm

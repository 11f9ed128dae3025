#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "gafsm/analysis.hpp"
#include "gafsm/dataset.hpp"
#include "gafsm/fsm.hpp"
#include "gafsm/ga.hpp"
#include "gafsm/model_selection.hpp"
#include "gafsm/simulator.hpp"

namespace gafsm {

// Machine document: action vector, state matrix, labels. This is both the
// machine section of a run document and the accepted --machine file format.
nlohmann::json fsm_to_json(const Fsm& fsm);
Fsm fsm_from_json(const nlohmann::json& doc);
Fsm load_fsm(const std::string& path);

nlohmann::json identifiability_to_json(const IdentifiabilityReport& report);
nlohmann::json importance_to_json(const ImportanceReport& report);
nlohmann::json evolve_result_to_json(const EvolveResult& result);
nlohmann::json cv_result_to_json(const CvResult& result);
nlohmann::json recovery_rows_to_json(const std::vector<RecoveryRow>& rows);
nlohmann::json manifest_to_json(const Manifest& manifest);

// FNV-1a over the canonical table text, plus row/group counts.
nlohmann::json dataset_fingerprint(const Dataset& data);
std::uint64_t fnv1a64(const std::string& text);

}  // namespace gafsm

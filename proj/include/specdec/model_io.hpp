#pragma once

// JSON documents for trained predictors. Matrices are stored as row-major
// number lists next to their dimensions; doubles round-trip exactly.

#include "json.hpp"

#include "specdec/bp.hpp"
#include "specdec/elm.hpp"
#include "specdec/hmm.hpp"

namespace specdec {

nlohmann::json to_json(const ElmModel& model);
nlohmann::json to_json(const BpModel& model);
nlohmann::json to_json(const HmmModel& model);

/// Throw ParameterError on a missing field, wrong kind or inconsistent sizes.
ElmModel elm_from_json(const nlohmann::json& doc);
BpModel bp_from_json(const nlohmann::json& doc);
HmmModel hmm_from_json(const nlohmann::json& doc);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& values, Eigen::Index rows, Eigen::Index cols);

}  // namespace specdec

// config.hpp
//
// INI case configuration: a top-level `case` key plus [geometry], [material],
// [modes], [solver], [targets] and [energy] sections. Unset keys keep the
// case defaults; unknown keys are rejected.

#pragma once

#include "isokin/cases.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace isokin
{

/// Throws ParseError for malformed text or values, InvalidArgument for unknown
/// keys and failed validation, UnknownCase for a bad case tag.
CaseConfig parse_config(const std::string &text);
CaseConfig load_config(const std::filesystem::path &path);

/// Every effective setting, for run manifests.
nlohmann::json config_snapshot(const CaseConfig &cfg);

/// Comma- or whitespace-separated numbers.
Eigen::VectorXd parse_vector(const std::string &text);
/// One row per line, comma-separated.
Eigen::MatrixXd parse_matrix(const std::string &text);
std::string format_matrix(const Eigen::MatrixXd &M);

std::string read_text(const std::filesystem::path &path);

} // namespace isokin

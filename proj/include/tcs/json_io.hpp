#pragma once

#include "tcs/pipeline.hpp"
#include "tcs/scm.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace tcs {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "tcs.report/1";
inline constexpr const char* kEvaluationSchema = "tcs.evaluation/1";
inline constexpr const char* kDiscoverySchema = "tcs.discovery/1";

// Readers are strict: unknown keys and wrong types raise ArgumentError naming
// the offending path. Missing keys keep their defaults.

Json graph_to_json(const LaggedGraph& g);
/// Standalone graph file text with one [tau, i, j] triple per line.
std::string format_graph_json(const LaggedGraph& g);
LaggedGraph graph_from_json(const Json& j);

Json to_json(const CDConfig& c);
Json to_json(const ForecasterConfig& c);
Json to_json(const NoiseConfig& c);
Json to_json(const DetectorConfig& c);
Json to_json(const GeneratorConfig& c);
Json to_json(const TCSConfig& c);

CDConfig cd_config_from_json(const Json& j, const std::string& path = "cd");
ForecasterConfig forecaster_config_from_json(const Json& j, const std::string& path = "forecaster");
NoiseConfig noise_config_from_json(const Json& j, const std::string& path = "noise");
DetectorConfig detector_config_from_json(const Json& j, const std::string& path = "detector");
GeneratorConfig generator_config_from_json(const Json& j);
/// Fields absent from the document come from TCSConfig::defaults().
/// detector_space may also be {"default_grid": [window lengths]}.
TCSConfig tcs_config_from_json(const Json& j);

Json discovery_to_json(const CDResult& r, const CDConfig& cfg);
Json report_to_json(const TCSReport& r, const TCSConfig& cfg);
Json timing_to_json(const TCSReport& r);
Json evaluation_to_json(const EvaluationReport& r);

/// Identifies a document (graph, tcs config, generator config, discovery,
/// report or evaluation) and checks it against its schema. Returns the kind;
/// throws ArgumentError describing the first violation.
std::string validate_document(const Json& j);

Json parse_json(const std::string& text, const std::string& source);
/// Two-space indentation plus trailing newline.
std::string dump_json(const Json& j);

}  // namespace tcs

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "depgen/benchmark.hpp"
#include "depgen/constraint.hpp"
#include "depgen/dependency_miner.hpp"
#include "depgen/evaluator.hpp"
#include "depgen/source_model.hpp"

namespace depgen {

nlohmann::json to_json(const SourceUnit& unit);
nlohmann::json to_json(const ProjectIndex& index);
ProjectIndex index_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ApiRef& api);
ApiRef api_ref_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LocalDependency& local, const GlobalDependency& global);

nlohmann::json to_json(const TokenTrie& trie);

nlohmann::json to_json(const BenchmarkSample& sample);
BenchmarkSample sample_from_json(const nlohmann::json& j);
std::string to_jsonl(const BenchmarkSet& set);
BenchmarkSet benchmark_from_jsonl(const std::string& text);

nlohmann::json to_json(const MetricReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace depgen

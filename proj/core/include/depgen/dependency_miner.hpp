#pragma once

#include <string>
#include <utility>
#include <vector>

#include "depgen/source_model.hpp"
#include "depgen/tokenizer.hpp"

namespace depgen {

inline constexpr const char* kApiPositionMarker = "[API_Position]";

/// Where a completion is requested: just before an API name inside a method.
struct GenerationPoint {
    std::string file;
    std::string class_name;
    std::string method_name;
    int line = 0;    // 1-based line of the target call
    int column = 0;  // byte offset of the name on that line
    std::string prefix_text;    // method source strictly before the call name
    std::string receiver_text;  // may be empty for receiverless points
};

enum class ApiSource { InProjectDeclared, FieldTyped, LocalTyped };

struct ApiRef {
    std::string owner;
    std::string name;
    bool has_params = false;
    std::string signature_text;
    ApiSource source = ApiSource::InProjectDeclared;
};

struct LocalDependency {
    std::vector<ApiRef> reference_apis;
    // (qualified name, verbatim implementation)
    std::vector<std::pair<std::string, std::string>> called_functions;
};

struct FileSkeleton {
    std::string path;
    std::string rendered_text;
};

struct GlobalDependency {
    FileSkeleton current_skeleton;
    std::vector<FileSkeleton> related_skeletons;  // import declaration order
};

struct PromptSection {
    std::string label;
    std::string text;
    int token_count = 0;
};

struct PromptDocument {
    std::vector<PromptSection> sections;
    std::string rendered;
};

struct PromptBudgets {
    int project_tokens = 7000;
    int function_tokens = 1000;
};

/// Locate the generation point for the invocation site at (line, column) in `file`.
GenerationPoint locate_point(const ProjectIndex& index, const std::string& file, int line,
                             int column);

LocalDependency mine_local(const GenerationPoint& point, const ProjectIndex& index,
                           bool strict = false);

FileSkeleton extract_skeleton(const SourceUnit& unit);

GlobalDependency mine_global(const GenerationPoint& point, const ProjectIndex& index);

PromptDocument build_prompt(const std::string& description, const GlobalDependency& global_deps,
                            const LocalDependency& local_deps, const GenerationPoint& point,
                            const PromptBudgets& budgets, const Tokenizer& tokenizer);

std::string render_api_signature(const ApiRef& api);

/// Declared-type resolution for a receiver expression at a point inside a
/// method: local declarations in the prefix, then parameters, then fields.
std::optional<ClassLocation> resolve_receiver_class(const std::string& receiver,
                                                    const std::string& prefix_text,
                                                    const MethodInfo& method,
                                                    const ClassInfo& cls, const SourceUnit& unit,
                                                    const ProjectIndex& index,
                                                    ApiSource* source = nullptr);

/// Method source strictly before file position (line, column).
std::string method_prefix_at(const MethodInfo& method, int line, int column);

}  // namespace depgen

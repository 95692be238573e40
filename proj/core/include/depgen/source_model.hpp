#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "depgen/errors.hpp"

namespace depgen {

/// One `receiver.name(args)` occurrence inside a method body.
struct InvocationSite {
    std::string receiver_text;  // source text before the final "."
    std::string method_name;
    int arg_count = 0;
    int line = 0;    // 1-based, file coordinates
    int column = 0;  // 0-based byte offset of method_name on its line
};

struct ParamDecl {
    std::string name;
    std::string type;
};

struct MethodInfo {
    std::string name;
    std::vector<ParamDecl> params;
    std::string return_type;
    std::pair<int, int> body_lines;  // declaration start line .. closing brace line
    std::string body_text;           // verbatim source of that extent
    std::string signature_text;      // modifiers + return type + name + params, no body
    std::vector<InvocationSite> call_sites;  // sorted by (line, column)
};

struct FieldDecl {
    std::string name;
    std::string type;
    std::string decl_text;  // verbatim declaration, used for skeleton rendering
};

struct ClassInfo {
    std::string name;
    std::string header_text;  // verbatim declaration header up to the opening brace
    std::vector<FieldDecl> fields_;
    std::vector<MethodInfo> methods;
    std::pair<int, int> line_range;  // 1-based inclusive
};

struct ImportDecl {
    enum class Kind { Unresolved, Internal, External };
    std::vector<std::string> segments;
    bool wildcard = false;
    Kind resolution = Kind::Unresolved;
    std::string target;  // internal file path or package directory

    std::string dotted() const;
};

struct Diagnostic {
    std::string message;
    int line = 0;
    int column = 0;
};

struct SourceUnit {
    std::string path;
    std::vector<std::string> package;
    std::vector<ImportDecl> imports;
    std::vector<ClassInfo> classes;
    std::string raw_text;
    std::vector<Diagnostic> diagnostics;

    const ClassInfo* find_class(const std::string& name) const;
};

struct ClassLocation {
    std::string path;
    int class_index = 0;
};

/// Immutable, queryable model of a parsed source project.
struct ProjectIndex {
    std::map<std::string, SourceUnit> units;  // keyed by path, deterministic order
    std::string description;
    // (dotted package, class name) -> location
    std::map<std::pair<std::string, std::string>, ClassLocation> class_lookup;

    const SourceUnit* find_unit(const std::string& path) const;
    const ClassInfo* class_at(const ClassLocation& loc) const;
    // Resolve a simple class name as seen from `from`: same file, explicit
    // imports, same package, then a globally unique match.
    std::optional<ClassLocation> resolve_class(const std::string& simple_name,
                                               const SourceUnit& from) const;
};

SourceUnit parse_unit(const std::string& path, const std::string& text);

ProjectIndex build_index(const std::vector<std::pair<std::string, std::string>>& files,
                         const std::string& description);

/// Classify one import against the index: Internal when the dotted path maps
/// to a file (or, for wildcards, a package directory) present in the project,
/// External otherwise.
ImportDecl::Kind resolve_import(const ImportDecl& decl, const ProjectIndex& index,
                                std::string* target = nullptr);

/// Read a project directory tree of .java files (plus optional project.json).
ProjectIndex load_project(const std::string& root_dir);

}  // namespace depgen

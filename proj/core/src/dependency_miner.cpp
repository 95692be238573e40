#include "depgen/dependency_miner.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace depgen {

namespace {

std::string dotted(const std::vector<std::string>& segs) {
    std::string out;
    for (size_t k = 0; k < segs.size(); ++k) {
        if (k) out += ".";
        out += segs[k];
    }
    return out;
}

// Reduce a declared type to the simple class name: drop generics, arrays,
// and package qualifiers.
std::string simple_type_name(const std::string& type_text) {
    std::string t = type_text;
    size_t lt = t.find('<');
    if (lt != std::string::npos) t = t.substr(0, lt);
    size_t br = t.find('[');
    if (br != std::string::npos) t = t.substr(0, br);
    size_t dot = t.rfind('.');
    if (dot != std::string::npos) t = t.substr(dot + 1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
    return t;
}

struct MiniTok {
    std::string text;
    bool ident = false;
};

// Identifier/punct scan, just enough to spot `Type name =` / `Type name;`
// local declarations in a prefix.
std::vector<MiniTok> mini_lex(const std::string& text) {
    std::vector<MiniTok> out;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            i += 2;
            while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) ++i;
            i = std::min(i + 2, text.size());
            continue;
        }
        if (c == '"' || c == '\'') {
            size_t j = i + 1;
            while (j < text.size() && text[j] != c) {
                if (text[j] == '\\') ++j;
                ++j;
            }
            i = std::min(j + 1, text.size());
            out.push_back({"<lit>", false});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
            size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' ||
                    text[j] == '$'))
                ++j;
            out.push_back({text.substr(i, j - i), true});
            i = j;
            continue;
        }
        out.push_back({std::string(1, c), false});
        ++i;
    }
    return out;
}

const std::set<std::string> kNonTypeWords = {"return", "if",    "while", "for",  "new",
                                             "else",   "throw", "case",  "break"};

// Declared type of `name` from local declarations textually preceding the
// point, most recent first.
std::string local_declared_type(const std::string& prefix_text, const std::string& name) {
    auto toks = mini_lex(prefix_text);
    std::string found;
    for (size_t k = 0; k + 2 < toks.size(); ++k) {
        if (!toks[k].ident || !toks[k + 1].ident) continue;
        if (toks[k + 1].text != name) continue;
        if (kNonTypeWords.count(toks[k].text)) continue;
        const std::string& after = toks[k + 2].text;
        if (after == "=" || after == ";" || after == ":") found = toks[k].text;
    }
    return found;
}

const MethodInfo* find_method_at(const ClassInfo& cls, int line) {
    for (const auto& m : cls.methods)
        if (line >= m.body_lines.first && line <= m.body_lines.second) return &m;
    return nullptr;
}

struct PointContext {
    const SourceUnit* unit = nullptr;
    const ClassInfo* cls = nullptr;
    const MethodInfo* method = nullptr;
};

PointContext resolve_point(const GenerationPoint& point, const ProjectIndex& index) {
    PointContext ctx;
    ctx.unit = index.find_unit(point.file);
    if (!ctx.unit) throw PointNotFoundError("file not in index: " + point.file);
    ctx.cls = ctx.unit->find_class(point.class_name);
    if (!ctx.cls) throw PointNotFoundError("class not found: " + point.class_name);
    for (const auto& m : ctx.cls->methods)
        if (m.name == point.method_name && point.line >= m.body_lines.first &&
            point.line <= m.body_lines.second)
            ctx.method = &m;
    if (!ctx.method)
        throw PointNotFoundError("method not found at " + point.file + ":" +
                                 std::to_string(point.line));
    return ctx;
}

// Resolve the declared type of a receiver at a given point; empty when unknown.
std::string receiver_type(const std::string& receiver, const std::string& prefix_text,
                          const MethodInfo& method, const ClassInfo& cls, ApiSource* source) {
    // only simple identifier receivers carry a declared type
    for (char c : receiver)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$')) return "";
    std::string t = local_declared_type(prefix_text, receiver);
    if (!t.empty()) {
        if (source) *source = ApiSource::LocalTyped;
        return t;
    }
    for (const auto& p : method.params)
        if (p.name == receiver) {
            if (source) *source = ApiSource::LocalTyped;
            return p.type;
        }
    for (const auto& f : cls.fields_)
        if (f.name == receiver) {
            if (source) *source = ApiSource::FieldTyped;
            return f.type;
        }
    return "";
}

bool is_public(const MethodInfo& m) {
    return m.signature_text.rfind("public", 0) == 0 ||
           m.signature_text.find(" public ") != std::string::npos;
}

void append_class_apis(const ClassInfo& cls, ApiSource source, std::vector<ApiRef>& out) {
    for (const auto& m : cls.methods) {
        ApiRef ref;
        ref.owner = cls.name;
        ref.name = m.name;
        ref.has_params = !m.params.empty();
        ref.signature_text = m.signature_text;
        ref.source = source;
        out.push_back(std::move(ref));
    }
}

std::vector<ApiRef> dedup_refs(std::vector<ApiRef> refs) {
    std::set<std::tuple<std::string, std::string, bool>> seen;
    std::vector<ApiRef> out;
    for (auto& r : refs) {
        auto key = std::make_tuple(r.owner, r.name, r.has_params);
        if (seen.insert(key).second) out.push_back(std::move(r));
    }
    return out;
}

std::string byte_offset_prefix(const MethodInfo& method, int line, int column) {
    // map file (line, column) into an offset inside body_text
    int rel_line = line - method.body_lines.first;  // 0-based line within the method
    size_t off = 0;
    int seen = 0;
    const std::string& body = method.body_text;
    while (seen < rel_line && off < body.size()) {
        if (body[off] == '\n') ++seen;
        ++off;
    }
    off += static_cast<size_t>(column);
    if (off > body.size()) throw PointNotFoundError("point lies outside the method body");
    return body.substr(0, off);
}

}  // namespace

std::string method_prefix_at(const MethodInfo& method, int line, int column) {
    return byte_offset_prefix(method, line, column);
}

std::optional<ClassLocation> resolve_receiver_class(const std::string& receiver,
                                                    const std::string& prefix_text,
                                                    const MethodInfo& method,
                                                    const ClassInfo& cls, const SourceUnit& unit,
                                                    const ProjectIndex& index, ApiSource* source) {
    std::string type = receiver_type(receiver, prefix_text, method, cls, source);
    if (type.empty()) return std::nullopt;
    return index.resolve_class(simple_type_name(type), unit);
}

GenerationPoint locate_point(const ProjectIndex& index, const std::string& file, int line,
                             int column) {
    const SourceUnit* unit = index.find_unit(file);
    if (!unit) throw PointNotFoundError("file not in index: " + file);
    for (const auto& cls : unit->classes) {
        const MethodInfo* m = find_method_at(cls, line);
        if (!m) continue;
        for (const auto& site : m->call_sites) {
            if (site.line == line && site.column == column) {
                GenerationPoint point;
                point.file = file;
                point.class_name = cls.name;
                point.method_name = m->name;
                point.line = line;
                point.column = column;
                point.receiver_text = site.receiver_text;
                point.prefix_text = byte_offset_prefix(*m, line, column);
                return point;
            }
        }
    }
    throw PointNotFoundError("no invocation site at " + file + ":" + std::to_string(line) + ":" +
                             std::to_string(column));
}

LocalDependency mine_local(const GenerationPoint& point, const ProjectIndex& index, bool strict) {
    PointContext ctx = resolve_point(point, index);
    LocalDependency out;

    // reference APIs from the receiver's declared type
    bool resolved = false;
    if (point.receiver_text.empty()) {
        append_class_apis(*ctx.cls, ApiSource::InProjectDeclared, out.reference_apis);
        resolved = true;
    } else {
        ApiSource source = ApiSource::LocalTyped;
        auto loc = resolve_receiver_class(point.receiver_text, point.prefix_text, *ctx.method,
                                          *ctx.cls, *ctx.unit, index, &source);
        if (loc) {
            append_class_apis(*index.class_at(*loc), source, out.reference_apis);
            resolved = true;
        }
    }
    if (!resolved && !strict) {
        // fallback: all in-project public methods keep the candidate set non-empty
        for (const auto& [path, unit] : index.units)
            for (const auto& cls : unit.classes)
                for (const auto& m : cls.methods)
                    if (is_public(m)) {
                        ApiRef ref{cls.name, m.name, !m.params.empty(), m.signature_text,
                                   ApiSource::InProjectDeclared};
                        out.reference_apis.push_back(std::move(ref));
                    }
    }
    out.reference_apis = dedup_refs(std::move(out.reference_apis));

    // implementations of in-project functions already invoked in the prefix
    std::set<std::string> seen;
    for (const auto& site : ctx.method->call_sites) {
        if (std::tie(site.line, site.column) >= std::tie(point.line, point.column)) continue;
        std::string site_prefix = byte_offset_prefix(*ctx.method, site.line, site.column);
        std::string type =
            receiver_type(site.receiver_text, site_prefix, *ctx.method, *ctx.cls, nullptr);
        if (type.empty()) continue;
        auto loc = index.resolve_class(simple_type_name(type), *ctx.unit);
        if (!loc) continue;
        const ClassInfo* cls = index.class_at(*loc);
        for (const auto& m : cls->methods) {
            if (m.name != site.method_name) continue;
            std::string qualified = cls->name + "." + m.name;
            if (seen.insert(qualified).second)
                out.called_functions.emplace_back(qualified, m.body_text);
            break;
        }
    }
    return out;
}

FileSkeleton extract_skeleton(const SourceUnit& unit) {
    std::vector<std::string> parts;
    if (!unit.package.empty()) parts.push_back("package " + dotted(unit.package) + ";");
    for (const auto& cls : unit.classes) {
        if (cls.fields_.empty() && cls.methods.empty()) {
            parts.push_back(cls.header_text + " { }");
            continue;
        }
        std::string body = cls.header_text + " {\n";
        for (const auto& f : cls.fields_) body += "    " + f.decl_text + "\n";
        for (const auto& m : cls.methods) body += "    " + m.signature_text + ";\n";
        body += "}";
        parts.push_back(std::move(body));
    }
    std::string rendered;
    for (size_t k = 0; k < parts.size(); ++k) {
        if (k) rendered += "\n\n";
        rendered += parts[k];
    }
    return FileSkeleton{unit.path, rendered};
}

GlobalDependency mine_global(const GenerationPoint& point, const ProjectIndex& index) {
    const SourceUnit* unit = index.find_unit(point.file);
    if (!unit) throw PointNotFoundError("file not in index: " + point.file);
    GlobalDependency out;
    out.current_skeleton = extract_skeleton(*unit);
    std::set<std::string> seen{unit->path};
    for (const auto& imp : unit->imports) {
        if (imp.resolution != ImportDecl::Kind::Internal) continue;
        if (!imp.wildcard) {
            const SourceUnit* target = index.find_unit(imp.target);
            if (target && seen.insert(target->path).second)
                out.related_skeletons.push_back(extract_skeleton(*target));
        } else {
            std::string prefix = imp.target + "/";
            for (const auto& [path, u] : index.units) {
                if (path.rfind(prefix, 0) != 0) continue;
                if (path.find('/', prefix.size()) != std::string::npos) continue;
                if (seen.insert(path).second) out.related_skeletons.push_back(extract_skeleton(u));
            }
        }
    }
    return out;
}

std::string render_api_signature(const ApiRef& api) {
    if (!api.signature_text.empty()) return api.owner + ": " + api.signature_text;
    return api.owner + "." + api.name + (api.has_params ? "(...)" : "()");
}

PromptDocument build_prompt(const std::string& description, const GlobalDependency& global_deps,
                            const LocalDependency& local_deps, const GenerationPoint& point,
                            const PromptBudgets& budgets, const Tokenizer& tokenizer) {
    if (point.prefix_text.find(kApiPositionMarker) != std::string::npos)
        throw MarkerCollisionError("prefix already contains the generation marker");

    // droppable content units, in render order (earliest dropped first)
    struct Unit {
        int section;  // 0 desc, 1 global, 2 local
        std::string text;
    };
    std::vector<Unit> units;
    if (!description.empty()) units.push_back({0, description});
    if (!global_deps.current_skeleton.rendered_text.empty())
        units.push_back({1, global_deps.current_skeleton.rendered_text});
    for (const auto& sk : global_deps.related_skeletons)
        if (!sk.rendered_text.empty()) units.push_back({1, sk.rendered_text});
    for (const auto& [qualified, body] : local_deps.called_functions)
        units.push_back({2, "// " + qualified + "\n" + body});
    if (!local_deps.reference_apis.empty()) {
        std::string block = "// Reference APIs";
        for (const auto& api : local_deps.reference_apis)
            block += "\n" + render_api_signature(api) + ";";
        units.push_back({2, block});
    }

    const char* labels[3] = {"### Project Description", "### Global Dependency",
                             "### Local Dependency"};
    size_t drop = 0;
    std::vector<PromptSection> sections;
    while (true) {
        sections.clear();
        int total = 0;
        for (int s = 0; s < 3; ++s) {
            std::string text;
            for (size_t k = drop; k < units.size(); ++k) {
                if (units[k].section != s) continue;
                if (!text.empty()) text += "\n\n";
                text += units[k].text;
            }
            std::string full = std::string(labels[s]) + (text.empty() ? "" : "\n" + text);
            int count = static_cast<int>(tokenizer.encode(full).size());
            total += count;
            sections.push_back({labels[s], text, count});
        }
        if (total <= budgets.project_tokens || drop >= units.size()) break;
        ++drop;  // drop the earliest remaining unit and retry
    }

    // function section, truncated from the left
    const std::string func_label = "### Incomplete Function";
    std::string func_text = point.prefix_text + kApiPositionMarker;
    TokenSeq label_toks = tokenizer.encode(func_label + "\n");
    TokenSeq func_toks = tokenizer.encode(func_text);
    size_t keep_from = 0;
    while (label_toks.size() + (func_toks.size() - keep_from) >
               static_cast<size_t>(budgets.function_tokens) &&
           keep_from < func_toks.size())
        ++keep_from;
    if (keep_from > 0)
        func_text = tokenizer.decode(TokenSeq(func_toks.begin() + keep_from, func_toks.end()));
    sections.push_back({func_label, func_text,
                        static_cast<int>(label_toks.size() + func_toks.size() - keep_from)});

    PromptDocument doc;
    doc.sections = std::move(sections);
    for (size_t k = 0; k < doc.sections.size(); ++k) {
        if (k) doc.rendered += "\n\n";
        doc.rendered += doc.sections[k].label;
        if (!doc.sections[k].text.empty()) doc.rendered += "\n" + doc.sections[k].text;
    }
    return doc;
}

}  // namespace depgen

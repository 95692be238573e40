#include "depgen/json_io.hpp"

#include <fstream>
#include <sstream>

namespace depgen {

using nlohmann::json;

namespace {

const char* resolution_name(ImportDecl::Kind kind) {
    switch (kind) {
        case ImportDecl::Kind::Internal: return "internal";
        case ImportDecl::Kind::External: return "external";
        default: return "unresolved";
    }
}

ImportDecl::Kind resolution_from(const std::string& s) {
    if (s == "internal") return ImportDecl::Kind::Internal;
    if (s == "external") return ImportDecl::Kind::External;
    return ImportDecl::Kind::Unresolved;
}

const char* source_name(ApiSource s) {
    switch (s) {
        case ApiSource::FieldTyped: return "FieldTyped";
        case ApiSource::LocalTyped: return "LocalTyped";
        default: return "InProjectDeclared";
    }
}

ApiSource source_from(const std::string& s) {
    if (s == "FieldTyped") return ApiSource::FieldTyped;
    if (s == "LocalTyped") return ApiSource::LocalTyped;
    return ApiSource::InProjectDeclared;
}

json site_to_json(const InvocationSite& s) {
    return json{{"receiver_text", s.receiver_text},
                {"method_name", s.method_name},
                {"arg_count", s.arg_count},
                {"line", s.line},
                {"column", s.column}};
}

InvocationSite site_from_json(const json& j) {
    InvocationSite s;
    s.receiver_text = j.at("receiver_text");
    s.method_name = j.at("method_name");
    s.arg_count = j.at("arg_count");
    s.line = j.at("line");
    s.column = j.at("column");
    return s;
}

json method_to_json(const MethodInfo& m) {
    json params = json::array();
    for (const auto& p : m.params) params.push_back({{"name", p.name}, {"type", p.type}});
    json sites = json::array();
    for (const auto& s : m.call_sites) sites.push_back(site_to_json(s));
    return json{{"name", m.name},
                {"params", params},
                {"return_type", m.return_type},
                {"body_lines", {m.body_lines.first, m.body_lines.second}},
                {"body_text", m.body_text},
                {"signature_text", m.signature_text},
                {"call_sites", sites}};
}

MethodInfo method_from_json(const json& j) {
    MethodInfo m;
    m.name = j.at("name");
    for (const auto& p : j.at("params")) m.params.push_back({p.at("name"), p.at("type")});
    m.return_type = j.at("return_type");
    m.body_lines = {j.at("body_lines")[0], j.at("body_lines")[1]};
    m.body_text = j.at("body_text");
    m.signature_text = j.at("signature_text");
    for (const auto& s : j.at("call_sites")) m.call_sites.push_back(site_from_json(s));
    return m;
}

json class_to_json(const ClassInfo& c) {
    json fields = json::array();
    for (const auto& f : c.fields_)
        fields.push_back({{"name", f.name}, {"type", f.type}, {"decl_text", f.decl_text}});
    json methods = json::array();
    for (const auto& m : c.methods) methods.push_back(method_to_json(m));
    return json{{"name", c.name},
                {"header_text", c.header_text},
                {"fields_", fields},
                {"methods", methods},
                {"line_range", {c.line_range.first, c.line_range.second}}};
}

ClassInfo class_from_json(const json& j) {
    ClassInfo c;
    c.name = j.at("name");
    c.header_text = j.at("header_text");
    for (const auto& f : j.at("fields_"))
        c.fields_.push_back({f.at("name"), f.at("type"), f.at("decl_text")});
    for (const auto& m : j.at("methods")) c.methods.push_back(method_from_json(m));
    c.line_range = {j.at("line_range")[0], j.at("line_range")[1]};
    return c;
}

}  // namespace

json to_json(const SourceUnit& unit) {
    json imports = json::array();
    for (const auto& imp : unit.imports)
        imports.push_back({{"segments", imp.segments},
                           {"wildcard", imp.wildcard},
                           {"resolution", resolution_name(imp.resolution)},
                           {"target", imp.target}});
    json classes = json::array();
    for (const auto& c : unit.classes) classes.push_back(class_to_json(c));
    return json{{"path", unit.path},
                {"package", unit.package},
                {"imports", imports},
                {"classes", classes},
                {"raw_text", unit.raw_text}};
}

json to_json(const ProjectIndex& index) {
    json units = json::array();
    for (const auto& [path, unit] : index.units) units.push_back(to_json(unit));
    return json{{"description", index.description}, {"units", units}};
}

ProjectIndex index_from_json(const json& j) {
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& u : j.at("units")) files.emplace_back(u.at("path"), u.at("raw_text"));
    return build_index(files, j.value("description", ""));
}

json to_json(const ApiRef& api) {
    return json{{"owner", api.owner},
                {"name", api.name},
                {"has_params", api.has_params},
                {"signature_text", api.signature_text},
                {"source", source_name(api.source)}};
}

ApiRef api_ref_from_json(const json& j) {
    ApiRef api;
    api.owner = j.at("owner");
    api.name = j.at("name");
    api.has_params = j.at("has_params");
    api.signature_text = j.value("signature_text", "");
    api.source = source_from(j.value("source", "InProjectDeclared"));
    return api;
}

json to_json(const LocalDependency& local, const GlobalDependency& global) {
    json apis = json::array();
    for (const auto& a : local.reference_apis) apis.push_back(to_json(a));
    json called = json::array();
    for (const auto& [name, body] : local.called_functions)
        called.push_back({{"qualified_name", name}, {"body_text", body}});
    json related = json::array();
    for (const auto& sk : global.related_skeletons)
        related.push_back({{"path", sk.path}, {"rendered_text", sk.rendered_text}});
    return json{{"local",
                 {{"reference_apis", apis}, {"called_functions", called}}},
                {"global",
                 {{"current_skeleton",
                   {{"path", global.current_skeleton.path},
                    {"rendered_text", global.current_skeleton.rendered_text}}},
                  {"related_skeletons", related}}}};
}

json to_json(const TokenTrie& trie) {
    json nodes = json::array();
    for (size_t i = 0; i < trie.node_count(); ++i) {
        const auto& node = trie.node(static_cast<int>(i));
        json children = json::object();
        for (const auto& [id, child] : node.children) children[std::to_string(id)] = child;
        json apis = json::array();
        for (const auto& api : node.payloads) apis.push_back(api.owner + "." + api.name);
        nodes.push_back({{"children", children}, {"terminal", node.terminal()}, {"apis", apis}});
    }
    return json{{"root", 0}, {"nodes", nodes}};
}

json to_json(const BenchmarkSample& s) {
    return json{{"id", s.id},
                {"project", s.project},
                {"file", s.file},
                {"prompt", s.prompt},
                {"ground_truth", s.ground_truth},
                {"line", s.line},
                {"position_ratio", s.position_ratio},
                {"split", s.split == Split::F ? "F" : "M"},
                {"api_type",
                 s.api_type == ApiType::ProjectSpecific ? "ProjectSpecific" : "ThirdParty"}};
}

BenchmarkSample sample_from_json(const json& j) {
    BenchmarkSample s;
    s.id = j.at("id");
    s.project = j.at("project");
    s.file = j.at("file");
    s.prompt = j.at("prompt");
    s.ground_truth = j.at("ground_truth");
    s.line = j.at("line");
    s.position_ratio = j.at("position_ratio");
    s.split = j.at("split") == "F" ? Split::F : Split::M;
    s.api_type =
        j.at("api_type") == "ProjectSpecific" ? ApiType::ProjectSpecific : ApiType::ThirdParty;
    return s;
}

std::string to_jsonl(const BenchmarkSet& set) {
    std::string out;
    for (const auto& s : set.samples) out += to_json(s).dump() + "\n";
    return out;
}

BenchmarkSet benchmark_from_jsonl(const std::string& text) {
    BenchmarkSet set;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        BenchmarkSample s = sample_from_json(json::parse(line));
        (s.split == Split::F ? set.f_count : set.m_count)++;
        set.samples.push_back(std::move(s));
    }
    set.total = static_cast<int>(set.samples.size());
    return set;
}

json to_json(const MetricReport& r) {
    return json{{"n", r.n},     {"em", r.em},     {"es", r.es},
                {"im", r.im},   {"mihn", r.mihn}, {"mahr", r.mahr},
                {"mean_time", r.mean_time}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

}  // namespace depgen

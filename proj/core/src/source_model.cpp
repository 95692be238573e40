#include "depgen/source_model.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace depgen {

namespace {

struct Tok {
    enum Kind { Ident, Number, Literal, Punct, End };
    Kind kind = End;
    std::string text;
    size_t offset = 0;  // byte offset in file
    int line = 1;       // 1-based
    int col = 0;        // 0-based byte column

    bool is(const char* s) const { return text == s; }
};

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool is_ident_char(char c) {
    return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

std::vector<Tok> lex(const std::string& text) {
    std::vector<Tok> out;
    size_t i = 0;
    int line = 1;
    int col = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 0;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            advance(2);
            while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) advance(1);
            if (i + 1 < text.size()) advance(2);
            continue;
        }
        Tok t;
        t.offset = i;
        t.line = line;
        t.col = col;
        if (is_ident_start(c)) {
            size_t j = i;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            t.kind = Tok::Ident;
            t.text = text.substr(i, j - i);
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '.' ||
                    text[j] == '_')) {
                // a '.' only belongs to the number when followed by a digit
                if (text[j] == '.' &&
                    !(j + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[j + 1]))))
                    break;
                ++j;
            }
            t.kind = Tok::Number;
            t.text = text.substr(i, j - i);
            advance(j - i);
        } else if (c == '"' || c == '\'') {
            size_t j = i + 1;
            while (j < text.size() && text[j] != c) {
                if (text[j] == '\\' && j + 1 < text.size()) ++j;
                ++j;
            }
            if (j < text.size()) ++j;
            t.kind = Tok::Literal;
            t.text = text.substr(i, j - i);
            advance(j - i);
        } else {
            t.kind = Tok::Punct;
            t.text = std::string(1, c);
            advance(1);
        }
        out.push_back(std::move(t));
    }
    Tok end;
    end.kind = Tok::End;
    end.offset = text.size();
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

void check_balance(const std::vector<Tok>& toks) {
    int depth = 0;
    const Tok* last_open = nullptr;
    for (const auto& t : toks) {
        if (t.is("{")) {
            ++depth;
            last_open = &t;
        } else if (t.is("}")) {
            --depth;
            if (depth < 0) throw FatalSyntaxError("unmatched '}'", t.line, t.col);
        }
    }
    if (depth > 0)
        throw FatalSyntaxError("unclosed '{'", last_open ? last_open->line : 1,
                               last_open ? last_open->col : 0);
}

const std::set<std::string> kModifiers = {"public", "private",   "protected", "static",
                                          "final",  "abstract",  "native",    "synchronized",
                                          "strictfp", "transient", "volatile", "default",
                                          "sealed"};

const std::set<std::string> kTypeKeywords = {"class", "interface", "enum", "record"};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct Parser {
    const std::string& text;
    const std::vector<Tok>& toks;
    SourceUnit& unit;
    size_t i = 0;

    const Tok& cur() const { return toks[i]; }
    const Tok& peek(size_t n = 1) const { return toks[std::min(i + n, toks.size() - 1)]; }
    bool at_end() const { return cur().kind == Tok::End; }
    void next() {
        if (!at_end()) ++i;
    }

    void diag(const std::string& msg) {
        unit.diagnostics.push_back({msg, cur().line, cur().col});
    }

    std::string slice(size_t from_tok, size_t to_off) const {
        size_t a = toks[from_tok].offset;
        return text.substr(a, to_off - a);
    }

    // Skip from an opening bracket token to just past its matching closer.
    void skip_balanced(const char* open, const char* close) {
        int depth = 0;
        while (!at_end()) {
            if (cur().is(open)) ++depth;
            else if (cur().is(close)) {
                --depth;
                if (depth == 0) {
                    next();
                    return;
                }
            }
            next();
        }
    }

    void skip_annotations() {
        while (cur().is("@")) {
            next();                                   // @
            while (cur().kind == Tok::Ident) {        // dotted name
                next();
                if (cur().is(".")) next();
                else break;
            }
            if (cur().is("(")) skip_balanced("(", ")");
        }
    }

    void skip_to_statement_end() {
        // advance past the next ';' or balanced '{...}' at current depth
        while (!at_end()) {
            if (cur().is(";")) {
                next();
                return;
            }
            if (cur().is("{")) {
                skip_balanced("{", "}");
                return;
            }
            next();
        }
    }

    // Parse a type reference: dotted identifiers, generic args, array brackets.
    // Returns the verbatim text, or empty when the cursor is not at a type.
    std::string parse_type() {
        if (cur().kind != Tok::Ident) return "";
        size_t start = i;
        next();
        while (true) {
            if (cur().is(".") && peek().kind == Tok::Ident) {
                next();
                next();
                continue;
            }
            if (cur().is("<")) {
                int depth = 0;
                while (!at_end()) {
                    if (cur().is("<")) ++depth;
                    else if (cur().is(">")) {
                        --depth;
                        if (depth == 0) {
                            next();
                            break;
                        }
                    }
                    next();
                }
                continue;
            }
            if (cur().is("[") && peek().is("]")) {
                next();
                next();
                continue;
            }
            break;
        }
        size_t end_off = toks[i].offset;
        return trim(slice(start, end_off));
    }

    void parse_package() {
        if (!cur().is("package")) return;
        next();
        while (cur().kind == Tok::Ident) {
            unit.package.push_back(cur().text);
            next();
            if (cur().is(".")) next();
            else break;
        }
        if (cur().is(";")) next();
    }

    void parse_imports() {
        while (cur().is("import")) {
            next();
            if (cur().is("static")) next();
            ImportDecl decl;
            while (cur().kind == Tok::Ident) {
                decl.segments.push_back(cur().text);
                next();
                if (cur().is(".")) {
                    next();
                    if (cur().is("*")) {
                        decl.wildcard = true;
                        next();
                        break;
                    }
                } else {
                    break;
                }
            }
            if (cur().is(";")) next();
            if (!decl.segments.empty()) unit.imports.push_back(std::move(decl));
            else diag("empty import declaration");
        }
    }

    void parse_top_level() {
        while (!at_end()) {
            if (cur().is(";")) {
                next();
                continue;
            }
            skip_annotations();
            size_t start = i;
            while (cur().kind == Tok::Ident && kModifiers.count(cur().text)) next();
            if (cur().kind == Tok::Ident && kTypeKeywords.count(cur().text)) {
                parse_class(start);
            } else {
                diag("skipped unrecognized top-level construct '" + cur().text + "'");
                skip_to_statement_end();
            }
        }
    }

    void parse_class(size_t start_tok) {
        next();  // class/interface/enum keyword
        ClassInfo cls;
        if (cur().kind == Tok::Ident) {
            cls.name = cur().text;
            next();
        }
        // generics / extends / implements, up to the body
        while (!at_end() && !cur().is("{")) next();
        cls.header_text = trim(slice(start_tok, cur().offset));
        cls.line_range.first = toks[start_tok].line;
        if (!cur().is("{")) {
            diag("class '" + cls.name + "' has no body");
            return;
        }
        next();  // {
        parse_class_body(cls);
        unit.classes.push_back(std::move(cls));
    }

    void parse_class_body(ClassInfo& cls) {
        while (!at_end()) {
            if (cur().is("}")) {
                cls.line_range.second = cur().line;
                next();
                return;
            }
            if (cur().is(";")) {
                next();
                continue;
            }
            skip_annotations();
            size_t member_start = i;
            while (cur().kind == Tok::Ident && kModifiers.count(cur().text)) next();
            if (cur().kind == Tok::Ident && kTypeKeywords.count(cur().text)) {
                diag("nested type skipped inside class '" + cls.name + "'");
                while (!at_end() && !cur().is("{")) next();
                if (cur().is("{")) skip_balanced("{", "}");
                continue;
            }
            if (cur().is("{")) {  // initializer block
                diag("initializer block skipped in class '" + cls.name + "'");
                skip_balanced("{", "}");
                continue;
            }
            std::string type = parse_type();
            if (type.empty()) {
                diag("skipped unrecognized member in class '" + cls.name + "'");
                skip_to_statement_end();
                continue;
            }
            if (cur().is("(") && type == cls.name) {
                // constructor
                parse_method(cls, member_start, "", type);
                continue;
            }
            if (cur().kind != Tok::Ident) {
                diag("skipped member without a name in class '" + cls.name + "'");
                skip_to_statement_end();
                continue;
            }
            std::string name = cur().text;
            next();
            if (cur().is("(")) {
                parse_method(cls, member_start, type, name);
            } else {
                parse_fields(cls, member_start, type, name);
            }
        }
    }

    void parse_fields(ClassInfo& cls, size_t member_start, const std::string& type,
                      std::string first_name) {
        std::vector<std::string> names{std::move(first_name)};
        while (!at_end() && !cur().is(";")) {
            if (cur().is("=")) {
                // skip initializer expression up to ',' or ';' at depth 0
                int paren = 0, brack = 0, brace = 0;
                next();
                while (!at_end()) {
                    const auto& t = cur();
                    if (t.is("(")) ++paren;
                    else if (t.is(")")) --paren;
                    else if (t.is("[")) ++brack;
                    else if (t.is("]")) --brack;
                    else if (t.is("{")) ++brace;
                    else if (t.is("}")) --brace;
                    else if ((t.is(",") || t.is(";")) && paren == 0 && brack == 0 && brace == 0)
                        break;
                    next();
                }
            } else if (cur().is(",")) {
                next();
                if (cur().kind == Tok::Ident) {
                    names.push_back(cur().text);
                    next();
                }
            } else {
                next();
            }
        }
        size_t end_off = cur().offset + (cur().is(";") ? 1 : 0);
        if (cur().is(";")) next();
        std::string decl_text = trim(slice(member_start, end_off));
        for (auto& n : names) {
            FieldDecl f;
            f.name = n;
            f.type = type;
            f.decl_text = names.size() == 1 ? decl_text : type + " " + n + ";";
            cls.fields_.push_back(std::move(f));
        }
    }

    void parse_method(ClassInfo& cls, size_t member_start, const std::string& return_type,
                      const std::string& name) {
        MethodInfo m;
        m.name = name;
        m.return_type = return_type;
        m.body_lines.first = toks[member_start].line;
        next();  // (
        while (!at_end() && !cur().is(")")) {
            skip_annotations();
            if (cur().is("final")) next();
            std::string ptype = parse_type();
            while (cur().is(".")) next();  // varargs dots
            if (cur().kind == Tok::Ident) {
                ParamDecl p;
                p.type = ptype;
                p.name = cur().text;
                next();
                while (cur().is("[") && peek().is("]")) {
                    next();
                    next();
                }
                m.params.push_back(std::move(p));
            }
            if (cur().is(",")) next();
            else if (!cur().is(")")) next();
        }
        if (cur().is(")")) next();
        if (cur().is("throws")) {
            next();
            while (cur().kind == Tok::Ident) {
                next();
                if (cur().is(".") || cur().is(",")) next();
                else break;
            }
        }
        m.signature_text = trim(slice(member_start, cur().offset));
        if (cur().is("{")) {
            size_t body_open = i;
            skip_balanced("{", "}");
            size_t body_close = i - 1;  // token index of '}'
            m.body_lines.second = toks[body_close].line;
            m.body_text = slice(member_start, toks[body_close].offset + 1);
            extract_invocations(m, body_open + 1, body_close);
        } else if (cur().is(";")) {
            m.body_lines.second = cur().line;
            m.body_text = slice(member_start, cur().offset + 1);
            next();
        } else {
            diag("method '" + name + "' has no body or ';'");
            skip_to_statement_end();
        }
        cls.methods.push_back(std::move(m));
    }

    // Scan tokens in [a, b) for `receiver.name(args)` occurrences.
    void extract_invocations(MethodInfo& m, size_t a, size_t b) {
        for (size_t j = a; j < b; ++j) {
            if (toks[j].kind != Tok::Ident) continue;
            if (j + 1 >= b || !toks[j + 1].is("(")) continue;
            if (j == 0 || j - 1 < a || !toks[j - 1].is(".")) continue;
            size_t recv_start = find_receiver_start(a, j - 1);
            InvocationSite site;
            site.receiver_text = trim(slice(recv_start, toks[j - 1].offset));
            site.method_name = toks[j].text;
            site.line = toks[j].line;
            site.column = toks[j].col;
            site.arg_count = count_args(j + 1, b);
            if (!site.receiver_text.empty()) m.call_sites.push_back(std::move(site));
        }
        std::sort(m.call_sites.begin(), m.call_sites.end(),
                  [](const InvocationSite& x, const InvocationSite& y) {
                      return std::tie(x.line, x.column) < std::tie(y.line, y.column);
                  });
    }

    // Walk left from the '.' at dot_idx to the start of the receiver expression.
    size_t find_receiver_start(size_t lo, size_t dot_idx) {
        size_t k = dot_idx;  // will step left of the '.'
        while (true) {
            if (k == lo) return k;
            size_t p = k - 1;
            if (toks[p].is(")") || toks[p].is("]")) {
                const char* open = toks[p].is(")") ? "(" : "[";
                const char* close = toks[p].is(")") ? ")" : "]";
                int depth = 0;
                while (true) {
                    if (toks[p].text == close) ++depth;
                    else if (toks[p].text == open) {
                        --depth;
                        if (depth == 0) break;
                    }
                    if (p == lo) break;
                    --p;
                }
                // a call target or array base continues the chain to the left
                if (p > lo && (toks[p - 1].kind == Tok::Ident || toks[p - 1].is("]"))) {
                    k = p;
                    continue;
                }
                return p;
            }
            if (toks[p].kind == Tok::Ident || toks[p].kind == Tok::Literal) {
                if (toks[p].kind == Tok::Ident && p > lo && toks[p - 1].is("new")) return p - 1;
                if (p > lo && toks[p - 1].is(".")) {
                    if (p - 1 == lo) return p;
                    k = p - 1;
                    continue;
                }
                return p;
            }
            return k;
        }
    }

    int count_args(size_t open_idx, size_t b) {
        int depth = 0;
        int commas = 0;
        bool any = false;
        for (size_t j = open_idx; j < b; ++j) {
            const auto& t = toks[j];
            if (t.is("(") || t.is("[") || t.is("{")) ++depth;
            else if (t.is(")") || t.is("]") || t.is("}")) {
                --depth;
                if (depth == 0) break;
            } else {
                if (depth == 1) {
                    any = true;
                    if (t.is(",")) ++commas;
                }
            }
        }
        return any ? commas + 1 : 0;
    }
};

}  // namespace

std::string ImportDecl::dotted() const {
    std::string out;
    for (size_t k = 0; k < segments.size(); ++k) {
        if (k) out += ".";
        out += segments[k];
    }
    if (wildcard) out += ".*";
    return out;
}

const ClassInfo* SourceUnit::find_class(const std::string& name) const {
    for (const auto& c : classes)
        if (c.name == name) return &c;
    return nullptr;
}

const SourceUnit* ProjectIndex::find_unit(const std::string& path) const {
    auto it = units.find(path);
    return it == units.end() ? nullptr : &it->second;
}

const ClassInfo* ProjectIndex::class_at(const ClassLocation& loc) const {
    const SourceUnit* u = find_unit(loc.path);
    if (!u || loc.class_index >= static_cast<int>(u->classes.size())) return nullptr;
    return &u->classes[loc.class_index];
}

static std::string dotted(const std::vector<std::string>& segs) {
    std::string out;
    for (size_t k = 0; k < segs.size(); ++k) {
        if (k) out += ".";
        out += segs[k];
    }
    return out;
}

std::optional<ClassLocation> ProjectIndex::resolve_class(const std::string& simple_name,
                                                         const SourceUnit& from) const {
    // 1. same file
    for (size_t k = 0; k < from.classes.size(); ++k)
        if (from.classes[k].name == simple_name)
            return ClassLocation{from.path, static_cast<int>(k)};
    // 2. explicit internal import ending in the name
    for (const auto& imp : from.imports) {
        if (imp.wildcard || imp.resolution != ImportDecl::Kind::Internal) continue;
        if (!imp.segments.empty() && imp.segments.back() == simple_name) {
            const SourceUnit* u = find_unit(imp.target);
            if (u) {
                for (size_t k = 0; k < u->classes.size(); ++k)
                    if (u->classes[k].name == simple_name)
                        return ClassLocation{u->path, static_cast<int>(k)};
            }
        }
    }
    // 3. wildcard internal imports
    for (const auto& imp : from.imports) {
        if (!imp.wildcard || imp.resolution != ImportDecl::Kind::Internal) continue;
        auto it = class_lookup.find({dotted(imp.segments), simple_name});
        if (it != class_lookup.end()) return it->second;
    }
    // 4. same package
    auto it = class_lookup.find({dotted(from.package), simple_name});
    if (it != class_lookup.end()) return it->second;
    // 5. globally unique simple name
    std::optional<ClassLocation> found;
    for (const auto& [key, loc] : class_lookup) {
        if (key.second == simple_name) {
            if (found) return std::nullopt;  // ambiguous
            found = loc;
        }
    }
    return found;
}

SourceUnit parse_unit(const std::string& path, const std::string& text) {
    SourceUnit unit;
    unit.path = path;
    unit.raw_text = text;
    auto toks = lex(text);
    check_balance(toks);
    Parser p{text, toks, unit};
    p.parse_package();
    p.parse_imports();
    p.parse_top_level();
    return unit;
}

ProjectIndex build_index(const std::vector<std::pair<std::string, std::string>>& files,
                         const std::string& description) {
    ProjectIndex index;
    index.description = description;
    for (const auto& [path, text] : files) {
        if (index.units.count(path)) throw DuplicatePathError("duplicate path: " + path);
        index.units.emplace(path, parse_unit(path, text));
    }
    for (const auto& [path, unit] : index.units) {
        for (size_t k = 0; k < unit.classes.size(); ++k) {
            auto key = std::make_pair(dotted(unit.package), unit.classes[k].name);
            auto it = index.class_lookup.find(key);
            if (it != index.class_lookup.end())
                throw DuplicateClassError("class " + key.first + "." + key.second +
                                          " declared in both " + it->second.path + " and " + path);
            index.class_lookup[key] = ClassLocation{path, static_cast<int>(k)};
        }
    }
    for (auto& [path, unit] : index.units) {
        for (auto& imp : unit.imports) {
            std::string target;
            imp.resolution = resolve_import(imp, index, &target);
            imp.target = target;
        }
    }
    return index;
}

ImportDecl::Kind resolve_import(const ImportDecl& decl, const ProjectIndex& index,
                                std::string* target) {
    std::string joined;
    for (size_t k = 0; k < decl.segments.size(); ++k) {
        if (k) joined += "/";
        joined += decl.segments[k];
    }
    if (decl.wildcard) {
        // package directory present in the index?
        std::string prefix = joined + "/";
        for (const auto& [path, unit] : index.units) {
            if (path.rfind(prefix, 0) == 0 && path.find('/', prefix.size()) == std::string::npos) {
                if (target) *target = joined;
                return ImportDecl::Kind::Internal;
            }
        }
        // a unit may declare the package even if its path differs
        std::string pkg = dotted(decl.segments);
        for (const auto& [key, loc] : index.class_lookup) {
            if (key.first == pkg) {
                if (target) *target = joined;
                return ImportDecl::Kind::Internal;
            }
        }
        return ImportDecl::Kind::External;
    }
    std::string candidate = joined + ".java";
    if (index.units.count(candidate)) {
        if (target) *target = candidate;
        return ImportDecl::Kind::Internal;
    }
    if (decl.segments.size() >= 2) {
        std::vector<std::string> pkg(decl.segments.begin(), decl.segments.end() - 1);
        auto it = index.class_lookup.find({dotted(pkg), decl.segments.back()});
        if (it != index.class_lookup.end()) {
            if (target) *target = it->second.path;
            return ImportDecl::Kind::Internal;
        }
    }
    return ImportDecl::Kind::External;
}

ProjectIndex load_project(const std::string& root_dir) {
    namespace fs = std::filesystem;
    std::vector<std::pair<std::string, std::string>> files;
    std::string description;
    fs::path root(root_dir);
    if (!fs::exists(root)) throw ConfigError("project directory not found: " + root_dir);
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() != ".java") continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        files.emplace_back(fs::relative(entry.path(), root).generic_string(), ss.str());
    }
    std::sort(files.begin(), files.end());
    fs::path meta = root / "project.json";
    if (fs::exists(meta)) {
        std::ifstream in(meta);
        nlohmann::json j = nlohmann::json::parse(in);
        description = j.value("description", "");
    }
    return build_index(files, description);
}

}  // namespace depgen

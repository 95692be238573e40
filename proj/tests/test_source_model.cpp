#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "depgen/json_io.hpp"
#include "depgen/source_model.hpp"
#include "test_helpers.hpp"

using namespace depgen;
using nlohmann::json;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    lines.push_back(cur);
    return lines;
}

// structural projection compared against the hand-written parse oracle
json project_structure(const SourceUnit& unit) {
    json classes = json::array();
    for (const auto& c : unit.classes) {
        json methods = json::array();
        for (const auto& m : c.methods) {
            json sites = json::array();
            for (const auto& s : m.call_sites)
                sites.push_back({{"receiver_text", s.receiver_text},
                                 {"method_name", s.method_name},
                                 {"arg_count", s.arg_count},
                                 {"line", s.line},
                                 {"column", s.column}});
            json params = json::array();
            for (const auto& p : m.params) params.push_back({p.type, p.name});
            methods.push_back({{"name", m.name},
                               {"params", params},
                               {"return_type", m.return_type},
                               {"body_lines", {m.body_lines.first, m.body_lines.second}},
                               {"call_sites", sites}});
        }
        json fields = json::array();
        for (const auto& f : c.fields_) fields.push_back({f.type, f.name});
        classes.push_back({{"name", c.name},
                           {"fields_", fields},
                           {"methods", methods},
                           {"line_range", {c.line_range.first, c.line_range.second}}});
    }
    json imports = json::array();
    for (const auto& i : unit.imports) imports.push_back(i.dotted());
    return json{{"package", unit.package}, {"imports", imports}, {"classes", classes}};
}

}  // namespace

TEST_CASE("empty class parses to one class with no methods") {
    SourceUnit unit = parse_unit("A.java", "class A { }");
    REQUIRE(unit.classes.size() == 1);
    CHECK(unit.classes[0].name == "A");
    CHECK(unit.classes[0].methods.empty());
    CHECK(unit.classes[0].fields_.empty());
}

TEST_CASE("World.java matches the hand-written parse oracle") {
    ProjectIndex index = testing::load_reactor();
    const SourceUnit* unit = index.find_unit("sim/World.java");
    REQUIRE(unit != nullptr);
    json expected = R"({
      "package": ["sim"],
      "imports": ["sim.Reaction"],
      "classes": [
        {
          "name": "World",
          "fields_": [["Reaction", "current"], ["int", "tick"]],
          "line_range": [5, 17],
          "methods": [
            {
              "name": "getReaction",
              "params": [["Agent", "agent"]],
              "return_type": "Reaction",
              "body_lines": [9, 12],
              "call_sites": []
            },
            {
              "name": "getTick",
              "params": [],
              "return_type": "int",
              "body_lines": [14, 16],
              "call_sites": []
            }
          ]
        },
        {
          "name": "WorldStats",
          "fields_": [],
          "line_range": [19, 23],
          "methods": [
            {
              "name": "count",
              "params": [],
              "return_type": "int",
              "body_lines": [20, 22],
              "call_sites": []
            }
          ]
        }
      ]
    })"_json;
    CHECK(project_structure(*unit) == expected);
}

TEST_CASE("invocation site captures receiver, name, and arity") {
    SourceUnit unit = parse_unit("T.java",
                                 "class T {\n"
                                 "    void go(Reaction reaction) {\n"
                                 "        if (reaction.willReact()) {\n"
                                 "            return;\n"
                                 "        }\n"
                                 "    }\n"
                                 "}\n");
    REQUIRE(unit.classes.size() == 1);
    REQUIRE(unit.classes[0].methods.size() == 1);
    const auto& sites = unit.classes[0].methods[0].call_sites;
    REQUIRE(sites.size() == 1);
    CHECK(sites[0].receiver_text == "reaction");
    CHECK(sites[0].method_name == "willReact");
    CHECK(sites[0].arg_count == 0);
    CHECK(sites[0].line == 3);
}

TEST_CASE("chained calls yield one site per name with the full left expression") {
    SourceUnit unit = parse_unit(
        "C.java", "class C { void f(A a) { a.b(1, 2).c(); } }");
    const auto& sites = unit.classes[0].methods[0].call_sites;
    REQUIRE(sites.size() == 2);
    CHECK(sites[0].receiver_text == "a");
    CHECK(sites[0].method_name == "b");
    CHECK(sites[0].arg_count == 2);
    CHECK(sites[1].receiver_text == "a.b(1, 2)");
    CHECK(sites[1].method_name == "c");
    CHECK(sites[1].arg_count == 0);
}

TEST_CASE("unbalanced braces at top level are fatal, with position") {
    CHECK_THROWS_AS(parse_unit("B.java", "class B { void f() {\n}"), FatalSyntaxError);
    try {
        parse_unit("B.java", "class B { }\n}");
        FAIL("expected FatalSyntaxError");
    } catch (const FatalSyntaxError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("unparseable constructs become diagnostics, not failures") {
    SourceUnit unit = parse_unit("D.java", "weird token soup;\nclass D { }");
    CHECK(!unit.diagnostics.empty());
    REQUIRE(unit.classes.size() == 1);
    CHECK(unit.classes[0].name == "D");
}

TEST_CASE("build_index: empty corpus") {
    ProjectIndex index = build_index({}, "");
    CHECK(index.units.empty());
    CHECK(index.class_lookup.empty());
}

TEST_CASE("build_index over the fixture project: hand-counted totals") {
    ProjectIndex index = testing::load_reactor();
    CHECK(index.units.size() == 6);
    // World, WorldStats, Reaction, Agent, Observer, ObserverMirror, Simulator, Helper
    CHECK(index.class_lookup.size() == 8);
}

TEST_CASE("build_index rejects duplicate paths and duplicate classes") {
    CHECK_THROWS_AS(build_index({{"A.java", "class A { }"}, {"A.java", "class B { }"}}, ""),
                    DuplicatePathError);
    try {
        build_index({{"x/A.java", "package p; class A { }"},
                     {"y/A.java", "package p; class A { }"}},
                    "");
        FAIL("expected DuplicateClassError");
    } catch (const DuplicateClassError& e) {
        std::string what = e.what();
        CHECK(what.find("x/A.java") != std::string::npos);
        CHECK(what.find("y/A.java") != std::string::npos);
    }
}

TEST_CASE("resolve_import classifies standard-library, internal, and wildcard imports") {
    ProjectIndex index = testing::load_reactor();
    ImportDecl external;
    external.segments = {"java", "util", "List"};
    CHECK(resolve_import(external, index) == ImportDecl::Kind::External);

    ImportDecl internal;
    internal.segments = {"com", "acme", "util", "Helper"};
    std::string target;
    CHECK(resolve_import(internal, index, &target) == ImportDecl::Kind::Internal);
    CHECK(target == "com/acme/util/Helper.java");

    ImportDecl wildcard;
    wildcard.segments = {"com", "acme", "util"};
    wildcard.wildcard = true;
    target.clear();
    CHECK(resolve_import(wildcard, index, &target) == ImportDecl::Kind::Internal);
    CHECK(target == "com/acme/util");
}

TEST_CASE("property: method body_text is verbatim source at body_lines") {
    ProjectIndex index = testing::load_reactor();
    for (const auto& [path, unit] : index.units) {
        auto lines = split_lines(unit.raw_text);
        for (const auto& cls : unit.classes) {
            for (const auto& m : cls.methods) {
                CHECK(unit.raw_text.find(m.body_text) != std::string::npos);
                // the extent's first and last lines contain the text's first and last lines
                auto body_lines = split_lines(m.body_text);
                CHECK(lines[m.body_lines.first - 1].find(body_lines.front()) !=
                      std::string::npos);
                CHECK(lines[m.body_lines.second - 1].find(body_lines.back()) !=
                      std::string::npos);
                CHECK(m.body_lines.first >= cls.line_range.first);
                CHECK(m.body_lines.second <= cls.line_range.second);
            }
        }
    }
}

TEST_CASE("property: every invocation site points at its method name") {
    ProjectIndex index = testing::load_reactor();
    for (const auto& [path, unit] : index.units) {
        auto lines = split_lines(unit.raw_text);
        for (const auto& cls : unit.classes)
            for (const auto& m : cls.methods)
                for (const auto& s : m.call_sites) {
                    REQUIRE(s.line >= 1);
                    REQUIRE(s.line <= static_cast<int>(lines.size()));
                    const std::string& line = lines[s.line - 1];
                    CHECK(line.compare(s.column, s.method_name.size(), s.method_name) == 0);
                    CHECK(s.line >= m.body_lines.first);
                    CHECK(s.line <= m.body_lines.second);
                }
    }
}

TEST_CASE("property: parse_unit is deterministic") {
    ProjectIndex index = testing::load_reactor();
    for (const auto& [path, unit] : index.units) {
        SourceUnit a = parse_unit(path, unit.raw_text);
        SourceUnit b = parse_unit(path, unit.raw_text);
        CHECK(to_json(a) == to_json(b));
    }
}

TEST_CASE("property: resolve_import never reports Internal for an absent path") {
    ProjectIndex index = testing::load_reactor();
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> seg_count(1, 4);
    std::uniform_int_distribution<int> word(0, 9);
    const char* words[] = {"alpha", "beta",  "gamma", "delta", "sim",
                           "acme",  "World", "util",  "zeta",  "Helper"};
    for (int iter = 0; iter < 200; ++iter) {
        ImportDecl decl;
        int n = seg_count(rng);
        for (int k = 0; k < n; ++k) decl.segments.push_back(words[word(rng)]);
        decl.wildcard = word(rng) < 3;
        std::string target;
        if (resolve_import(decl, index, &target) == ImportDecl::Kind::Internal) {
            if (decl.wildcard) {
                bool any = false;
                for (const auto& [path, u] : index.units)
                    if (path.rfind(target + "/", 0) == 0) any = true;
                CHECK(any);
            } else {
                CHECK(index.find_unit(target) != nullptr);
            }
        }
    }
}

TEST_CASE("index JSON round-trips through export and import") {
    ProjectIndex index = testing::load_reactor();
    ProjectIndex back = index_from_json(to_json(index));
    CHECK(to_json(back) == to_json(index));
}

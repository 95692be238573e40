#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "depgen/evaluator.hpp"
#include "depgen/json_io.hpp"
#include "test_helpers.hpp"

using namespace depgen;

namespace {

// textbook recursive-definition DP over the full table, kept deliberately
// separate from the production implementation
size_t oracle_levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::vector<size_t>> d(a.size() + 1, std::vector<size_t>(b.size() + 1));
    for (size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (size_t i = 1; i <= a.size(); ++i)
        for (size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
    return d[a.size()][b.size()];
}

std::string random_string(std::mt19937& rng, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len);
    std::uniform_int_distribution<int> ch('a', 'f');
    std::string s;
    int n = len(rng);
    for (int k = 0; k < n; ++k) s += static_cast<char>(ch(rng));
    return s;
}

std::vector<EvalRecord> load_fixture_records() {
    nlohmann::json sets = nlohmann::json::parse(
        std::ifstream(testing::fixtures_dir() + "/reference_sets.json"));
    std::vector<ApiRef> reactor;
    for (const auto& j : sets.at("reactor")) reactor.push_back(api_ref_from_json(j));

    std::ifstream in(testing::fixtures_dir() + "/eval_records.jsonl");
    std::vector<EvalRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        EvalRecord rec;
        rec.generated = j.at("generated");
        rec.ground_truth = j.at("ground_truth");
        rec.reference_apis = reactor;
        rec.elapsed = j.at("elapsed");
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace

TEST_CASE("exact_match trims outer whitespace only") {
    CHECK(exact_match("willReact()", "willReact()"));
    CHECK(!exact_match("willReact()", "willReact ()"));
    CHECK(exact_match(" x() ", "x()"));
}

TEST_CASE("edit_similarity endpoints and the kitten/sitting table") {
    CHECK(edit_similarity("abc", "abc") == 1.0);
    CHECK(edit_similarity("", "") == 1.0);
    CHECK(edit_similarity("", "abc") == 0.0);
    CHECK(edit_similarity("kitten", "sitting") == doctest::Approx(1.0 - 3.0 / 7.0));
    CHECK(oracle_levenshtein("kitten", "sitting") == 3);
}

TEST_CASE("edit_similarity matches the full-DP oracle on 100 random pairs") {
    std::mt19937 rng(2024);
    for (int iter = 0; iter < 100; ++iter) {
        std::string a = random_string(rng, 40);
        std::string b = random_string(rng, 40);
        size_t lev = oracle_levenshtein(a, b);
        double expected = (a.empty() && b.empty())
                              ? 1.0
                              : 1.0 - static_cast<double>(lev) / std::max(a.size(), b.size());
        CHECK(edit_similarity(a, b) == doctest::Approx(expected));
        CHECK(edit_similarity(a, b) == edit_similarity(b, a));  // symmetry
        if (!a.empty() || !b.empty()) {
            double mean_norm = 1.0 - 2.0 * lev / static_cast<double>(a.size() + b.size());
            CHECK(edit_similarity(a, b, EsNorm::MeanLength) == doctest::Approx(mean_norm));
        }
    }
}

TEST_CASE("identifier_match compares the name before the first paren") {
    CHECK(identifier_match("willReact()", "willReact(obs)"));
    CHECK(!identifier_match("getReact()", "willReact()"));
    CHECK(!identifier_match("", "x()"));
    CHECK(identifier_match("obj.save(x)", "save()"));  // dotted chains reduce to the name
}

TEST_CASE("hallucination_elements on the three-API reference set") {
    nlohmann::json sets = nlohmann::json::parse(
        std::ifstream(testing::fixtures_dir() + "/reference_sets.json"));
    std::vector<ApiRef> refs;
    for (const auto& j : sets.at("reactor")) refs.push_back(api_ref_from_json(j));

    using E = HallucinationElement;
    CHECK(hallucination_elements("willReact()", refs) == std::set<E>{});
    CHECK(hallucination_elements("isReacting()", refs) == std::set<E>{E::Name});
    CHECK(hallucination_elements("save()", refs) == std::set<E>{E::ParamPattern});
    CHECK(hallucination_elements("save(obs)", refs) == std::set<E>{});
    CHECK(hallucination_elements("willReact(obs)", refs) == std::set<E>{E::ParamPattern});
    // no argument list at all: both the name and the missing pattern are wrong
    CHECK(hallucination_elements("selfDestruct", refs) == std::set<E>{E::Name, E::ParamPattern});
}

TEST_CASE("aggregate: all-clean records") {
    EvalRecord rec;
    rec.generated = "getTick()";
    rec.ground_truth = "getTick()";
    ApiRef api;
    api.owner = "World";
    api.name = "getTick";
    api.has_params = false;
    rec.reference_apis = {api};
    MetricReport r = aggregate({rec, rec, rec});
    CHECK(r.em == 1.0);
    CHECK(r.es == 1.0);
    CHECK(r.im == 1.0);
    CHECK(r.mihn == 0.0);
    CHECK(r.mahr == 0.0);

    CHECK_THROWS_AS(aggregate({}), EmptySetError);
}

TEST_CASE("aggregate: bundled 6-record fixture matches hand arithmetic") {
    std::vector<EvalRecord> records = load_fixture_records();
    REQUIRE(records.size() == 6);

    // the 2-record subset: one doubly-hallucinated, one clean
    std::vector<EvalRecord> pair(records.begin(), records.begin() + 2);
    MetricReport subset = aggregate(pair);
    CHECK(subset.mihn == doctest::Approx(1.0));
    CHECK(subset.mahr == doctest::Approx(0.5));

    MetricReport full = aggregate(records);
    CHECK(full.n == 6);
    CHECK(full.em == doctest::Approx(2.0 / 6.0));
    CHECK(full.im == doctest::Approx(4.0 / 6.0));
    CHECK(full.mihn == doctest::Approx(5.0 / 6.0));
    CHECK(full.mahr == doctest::Approx(4.0 / 6.0));
    CHECK(full.mean_time == doctest::Approx(0.1 / 6.0));

    // es is the mean of per-record similarities; recompute independently
    double es = 0;
    for (const auto& rec : records) {
        size_t lev = oracle_levenshtein(rec.generated, rec.ground_truth);
        es += 1.0 - static_cast<double>(lev) /
                        std::max(rec.generated.size(), rec.ground_truth.size());
    }
    CHECK(full.es == doctest::Approx(es / 6.0));
}

TEST_CASE("property: MaHR <= MiHN <= 2*MaHR on random record sets") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> count(1, 8);
    const char* outputs[] = {"willReact()", "save()",        "save(x)",   "bogus()",
                             "bogus(x)",    "noParensAtAll", "getTick()", "willReact(x)"};
    nlohmann::json sets = nlohmann::json::parse(
        std::ifstream(testing::fixtures_dir() + "/reference_sets.json"));
    std::vector<ApiRef> refs;
    for (const auto& j : sets.at("reactor")) refs.push_back(api_ref_from_json(j));

    for (int iter = 0; iter < 1000; ++iter) {
        std::vector<EvalRecord> records;
        int n = count(rng);
        for (int k = 0; k < n; ++k) {
            EvalRecord rec;
            rec.generated = outputs[count(rng) - 1];
            rec.ground_truth = "willReact()";
            rec.reference_apis = refs;
            records.push_back(std::move(rec));
        }
        MetricReport r = aggregate(records);
        CHECK(r.mahr <= r.mihn + 1e-12);
        CHECK(r.mihn <= 2.0 * r.mahr + 1e-12);
        CHECK(r.em >= 0.0);
        CHECK(r.em <= 1.0);
        CHECK(r.im >= 0.0);
        CHECK(r.im <= 1.0);
        CHECK(r.es >= 0.0);
        CHECK(r.es <= 1.0);
        CHECK(r.mihn <= 2.0);
    }
}

TEST_CASE("report table carries the five metric columns") {
    MetricReport r;
    r.n = 2;
    r.em = 0.5;
    r.es = 0.75;
    r.im = 1.0;
    r.mihn = 1.0;
    r.mahr = 0.5;
    std::string table = format_report_table(r);
    CHECK(table.find("EM") != std::string::npos);
    CHECK(table.find("MaHR") != std::string::npos);
    CHECK(table.find("50.00") != std::string::npos);
}

#pragma once

#include <set>
#include <string>
#include <vector>

#include "depgen/dependency_miner.hpp"

namespace depgen {

enum class HallucinationElement { Name, ParamPattern };

struct EvalRecord {
    std::string generated;
    std::string ground_truth;
    std::vector<ApiRef> reference_apis;
    double elapsed = 0.0;
};

struct MetricReport {
    int n = 0;
    double em = 0.0;
    double es = 0.0;
    double im = 0.0;
    double mihn = 0.0;
    double mahr = 0.0;
    double mean_time = 0.0;
};

bool exact_match(const std::string& generated, const std::string& ground_truth);

/// Mean-length normalization is the flagged alternative to max-length.
enum class EsNorm { MaxLength, MeanLength };

double edit_similarity(const std::string& generated, const std::string& ground_truth,
                       EsNorm norm = EsNorm::MaxLength);

bool identifier_match(const std::string& generated, const std::string& ground_truth);

std::set<HallucinationElement> hallucination_elements(const std::string& generated,
                                                      const std::vector<ApiRef>& reference_apis);

MetricReport aggregate(const std::vector<EvalRecord>& records, EsNorm norm = EsNorm::MaxLength);

std::string format_report_table(const MetricReport& report);

}  // namespace depgen

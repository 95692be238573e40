#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "depgen/source_model.hpp"

namespace depgen {

enum class ApiType { ProjectSpecific, ThirdParty };
enum class Split { F, M };

struct BenchmarkSample {
    std::string id;  // content hash of (file, prompt, ground_truth)
    std::string project;
    std::string file;
    std::string prompt;        // method text up to and including the receiver "."
    std::string ground_truth;  // name + parameter list as written
    int line = 0;
    double position_ratio = 0.0;  // in (0, 1]
    Split split = Split::F;
    ApiType api_type = ApiType::ProjectSpecific;
};

struct BenchmarkSet {
    std::vector<BenchmarkSample> samples;
    int total = 0;
    int f_count = 0;
    int m_count = 0;
};

struct Candidate {
    std::string file;
    std::string class_name;
    const MethodInfo* method = nullptr;
    const InvocationSite* site = nullptr;
};

/// All (method, site) pairs where the method spans more than five lines and
/// the call resolves to a project-specific API.
std::vector<Candidate> extract_candidates(const ProjectIndex& index);

ApiType classify_api_type(const InvocationSite& site, const MethodInfo& method,
                          const ClassInfo& cls, const SourceUnit& unit, const ProjectIndex& index);

struct SplitResult {
    std::string prompt;
    std::string ground_truth;
    double position_ratio = 0.0;
};

SplitResult split_sample(const MethodInfo& method, const InvocationSite& site);

/// Keep the first occurrence of each prompt, then partition on the 0.5 ratio
/// boundary (boundary lands in F; --boundary-to-m flips it).
BenchmarkSet dedup_and_partition(std::vector<BenchmarkSample> samples,
                                 bool boundary_to_m = false);

BenchmarkSet build_benchmark(const ProjectIndex& index, const std::string& project_name,
                             bool boundary_to_m = false);

std::string sample_id(const std::string& file, const std::string& prompt,
                      const std::string& ground_truth);

}  // namespace depgen

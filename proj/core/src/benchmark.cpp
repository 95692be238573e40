#include "depgen/benchmark.hpp"

#include <algorithm>
#include <set>

#include "depgen/dependency_miner.hpp"

namespace depgen {

namespace {

int method_line_count(const MethodInfo& m) {
    return m.body_lines.second - m.body_lines.first + 1;
}

}  // namespace

std::string sample_id(const std::string& file, const std::string& prompt,
                      const std::string& ground_truth) {
    // FNV-1a over the three components, hex-encoded
    uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        h ^= 0x1f;
        h *= 0x100000001b3ull;
    };
    mix(file);
    mix(prompt);
    mix(ground_truth);
    char buf[17];
    snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ApiType classify_api_type(const InvocationSite& site, const MethodInfo& method,
                          const ClassInfo& cls, const SourceUnit& unit,
                          const ProjectIndex& index) {
    std::string prefix = method_prefix_at(method, site.line, site.column);
    auto loc = resolve_receiver_class(site.receiver_text, prefix, method, cls, unit, index);
    return loc ? ApiType::ProjectSpecific : ApiType::ThirdParty;
}

std::vector<Candidate> extract_candidates(const ProjectIndex& index) {
    std::vector<Candidate> out;
    for (const auto& [path, unit] : index.units) {
        for (const auto& cls : unit.classes) {
            for (const auto& method : cls.methods) {
                if (method_line_count(method) <= 5) continue;
                for (const auto& site : method.call_sites) {
                    if (classify_api_type(site, method, cls, unit, index) !=
                        ApiType::ProjectSpecific)
                        continue;
                    out.push_back({path, cls.name, &method, &site});
                }
            }
        }
    }
    return out;
}

SplitResult split_sample(const MethodInfo& method, const InvocationSite& site) {
    SplitResult result;
    result.prompt = method_prefix_at(method, site.line, site.column);
    // ground truth: name through the matching ')' of its argument list
    const std::string& body = method.body_text;
    size_t name_off = result.prompt.size();
    size_t pos = name_off + site.method_name.size();
    size_t end = pos;
    if (pos < body.size() && body[pos] == '(') {
        int depth = 0;
        for (size_t j = pos; j < body.size(); ++j) {
            if (body[j] == '(') ++depth;
            else if (body[j] == ')') {
                --depth;
                if (depth == 0) {
                    end = j + 1;
                    break;
                }
            }
        }
    }
    result.ground_truth = body.substr(name_off, end - name_off);
    int line_in_method = site.line - method.body_lines.first + 1;
    result.position_ratio = static_cast<double>(line_in_method) / method_line_count(method);
    return result;
}

BenchmarkSet dedup_and_partition(std::vector<BenchmarkSample> samples, bool boundary_to_m) {
    BenchmarkSet set;
    std::set<std::string> seen_prompts;
    for (auto& s : samples) {
        if (!seen_prompts.insert(s.prompt).second) continue;
        bool f = boundary_to_m ? s.position_ratio < 0.5 : s.position_ratio <= 0.5;
        s.split = f ? Split::F : Split::M;
        (f ? set.f_count : set.m_count)++;
        set.samples.push_back(std::move(s));
    }
    set.total = static_cast<int>(set.samples.size());
    return set;
}

BenchmarkSet build_benchmark(const ProjectIndex& index, const std::string& project_name,
                             bool boundary_to_m) {
    std::vector<BenchmarkSample> samples;
    for (const auto& cand : extract_candidates(index)) {
        SplitResult split = split_sample(*cand.method, *cand.site);
        BenchmarkSample s;
        s.project = project_name;
        s.file = cand.file;
        s.prompt = split.prompt;
        s.ground_truth = split.ground_truth;
        s.line = cand.site->line;
        s.position_ratio = split.position_ratio;
        s.api_type = ApiType::ProjectSpecific;
        s.id = sample_id(s.file, s.prompt, s.ground_truth);
        samples.push_back(std::move(s));
    }
    return dedup_and_partition(std::move(samples), boundary_to_m);
}

}  // namespace depgen

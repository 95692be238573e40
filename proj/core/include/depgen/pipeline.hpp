#pragma once

#include <string>
#include <vector>

#include "depgen/benchmark.hpp"
#include "depgen/constraint.hpp"
#include "depgen/evaluator.hpp"
#include "depgen/providers.hpp"

namespace depgen {

enum class ProviderKind { Replay, Random, Remote };

struct AblationFlags {
    bool no_local = false;
    bool no_global = false;
    bool no_constrain = false;
};

struct RunConfig {
    std::string project_dir;
    std::string tokenizer_vocab;
    PromptBudgets budgets;  // 7000 / 1000 defaults
    int max_new_tokens = 15;
    uint64_t seed = 0;
    ProviderKind provider = ProviderKind::Random;
    std::string endpoint;       // remote
    std::string replay_fixture; // replay
    AblationFlags ablation;
    bool strict = false;        // disable the all-public-methods fallback
    MaskMode mask_mode = MaskMode::Restrict;
    int threads = 0;            // 0 = hardware concurrency
};

struct TimingRecord {
    double static_analysis = 0.0;
    double inference = 0.0;
    double total = 0.0;
};

struct SampleOutcome {
    std::string id;
    bool failed = false;
    std::string error;
    std::string generated;
    std::string ground_truth;
    EvalRecord record;
    TimingRecord timing;
};

struct PipelineResult {
    std::vector<SampleOutcome> outcomes;  // sorted by sample id
    MetricReport report;                  // over successful samples
    TimingRecord mean_timing;
    int failures = 0;
    std::string outputs_jsonl;
};

PipelineResult run_pipeline(const RunConfig& config, const BenchmarkSet& samples,
                            const ProjectIndex& index, const Tokenizer& tokenizer,
                            LogitsProvider& provider);

TimingRecord report_timing(const std::vector<TimingRecord>& records);

}  // namespace depgen

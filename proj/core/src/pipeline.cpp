#include "depgen/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <thread>

#include <nlohmann/json.hpp>

#include "depgen/json_io.hpp"

namespace depgen {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string name_of(const std::string& ground_truth) {
    size_t paren = ground_truth.find('(');
    return paren == std::string::npos ? ground_truth : ground_truth.substr(0, paren);
}

// Find the invocation site a benchmark sample was cut at.
GenerationPoint locate_sample_point(const ProjectIndex& index, const BenchmarkSample& sample) {
    const SourceUnit* unit = index.find_unit(sample.file);
    if (!unit) throw PointNotFoundError("sample file not in index: " + sample.file);
    std::string name = name_of(sample.ground_truth);
    for (const auto& cls : unit->classes)
        for (const auto& m : cls.methods)
            for (const auto& site : m.call_sites)
                if (site.line == sample.line && site.method_name == name)
                    return locate_point(index, sample.file, site.line, site.column);
    throw PointNotFoundError("no invocation site for sample " + sample.id);
}

SampleOutcome process_sample(const RunConfig& config, const BenchmarkSample& sample,
                             const ProjectIndex& index, const Tokenizer& tokenizer,
                             LogitsProvider& provider) {
    SampleOutcome out;
    out.id = sample.id;
    out.ground_truth = sample.ground_truth;
    try {
        auto t0 = Clock::now();
        GenerationPoint point = locate_sample_point(index, sample);
        LocalDependency local = mine_local(point, index, config.strict);
        GlobalDependency global = mine_global(point, index);

        LocalDependency prompt_local = config.ablation.no_local ? LocalDependency{} : local;
        GlobalDependency prompt_global =
            config.ablation.no_global ? GlobalDependency{} : global;
        PromptDocument prompt = build_prompt(index.description, prompt_global, prompt_local,
                                             point, config.budgets, tokenizer);

        // the trie always uses the mined reference set; ablations only shape
        // the prompt text
        std::string trie_context = point.receiver_text + ".";
        std::vector<ApiTokenization> tokenized;
        for (const auto& api : local.reference_apis) {
            try {
                tokenized.push_back(tokenize_api(tokenizer, trie_context, api));
            } catch (const EmptyResidualError&) {
                // skip APIs the tokenizer merges away entirely
            }
        }
        TokenTrie trie = build_trie(tokenized);
        ParamPolicy policy = classify_param_vocab(tokenizer);
        out.timing.static_analysis = seconds_since(t0);

        auto t1 = Clock::now();
        DecodeSession session;
        session.prompt_tokens = tokenizer.encode(prompt.rendered);
        session.max_new_tokens = config.max_new_tokens;
        DecodeResult result;
        if (config.ablation.no_constrain) {
            result = decode_unconstrained(std::move(session), provider, tokenizer);
        } else {
            result = decode(std::move(session), trie, policy, provider, tokenizer,
                            config.mask_mode);
        }
        out.timing.inference = seconds_since(t1);
        out.timing.total = seconds_since(t0);

        out.generated = result.api_text;
        out.record = EvalRecord{result.api_text, sample.ground_truth, local.reference_apis,
                                out.timing.inference};
    } catch (const Error& e) {
        out.failed = true;
        out.error = e.what();
    }
    return out;
}

}  // namespace

TimingRecord report_timing(const std::vector<TimingRecord>& records) {
    if (records.empty()) throw EmptySetError("no timing records");
    TimingRecord mean;
    for (const auto& r : records) {
        mean.static_analysis += r.static_analysis;
        mean.inference += r.inference;
        mean.total += r.total;
    }
    double n = static_cast<double>(records.size());
    mean.static_analysis /= n;
    mean.inference /= n;
    mean.total /= n;
    return mean;
}

PipelineResult run_pipeline(const RunConfig& config, const BenchmarkSet& samples,
                            const ProjectIndex& index, const Tokenizer& tokenizer,
                            LogitsProvider& provider) {
    PipelineResult result;
    size_t n = samples.samples.size();
    result.outcomes.resize(n);

    int workers = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(n ? n : 1)));
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                size_t k = next.fetch_add(1);
                if (k >= n) break;
                result.outcomes[k] =
                    process_sample(config, samples.samples[k], index, tokenizer, provider);
            }
        });
    }
    for (auto& t : pool) t.join();

    std::sort(result.outcomes.begin(), result.outcomes.end(),
              [](const SampleOutcome& a, const SampleOutcome& b) { return a.id < b.id; });

    std::vector<EvalRecord> records;
    std::vector<TimingRecord> timings;
    for (const auto& o : result.outcomes) {
        if (o.failed) {
            ++result.failures;
            continue;
        }
        records.push_back(o.record);
        timings.push_back(o.timing);
    }
    if (!records.empty()) result.report = aggregate(records);
    if (!timings.empty()) result.mean_timing = report_timing(timings);

    for (const auto& o : result.outcomes) {
        nlohmann::json row;
        row["id"] = o.id;
        if (o.failed) {
            row["error"] = o.error;
        } else {
            row["generated"] = o.generated;
            row["ground_truth"] = o.ground_truth;
            auto elems = hallucination_elements(o.generated, o.record.reference_apis);
            row["em"] = exact_match(o.generated, o.ground_truth);
            row["es"] = edit_similarity(o.generated, o.ground_truth);
            row["im"] = identifier_match(o.generated, o.ground_truth);
            row["name_hallucination"] = elems.count(HallucinationElement::Name) > 0;
            row["param_hallucination"] = elems.count(HallucinationElement::ParamPattern) > 0;
            // timings stay out of the JSONL so identical runs are byte-identical
        }
        result.outputs_jsonl += row.dump() + "\n";
    }
    return result;
}

}  // namespace depgen

// depgen: static dependency mining + constrained decoding for project APIs.

#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "depgen/json_io.hpp"
#include "depgen/pipeline.hpp"

using namespace depgen;

namespace {

struct CommonOpts {
    std::string project;
    std::string vocab;
    std::string file;
    int line = 0;
    int col = 0;
    std::string out;
};

std::unique_ptr<Tokenizer> make_tokenizer(const std::string& vocab_path) {
    if (vocab_path.empty()) throw ConfigError("--vocab is required for this command");
    return std::make_unique<ToyTokenizer>(ToyTokenizer::from_file(vocab_path));
}

std::unique_ptr<LogitsProvider> make_provider(const RunConfig& cfg, int vocab_size) {
    switch (cfg.provider) {
        case ProviderKind::Replay:
            return std::make_unique<ReplayProvider>(ReplayProvider::from_file(cfg.replay_fixture));
        case ProviderKind::Remote:
            return std::make_unique<RemoteProvider>(cfg.endpoint, vocab_size);
        default:
            return std::make_unique<RandomProvider>(vocab_size, cfg.seed);
    }
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) std::cout << content;
    else write_file(out_path, content);
}

ProviderKind parse_provider(const std::string& name) {
    if (name == "replay") return ProviderKind::Replay;
    if (name == "random") return ProviderKind::Random;
    if (name == "remote") return ProviderKind::Remote;
    throw ConfigError("unknown provider: " + name + " (expected replay|random|remote)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mine project dependencies and constrain API decoding"};
    app.require_subcommand(1);

    CommonOpts opts;
    RunConfig cfg;
    std::string provider_name = "random";
    std::string config_path;
    std::string bench_path;
    std::string eval_in, eval_refs;
    bool boundary_to_m = false;
    bool literal_mask = false;

    auto add_point_opts = [&](CLI::App* cmd) {
        cmd->add_option("--file", opts.file, "file path relative to the project root")->required();
        cmd->add_option("--line", opts.line, "1-based line of the call")->required();
        cmd->add_option("--col", opts.col, "0-based byte column of the API name")->required();
    };
    auto add_project_opt = [&](CLI::App* cmd) {
        cmd->add_option("--project", opts.project, "project directory")->required();
    };

    auto* c_index = app.add_subcommand("index", "parse a project into an index JSON");
    add_project_opt(c_index);
    c_index->add_option("--out", opts.out, "output path (stdout if omitted)");

    auto* c_mine = app.add_subcommand("mine", "mine dependencies for a generation point");
    add_project_opt(c_mine);
    add_point_opts(c_mine);
    c_mine->add_flag("--strict", cfg.strict, "disable the all-public-methods fallback");
    c_mine->add_option("--out", opts.out);

    auto* c_prompt = app.add_subcommand("prompt", "render the structured prompt");
    add_project_opt(c_prompt);
    add_point_opts(c_prompt);
    c_prompt->add_option("--vocab", opts.vocab)->required();
    c_prompt->add_option("--project-budget", cfg.budgets.project_tokens);
    c_prompt->add_option("--function-budget", cfg.budgets.function_tokens);
    c_prompt->add_flag("--no-local", cfg.ablation.no_local);
    c_prompt->add_flag("--no-global", cfg.ablation.no_global);
    c_prompt->add_flag("--strict", cfg.strict);
    c_prompt->add_option("--out", opts.out);

    auto* c_trie = app.add_subcommand("trie", "export the API token prefix tree");
    add_project_opt(c_trie);
    add_point_opts(c_trie);
    c_trie->add_option("--vocab", opts.vocab)->required();
    c_trie->add_flag("--strict", cfg.strict);
    c_trie->add_option("--out", opts.out);

    auto* c_decode = app.add_subcommand("decode", "constrained decode at a generation point");
    add_project_opt(c_decode);
    add_point_opts(c_decode);
    c_decode->add_option("--vocab", opts.vocab)->required();
    c_decode->add_option("--provider", provider_name, "replay|random|remote");
    c_decode->add_option("--endpoint", cfg.endpoint);
    c_decode->add_option("--replay-fixture", cfg.replay_fixture);
    c_decode->add_option("--seed", cfg.seed);
    c_decode->add_option("--max-new-tokens", cfg.max_new_tokens);
    c_decode->add_option("--project-budget", cfg.budgets.project_tokens);
    c_decode->add_option("--function-budget", cfg.budgets.function_tokens);
    c_decode->add_flag("--no-constrain", cfg.ablation.no_constrain);
    c_decode->add_flag("--literal-mask", literal_mask,
                       "mask by elementwise product instead of restricted argmax");
    c_decode->add_flag("--strict", cfg.strict);
    c_decode->add_option("--out", opts.out);

    auto* c_bench = app.add_subcommand("bench", "benchmark construction");
    auto* c_bench_build = c_bench->add_subcommand("build", "build benchmark JSONL from a project");
    add_project_opt(c_bench_build);
    c_bench_build->add_flag("--boundary-to-m", boundary_to_m,
                            "assign the exact 0.5 position ratio to the M split");
    c_bench_build->add_option("--out", opts.out);
    c_bench->require_subcommand(1);

    auto* c_eval = app.add_subcommand("eval", "score generated outputs");
    c_eval->add_option("--in", eval_in, "JSONL of {generated, ground_truth, reference_set_id}")
        ->required();
    c_eval->add_option("--refs", eval_refs, "JSON map reference_set_id -> [ApiRef]")->required();
    c_eval->add_option("--out", opts.out);

    auto* c_run = app.add_subcommand("run", "full pipeline over a benchmark");
    add_project_opt(c_run);
    c_run->add_option("--bench", bench_path, "benchmark JSONL (built on the fly if omitted)");
    c_run->add_option("--vocab", opts.vocab)->required();
    c_run->add_option("--provider", provider_name);
    c_run->add_option("--endpoint", cfg.endpoint);
    c_run->add_option("--replay-fixture", cfg.replay_fixture);
    c_run->add_option("--seed", cfg.seed);
    c_run->add_option("--max-new-tokens", cfg.max_new_tokens);
    c_run->add_option("--project-budget", cfg.budgets.project_tokens);
    c_run->add_option("--function-budget", cfg.budgets.function_tokens);
    c_run->add_flag("--no-local", cfg.ablation.no_local);
    c_run->add_flag("--no-global", cfg.ablation.no_global);
    c_run->add_flag("--no-constrain", cfg.ablation.no_constrain);
    c_run->add_flag("--literal-mask", literal_mask);
    c_run->add_flag("--strict", cfg.strict);
    c_run->add_option("--threads", cfg.threads);
    c_run->add_option("--out", opts.out, "output directory for outputs.jsonl and report.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cfg.max_new_tokens < 1) throw ConfigError("--max-new-tokens must be >= 1");
        if (cfg.budgets.project_tokens < 1 || cfg.budgets.function_tokens < 1)
            throw ConfigError("budgets must be positive");
        cfg.provider = parse_provider(provider_name);
        cfg.mask_mode = literal_mask ? MaskMode::Literal : MaskMode::Restrict;
        if (cfg.provider == ProviderKind::Remote && cfg.endpoint.empty()) {
            const char* env = std::getenv("DEPGEN_ENDPOINT");
            if (env) cfg.endpoint = env;
            if (cfg.endpoint.empty())
                throw ConfigError("remote provider requires --endpoint or DEPGEN_ENDPOINT");
        }
        if (cfg.provider == ProviderKind::Replay && cfg.replay_fixture.empty())
            throw ConfigError("replay provider requires --replay-fixture");

        if (*c_index) {
            ProjectIndex index = load_project(opts.project);
            emit(opts.out, to_json(index).dump(2) + "\n");
            return 0;
        }
        if (*c_mine) {
            ProjectIndex index = load_project(opts.project);
            GenerationPoint point = locate_point(index, opts.file, opts.line, opts.col);
            LocalDependency local = mine_local(point, index, cfg.strict);
            GlobalDependency global = mine_global(point, index);
            emit(opts.out, to_json(local, global).dump(2) + "\n");
            return 0;
        }
        if (*c_prompt) {
            ProjectIndex index = load_project(opts.project);
            auto tokenizer = make_tokenizer(opts.vocab);
            GenerationPoint point = locate_point(index, opts.file, opts.line, opts.col);
            LocalDependency local =
                cfg.ablation.no_local ? LocalDependency{} : mine_local(point, index, cfg.strict);
            GlobalDependency global =
                cfg.ablation.no_global ? GlobalDependency{} : mine_global(point, index);
            PromptDocument doc =
                build_prompt(index.description, global, local, point, cfg.budgets, *tokenizer);
            emit(opts.out, doc.rendered + "\n");
            return 0;
        }
        if (*c_trie) {
            ProjectIndex index = load_project(opts.project);
            auto tokenizer = make_tokenizer(opts.vocab);
            GenerationPoint point = locate_point(index, opts.file, opts.line, opts.col);
            LocalDependency local = mine_local(point, index, cfg.strict);
            std::vector<ApiTokenization> tokenized;
            for (const auto& api : local.reference_apis)
                tokenized.push_back(tokenize_api(*tokenizer, point.receiver_text + ".", api));
            emit(opts.out, to_json(build_trie(tokenized)).dump(2) + "\n");
            return 0;
        }
        if (*c_decode) {
            ProjectIndex index = load_project(opts.project);
            auto tokenizer = make_tokenizer(opts.vocab);
            auto provider = make_provider(cfg, tokenizer->vocab_size());
            GenerationPoint point = locate_point(index, opts.file, opts.line, opts.col);
            LocalDependency local = mine_local(point, index, cfg.strict);
            GlobalDependency global = mine_global(point, index);
            PromptDocument doc =
                build_prompt(index.description, global, local, point, cfg.budgets, *tokenizer);
            DecodeSession session;
            session.prompt_tokens = tokenizer->encode(doc.rendered);
            session.max_new_tokens = cfg.max_new_tokens;
            DecodeResult result;
            if (cfg.ablation.no_constrain) {
                result = decode_unconstrained(std::move(session), *provider, *tokenizer);
            } else {
                std::vector<ApiTokenization> tokenized;
                for (const auto& api : local.reference_apis)
                    tokenized.push_back(tokenize_api(*tokenizer, point.receiver_text + ".", api));
                result = decode(std::move(session), build_trie(tokenized),
                                classify_param_vocab(*tokenizer), *provider, *tokenizer,
                                cfg.mask_mode);
            }
            emit(opts.out, result.api_text + "\n");
            return 0;
        }
        if (*c_bench) {
            ProjectIndex index = load_project(opts.project);
            std::string name = std::filesystem::path(opts.project).filename().string();
            BenchmarkSet set = build_benchmark(index, name, boundary_to_m);
            emit(opts.out, to_jsonl(set));
            return 0;
        }
        if (*c_eval) {
            nlohmann::json refs = nlohmann::json::parse(read_file(eval_refs));
            std::vector<EvalRecord> records;
            std::istringstream in(read_file(eval_in));
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                nlohmann::json row = nlohmann::json::parse(line);
                EvalRecord rec;
                rec.generated = row.at("generated");
                rec.ground_truth = row.at("ground_truth");
                rec.elapsed = row.value("elapsed", 0.0);
                std::string set_id = row.at("reference_set_id");
                for (const auto& a : refs.at(set_id))
                    rec.reference_apis.push_back(api_ref_from_json(a));
                records.push_back(std::move(rec));
            }
            MetricReport report = aggregate(records);
            emit(opts.out, to_json(report).dump(2) + "\n");
            std::cerr << format_report_table(report);
            return 0;
        }
        if (*c_run) {
            ProjectIndex index = load_project(opts.project);
            auto tokenizer = make_tokenizer(opts.vocab);
            auto provider = make_provider(cfg, tokenizer->vocab_size());
            std::string name = std::filesystem::path(opts.project).filename().string();
            BenchmarkSet set = bench_path.empty()
                                   ? build_benchmark(index, name)
                                   : benchmark_from_jsonl(read_file(bench_path));
            PipelineResult result = run_pipeline(cfg, set, index, *tokenizer, *provider);
            nlohmann::json report = to_json(result.report);
            report["failures"] = result.failures;
            report["timing"] = {{"static_analysis", result.mean_timing.static_analysis},
                                {"inference", result.mean_timing.inference},
                                {"total", result.mean_timing.total}};
            if (opts.out.empty()) {
                std::cout << result.outputs_jsonl;
                std::cerr << report.dump(2) << "\n" << format_report_table(result.report);
            } else {
                std::filesystem::create_directories(opts.out);
                write_file(opts.out + "/outputs.jsonl", result.outputs_jsonl);
                write_file(opts.out + "/report.json", report.dump(2) + "\n");
                std::cerr << format_report_table(result.report);
            }
            return result.failures > 0 ? 3 : 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "depgen/errors.hpp"
#include "depgen/tokenizer.hpp"

namespace depgen {

/// Anything that maps a token context to a full logits vector.
class LogitsProvider {
public:
    virtual ~LogitsProvider() = default;
    virtual std::vector<float> next_logits(const TokenSeq& context) = 0;
    virtual int vocab_size() const = 0;
};

struct GenerationConfig {
    int max_new_tokens = 15;
    uint64_t seed = 0;
    std::string endpoint;  // remote provider only
};

/// Replays recorded logits; keys are comma-joined context token ids.
class ReplayProvider : public LogitsProvider {
public:
    ReplayProvider(int vocab_size, std::map<std::string, std::vector<float>> fixture);
    static ReplayProvider from_file(const std::string& path);

    std::vector<float> next_logits(const TokenSeq& context) override;
    int vocab_size() const override { return vocab_size_; }

    static std::string key_for(const TokenSeq& context);

private:
    int vocab_size_;
    std::map<std::string, std::vector<float>> fixture_;
};

/// Deterministic pseudo-random logits, a pure function of (seed, context).
class RandomProvider : public LogitsProvider {
public:
    RandomProvider(int vocab_size, uint64_t seed) : vocab_size_(vocab_size), seed_(seed) {}

    std::vector<float> next_logits(const TokenSeq& context) override;
    int vocab_size() const override { return vocab_size_; }

private:
    int vocab_size_;
    uint64_t seed_;
};

/// HTTP client for a logits endpoint: POST /v1/logits {"tokens":[...]} ->
/// {"logits":[...]} or {"topk":[[id,logit],...],"default":d}.
class RemoteProvider : public LogitsProvider {
public:
    RemoteProvider(std::string endpoint, int vocab_size);

    std::vector<float> next_logits(const TokenSeq& context) override;
    int vocab_size() const override { return vocab_size_; }

    /// Expansion of the sparse top-k form into a full vector.
    static std::vector<float> expand_topk(const std::vector<std::pair<int, float>>& topk,
                                          float default_value, int vocab_size);

private:
    std::string endpoint_;
    int vocab_size_;
};

}  // namespace depgen

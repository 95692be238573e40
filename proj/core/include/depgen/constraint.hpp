#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "depgen/dependency_miner.hpp"
#include "depgen/tokenizer.hpp"

namespace depgen {

/// Context-adjusted token sequence for one reference API name.
struct ApiTokenization {
    ApiRef api;
    TokenSeq tokens;  // shared context prefix removed, never empty
};

/// Prefix tree over API token sequences; each root-to-terminal path is one API.
class TokenTrie {
public:
    struct Node {
        std::map<TokenId, int> children;  // token id -> node index
        std::vector<ApiRef> payloads;     // non-empty iff terminal
        bool terminal() const { return !payloads.empty(); }
    };

    TokenTrie() { nodes_.emplace_back(); }

    int root() const { return 0; }
    const Node& node(int idx) const { return nodes_[idx]; }
    size_t node_count() const { return nodes_.size(); }
    bool empty() const { return nodes_[0].children.empty() && !nodes_[0].terminal(); }

    void insert(const ApiTokenization& api);

private:
    std::vector<Node> nodes_;
};

TokenTrie build_trie(const std::vector<ApiTokenization>& apis);

/// B_noparam / B_param vocabulary split plus the per-API indicator I.
struct ParamPolicy {
    std::vector<TokenId> no_param_ids;  // sorted
    std::vector<TokenId> param_ids;     // sorted

    bool is_no_param(TokenId id) const;
    bool is_param(TokenId id) const;
    bool is_param_pattern(TokenId id) const { return is_no_param(id) || is_param(id); }
};

ParamPolicy classify_param_vocab(const Tokenizer& tokenizer);

struct ConstraintMask {
    std::vector<TokenId> valid_ids;  // sorted, non-empty on success
};

struct DecodeSession {
    enum class Phase { Name, Param, Done };
    TokenSeq prompt_tokens;
    TokenSeq generated;
    Phase phase = Phase::Name;
    int node = 0;                        // current trie node while in Name phase
    std::optional<ApiRef> selected_api;  // set once the name path completes
    int max_new_tokens = 15;
};

ConstraintMask compute_mask(const DecodeSession& session, const TokenTrie& trie,
                            const ParamPolicy& policy);

/// How masked logits pick the next token. Restricted argmax is the default;
/// Literal multiplies logits by the 0/1 mask before the argmax, which can
/// escape the mask when every valid logit is negative.
enum class MaskMode { Restrict, Literal };

TokenId select_next(const std::vector<float>& logits, const ConstraintMask& mask,
                    MaskMode mode = MaskMode::Restrict);

/// Remove the longest common token prefix of encode(context) from
/// encode(context + api_name).
ApiTokenization tokenize_api(const Tokenizer& tokenizer, const std::string& context_prefix,
                             const ApiRef& api);

class LogitsProvider;

struct DecodeResult {
    std::string api_text;
    TokenSeq tokens;
    int steps = 0;
    std::optional<ApiRef> api;  // the reference API the name path landed on
};

DecodeResult decode(DecodeSession session, const TokenTrie& trie, const ParamPolicy& policy,
                    LogitsProvider& lm, const Tokenizer& tokenizer,
                    MaskMode mode = MaskMode::Restrict);

/// Plain greedy decoding, no constraints; the unconstrained baseline.
DecodeResult decode_unconstrained(DecodeSession session, LogitsProvider& lm,
                                  const Tokenizer& tokenizer);

}  // namespace depgen

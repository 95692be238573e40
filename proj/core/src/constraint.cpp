#include "depgen/constraint.hpp"

#include <algorithm>
#include <limits>

#include "depgen/providers.hpp"

namespace depgen {

void TokenTrie::insert(const ApiTokenization& api) {
    int cur = 0;
    for (TokenId id : api.tokens) {
        auto it = nodes_[cur].children.find(id);
        if (it == nodes_[cur].children.end()) {
            nodes_.emplace_back();
            int child = static_cast<int>(nodes_.size()) - 1;
            nodes_[cur].children.emplace(id, child);
            cur = child;
        } else {
            cur = it->second;
        }
    }
    nodes_[cur].payloads.push_back(api.api);
}

TokenTrie build_trie(const std::vector<ApiTokenization>& apis) {
    TokenTrie trie;
    for (const auto& api : apis) {
        if (api.tokens.empty()) throw EmptyResidualError("empty token sequence for " + api.api.name);
        trie.insert(api);
    }
    return trie;
}

bool ParamPolicy::is_no_param(TokenId id) const {
    return std::binary_search(no_param_ids.begin(), no_param_ids.end(), id);
}

bool ParamPolicy::is_param(TokenId id) const {
    return std::binary_search(param_ids.begin(), param_ids.end(), id);
}

ParamPolicy classify_param_vocab(const Tokenizer& tokenizer) {
    ParamPolicy policy;
    for (TokenId id = 0; id < tokenizer.vocab_size(); ++id) {
        std::string text = tokenizer.token_text(id);
        if (text.empty() || text[0] != '(') continue;
        if (text.size() >= 2 && text[1] == ')') policy.no_param_ids.push_back(id);
        else policy.param_ids.push_back(id);  // bare "(" opens a parameter list
    }
    return policy;
}

ApiTokenization tokenize_api(const Tokenizer& tokenizer, const std::string& context_prefix,
                             const ApiRef& api) {
    if (api.name.empty()) throw TokenizeError("empty API name");
    TokenSeq full = tokenizer.encode(context_prefix + api.name);
    TokenSeq ctx = tokenizer.encode(context_prefix);
    size_t shared = 0;
    while (shared < ctx.size() && shared < full.size() && ctx[shared] == full[shared]) ++shared;
    TokenSeq residual(full.begin() + shared, full.end());
    if (residual.empty())
        throw EmptyResidualError("tokenizer merged '" + api.name + "' entirely into its context");
    return ApiTokenization{api, std::move(residual)};
}

namespace {

// Parameter-pattern ids dictated by the indicator of a terminal's payloads.
void append_param_ids(const std::vector<ApiRef>& payloads, const ParamPolicy& policy,
                      std::vector<TokenId>& out) {
    bool want_noparam = false;
    bool want_param = false;
    for (const auto& api : payloads)
        (api.has_params ? want_param : want_noparam) = true;
    if (want_noparam)
        out.insert(out.end(), policy.no_param_ids.begin(), policy.no_param_ids.end());
    if (want_param) out.insert(out.end(), policy.param_ids.begin(), policy.param_ids.end());
}

}  // namespace

ConstraintMask compute_mask(const DecodeSession& session, const TokenTrie& trie,
                            const ParamPolicy& policy) {
    ConstraintMask mask;
    if (session.phase == DecodeSession::Phase::Name) {
        const auto& node = trie.node(session.node);
        for (const auto& [id, child] : node.children) mask.valid_ids.push_back(id);
        if (node.terminal()) append_param_ids(node.payloads, policy, mask.valid_ids);
        if (mask.valid_ids.empty())
            throw EmptyMaskError("trie node has no children and is not terminal");
    } else if (session.phase == DecodeSession::Phase::Param) {
        const auto& ids =
            session.selected_api && session.selected_api->has_params ? policy.param_ids
                                                                     : policy.no_param_ids;
        mask.valid_ids = ids;
        if (mask.valid_ids.empty())
            throw EmptyMaskError("parameter-pattern token set is empty for this vocabulary");
    } else {
        throw EmptyMaskError("session already finished");
    }
    std::sort(mask.valid_ids.begin(), mask.valid_ids.end());
    mask.valid_ids.erase(std::unique(mask.valid_ids.begin(), mask.valid_ids.end()),
                         mask.valid_ids.end());
    return mask;
}

TokenId select_next(const std::vector<float>& logits, const ConstraintMask& mask, MaskMode mode) {
    if (mask.valid_ids.empty()) throw EmptyMaskError("empty constraint mask");
    if (mode == MaskMode::Literal) {
        // elementwise product with the 0/1 mask, then argmax; kept for study
        float best = -std::numeric_limits<float>::infinity();
        TokenId best_id = 0;
        size_t next_valid = 0;
        for (TokenId id = 0; id < static_cast<TokenId>(logits.size()); ++id) {
            bool valid = next_valid < mask.valid_ids.size() && mask.valid_ids[next_valid] == id;
            if (valid) ++next_valid;
            float masked = valid ? logits[id] : 0.0f;
            if (masked > best) {
                best = masked;
                best_id = id;
            }
        }
        return best_id;
    }
    float best = -std::numeric_limits<float>::infinity();
    TokenId best_id = mask.valid_ids.front();
    for (TokenId id : mask.valid_ids) {
        if (id < 0 || id >= static_cast<TokenId>(logits.size()))
            throw EmptyMaskError("mask id outside the logits vector");
        if (logits[id] > best) {  // ties keep the smallest id (ids are sorted)
            best = logits[id];
            best_id = id;
        }
    }
    return best_id;
}

DecodeResult decode(DecodeSession session, const TokenTrie& trie, const ParamPolicy& policy,
                    LogitsProvider& lm, const Tokenizer& tokenizer, MaskMode mode) {
    if (trie.empty()) throw EmptyMaskError("empty trie");
    DecodeResult result;
    while (session.phase != DecodeSession::Phase::Done &&
           static_cast<int>(session.generated.size()) < session.max_new_tokens) {
        ConstraintMask mask = compute_mask(session, trie, policy);
        TokenSeq context = session.prompt_tokens;
        context.insert(context.end(), session.generated.begin(), session.generated.end());
        std::vector<float> logits = lm.next_logits(context);
        TokenId chosen = select_next(logits, mask, mode);
        session.generated.push_back(chosen);
        ++result.steps;

        if (session.phase == DecodeSession::Phase::Param) {
            session.phase = DecodeSession::Phase::Done;
            continue;
        }
        const auto& node = trie.node(session.node);
        auto it = node.children.find(chosen);
        if (it == node.children.end()) {
            // terminal node: a parameter-pattern token ends the API call
            if (!session.selected_api && node.terminal()) session.selected_api = node.payloads[0];
            session.phase = DecodeSession::Phase::Done;
            continue;
        }
        session.node = it->second;
        const auto& child = trie.node(session.node);
        if (child.terminal() && child.children.empty()) {
            session.selected_api = child.payloads[0];
            session.phase = DecodeSession::Phase::Param;
        }
    }
    result.tokens = session.generated;
    result.api_text = tokenizer.decode(session.generated);
    result.api = session.selected_api;
    if (session.phase != DecodeSession::Phase::Done)
        throw TruncatedError("max_new_tokens reached before the API call completed",
                             session.generated);
    return result;
}

DecodeResult decode_unconstrained(DecodeSession session, LogitsProvider& lm,
                                  const Tokenizer& tokenizer) {
    DecodeResult result;
    while (static_cast<int>(session.generated.size()) < session.max_new_tokens) {
        TokenSeq context = session.prompt_tokens;
        context.insert(context.end(), session.generated.begin(), session.generated.end());
        std::vector<float> logits = lm.next_logits(context);
        TokenId best_id = 0;
        float best = -std::numeric_limits<float>::infinity();
        for (TokenId id = 0; id < static_cast<TokenId>(logits.size()); ++id)
            if (logits[id] > best) {
                best = logits[id];
                best_id = id;
            }
        session.generated.push_back(best_id);
        ++result.steps;
    }
    result.tokens = session.generated;
    result.api_text = tokenizer.decode(session.generated);
    return result;
}

}  // namespace depgen

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "depgen/errors.hpp"

namespace depgen {

using TokenId = int;
using TokenSeq = std::vector<TokenId>;

/// Abstract tokenizer the constraint engine is written against.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual TokenSeq encode(const std::string& text) const = 0;
    virtual std::string decode(const TokenSeq& ids) const = 0;
    virtual int vocab_size() const = 0;
    virtual std::string token_text(TokenId id) const = 0;
};

/// Greedy longest-match tokenizer over an explicit vocabulary.
/// Vocab file format: one token text per line, id = 0-based line number.
class ToyTokenizer : public Tokenizer {
public:
    explicit ToyTokenizer(std::vector<std::string> vocab);
    static ToyTokenizer from_file(const std::string& path);

    TokenSeq encode(const std::string& text) const override;
    std::string decode(const TokenSeq& ids) const override;
    int vocab_size() const override { return static_cast<int>(vocab_.size()); }
    std::string token_text(TokenId id) const override;

private:
    std::vector<std::string> vocab_;
    std::map<std::string, TokenId> by_text_;
    size_t max_len_ = 0;
};

/// Tokenizer backed by recorded encodings, for replaying traces captured from
/// a real model. Unknown strings raise UnknownContextError.
class RecordedTokenizer : public Tokenizer {
public:
    RecordedTokenizer(int vocab_size, std::map<std::string, TokenSeq> encodings,
                      std::map<TokenId, std::string> token_texts);
    static RecordedTokenizer from_file(const std::string& path);

    TokenSeq encode(const std::string& text) const override;
    std::string decode(const TokenSeq& ids) const override;
    int vocab_size() const override { return vocab_size_; }
    std::string token_text(TokenId id) const override;

private:
    int vocab_size_;
    std::map<std::string, TokenSeq> encodings_;
    std::map<TokenId, std::string> token_texts_;
};

}  // namespace depgen

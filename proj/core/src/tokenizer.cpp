#include "depgen/tokenizer.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace depgen {

ToyTokenizer::ToyTokenizer(std::vector<std::string> vocab) : vocab_(std::move(vocab)) {
    for (size_t i = 0; i < vocab_.size(); ++i) {
        by_text_.emplace(vocab_[i], static_cast<TokenId>(i));
        max_len_ = std::max(max_len_, vocab_[i].size());
    }
}

ToyTokenizer ToyTokenizer::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open vocab file: " + path);
    std::vector<std::string> vocab;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // escapes so that whitespace tokens survive a line-based format
        std::string tok;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '\\' && i + 1 < line.size()) {
                char c = line[++i];
                if (c == 'n') tok += '\n';
                else if (c == 't') tok += '\t';
                else if (c == 's') tok += ' ';
                else if (c == '\\') tok += '\\';
                else tok += c;
            } else {
                tok += line[i];
            }
        }
        vocab.push_back(tok);
    }
    return ToyTokenizer(std::move(vocab));
}

TokenSeq ToyTokenizer::encode(const std::string& text) const {
    TokenSeq out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t best_len = 0;
        TokenId best_id = -1;
        size_t limit = std::min(max_len_, text.size() - pos);
        for (size_t len = limit; len >= 1; --len) {
            auto it = by_text_.find(text.substr(pos, len));
            if (it != by_text_.end()) {
                best_len = len;
                best_id = it->second;
                break;
            }
        }
        if (best_id < 0)
            throw TokenizeError("no vocab entry covers byte at offset " + std::to_string(pos) +
                                " ('" + text.substr(pos, 1) + "')");
        out.push_back(best_id);
        pos += best_len;
    }
    return out;
}

std::string ToyTokenizer::decode(const TokenSeq& ids) const {
    std::string out;
    for (TokenId id : ids) out += token_text(id);
    return out;
}

std::string ToyTokenizer::token_text(TokenId id) const {
    if (id < 0 || id >= vocab_size()) throw TokenizeError("token id out of range: " + std::to_string(id));
    return vocab_[id];
}

RecordedTokenizer::RecordedTokenizer(int vocab_size, std::map<std::string, TokenSeq> encodings,
                                     std::map<TokenId, std::string> token_texts)
    : vocab_size_(vocab_size),
      encodings_(std::move(encodings)),
      token_texts_(std::move(token_texts)) {}

RecordedTokenizer RecordedTokenizer::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open recorded tokenizer file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    std::map<std::string, TokenSeq> enc;
    for (auto& [k, v] : j.at("encode").items()) enc[k] = v.get<TokenSeq>();
    std::map<TokenId, std::string> texts;
    for (auto& [k, v] : j.at("token_text").items())
        texts[std::stoi(k)] = v.get<std::string>();
    return RecordedTokenizer(j.at("vocab_size").get<int>(), std::move(enc), std::move(texts));
}

TokenSeq RecordedTokenizer::encode(const std::string& text) const {
    if (text.empty()) return {};
    auto it = encodings_.find(text);
    if (it == encodings_.end()) throw UnknownContextError("no recorded encoding for: " + text);
    return it->second;
}

std::string RecordedTokenizer::decode(const TokenSeq& ids) const {
    std::string out;
    for (TokenId id : ids) out += token_text(id);
    return out;
}

std::string RecordedTokenizer::token_text(TokenId id) const {
    // recordings are partial by nature; unrecorded ids read as empty text
    auto it = token_texts_.find(id);
    return it == token_texts_.end() ? std::string() : it->second;
}

}  // namespace depgen

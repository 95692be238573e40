#include "depgen/providers.hpp"

#include <fstream>
#include <random>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace depgen {

ReplayProvider::ReplayProvider(int vocab_size, std::map<std::string, std::vector<float>> fixture)
    : vocab_size_(vocab_size), fixture_(std::move(fixture)) {}

std::string ReplayProvider::key_for(const TokenSeq& context) {
    std::string key;
    for (size_t i = 0; i < context.size(); ++i) {
        if (i) key += ",";
        key += std::to_string(context[i]);
    }
    return key;
}

ReplayProvider ReplayProvider::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open replay fixture: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    int vocab_size = j.at("vocab_size").get<int>();
    std::map<std::string, std::vector<float>> fixture;
    for (auto& [k, v] : j.at("logits").items()) {
        if (v.is_array()) {
            fixture[k] = v.get<std::vector<float>>();
        } else {
            // sparse form, expanded at load so replay stays a plain lookup
            std::vector<std::pair<int, float>> topk;
            for (const auto& entry : v.at("topk"))
                topk.emplace_back(entry[0].get<int>(), entry[1].get<float>());
            fixture[k] = RemoteProvider::expand_topk(topk, v.at("default").get<float>(),
                                                     vocab_size);
        }
    }
    return ReplayProvider(vocab_size, std::move(fixture));
}

std::vector<float> ReplayProvider::next_logits(const TokenSeq& context) {
    auto it = fixture_.find(key_for(context));
    if (it == fixture_.end())
        throw UnknownContextError("no recorded logits for context [" + key_for(context) + "]");
    return it->second;
}

std::vector<float> RandomProvider::next_logits(const TokenSeq& context) {
    // a pure function of (seed, context): fold the context into the seed
    uint64_t h = seed_ ^ 0x9e3779b97f4a7c15ull;
    for (TokenId id : context) {
        h ^= static_cast<uint64_t>(id) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    std::mt19937_64 rng(h);
    std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
    std::vector<float> out(vocab_size_);
    for (auto& v : out) v = dist(rng);
    return out;
}

RemoteProvider::RemoteProvider(std::string endpoint, int vocab_size)
    : endpoint_(std::move(endpoint)), vocab_size_(vocab_size) {}

std::vector<float> RemoteProvider::expand_topk(const std::vector<std::pair<int, float>>& topk,
                                               float default_value, int vocab_size) {
    std::vector<float> out(vocab_size, default_value);
    for (const auto& [id, logit] : topk) {
        if (id < 0 || id >= vocab_size)
            throw MalformedResponseError("topk id out of range: " + std::to_string(id));
        out[id] = logit;
    }
    return out;
}

std::vector<float> RemoteProvider::next_logits(const TokenSeq& context) {
    httplib::Client client(endpoint_);
    client.set_read_timeout(30, 0);
    nlohmann::json body;
    body["tokens"] = context;
    auto res = client.Post("/v1/logits", body.dump(), "application/json");
    if (!res) throw TransportError("logits endpoint unreachable: " + endpoint_);
    if (res->status != 200)
        throw TransportError("logits endpoint returned status " + std::to_string(res->status));
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedResponseError(std::string("invalid JSON from logits endpoint: ") + e.what());
    }
    std::vector<float> logits;
    if (j.contains("logits")) {
        if (!j["logits"].is_array()) throw MalformedResponseError("'logits' is not an array");
        logits = j["logits"].get<std::vector<float>>();
    } else if (j.contains("topk")) {
        if (!j.contains("default"))
            throw MalformedResponseError("topk response missing 'default'");
        std::vector<std::pair<int, float>> topk;
        for (const auto& entry : j["topk"]) {
            if (!entry.is_array() || entry.size() != 2)
                throw MalformedResponseError("topk entries must be [id, logit] pairs");
            topk.emplace_back(entry[0].get<int>(), entry[1].get<float>());
        }
        logits = expand_topk(topk, j["default"].get<float>(), vocab_size_);
    } else {
        throw MalformedResponseError("response carries neither 'logits' nor 'topk'");
    }
    if (static_cast<int>(logits.size()) != vocab_size_)
        throw LengthMismatchError("expected " + std::to_string(vocab_size_) + " logits, got " +
                                  std::to_string(logits.size()));
    return logits;
}

}  // namespace depgen

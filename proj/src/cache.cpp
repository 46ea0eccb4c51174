#include "webskein/cache.hpp"

#include <cstdio>

#include "webskein/diagram.hpp"

namespace webskein {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string hex(uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::string payload(const std::string& key, int n, const nlohmann::json& value) {
    return key + "\t" + std::to_string(n) + "\t" + value.dump();
}

std::string map_key(const std::string& key, int n) { return std::to_string(n) + ":" + key; }

}  // namespace

Cache::Cache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            std::string key = j.at("key").get<std::string>();
            int n = j.at("n").get<int>();
            auto& v = j.at("value");
            if (j.at("sum").get<std::string>() != hex(fnv1a(payload(key, n, v)))) {
                ++rejected_;
                continue;
            }
            map_[map_key(key, n)] = LPoly::from_json(v);
        } catch (const std::exception&) {
            ++rejected_;
        }
    }
}

std::optional<LPoly> Cache::get(const std::string& key, int n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(map_key(key, n));
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void Cache::put(const std::string& key, int n, const LPoly& value) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!map_.emplace(map_key(key, n), value).second) return;
    nlohmann::json v = value.to_json();
    nlohmann::json j{{"key", key}, {"n", n}, {"value", v}, {"sum", hex(fnv1a(payload(key, n, v)))}};
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error("cannot write cache file " + path_);
    out << j.dump() << '\n';
}

}  // namespace webskein

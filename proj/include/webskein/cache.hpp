#pragma once

#include <cstdint>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "webskein/lpoly.hpp"

namespace webskein {

uint64_t fnv1a(const std::string& s);

// Web values on disk, one JSON object per line:
//   {"key":..., "n":..., "value":[[e,"c"],...], "sum":"<fnv1a hex>"}
// Lines that fail to parse or whose checksum disagrees are skipped.
class Cache {
public:
    explicit Cache(std::string path);
    std::optional<LPoly> get(const std::string& key, int n);
    void put(const std::string& key, int n, const LPoly& value);
    size_t size() const { return map_.size(); }
    size_t rejected_lines() const { return rejected_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::unordered_map<std::string, LPoly> map_;
    size_t rejected_ = 0;
    std::mutex mu_;
};

}  // namespace webskein

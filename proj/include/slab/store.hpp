#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "slab/modmath.hpp"

namespace slab::store {

using modmath::u64;

struct CacheRecord {
    std::string curve_fp;  // "a1,a2,a3,a4,a6"
    std::string point_fp;  // "X:Y:Z", or "-" for group-order-only records
    u64 p = 0;
    u64 group_order = 0;
    u64 point_order = 0;  // 0 for group-order-only records
};

// Append-only line-delimited order cache. Duplicate keys tolerated with
// last-writer-wins on read; corrupt lines skipped and counted.
class OrderCache {
public:
    OrderCache() = default;                      // memory-only
    explicit OrderCache(std::string path);       // loads existing records

    std::optional<CacheRecord> get(const std::string& curve_fp,
                                   const std::string& point_fp, u64 p) const;
    void put(const CacheRecord& rec);

    u64 corrupt_lines() const { return corrupt_; }
    const std::string& path() const { return path_; }

private:
    static std::string key(const std::string& c, const std::string& pt, u64 p);

    std::string path_;
    mutable std::mutex mu_;
    std::unordered_map<std::string, CacheRecord> records_;
    u64 corrupt_ = 0;
};

}  // namespace slab::store

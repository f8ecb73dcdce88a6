#include "slab/store.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slab::store {

std::string OrderCache::key(const std::string& c, const std::string& pt, u64 p) {
    return c + "|" + pt + "|" + std::to_string(p);
}

OrderCache::OrderCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;  // cold cache
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        CacheRecord rec;
        std::string pstr, go, po;
        if (!std::getline(ss, rec.curve_fp, '|') || !std::getline(ss, rec.point_fp, '|') ||
            !std::getline(ss, pstr, '|') || !std::getline(ss, go, '|') ||
            !std::getline(ss, po)) {
            ++corrupt_;
            continue;
        }
        try {
            rec.p = std::stoull(pstr);
            rec.group_order = std::stoull(go);
            rec.point_order = std::stoull(po);
        } catch (const std::exception&) {
            ++corrupt_;
            continue;
        }
        records_[key(rec.curve_fp, rec.point_fp, rec.p)] = rec;  // last writer wins
    }
}

std::optional<CacheRecord> OrderCache::get(const std::string& curve_fp,
                                           const std::string& point_fp, u64 p) const {
    std::lock_guard lock(mu_);
    auto it = records_.find(key(curve_fp, point_fp, p));
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

void OrderCache::put(const CacheRecord& rec) {
    std::lock_guard lock(mu_);
    records_[key(rec.curve_fp, rec.point_fp, rec.p)] = rec;
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("OrderCache: cannot write " + path_);
    out << rec.curve_fp << '|' << rec.point_fp << '|' << rec.p << '|'
        << rec.group_order << '|' << rec.point_order << '\n';
}

}  // namespace slab::store

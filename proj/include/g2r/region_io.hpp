#pragma once

#include <string>
#include <vector>

#include "g2r/encoder.hpp"

namespace g2r {

struct RegionCacheEntry {
  int id = 0;
  GraphRegion region;
  Tensor assign;  // the sink values the region was computed with
};

// JSON-lines cache, one graph per line:
// {"id":i,"region":[[...]],"size":c,"nodes":n,"assign":[[...]]}.
// Doubles round-trip exactly, so cached regions score identically to
// freshly encoded ones.
void save_region_cache(const std::vector<RegionCacheEntry>& entries,
                       const std::string& path);
std::vector<RegionCacheEntry> load_region_cache(const std::string& path);

}  // namespace g2r

#pragma once

#include <cstddef>
#include <map>
#include <string>

namespace qse {

/// Work tallies reported with every run.
struct ResourceCounters {
  std::size_t filters = 0;       // comb-filter projections (one per projection call)
  std::size_t swap_stages = 0;   // stages of disjoint swaps, forward and undo passes
  std::size_t buffer_moves = 0;  // individual buffer relocations inside swap stages
  std::size_t oracle_calls = 0;
  std::map<std::string, std::size_t> gates_by_kind;

  ResourceCounters& operator+=(const ResourceCounters& other) {
    filters += other.filters;
    swap_stages += other.swap_stages;
    buffer_moves += other.buffer_moves;
    oracle_calls += other.oracle_calls;
    for (const auto& [kind, count] : other.gates_by_kind) gates_by_kind[kind] += count;
    return *this;
  }

  bool operator==(const ResourceCounters&) const = default;
};

}  // namespace qse

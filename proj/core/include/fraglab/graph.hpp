#pragma once

#include "fraglab/structure.hpp"

#include <optional>
#include <vector>

namespace fraglab {

struct GaifmanGraph {
    std::size_t n = 0;
    std::vector<std::vector<Element>> adj;  // sorted, no self-loops
    std::vector<Tuple> edges() const;       // unordered edges {a,b} as (a,b) with a < b, sorted
    std::size_t edge_count() const;
};

GaifmanGraph gaifman(const Structure& m);

// length of a shortest cycle; nullopt when acyclic
std::optional<std::size_t> girth(const GaifmanGraph& g);
std::optional<std::size_t> girth(const Structure& m);

bool connected(const GaifmanGraph& g);

}  // namespace fraglab

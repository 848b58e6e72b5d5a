#pragma once

#include "fraglab/formula.hpp"
#include "fraglab/structure.hpp"

#include <optional>
#include <vector>

namespace fraglab {

// least model (by domain size, then lexicographically on the predicate table with false < true)
// among domain sizes 1..max_n; degree atoms are not supported
std::optional<Structure> bounded_sat(const Formula& f, const Signature& sig, std::size_t max_n);
std::optional<Structure> bounded_sat_exact(const Formula& f, const Signature& sig, std::size_t n);
// up to `limit` distinct models of size exactly n, in no particular order
std::vector<Structure> enumerate_models(const Formula& f, const Signature& sig, std::size_t n, std::size_t limit);

}  // namespace fraglab

#pragma once

#include "fraglab/structure.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fraglab {

// unary atoms in predicate order, then self-loop atoms r(x,x)
struct OneType {
    std::vector<bool> bits;
    bool operator==(const OneType&) const = default;
    auto operator<=>(const OneType& o) const { return bits <=> o.bits; }
};

// bit 2i: r_i(x,y), bit 2i+1: r_i(y,x); the all-zero pattern is the null type
struct TwoType {
    std::uint64_t bits = 0;
    bool is_null() const { return bits == 0; }
    bool operator==(const TwoType&) const = default;
    auto operator<=>(const TwoType&) const = default;
};

using DegreeVector = std::vector<Int>;

OneType one_type(const Structure& m, Element a);
OneType one_type(const Structure& m, Element a, const Signature& sig);

TwoType two_type(const Structure& m, Element a, Element b);
TwoType two_type(const Structure& m, Element a, Element b, const std::vector<std::string>& binaries);
TwoType swap_two_type(TwoType t, std::size_t k);

// number of non-null 2-types over k binary predicates: 2^{2k} - 1
std::size_t two_type_count(std::size_t k);
// j-th non-null 2-type in canonical order, j in [0, count)
inline TwoType two_type_at(std::size_t j) { return TwoType{static_cast<std::uint64_t>(j) + 1}; }
inline std::size_t two_type_index(TwoType t) { return static_cast<std::size_t>(t.bits) - 1; }

// neighbours b != a with non-null 2-type, with their 2-type pattern; sorted by element
std::vector<std::pair<Element, TwoType>> neighbour_types(const Structure& m, Element a,
                                                         const std::vector<std::string>& binaries);
std::vector<Element> neighbourhood(const Structure& m, Element a, TwoType eta);
std::vector<Element> neighbourhood(const Structure& m, Element a, TwoType eta,
                                   const std::vector<std::string>& binaries);

DegreeVector degree_vector(const Structure& m, Element a);
DegreeVector degree_vector(const Structure& m, Element a, const std::vector<std::string>& binaries);

}  // namespace fraglab

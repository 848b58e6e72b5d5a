#pragma once

#include "fraglab/formula.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fraglab {

using Element = std::uint32_t;
using Tuple = std::pair<Element, Element>;

// finite relational structure; predicate order is significant (it fixes 1-type and 2-type layout)
class Structure {
public:
    Structure() = default;

    std::size_t size() const { return n_; }
    const std::vector<std::string>& unary_names() const { return unames_; }
    const std::vector<std::string>& binary_names() const { return bnames_; }
    Signature signature() const { return Signature(unames_, bnames_); }

    std::optional<std::size_t> unary_index(const std::string& p) const;
    std::optional<std::size_t> binary_index(const std::string& r) const;

    // absent predicates are empty
    bool unary(const std::string& p, Element a) const;
    bool binary(const std::string& r, Element a, Element b) const;
    bool unary_at(std::size_t p, Element a) const { return ubits_[p][a] != 0; }
    bool binary_at(std::size_t r, Element a, Element b) const;

    const std::vector<Element>& successors(std::size_t r, Element a) const { return out_[r][a]; }
    const std::vector<Element>& predecessors(std::size_t r, Element a) const { return in_[r][a]; }

    std::vector<Element> members(const std::string& p) const;
    std::vector<Tuple> tuples(const std::string& r) const;
    std::size_t tuple_count() const;

    // same domain, same predicate names in the same order, same extensions
    bool operator==(const Structure& o) const;

private:
    friend class StructureBuilder;
    std::size_t n_ = 0;
    std::vector<std::string> unames_, bnames_;
    std::unordered_map<std::string, std::size_t> uidx_, bidx_;
    std::vector<std::vector<std::uint8_t>> ubits_;
    std::vector<std::vector<std::vector<Element>>> out_, in_;
};

class StructureBuilder {
public:
    explicit StructureBuilder(std::size_t n = 0);
    StructureBuilder(std::size_t n, const Signature& sig);
    explicit StructureBuilder(const Structure& m);

    std::size_t size() const { return n_; }
    Element add_element();

    void declare_unary(const std::string& p);
    void declare_binary(const std::string& r);
    void set_unary(const std::string& p, Element a, bool value = true);
    void set_binary(const std::string& r, Element a, Element b, bool value = true);
    bool unary(const std::string& p, Element a) const;
    bool binary(const std::string& r, Element a, Element b) const;

    const std::vector<std::string>& unary_names() const { return unames_; }
    const std::vector<std::string>& binary_names() const { return bnames_; }
    const std::set<Element>& successors(std::size_t r, Element a) const { return out_[r][a]; }
    const std::set<Element>& predecessors(std::size_t r, Element a) const { return in_[r][a]; }
    bool unary_at(std::size_t p, Element a) const { return ubits_[p][a] != 0; }
    void set_unary_at(std::size_t p, Element a, bool value) { ubits_[p][a] = value; }
    void set_binary_at(std::size_t r, Element a, Element b, bool value);

    Structure build() const;

private:
    void check(Element a) const;
    std::size_t n_ = 0;
    std::vector<std::string> unames_, bnames_;
    std::unordered_map<std::string, std::size_t> uidx_, bidx_;
    std::vector<std::vector<std::uint8_t>> ubits_;
    std::vector<std::vector<std::set<Element>>> out_, in_;
};

// same structure with every predicate of sig declared (missing ones empty), in sig order first
Structure with_signature(const Structure& m, const Signature& sig);
// keep only predicates of sig
Structure reduct(const Structure& m, const Signature& sig);

}  // namespace fraglab

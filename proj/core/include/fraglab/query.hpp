#pragma once

#include "fraglab/formula.hpp"
#include "fraglab/structure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fraglab {

struct QueryAtom {
    std::string pred;
    std::vector<std::size_t> args;  // one or two variable indices
    bool operator==(const QueryAtom&) const = default;
    auto operator<=>(const QueryAtom&) const = default;
};

// Boolean conjunctive query; variables are numbered by first appearance
struct ConjunctiveQuery {
    std::vector<std::string> vars;
    std::vector<QueryAtom> atoms;
    bool operator==(const ConjunctiveQuery&) const = default;
};

bool is_tree_shaped(const ConjunctiveQuery& q);
// tree-shaped quotients of q, one per isomorphism class; the trivial quotient comes first when q is a tree
std::vector<ConjunctiveQuery> treeifications(const ConjunctiveQuery& q);
// canonical string up to variable renaming
std::string canonical_form(const ConjunctiveQuery& q);

// formula with free variable x that holds at a iff q has a match mapping `root` to a
Formula rollup(const ConjunctiveQuery& q, std::size_t root = 0);
// phi' = phi and no tree-shaped quotient of q is matched anywhere
Formula entail_reduce(const Formula& phi, const ConjunctiveQuery& q);

struct PumpOptions {
    std::optional<std::size_t> cap;  // default: FRAGLAB_PUMP_CAP or 16
    bool force = false;
};
std::size_t default_pump_cap();
Structure pump(const Structure& m, const PumpOptions& opt = {});

// assignment of query variables to elements, first in lexicographic search order
std::optional<std::vector<Element>> find_homomorphism(const ConjunctiveQuery& q, const Structure& m);

Signature query_signature(const ConjunctiveQuery& q);

}  // namespace fraglab

#pragma once

#include "fraglab/formula.hpp"

#include <set>
#include <string>
#include <vector>

namespace fraglab {

struct Violation {
    std::string path;  // dot-separated child indices from the root, "" for the root
    std::string reason;
};

struct FragmentReport {
    bool is_fo2 = true;
    bool is_gf2 = true;
    bool is_gf2pres = true;
    bool is_fo2_pct = true;
    bool is_c2 = true;
    std::vector<Violation> violations;
};

// throws ValidationError for predicates missing from sig or used with the wrong arity
FragmentReport validate(const Formula& f, const Signature& sig);

std::set<Var> free_vars(const Formula& f);
bool is_sentence(const Formula& f);
bool is_quantifier_free(const Formula& f);
std::set<std::string> predicates(const Formula& f);
// every predicate with its arity
Signature signature_of(const Formula& f);

// local percentage quantifiers become Presburger constraints; global ones are rejected
Formula lower_percentage(const Formula& f);

// moves negations inwards; negated constraints get the complementary comparison
Formula push_negation(const Formula& f);

}  // namespace fraglab

#pragma once

#include "fraglab/formula.hpp"
#include "fraglab/structure.hpp"

#include <string>
#include <vector>

namespace fraglab {

// forall x forall y  guard(x,y) -> alpha(x,y), guard a binary atom
struct NfPair {
    Formula guard;
    Formula alpha;
};

// lambda * #_y^role [x != y and filter(x,y)]  +  lambda * [diag_role(x,x) and diag(x)]
// filter only looks at x's unary/loop atoms and at binary atoms between x and y
struct NfTerm {
    Int coeff = 1;
    RoleRef role;
    Formula filter;
    std::string diag_role;
    Formula diag;
};

// forall x  guard(x) -> sum of terms  cmp  delta
struct NfConstraint {
    Formula guard;
    std::vector<NfTerm> terms;
    Comparison cmp;
    Int delta = 0;
};

// how an auxiliary predicate is interpreted when a model of the input is expanded
struct NfDefinition {
    std::string name;
    int arity = 1;
    Formula formula;  // over the input signature plus earlier definitions; free x (and y)
};

struct NormalForm {
    Signature sig;         // input signature plus auxiliaries
    Signature source_sig;  // input signature
    Formula gamma;         // quantifier-free, free variable x
    std::vector<NfPair> pairs;
    std::vector<NfConstraint> constraints;
    std::vector<std::string> aux_predicates;
    std::vector<NfDefinition> definitions;
};

// input: a GF2_pres sentence (local percentages allowed, they are lowered first)
NormalForm normalize(const Formula& f, const Signature& sig);
// interprets the auxiliaries of nf on a model of the input
Structure expand_model(const NormalForm& nf, const Structure& m);
// the normal form as a single GF2_pres sentence
Formula to_formula(const NormalForm& nf);

}  // namespace fraglab

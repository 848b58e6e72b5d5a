#pragma once

#include "fraglab/formula.hpp"
#include "fraglab/structure.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fraglab {

struct PmlNode;
using Pml = std::shared_ptr<const PmlNode>;

struct PmlTerm {
    Int coeff = 1;
    RoleRef role;  // inverse: count predecessors
    Pml body;
};

struct PmlNode {
    enum class Kind { Top, Prop, Not, And, Or, Count };
    Kind kind = Kind::Top;
    std::string prop;
    std::vector<Pml> kids;
    std::vector<PmlTerm> terms;  // Count: sum a_i #S_i phi_i  cmp  bound
    Comparison cmp;
    Int bound = 0;
};

Pml pml_top();
Pml pml_prop(const std::string& p);
Pml pml_not(Pml f);
Pml pml_and(std::vector<Pml> fs);
Pml pml_or(std::vector<Pml> fs);
Pml pml_count(std::vector<PmlTerm> terms, Comparison c, Int bound);

// Kripke structures are structures: worlds are elements, propositions unary, accessibility binary
using KripkeStructure = Structure;

bool pml_eval(const KripkeStructure& k, Element w, const Pml& f);
// forall x (x = x -> tr_x(f))
Formula pml_translate(const Pml& f);
// tr with free variable v
Formula pml_translate_at(const Pml& f, Var v);
Signature pml_signature(const Pml& f);
std::size_t pml_depth(const Pml& f);

}  // namespace fraglab

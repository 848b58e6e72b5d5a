#pragma once

#include "fraglab/formula.hpp"
#include "fraglab/structure.hpp"

#include <string>

namespace fraglab {

struct Localized {
    Formula formula;
    std::string relation;  // the fresh universal binary predicate
};

// global percentages become local ones over a fresh relation forced to be universal
Localized localize_global(const Formula& f, const Signature& sig);

struct UniversalGadget {
    Formula formula;
    std::string relation;  // U
    std::string half;      // H
};

// guarded sentence over fresh U (binary) and H (unary) whose models have U universal
UniversalGadget gf_universal_gadget(const Signature& sig);

// three-variable-free sentence over binary F, H, R forcing F to be functional
Formula func_gadget();
// expands a structure with binary F (functional) by R and H so that the gadget holds
Structure func_extend(const Structure& m);
bool is_functional(const Structure& m, const std::string& f);

}  // namespace fraglab

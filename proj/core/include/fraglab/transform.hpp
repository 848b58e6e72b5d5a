#pragma once

#include "fraglab/c2.hpp"
#include "fraglab/structure.hpp"
#include "fraglab/types.hpp"

#include <vector>

namespace fraglab {

// b disappears into a; elements above b shift down by one
Structure merge_elements(const Structure& m, Element a, Element b);

// parts partitions the non-null neighbours of a; part 0 stays on a, part i > 0 becomes element n + i - 1
Structure split_element(const Structure& m, Element a, const std::vector<std::vector<Element>>& parts);
// neighbour partition realising the given degree vectors (over all binaries of m)
std::vector<std::vector<Element>> plan_split(const Structure& m, Element a, const std::vector<DegreeVector>& degrees);

// every element split into one offset part and one part per period use
Structure psi_model_to_psi_star(const PsiStar& ps, const Structure& m);
// 3 layers of copies, periodic elements merged into offset elements of the next layer
Structure psi_star_model_to_psi(const PsiStar& ps, const Structure& m);

}  // namespace fraglab

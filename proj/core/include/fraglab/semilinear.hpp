#pragma once

#include "fraglab/formula.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace fraglab {

using Vec = std::vector<Int>;

// L(offset; periods) = { offset + sum n_i p_i }
struct LinearSet {
    Vec offset;
    std::vector<Vec> periods;
    bool operator==(const LinearSet&) const = default;
};

struct SemilinearSet {
    std::size_t dim = 0;
    std::vector<LinearSet> components;
    bool operator==(const SemilinearSet&) const = default;

    static SemilinearSet full(std::size_t dim);
    static SemilinearSet empty(std::size_t dim) { return {dim, {}}; }
};

// solutions x in N^l of x A = c; A has l rows and m columns
struct EqSystem {
    std::vector<Vec> A;
    Vec c;
    std::size_t vars() const { return A.size(); }
    std::size_t equations() const { return c.size(); }
};

struct EqSolution {
    std::vector<Vec> offsets;  // B
    std::vector<Vec> periods;  // P
};

struct MemberWitness {
    std::size_t component = 0;
    std::vector<Int> multipliers;
};

struct LinearConstraint {
    Vec coeffs;
    Comparison cmp;
    Int delta = 0;
};

std::optional<MemberWitness> member_witness(const SemilinearSet& s, const Vec& u);
std::optional<std::vector<Int>> linear_member_witness(const LinearSet& s, const Vec& u);
bool member(const SemilinearSet& s, const Vec& u);

EqSolution solve_eq_system(const EqSystem& sys);
SemilinearSet to_semilinear(const EqSolution& sol, std::size_t dim);

bool satisfies(const LinearConstraint& c, const Vec& u);
SemilinearSet constraints_to_semilinear(std::size_t dim, const std::vector<LinearConstraint>& cs);

// keep the listed coordinates, in the given order
SemilinearSet project(const SemilinearSet& s, const std::vector<std::size_t>& keep);

// sort, dedupe, drop zero periods, drop periods generated by the others, drop covered offsets
LinearSet canonical(LinearSet s);
SemilinearSet canonical(SemilinearSet s);

Int norm_inf(const Vec& v);
Int matrix_norm(const EqSystem& sys);
Int offset_norm_bound(const EqSystem& sys);
Int period_norm_bound(const EqSystem& sys);

}  // namespace fraglab

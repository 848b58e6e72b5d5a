#pragma once

// random generators and brute-force oracles shared by the unit and acceptance tests

#include "fraglab/formula.hpp"
#include "fraglab/pml.hpp"
#include "fraglab/query.hpp"
#include "fraglab/semilinear.hpp"
#include "fraglab/structure.hpp"

#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace fraglab::testing {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive
Int uniform_int(Rng& rng, Int lo, Int hi);
bool coin(Rng& rng, double p = 0.5);

Structure random_structure(Rng& rng, std::size_t n, const Signature& sig, double density = 0.3);

// quantifier-free, free variables among x and y
Formula random_qf(Rng& rng, const Signature& sig, int depth);
// Presburger constraint anchored at x with |coeff| <= 2 and |delta| <= 3
Formula random_presburger(Rng& rng, const Signature& sig, std::size_t max_terms = 2);
// GF2_pres sentence with at most max_constraints Presburger constraints
Formula random_gf2pres_sentence(Rng& rng, const Signature& sig, int max_constraints = 2);
// local percentage formula with free variable x, possibly nested
Formula random_local_pct(Rng& rng, const Signature& sig, int depth);
Pml random_pml(Rng& rng, int depth, const std::vector<std::string>& props, const std::vector<std::string>& rels);

// every structure of size n over sig in a fixed order
void for_each_structure(std::size_t n, const Signature& sig, const std::function<void(const Structure&)>& fn);

// naive recursive semantics, no memoisation; degree atoms unsupported
bool naive_eval(const Structure& m, const Formula& f, std::optional<Element> x = {}, std::optional<Element> y = {});

// membership by search over period multipliers bounded by u
bool oracle_member(const SemilinearSet& s, const Vec& u);
// every member of s inside the box [0,bound]^dim, by closing each offset under the periods
std::set<Vec> oracle_members_in_box(const SemilinearSet& s, std::size_t dim, Int bound);
// shortest cycle via edge removal and BFS
std::optional<std::size_t> oracle_girth(const Structure& m);
// full enumeration of all assignments
bool oracle_hom_exists(const ConjunctiveQuery& q, const Structure& m);

}  // namespace fraglab::testing

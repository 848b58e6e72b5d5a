#pragma once

#include "fraglab/formula.hpp"
#include "fraglab/pml.hpp"
#include "fraglab/query.hpp"
#include "fraglab/semilinear.hpp"
#include "fraglab/shtp.hpp"
#include "fraglab/structure.hpp"

#include <string>
#include <string_view>

namespace fraglab {

struct ParseOptions {
    bool allow_reserved = false;  // accept predicate names starting with '@'
};

Formula parse_formula(std::string_view text, const Signature& sig, ParseOptions opt = {});
// predicates declared by their first use
Formula parse_formula(std::string_view text, ParseOptions opt = {});
Signature infer_signature(std::string_view text, ParseOptions opt = {});
std::string print_formula(const Formula& f);

Structure parse_structure(std::string_view json);
std::string print_structure(const Structure& m);

ConjunctiveQuery parse_query(std::string_view text);
std::string print_query(const ConjunctiveQuery& q);

ShtpSystem parse_shtp(std::string_view text);
std::string print_shtp(const ShtpSystem& e);
ShtpSolution parse_solution(std::string_view json);
std::string print_solution(const ShtpSolution& s);

SemilinearSet parse_semilinear(std::string_view json);
std::string print_semilinear(const SemilinearSet& s);
EqSystem parse_eq_system(std::string_view json);
std::string print_eq_system(const EqSystem& sys);
std::string print_eq_solution(const EqSolution& sol);

Pml parse_pml(std::string_view text);
std::string print_pml(const Pml& f);

}  // namespace fraglab

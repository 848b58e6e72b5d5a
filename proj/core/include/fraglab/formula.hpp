#pragma once

#include "fraglab/checked.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fraglab {

enum class Var : std::uint8_t { X = 0, Y = 1 };

inline Var other(Var v) { return v == Var::X ? Var::Y : Var::X; }
inline const char* var_name(Var v) { return v == Var::X ? "x" : "y"; }

enum class CmpOp : std::uint8_t { Eq, Ne, Le, Ge, Lt, Gt, ModEq, ModNe };

struct Comparison {
    CmpOp op = CmpOp::Eq;
    Int modulus = 0;  // only for ModEq / ModNe, always >= 2

    static Comparison eq() { return {CmpOp::Eq, 0}; }
    static Comparison ne() { return {CmpOp::Ne, 0}; }
    static Comparison le() { return {CmpOp::Le, 0}; }
    static Comparison ge() { return {CmpOp::Ge, 0}; }
    static Comparison lt() { return {CmpOp::Lt, 0}; }
    static Comparison gt() { return {CmpOp::Gt, 0}; }
    static Comparison mod_eq(Int d);
    static Comparison mod_ne(Int d);

    bool is_modular() const { return op == CmpOp::ModEq || op == CmpOp::ModNe; }
    bool operator==(const Comparison&) const = default;
};

bool cmp_holds(Comparison c, Int lhs, Int rhs);
Comparison negate_cmp(Comparison c);
std::string cmp_symbol(Comparison c);

// percentage in [0, 100], kept in lowest terms
struct Rational {
    Int num = 0;
    Int den = 1;
    Rational() = default;
    Rational(Int n, Int d = 1);
    bool operator==(const Rational&) const = default;
};

struct RoleRef {
    std::string pred;
    bool inverse = false;
    bool operator==(const RoleRef&) const = default;
    auto operator<=>(const RoleRef&) const = default;
};

class Signature {
public:
    Signature() = default;
    Signature(std::vector<std::string> unary, std::vector<std::string> binary);

    void add_unary(const std::string& name);
    void add_binary(const std::string& name);
    bool has_unary(const std::string& name) const;
    bool has_binary(const std::string& name) const;
    bool has(const std::string& name) const { return has_unary(name) || has_binary(name); }
    const std::vector<std::string>& unary() const { return unary_; }
    const std::vector<std::string>& binary() const { return binary_; }
    Signature merged(const Signature& other) const;
    // name not yet used, derived from base
    std::string fresh_name(const std::string& base) const;
    bool operator==(const Signature&) const = default;

private:
    std::vector<std::string> unary_;
    std::vector<std::string> binary_;
};

enum class Kind : std::uint8_t {
    Top,
    Unary,
    Binary,
    Equal,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Forall,
    Exists,
    GlobalPct,
    LocalPct,
    Presburger,
    CountingExists,
    DegreeAtom,
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct PresburgerTerm {
    Int coeff = 1;
    RoleRef role;
    Formula body;
};

struct SemilinearSet;

// degree-vector atom over a fixed list of binary predicates
struct DegreeSpec {
    std::vector<std::string> binaries;
    // optional grouping of 2-type indices (0-based, pattern = index+1); empty means identity
    std::vector<std::vector<std::uint32_t>> groups;
    bool is_set = false;
    std::vector<Int> coeffs;
    Comparison cmp;
    Int delta = 0;
    std::shared_ptr<const SemilinearSet> set;
};

struct Node {
    Kind kind = Kind::Top;
    std::string pred;       // Unary, Binary
    Var v1 = Var::X;        // atom argument, or bound variable of quantifiers
    Var v2 = Var::Y;        // second atom argument
    std::vector<Formula> kids;
    Comparison cmp;
    Rational pct;           // GlobalPct, LocalPct
    RoleRef role;           // LocalPct
    Int bound = 0;          // Presburger delta, CountingExists k
    std::vector<PresburgerTerm> terms;
    std::shared_ptr<const DegreeSpec> degree;
};

// builders
Formula top();
Formula bottom();  // (or)
Formula atom(const std::string& pred, Var v);
Formula atom(const std::string& pred, Var v, Var w);
Formula role_atom(const RoleRef& r, Var anchor, Var other);
Formula eq(Var v, Var w);
Formula neg(Formula f);
Formula conj(std::vector<Formula> fs);
Formula disj(std::vector<Formula> fs);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula forall(Var v, Formula body);
Formula exists(Var v, Formula body);
Formula global_pct(Comparison c, Rational q, Var v, Formula body);
Formula local_pct(Comparison c, Rational q, RoleRef role, Var v, Formula body);
Formula presburger(Var v, std::vector<PresburgerTerm> terms, Comparison c, Int delta);
Formula counting(Comparison c, Int k, Var v, Formula body);
Formula degree_atom(Var v, std::shared_ptr<const DegreeSpec> spec);

// smart variants that fold constants and flatten
Formula conj_s(std::vector<Formula> fs);
Formula disj_s(std::vector<Formula> fs);
Formula neg_s(Formula f);

bool is_top(const Formula& f);
bool is_bottom(const Formula& f);

bool structurally_equal(const Formula& a, const Formula& b);
std::size_t structural_hash(const Formula& f);

// rename every occurrence (free and bound) x <-> y
Formula swap_vars(const Formula& f);
// replace free occurrences of `from` by `to` (no capture handling beyond skipping rebinding)
Formula substitute(const Formula& f, Var from, Var to);
std::size_t node_count(const Formula& f);

struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return structural_hash(f); }
};
struct FormulaEq {
    bool operator()(const Formula& a, const Formula& b) const { return structurally_equal(a, b); }
};

}  // namespace fraglab

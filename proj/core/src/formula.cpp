#include "fraglab/formula.hpp"
#include "fraglab/semilinear.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace fraglab {

Comparison Comparison::mod_eq(Int d) {
    if (d < 2) throw ValidationError("modulus must be at least 2");
    return {CmpOp::ModEq, d};
}

Comparison Comparison::mod_ne(Int d) {
    if (d < 2) throw ValidationError("modulus must be at least 2");
    return {CmpOp::ModNe, d};
}

bool cmp_holds(Comparison c, Int lhs, Int rhs) {
    switch (c.op) {
        case CmpOp::Eq: return lhs == rhs;
        case CmpOp::Ne: return lhs != rhs;
        case CmpOp::Le: return lhs <= rhs;
        case CmpOp::Ge: return lhs >= rhs;
        case CmpOp::Lt: return lhs < rhs;
        case CmpOp::Gt: return lhs > rhs;
        case CmpOp::ModEq: return mod_floor(lhs, c.modulus) == mod_floor(rhs, c.modulus);
        case CmpOp::ModNe: return mod_floor(lhs, c.modulus) != mod_floor(rhs, c.modulus);
    }
    return false;
}

Comparison negate_cmp(Comparison c) {
    switch (c.op) {
        case CmpOp::Eq: return Comparison::ne();
        case CmpOp::Ne: return Comparison::eq();
        case CmpOp::Le: return Comparison::gt();
        case CmpOp::Ge: return Comparison::lt();
        case CmpOp::Lt: return Comparison::ge();
        case CmpOp::Gt: return Comparison::le();
        case CmpOp::ModEq: return {CmpOp::ModNe, c.modulus};
        case CmpOp::ModNe: return {CmpOp::ModEq, c.modulus};
    }
    return c;
}

std::string cmp_symbol(Comparison c) {
    switch (c.op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Le: return "<=";
        case CmpOp::Ge: return ">=";
        case CmpOp::Lt: return "<";
        case CmpOp::Gt: return ">";
        case CmpOp::ModEq: return "mod=" + std::to_string(c.modulus);
        case CmpOp::ModNe: return "mod!=" + std::to_string(c.modulus);
    }
    return "?";
}

Rational::Rational(Int n, Int d) {
    if (d <= 0) throw ValidationError("malformed rational: denominator must be positive");
    if (n < 0) throw ValidationError("percentage must be between 0 and 100");
    Int g = std::gcd(n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
    if (num > checked_mul(100, den)) throw ValidationError("percentage must be between 0 and 100");
}

Signature::Signature(std::vector<std::string> unary, std::vector<std::string> binary) {
    for (auto& u : unary) add_unary(u);
    for (auto& b : binary) add_binary(b);
}

void Signature::add_unary(const std::string& name) {
    if (has_binary(name)) throw ValidationError("predicate '" + name + "' declared as both unary and binary");
    if (!has_unary(name)) unary_.push_back(name);
}

void Signature::add_binary(const std::string& name) {
    if (has_unary(name)) throw ValidationError("predicate '" + name + "' declared as both unary and binary");
    if (!has_binary(name)) binary_.push_back(name);
}

bool Signature::has_unary(const std::string& name) const {
    return std::find(unary_.begin(), unary_.end(), name) != unary_.end();
}

bool Signature::has_binary(const std::string& name) const {
    return std::find(binary_.begin(), binary_.end(), name) != binary_.end();
}

Signature Signature::merged(const Signature& other) const {
    Signature s = *this;
    for (auto& u : other.unary_) s.add_unary(u);
    for (auto& b : other.binary_) s.add_binary(b);
    return s;
}

std::string Signature::fresh_name(const std::string& base) const {
    if (!has(base)) return base;
    for (int i = 1;; ++i) {
        std::string cand = base + std::to_string(i);
        if (!has(cand)) return cand;
    }
}

namespace {

std::shared_ptr<Node> mk(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
}

}  // namespace

Formula top() { return mk(Kind::Top); }

Formula bottom() { return mk(Kind::Or); }

Formula atom(const std::string& pred, Var v) {
    auto n = mk(Kind::Unary);
    n->pred = pred;
    n->v1 = v;
    return n;
}

Formula atom(const std::string& pred, Var v, Var w) {
    auto n = mk(Kind::Binary);
    n->pred = pred;
    n->v1 = v;
    n->v2 = w;
    return n;
}

Formula role_atom(const RoleRef& r, Var anchor, Var other_var) {
    return r.inverse ? atom(r.pred, other_var, anchor) : atom(r.pred, anchor, other_var);
}

Formula eq(Var v, Var w) {
    auto n = mk(Kind::Equal);
    n->v1 = v;
    n->v2 = w;
    return n;
}

Formula neg(Formula f) {
    auto n = mk(Kind::Not);
    n->kids = {std::move(f)};
    return n;
}

Formula conj(std::vector<Formula> fs) {
    auto n = mk(Kind::And);
    n->kids = std::move(fs);
    return n;
}

Formula disj(std::vector<Formula> fs) {
    auto n = mk(Kind::Or);
    n->kids = std::move(fs);
    return n;
}

Formula implies(Formula a, Formula b) {
    auto n = mk(Kind::Implies);
    n->kids = {std::move(a), std::move(b)};
    return n;
}

Formula iff(Formula a, Formula b) {
    auto n = mk(Kind::Iff);
    n->kids = {std::move(a), std::move(b)};
    return n;
}

Formula forall(Var v, Formula body) {
    auto n = mk(Kind::Forall);
    n->v1 = v;
    n->kids = {std::move(body)};
    return n;
}

Formula exists(Var v, Formula body) {
    auto n = mk(Kind::Exists);
    n->v1 = v;
    n->kids = {std::move(body)};
    return n;
}

Formula global_pct(Comparison c, Rational q, Var v, Formula body) {
    if (c.is_modular()) throw ValidationError("percentage quantifiers take =, !=, <, >, <= or >=");
    auto n = mk(Kind::GlobalPct);
    n->cmp = c;
    n->pct = q;
    n->v1 = v;
    n->kids = {std::move(body)};
    return n;
}

Formula local_pct(Comparison c, Rational q, RoleRef role, Var v, Formula body) {
    if (c.is_modular()) throw ValidationError("percentage quantifiers take =, !=, <, >, <= or >=");
    auto n = mk(Kind::LocalPct);
    n->cmp = c;
    n->pct = q;
    n->role = std::move(role);
    n->v1 = v;
    n->kids = {std::move(body)};
    return n;
}

Formula presburger(Var v, std::vector<PresburgerTerm> terms, Comparison c, Int delta) {
    if (terms.empty()) throw ValidationError("Presburger constraint needs at least one term");
    for (auto& t : terms)
        if (t.coeff == 0) throw ValidationError("Presburger coefficients must be nonzero");
    auto n = mk(Kind::Presburger);
    n->v1 = v;
    n->terms = std::move(terms);
    n->cmp = c;
    n->bound = delta;
    return n;
}

Formula counting(Comparison c, Int k, Var v, Formula body) {
    if (c.op != CmpOp::Eq && c.op != CmpOp::Le && c.op != CmpOp::Ge)
        throw ValidationError("counting quantifiers take =, <= or >=");
    if (k < 0) throw ValidationError("counting bound must be nonnegative");
    auto n = mk(Kind::CountingExists);
    n->cmp = c;
    n->bound = k;
    n->v1 = v;
    n->kids = {std::move(body)};
    return n;
}

Formula degree_atom(Var v, std::shared_ptr<const DegreeSpec> spec) {
    auto n = mk(Kind::DegreeAtom);
    n->v1 = v;
    n->degree = std::move(spec);
    return n;
}

bool is_top(const Formula& f) { return f->kind == Kind::Top || (f->kind == Kind::And && f->kids.empty()); }

bool is_bottom(const Formula& f) { return f->kind == Kind::Or && f->kids.empty(); }

Formula conj_s(std::vector<Formula> fs) {
    std::vector<Formula> out;
    for (auto& f : fs) {
        if (is_top(f)) continue;
        if (is_bottom(f)) return bottom();
        if (f->kind == Kind::And)
            for (auto& k : f->kids) out.push_back(k);
        else
            out.push_back(f);
    }
    if (out.empty()) return top();
    if (out.size() == 1) return out[0];
    return conj(std::move(out));
}

Formula disj_s(std::vector<Formula> fs) {
    std::vector<Formula> out;
    for (auto& f : fs) {
        if (is_bottom(f)) continue;
        if (is_top(f)) return top();
        if (f->kind == Kind::Or)
            for (auto& k : f->kids) out.push_back(k);
        else
            out.push_back(f);
    }
    if (out.empty()) return bottom();
    if (out.size() == 1) return out[0];
    return disj(std::move(out));
}

Formula neg_s(Formula f) {
    if (is_top(f)) return bottom();
    if (is_bottom(f)) return top();
    if (f->kind == Kind::Not) return f->kids[0];
    return neg(std::move(f));
}

namespace {

bool degree_equal(const DegreeSpec& a, const DegreeSpec& b) {
    if (a.binaries != b.binaries || a.groups != b.groups || a.is_set != b.is_set) return false;
    if (a.is_set) return *a.set == *b.set;
    return a.coeffs == b.coeffs && a.cmp == b.cmp && a.delta == b.delta;
}

}  // namespace

bool structurally_equal(const Formula& a, const Formula& b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Kind::Top: return true;
        case Kind::Unary: return a->pred == b->pred && a->v1 == b->v1;
        case Kind::Binary: return a->pred == b->pred && a->v1 == b->v1 && a->v2 == b->v2;
        case Kind::Equal: return a->v1 == b->v1 && a->v2 == b->v2;
        case Kind::DegreeAtom: return a->v1 == b->v1 && degree_equal(*a->degree, *b->degree);
        case Kind::Presburger:
            if (a->v1 != b->v1 || !(a->cmp == b->cmp) || a->bound != b->bound) return false;
            if (a->terms.size() != b->terms.size()) return false;
            for (std::size_t i = 0; i < a->terms.size(); ++i) {
                const auto& s = a->terms[i];
                const auto& t = b->terms[i];
                if (s.coeff != t.coeff || !(s.role == t.role) || !structurally_equal(s.body, t.body)) return false;
            }
            return true;
        default: break;
    }
    if (a->v1 != b->v1 || !(a->cmp == b->cmp) || !(a->pct == b->pct) || !(a->role == b->role) ||
        a->bound != b->bound || a->kids.size() != b->kids.size())
        return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!structurally_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

namespace {

void mix(std::size_t& h, std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); }

}  // namespace

std::size_t structural_hash(const Formula& f) {
    std::size_t h = static_cast<std::size_t>(f->kind) * 1315423911u;
    mix(h, std::hash<std::string>{}(f->pred));
    mix(h, static_cast<std::size_t>(f->v1) * 3 + static_cast<std::size_t>(f->v2));
    mix(h, static_cast<std::size_t>(f->cmp.op) + static_cast<std::size_t>(f->cmp.modulus) * 17);
    mix(h, static_cast<std::size_t>(f->bound));
    for (auto& k : f->kids) mix(h, structural_hash(k));
    for (auto& t : f->terms) {
        mix(h, static_cast<std::size_t>(t.coeff));
        mix(h, std::hash<std::string>{}(t.role.pred) + t.role.inverse);
        mix(h, structural_hash(t.body));
    }
    return h;
}

namespace {

Formula rebuild(const Formula& f, const std::function<Formula(const Formula&)>& rec,
                const std::function<Var(Var)>& vmap) {
    auto n = std::make_shared<Node>(*f);
    n->v1 = vmap(f->v1);
    n->v2 = vmap(f->v2);
    for (auto& k : n->kids) k = rec(k);
    for (auto& t : n->terms) t.body = rec(t.body);
    return n;
}

}  // namespace

Formula swap_vars(const Formula& f) {
    std::function<Formula(const Formula&)> rec = [&](const Formula& g) -> Formula {
        return rebuild(g, rec, [](Var v) { return other(v); });
    };
    return rec(f);
}

Formula substitute(const Formula& f, Var from, Var to) {
    if (from == to) return f;
    switch (f->kind) {
        case Kind::Top: return f;
        case Kind::Unary:
            return f->v1 == from ? atom(f->pred, to) : f;
        case Kind::Binary:
            return atom(f->pred, f->v1 == from ? to : f->v1, f->v2 == from ? to : f->v2);
        case Kind::Equal:
            return eq(f->v1 == from ? to : f->v1, f->v2 == from ? to : f->v2);
        case Kind::Forall:
        case Kind::Exists:
        case Kind::GlobalPct:
        case Kind::CountingExists:
            if (f->v1 == from) return f;  // rebound
            if (f->v1 == to) throw PreconditionError("substitution would capture a variable");
            break;
        case Kind::LocalPct:
        case Kind::Presburger:
            // anchor is other(v1); bound v1
            if (f->v1 == from) return f;
            if (f->v1 == to) throw PreconditionError("substitution would capture a variable");
            throw PreconditionError("cannot substitute the anchor of a counting constraint");
        case Kind::DegreeAtom:
            if (f->v1 == from) {
                auto n = std::make_shared<Node>(*f);
                n->v1 = to;
                return n;
            }
            return f;
        default: break;
    }
    auto n = std::make_shared<Node>(*f);
    for (auto& k : n->kids) k = substitute(k, from, to);
    return n;
}

std::size_t node_count(const Formula& f) {
    std::size_t c = 1;
    for (auto& k : f->kids) c += node_count(k);
    for (auto& t : f->terms) c += node_count(t.body);
    return c;
}

}  // namespace fraglab

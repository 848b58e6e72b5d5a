#include "fraglab/pml.hpp"

#include <algorithm>

namespace fraglab {

namespace {

Pml make(PmlNode n) { return std::make_shared<const PmlNode>(std::move(n)); }

}  // namespace

Pml pml_top() { return make({}); }

Pml pml_prop(const std::string& p) {
    PmlNode n;
    n.kind = PmlNode::Kind::Prop;
    n.prop = p;
    return make(std::move(n));
}

Pml pml_not(Pml f) {
    PmlNode n;
    n.kind = PmlNode::Kind::Not;
    n.kids = {std::move(f)};
    return make(std::move(n));
}

Pml pml_and(std::vector<Pml> fs) {
    PmlNode n;
    n.kind = PmlNode::Kind::And;
    n.kids = std::move(fs);
    return make(std::move(n));
}

Pml pml_or(std::vector<Pml> fs) {
    PmlNode n;
    n.kind = PmlNode::Kind::Or;
    n.kids = std::move(fs);
    return make(std::move(n));
}

Pml pml_count(std::vector<PmlTerm> terms, Comparison c, Int bound) {
    if (terms.empty()) throw ValidationError("count needs at least one term");
    for (auto& t : terms)
        if (t.coeff == 0) throw ValidationError("count coefficients must be nonzero");
    if (bound < 0) throw ValidationError("count bound must be nonnegative");
    if (c.op == CmpOp::Ne) throw ValidationError("count comparison must be one of <= < > = >= or a congruence");
    if (c.is_modular() && c.op != CmpOp::ModEq) throw ValidationError("only congruence (mod=) is allowed in counts");
    PmlNode n;
    n.kind = PmlNode::Kind::Count;
    n.terms = std::move(terms);
    n.cmp = c;
    n.bound = bound;
    return make(std::move(n));
}

bool pml_eval(const KripkeStructure& k, Element w, const Pml& f) {
    switch (f->kind) {
        case PmlNode::Kind::Top: return true;
        case PmlNode::Kind::Prop: return k.unary(f->prop, w);
        case PmlNode::Kind::Not: return !pml_eval(k, w, f->kids[0]);
        case PmlNode::Kind::And:
            return std::all_of(f->kids.begin(), f->kids.end(), [&](const Pml& g) { return pml_eval(k, w, g); });
        case PmlNode::Kind::Or:
            return std::any_of(f->kids.begin(), f->kids.end(), [&](const Pml& g) { return pml_eval(k, w, g); });
        case PmlNode::Kind::Count: {
            Int sum = 0;
            for (auto& t : f->terms) {
                auto r = k.binary_index(t.role.pred);
                if (!r) continue;
                Int c = 0;
                const auto& next = t.role.inverse ? k.predecessors(*r, w) : k.successors(*r, w);
                for (auto v : next)
                    if (pml_eval(k, v, t.body)) ++c;
                sum = checked_add(sum, checked_mul(t.coeff, c));
            }
            return cmp_holds(f->cmp, sum, f->bound);
        }
    }
    return false;
}

Formula pml_translate_at(const Pml& f, Var v) {
    switch (f->kind) {
        case PmlNode::Kind::Top: return top();
        case PmlNode::Kind::Prop: return atom(f->prop, v);
        case PmlNode::Kind::Not: return neg(pml_translate_at(f->kids[0], v));
        case PmlNode::Kind::And:
        case PmlNode::Kind::Or: {
            std::vector<Formula> ks;
            for (auto& k : f->kids) ks.push_back(pml_translate_at(k, v));
            return f->kind == PmlNode::Kind::And ? conj(std::move(ks)) : disj(std::move(ks));
        }
        case PmlNode::Kind::Count: {
            Var w = other(v);
            std::vector<PresburgerTerm> ts;
            for (auto& t : f->terms) ts.push_back({t.coeff, t.role, pml_translate_at(t.body, w)});
            return presburger(w, std::move(ts), f->cmp, f->bound);
        }
    }
    return top();
}

Formula pml_translate(const Pml& f) {
    return forall(Var::X, implies(eq(Var::X, Var::X), pml_translate_at(f, Var::X)));
}

namespace {

void collect(const Pml& f, Signature& sig) {
    if (f->kind == PmlNode::Kind::Prop && !sig.has_unary(f->prop)) sig.add_unary(f->prop);
    for (auto& k : f->kids) collect(k, sig);
    for (auto& t : f->terms) {
        if (!sig.has_binary(t.role.pred)) sig.add_binary(t.role.pred);
        collect(t.body, sig);
    }
}

}  // namespace

Signature pml_signature(const Pml& f) {
    Signature sig;
    collect(f, sig);
    return sig;
}

std::size_t pml_depth(const Pml& f) {
    std::size_t d = 0;
    for (auto& k : f->kids) d = std::max(d, pml_depth(k));
    for (auto& t : f->terms) d = std::max(d, pml_depth(t.body) + 1);
    return d;
}

}  // namespace fraglab

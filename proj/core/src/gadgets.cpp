#include "fraglab/gadgets.hpp"
#include "fraglab/fragment.hpp"

#include <set>

namespace fraglab {

namespace {

const Var X = Var::X, Y = Var::Y;

Formula rebuild(const Formula& f, std::vector<Formula> kids) {
    auto n = std::make_shared<Node>(*f);
    n->kids = std::move(kids);
    return n;
}

// bound: variables bound by enclosing quantifiers
Formula localize(const Formula& f, const std::string& u, std::set<Var> bound) {
    switch (f->kind) {
        case Kind::Top:
        case Kind::Unary:
        case Kind::Binary:
        case Kind::Equal: return f;
        case Kind::LocalPct:
        case Kind::Presburger:
        case Kind::CountingExists:
        case Kind::DegreeAtom: throw ValidationError("localize_global expects global percentages only");
        default: break;
    }
    if (f->kind == Kind::Forall || f->kind == Kind::Exists || f->kind == Kind::GlobalPct) {
        auto inner = bound;
        inner.insert(f->v1);
        Formula body = localize(f->kids[0], u, inner);
        if (f->kind != Kind::GlobalPct) return rebuild(f, {body});
        Formula lp = local_pct(f->cmp, f->pct, {u, false}, f->v1, body);
        Var anchor = other(f->v1);
        return bound.count(anchor) ? lp : forall(anchor, lp);
    }
    std::vector<Formula> ks;
    for (auto& k : f->kids) ks.push_back(localize(k, u, bound));
    return rebuild(f, std::move(ks));
}

}  // namespace

Localized localize_global(const Formula& f, const Signature& sig) {
    Signature all = sig.merged(signature_of(f));
    std::string u = all.has("U") ? all.fresh_name("U") : "U";
    Formula body = localize(f, u, {});
    return {conj({forall(X, forall(Y, atom(u, X, Y))), body}), u};
}

UniversalGadget gf_universal_gadget(const Signature& sig) {
    std::string u = sig.has("U") ? sig.fresh_name("U") : "U";
    Signature s2 = sig;
    s2.add_binary(u);
    std::string h = s2.has("H") ? s2.fresh_name("H") : "H";
    auto half = [](Var v, Formula b) { return global_pct(Comparison::eq(), Rational(50), v, std::move(b)); };
    Formula labelling = half(X, atom(h, X));
    Formula body = conj({half(Y, conj({atom(u, X, Y), atom(h, Y)})), half(Y, conj({atom(u, X, Y), neg(atom(h, Y))}))});
    return {conj({labelling, forall(X, implies(eq(X, X), body))}), u, h};
}

Formula func_gadget() {
    auto F = atom("F", X, Y), R = atom("R", X, Y), H = atom("H", X, Y);
    auto half_r = [](Formula b) { return local_pct(Comparison::eq(), Rational(50), {"R", false}, Y, std::move(b)); };
    return forall(X, implies(eq(X, X), conj({forall(Y, implies(F, R)), half_r(H),
                                             forall(Y, implies(F, disj({neg(H), eq(X, Y)}))),
                                             half_r(disj({conj({H, neg(eq(X, Y))}), F}))})));
}

bool is_functional(const Structure& m, const std::string& f) {
    auto r = m.binary_index(f);
    if (!r) return true;
    for (Element a = 0; a < m.size(); ++a)
        if (m.successors(*r, a).size() > 1) return false;
    return true;
}

Structure func_extend(const Structure& m) {
    if (!is_functional(m, "F")) throw PreconditionError("F is not functional");
    if (m.unary_index("R") || m.unary_index("H")) throw PreconditionError("R and H must be binary");
    StructureBuilder b(m);
    b.declare_binary("F");
    b.declare_binary("R");
    b.declare_binary("H");
    for (Element a = 0; a < m.size(); ++a)
        for (Element c = 0; c < m.size(); ++c) {
            b.set_binary("R", a, c, false);
            b.set_binary("H", a, c, false);
        }
    auto fi = m.binary_index("F");
    for (Element a = 0; fi && a < m.size(); ++a) {
        const auto& succ = m.successors(*fi, a);
        if (succ.empty()) continue;
        Element t = succ.front();
        if (t == a) {
            if (m.size() < 2) throw PreconditionError("a self-loop F(a,a) needs a second element");
            t = a == 0 ? 1 : 0;
        }
        b.set_binary("R", a, t);
        b.set_binary("R", a, a);
        b.set_binary("H", a, a);
    }
    return b.build();
}

}  // namespace fraglab

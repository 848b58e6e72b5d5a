#include "fraglab/normal_form.hpp"
#include "fraglab/eval.hpp"
#include "fraglab/fragment.hpp"

#include <unordered_map>

namespace fraglab {

namespace {

enum Polarity : unsigned { kPos = 1, kNeg = 2, kBoth = 3 };

bool mentions_y_side(const Formula& f) {
    if (f->kind == Kind::Unary) return f->v1 == Var::Y;
    if (f->kind == Kind::Binary) return f->v1 == Var::Y && f->v2 == Var::Y;
    for (auto& k : f->kids)
        if (mentions_y_side(k)) return true;
    return false;
}

bool is_xy_atom(const Formula& g) {
    return (g->kind == Kind::Binary || g->kind == Kind::Equal) && g->v1 != g->v2;
}

RoleRef role_of(const Formula& g) { return {g->pred, g->v1 == Var::Y}; }

class Normalizer {
public:
    explicit Normalizer(const Signature& sig) {
        nf_.source_sig = sig;
        nf_.sig = sig;
    }

    NormalForm run(const Formula& f) {
        std::vector<Formula> todo{f};
        while (!todo.empty()) {
            Formula c = todo.back();
            todo.pop_back();
            top_level(c, todo);
        }
        nf_.gamma = conj_s(gamma_);
        return std::move(nf_);
    }

private:
    void top_level(const Formula& c, std::vector<Formula>& todo) {
        switch (c->kind) {
            case Kind::Top: return;
            case Kind::And:
                for (auto it = c->kids.rbegin(); it != c->kids.rend(); ++it) todo.push_back(*it);
                return;
            case Kind::Or:
                if (c->kids.empty()) {
                    gamma_.push_back(bottom());
                    return;
                }
                break;
            case Kind::Forall: {
                Formula body = c->v1 == Var::X ? c->kids[0] : swap_vars(c->kids[0]);
                gamma_.push_back(rename(body, kPos));
                return;
            }
            case Kind::Exists: {
                Formula body = c->v1 == Var::X ? c->kids[0] : swap_vars(c->kids[0]);
                std::string t = fresh(1), w = fresh(2);
                define(t, 1, body);
                define(w, 2, swap_vars(body));
                gamma_.push_back(disj_s({neg(atom(t, Var::X)), rename(body, kPos)}));
                nf_.pairs.push_back({atom(w, Var::X, Var::Y), atom(t, Var::Y)});
                NfTerm term{1, {w, false}, top(), w, top()};
                nf_.constraints.push_back({top(), {term}, Comparison::ge(), 1});
                return;
            }
            case Kind::Not: {
                const Formula& k = c->kids[0];
                if (k->kind == Kind::Not) {
                    todo.push_back(k->kids[0]);
                    return;
                }
                if (k->kind == Kind::Top) {
                    gamma_.push_back(bottom());
                    return;
                }
                if (k->kind == Kind::Forall || k->kind == Kind::Exists) {
                    todo.push_back(negate_quantifier(k));
                    return;
                }
                if (k->kind == Kind::Or) {
                    std::vector<Formula> ks;
                    for (auto& g : k->kids) ks.push_back(neg(g));
                    todo.push_back(conj(ks));
                    return;
                }
                break;
            }
            default: break;
        }
        throw ValidationError("normalize expects a conjunction of quantified sentences");
    }

    // not Qv body, one level down
    static Formula negate_quantifier(const Formula& q) {
        const Formula& b = q->kids[0];
        if (q->kind == Kind::Forall) {
            if (b->kind == Kind::Implies) return exists(q->v1, conj({b->kids[0], neg(b->kids[1])}));
            return exists(q->v1, neg(b));
        }
        if (b->kind == Kind::And && b->kids.size() >= 1) {
            std::vector<Formula> rest(b->kids.begin() + 1, b->kids.end());
            return forall(q->v1, implies(b->kids[0], neg(conj(rest))));
        }
        return forall(q->v1, neg(b));
    }

    std::string fresh(int arity) {
        std::string name = nf_.sig.fresh_name(arity == 1 ? "@u" : "@e");
        if (arity == 1)
            nf_.sig.add_unary(name);
        else
            nf_.sig.add_binary(name);
        nf_.aux_predicates.push_back(name);
        return name;
    }

    void define(const std::string& name, int arity, Formula f) {
        nf_.definitions.push_back({name, arity, std::move(f)});
    }

    // quantifier-free replacement of f (free variables within {x, y})
    Formula rename(const Formula& f, unsigned pol) {
        switch (f->kind) {
            case Kind::Top:
            case Kind::Unary:
            case Kind::Binary:
            case Kind::Equal: return f;
            case Kind::Not: return neg(rename(f->kids[0], flip(pol)));
            case Kind::And:
            case Kind::Or: {
                std::vector<Formula> ks;
                for (auto& k : f->kids) ks.push_back(rename(k, pol));
                return f->kind == Kind::And ? conj(ks) : disj(ks);
            }
            case Kind::Implies: return implies(rename(f->kids[0], flip(pol)), rename(f->kids[1], pol));
            case Kind::Iff: return iff(rename(f->kids[0], kBoth), rename(f->kids[1], kBoth));
            case Kind::Forall:
            case Kind::Exists:
            case Kind::Presburger: break;
            case Kind::GlobalPct: throw ValidationError("normalize: global percentage quantifiers are not in GF2_pres");
            case Kind::LocalPct: throw ValidationError("normalize: unlowered local percentage quantifier");
            case Kind::CountingExists: throw ValidationError("normalize: counting quantifiers are not in GF2_pres");
            case Kind::DegreeAtom: throw ValidationError("normalize: degree atoms are not in GF2_pres");
        }
        auto fv = free_vars(f);
        if (fv.empty()) throw ValidationError("normalize: nested sentences are not supported");
        Var v = *fv.begin();
        Formula q = v == Var::X ? f : swap_vars(f);
        auto it = names_.find(q);
        std::string u;
        unsigned have = 0;
        if (it != names_.end()) {
            u = it->second.first;
            have = it->second.second;
        } else {
            u = fresh(1);
            define(u, 1, q);
        }
        unsigned missing = pol & ~have;
        names_[q] = {u, have | pol};
        if (missing & kPos) axiom(atom(u, Var::X), q, false);
        if (missing & kNeg) axiom(neg(atom(u, Var::X)), q, true);
        return atom(u, v);
    }

    static unsigned flip(unsigned pol) { return ((pol & kPos) ? kNeg : 0u) | ((pol & kNeg) ? kPos : 0u); }

    // forall x  lit(x) -> [not] q(x);  q has free variable x only
    void axiom(const Formula& lit, const Formula& q, bool negated) {
        if (q->kind == Kind::Presburger) {
            NfConstraint c{lit, {}, negated ? negate_cmp(q->cmp) : q->cmp, q->bound};
            for (auto& t : q->terms) add_term(c, t.coeff, t.role, t.body, rename(t.body, kBoth));
            nf_.constraints.push_back(std::move(c));
            return;
        }
        const Formula& body = q->kids[0];
        if (!free_vars(body).count(Var::Y)) {
            Formula b = rename(body, negated ? kNeg : kPos);
            gamma_.push_back(disj_s({neg_s(lit), negated ? neg_s(b) : b}));
            return;
        }
        bool univ = (q->kind == Kind::Forall) != negated;
        Formula guard, rest;
        if (q->kind == Kind::Forall) {
            if (body->kind != Kind::Implies) throw ValidationError("normalize: unguarded universal");
            guard = body->kids[0];
            rest = negated ? neg(body->kids[1]) : body->kids[1];
        } else {
            if (body->kind == Kind::And && !body->kids.empty()) {
                guard = body->kids[0];
                std::vector<Formula> r(body->kids.begin() + 1, body->kids.end());
                rest = conj(r);
            } else {
                guard = body;
                rest = top();
            }
            if (negated) rest = neg(rest);
        }
        if (!is_xy_atom(guard)) throw ValidationError("normalize: unsupported guard");
        Formula r = rename(rest, kPos);
        if (guard->kind == Kind::Equal) {
            Formula d = substitute(r, Var::Y, Var::X);
            gamma_.push_back(disj_s({neg_s(lit), d}));
            return;
        }
        if (univ) {
            nf_.pairs.push_back({guard, is_top(lit) ? r : implies(lit, r)});
            return;
        }
        NfConstraint c{lit, {}, Comparison::ge(), 1};
        add_term(c, 1, role_of(guard), rest, r);
        nf_.constraints.push_back(std::move(c));
    }

    // orig: the counted formula over the input signature; psi: its renamed quantifier-free form
    void add_term(NfConstraint& c, Int coeff, const RoleRef& role, const Formula& orig, const Formula& psi) {
        Formula diag = substitute(psi, Var::Y, Var::X);
        if (!mentions_y_side(psi)) {
            c.terms.push_back({coeff, role, psi, role.pred, diag});
            return;
        }
        std::string e = fresh(2);
        Formula r = role_atom(role, Var::X, Var::Y);
        Formula off = neg(eq(Var::X, Var::Y));
        define(e, 2, conj({r, off, orig}));
        nf_.pairs.push_back({atom(e, Var::X, Var::Y), conj({off, r, psi})});
        nf_.pairs.push_back({r, disj({eq(Var::X, Var::Y), neg(psi), atom(e, Var::X, Var::Y)})});
        gamma_.push_back(neg(atom(e, Var::X, Var::X)));
        c.terms.push_back({coeff, {e, false}, top(), role.pred, diag});
    }

    NormalForm nf_;
    std::vector<Formula> gamma_;
    std::unordered_map<Formula, std::pair<std::string, unsigned>, FormulaHash, FormulaEq> names_;
};

}  // namespace

NormalForm normalize(const Formula& f, const Signature& sig) {
    if (!is_sentence(f)) throw PreconditionError("normalize expects a sentence");
    auto rep = validate(f, sig);
    if (!rep.is_gf2pres) {
        std::string why = rep.violations.empty() ? "" : ": " + rep.violations.front().reason;
        throw ValidationError("normalize expects a GF2_pres sentence" + why);
    }
    Normalizer n(sig);
    return n.run(lower_percentage(f));
}

Structure expand_model(const NormalForm& nf, const Structure& m) {
    Structure src = with_signature(m, nf.source_sig);
    StructureBuilder b(src.size(), nf.sig);
    for (auto& p : src.unary_names())
        for (auto a : src.members(p)) b.set_unary(p, a);
    for (auto& r : src.binary_names())
        for (auto [a, c] : src.tuples(r)) b.set_binary(r, a, c);
    Evaluator ev(src);
    for (auto& d : nf.definitions) {
        for (Element a = 0; a < src.size(); ++a) {
            if (d.arity == 1) {
                if (ev.eval(d.formula, Assignment::of(a))) b.set_unary(d.name, a);
                continue;
            }
            for (Element c = 0; c < src.size(); ++c)
                if (ev.eval(d.formula, Assignment::of(a, c))) b.set_binary(d.name, a, c);
        }
    }
    return b.build();
}

Formula to_formula(const NormalForm& nf) {
    const Formula guard_x = eq(Var::X, Var::X);
    std::vector<Formula> parts{forall(Var::X, implies(guard_x, nf.gamma))};
    for (auto& p : nf.pairs) parts.push_back(forall(Var::X, forall(Var::Y, implies(p.guard, p.alpha))));
    for (auto& c : nf.constraints) {
        std::vector<PresburgerTerm> terms;
        for (auto& t : c.terms) {
            terms.push_back({t.coeff, t.role, conj({neg(eq(Var::X, Var::Y)), t.filter})});
            if (!is_bottom(t.diag))
                terms.push_back({t.coeff, {t.diag_role, false}, conj({eq(Var::X, Var::Y), t.diag})});
        }
        Formula body = presburger(Var::Y, std::move(terms), c.cmp, c.delta);
        parts.push_back(forall(Var::X, implies(guard_x, is_top(c.guard) ? body : implies(c.guard, body))));
    }
    return conj(std::move(parts));
}

}  // namespace fraglab

#include "fraglab/fragment.hpp"

#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace fraglab {

namespace {

// bit 0: x free, bit 1: y free; formulas are DAGs, so results are cached per node
using FreeCache = std::unordered_map<const Node*, unsigned>;

unsigned var_bit(Var v) { return v == Var::X ? 1u : 2u; }

unsigned free_mask(const Formula& f, FreeCache& cache) {
    auto it = cache.find(f.get());
    if (it != cache.end()) return it->second;
    unsigned out = 0;
    switch (f->kind) {
        case Kind::Top: break;
        case Kind::Unary:
        case Kind::DegreeAtom: out = var_bit(f->v1); break;
        case Kind::Binary:
        case Kind::Equal: out = var_bit(f->v1) | var_bit(f->v2); break;
        case Kind::Forall:
        case Kind::Exists:
        case Kind::GlobalPct:
        case Kind::CountingExists: out = free_mask(f->kids[0], cache) & ~var_bit(f->v1); break;
        case Kind::LocalPct:
        case Kind::Presburger: {
            for (auto& k : f->kids) out |= free_mask(k, cache);
            for (auto& t : f->terms) out |= free_mask(t.body, cache);
            out = (out & ~var_bit(f->v1)) | var_bit(other(f->v1));  // the anchor is always free
            break;
        }
        default:
            for (auto& k : f->kids) out |= free_mask(k, cache);
    }
    cache.emplace(f.get(), out);
    return out;
}

std::set<Var> mask_vars(unsigned m) {
    std::set<Var> out;
    if (m & 1u) out.insert(Var::X);
    if (m & 2u) out.insert(Var::Y);
    return out;
}

std::set<Var> atom_vars(const Formula& g) {
    switch (g->kind) {
        case Kind::Unary: return {g->v1};
        case Kind::Binary:
        case Kind::Equal: return {g->v1, g->v2};
        default: return {};
    }
}

bool is_guard_atom(const Formula& g) {
    return g->kind == Kind::Unary || g->kind == Kind::Binary || g->kind == Kind::Equal;
}

bool subset(const std::set<Var>& a, const std::set<Var>& b) {
    for (auto v : a)
        if (!b.count(v)) return false;
    return true;
}

struct Validator {
    const Signature& sig;
    FragmentReport rep;
    FreeCache free_cache;
    std::unordered_set<const Node*> done;

    std::set<Var> free_of(const Formula& f) { return mask_vars(free_mask(f, free_cache)); }

    void violate(const std::string& path, const std::string& reason, bool fo2, bool gf2, bool pres, bool pct,
                 bool c2) {
        if (fo2) rep.is_fo2 = false;
        if (gf2) rep.is_gf2 = false;
        if (pres) rep.is_gf2pres = false;
        if (pct) rep.is_fo2_pct = false;
        if (c2) rep.is_c2 = false;
        rep.violations.push_back({path, reason});
    }

    static std::string child(const std::string& p, std::size_t i) {
        return p.empty() ? std::to_string(i) : p + "." + std::to_string(i);
    }

    void check_pred(const std::string& name, int arity) {
        if (arity == 1) {
            if (sig.has_binary(name))
                throw ValidationError("predicate '" + name + "' used with arity 1 but declared binary");
            if (!sig.has_unary(name)) throw ValidationError("undeclared predicate '" + name + "'");
        } else {
            if (sig.has_unary(name))
                throw ValidationError("predicate '" + name + "' used with arity 2 but declared unary");
            if (!sig.has_binary(name)) throw ValidationError("undeclared predicate '" + name + "'");
        }
    }

    // returns the guarded remainder if `body` has the shape required under a universal
    bool universal_guarded(const Formula& body, std::vector<Formula>& rest) {
        if (body->kind == Kind::Implies && is_guard_atom(body->kids[0])) {
            if (subset(free_of(body->kids[1]), atom_vars(body->kids[0]))) {
                rest = {body->kids[1]};
                return true;
            }
        }
        return false;
    }

    bool existential_guarded(const Formula& body, std::vector<Formula>& rest) {
        if (is_guard_atom(body)) {
            rest = {};
            return true;
        }
        if (body->kind == Kind::And && !body->kids.empty() && is_guard_atom(body->kids[0])) {
            auto gv = atom_vars(body->kids[0]);
            for (std::size_t i = 1; i < body->kids.size(); ++i)
                if (!subset(free_of(body->kids[i]), gv)) return false;
            rest.assign(body->kids.begin() + 1, body->kids.end());
            return true;
        }
        return false;
    }

    void walk(const Formula& f, const std::string& path) {
        // a shared subformula is reported at its first path only
        if (!done.insert(f.get()).second) return;
        switch (f->kind) {
            case Kind::Top:
            case Kind::Equal: return;
            case Kind::Unary: check_pred(f->pred, 1); return;
            case Kind::Binary: check_pred(f->pred, 2); return;
            case Kind::DegreeAtom:
                for (auto& b : f->degree->binaries) check_pred(b, 2);
                violate(path, "degree atom", true, true, true, true, true);
                return;
            case Kind::Not:
            case Kind::And:
            case Kind::Or:
            case Kind::Implies:
            case Kind::Iff:
                for (std::size_t i = 0; i < f->kids.size(); ++i) walk(f->kids[i], child(path, i));
                return;
            case Kind::Forall:
            case Kind::Exists: {
                const bool univ = f->kind == Kind::Forall;
                Formula body = f->kids[0];
                std::string bpath = child(path, 0);
                // two-variable block: Qx Qy (guard ...)
                if (body->kind == f->kind && body->v1 != f->v1) {
                    body = body->kids[0];
                    bpath = child(bpath, 0);
                }
                std::vector<Formula> rest;
                bool ok = univ ? universal_guarded(body, rest) : existential_guarded(body, rest);
                if (ok) {
                    walk(body->kids.empty() ? body : body->kids[0], child(bpath, 0));
                    if (univ) {
                        walk(rest[0], child(bpath, 1));
                    } else {
                        for (std::size_t i = 0; i < rest.size(); ++i) walk(rest[i], child(bpath, i + 1));
                    }
                } else {
                    violate(path, univ ? "unguarded universal" : "unguarded existential", false, true, true, false,
                            false);
                    walk(body, bpath);
                }
                return;
            }
            case Kind::GlobalPct:
                violate(path, "global percentage quantifier", true, true, true, false, true);
                walk(f->kids[0], child(path, 0));
                return;
            case Kind::LocalPct:
                check_pred(f->role.pred, 2);
                violate(path, "local percentage quantifier", true, true, false, false, true);
                walk(f->kids[0], child(path, 0));
                return;
            case Kind::Presburger:
                violate(path, "Presburger constraint", true, true, false, true, true);
                for (std::size_t i = 0; i < f->terms.size(); ++i) {
                    check_pred(f->terms[i].role.pred, 2);
                    walk(f->terms[i].body, child(path, i));
                }
                return;
            case Kind::CountingExists:
                violate(path, "counting quantifier", true, true, true, true, false);
                walk(f->kids[0], child(path, 0));
                return;
        }
    }
};

}  // namespace

std::set<Var> free_vars(const Formula& f) {
    FreeCache cache;
    return mask_vars(free_mask(f, cache));
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

bool is_quantifier_free(const Formula& f) {
    switch (f->kind) {
        case Kind::Top:
        case Kind::Unary:
        case Kind::Binary:
        case Kind::Equal: return true;
        case Kind::Not:
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
        case Kind::Iff:
            for (auto& k : f->kids)
                if (!is_quantifier_free(k)) return false;
            return true;
        default: return false;
    }
}

namespace {

void collect_preds(const Formula& f, Signature& s, std::unordered_set<const Node*>& seen) {
    if (!seen.insert(f.get()).second) return;
    if (f->kind == Kind::Unary) s.add_unary(f->pred);
    if (f->kind == Kind::Binary) s.add_binary(f->pred);
    if (f->kind == Kind::LocalPct) s.add_binary(f->role.pred);
    if (f->kind == Kind::DegreeAtom)
        for (auto& b : f->degree->binaries) s.add_binary(b);
    for (auto& t : f->terms) {
        s.add_binary(t.role.pred);
        collect_preds(t.body, s, seen);
    }
    for (auto& k : f->kids) collect_preds(k, s, seen);
}

}  // namespace

Signature signature_of(const Formula& f) {
    Signature s;
    std::unordered_set<const Node*> seen;
    collect_preds(f, s, seen);
    return s;
}

std::set<std::string> predicates(const Formula& f) {
    auto s = signature_of(f);
    std::set<std::string> out(s.unary().begin(), s.unary().end());
    out.insert(s.binary().begin(), s.binary().end());
    return out;
}

FragmentReport validate(const Formula& f, const Signature& sig) {
    Validator v{sig, {}, {}, {}};
    v.walk(f, "");
    return v.rep;
}

namespace {

Formula lower_uncached(const Formula& f, std::unordered_map<const Node*, Formula>& memo);

Formula lower(const Formula& f, std::unordered_map<const Node*, Formula>& memo) {
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    Formula out = lower_uncached(f, memo);
    memo.emplace(f.get(), out);
    return out;
}

Formula lower_uncached(const Formula& f, std::unordered_map<const Node*, Formula>& memo) {
    switch (f->kind) {
        case Kind::Top:
        case Kind::Unary:
        case Kind::Binary:
        case Kind::Equal:
        case Kind::DegreeAtom: return f;
        case Kind::GlobalPct: throw ValidationError("global percentage has no local lowering");
        case Kind::LocalPct: {
            Int a = checked_mul(100, f->pct.den);
            Int b = f->pct.num;
            Int g = std::gcd(a, b);
            a /= g;
            b /= g;
            std::vector<PresburgerTerm> terms{{a, f->role, lower(f->kids[0], memo)}};
            if (b != 0) terms.push_back({-b, f->role, top()});
            return presburger(f->v1, std::move(terms), f->cmp, 0);
        }
        default: break;
    }
    auto n = std::make_shared<Node>(*f);
    for (auto& k : n->kids) k = lower(k, memo);
    for (auto& t : n->terms) t.body = lower(t.body, memo);
    return n;
}

}  // namespace

Formula lower_percentage(const Formula& f) {
    std::unordered_map<const Node*, Formula> memo;
    return lower(f, memo);
}

namespace {

// negation normal form, cached per (node, polarity)
struct Nnf {
    std::map<std::pair<const Node*, bool>, Formula> memo;

    Formula kids(const Formula& f, bool negate) {
        auto n = std::make_shared<Node>(*f);
        for (auto& k : n->kids) k = nnf(k, negate);
        for (auto& t : n->terms) t.body = nnf(t.body, false);
        return n;
    }

    Formula nnf(const Formula& f, bool negate) {
        auto key = std::make_pair(f.get(), negate);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Formula out = step(f, negate);
        memo.emplace(key, out);
        return out;
    }

    Formula step(const Formula& f, bool negate) {
        switch (f->kind) {
            case Kind::Top:
            case Kind::Unary:
            case Kind::Binary:
            case Kind::Equal:
            case Kind::DegreeAtom: return negate ? neg(f) : f;
            case Kind::Not: return nnf(f->kids[0], !negate);
            case Kind::And:
            case Kind::Or: {
                std::vector<Formula> ks;
                for (auto& k : f->kids) ks.push_back(nnf(k, negate));
                bool conj_out = (f->kind == Kind::And) != negate;
                return conj_out ? conj(std::move(ks)) : disj(std::move(ks));
            }
            case Kind::Implies:
                if (negate) return conj({nnf(f->kids[0], false), nnf(f->kids[1], true)});
                return disj({nnf(f->kids[0], true), nnf(f->kids[1], false)});
            case Kind::Iff: return iff(nnf(f->kids[0], false), nnf(f->kids[1], negate));
            case Kind::Forall: {
                if (!negate) return forall(f->v1, nnf(f->kids[0], false));
                const auto& b = f->kids[0];
                if (b->kind == Kind::Implies) return exists(f->v1, conj({nnf(b->kids[0], false), nnf(b->kids[1], true)}));
                return exists(f->v1, nnf(b, true));
            }
            case Kind::Exists: {
                if (!negate) return exists(f->v1, nnf(f->kids[0], false));
                const auto& b = f->kids[0];
                if (b->kind == Kind::And && b->kids.size() >= 2) {
                    std::vector<Formula> rest(b->kids.begin() + 1, b->kids.end());
                    Formula r = rest.size() == 1 ? rest[0] : conj(rest);
                    return forall(f->v1, implies(nnf(b->kids[0], false), nnf(r, true)));
                }
                return forall(f->v1, nnf(b, true));
            }
            case Kind::GlobalPct:
            case Kind::LocalPct:
            case Kind::Presburger: {
                auto n = std::static_pointer_cast<const Node>(kids(f, false));
                if (!negate) return n;
                auto m = std::make_shared<Node>(*n);
                m->cmp = negate_cmp(f->cmp);
                return m;
            }
            case Kind::CountingExists: {
                Formula body = nnf(f->kids[0], false);
                if (!negate) return counting(f->cmp, f->bound, f->v1, body);
                Int k = f->bound;
                switch (f->cmp.op) {
                    case CmpOp::Ge: return k == 0 ? bottom() : counting(Comparison::le(), k - 1, f->v1, body);
                    case CmpOp::Le: return counting(Comparison::ge(), k + 1, f->v1, body);
                    default: {
                        std::vector<Formula> alts;
                        if (k > 0) alts.push_back(counting(Comparison::le(), k - 1, f->v1, body));
                        alts.push_back(counting(Comparison::ge(), k + 1, f->v1, body));
                        return alts.size() == 1 ? alts[0] : disj(alts);
                    }
                }
            }
        }
        return f;
    }
};

}  // namespace

Formula push_negation(const Formula& f) { return Nnf{}.nnf(f, false); }

}  // namespace fraglab

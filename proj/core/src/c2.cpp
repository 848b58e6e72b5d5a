#include "fraglab/c2.hpp"
#include "fraglab/eval.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>

namespace fraglab {

namespace {

// values of the atoms a quantifier-free formula can see from x (and across the pair x,y)
struct LocalView {
    const DegreeConstraintSystem* dcs = nullptr;
    const std::vector<bool>* profile = nullptr;
    std::uint64_t type = 0;  // 2-type bits over dcs->binaries; y != x assumed when pair is set
    bool pair = false;
};

bool atom_value(const LocalView& v, const ProfileAtom& a) {
    const auto& atoms = v.dcs->atoms;
    auto it = std::find(atoms.begin(), atoms.end(), a);
    if (it == atoms.end()) throw ValidationError("internal: atom '" + a.pred + "' is not a profile atom");
    return (*v.profile)[static_cast<std::size_t>(it - atoms.begin())];
}

bool qf_eval(const Formula& f, const LocalView& v) {
    switch (f->kind) {
        case Kind::Top: return true;
        case Kind::Unary:
            if (f->v1 == Var::Y) throw ValidationError("internal: y-side atom in a degree filter");
            return atom_value(v, {false, f->pred});
        case Kind::Binary: {
            if (f->v1 == f->v2) {
                if (f->v1 == Var::Y) throw ValidationError("internal: y-side atom in a degree filter");
                return atom_value(v, {true, f->pred});
            }
            const auto& bs = v.dcs->binaries;
            auto i = static_cast<std::size_t>(std::find(bs.begin(), bs.end(), f->pred) - bs.begin());
            if (i == bs.size()) return false;
            unsigned bit = f->v1 == Var::X ? 2 * i : 2 * i + 1;
            return (v.type >> bit) & 1u;
        }
        case Kind::Equal: return f->v1 == f->v2 || !v.pair;
        case Kind::Not: return !qf_eval(f->kids[0], v);
        case Kind::And:
            for (auto& k : f->kids)
                if (!qf_eval(k, v)) return false;
            return true;
        case Kind::Or:
            for (auto& k : f->kids)
                if (qf_eval(k, v)) return true;
            return false;
        case Kind::Implies: return !qf_eval(f->kids[0], v) || qf_eval(f->kids[1], v);
        case Kind::Iff: return qf_eval(f->kids[0], v) == qf_eval(f->kids[1], v);
        default: throw ValidationError("internal: quantified formula in a degree filter");
    }
}

void collect_x_atoms(const Formula& f, std::vector<ProfileAtom>& out) {
    if (f->kind == Kind::Unary && f->v1 == Var::X) out.push_back({false, f->pred});
    if (f->kind == Kind::Binary && f->v1 == Var::X && f->v2 == Var::X) out.push_back({true, f->pred});
    for (auto& k : f->kids) collect_x_atoms(k, out);
}

void collect_pair_binaries(const Formula& f, std::vector<std::string>& out) {
    if (f->kind == Kind::Binary && f->v1 != f->v2) out.push_back(f->pred);
    for (auto& k : f->kids) collect_pair_binaries(k, out);
}

// gamma restricted to profile p still satisfiable by some 1-type
bool gamma_allows(const Formula& gamma, const DegreeConstraintSystem& dcs, const std::vector<bool>& values) {
    std::vector<ProfileAtom> atoms;
    collect_x_atoms(gamma, atoms);
    std::vector<ProfileAtom> extra;
    for (auto& a : atoms)
        if (std::find(dcs.atoms.begin(), dcs.atoms.end(), a) == dcs.atoms.end() &&
            std::find(extra.begin(), extra.end(), a) == extra.end())
            extra.push_back(a);
    if (extra.size() > 16) return true;
    DegreeConstraintSystem wide;
    wide.atoms = dcs.atoms;
    wide.atoms.insert(wide.atoms.end(), extra.begin(), extra.end());
    std::vector<bool> vals = values;
    vals.resize(wide.atoms.size());
    for (std::uint32_t mask = 0; mask < (1u << extra.size()); ++mask) {
        for (std::size_t i = 0; i < extra.size(); ++i) vals[values.size() + i] = (mask >> i) & 1u;
        LocalView v{&wide, &vals, 0, false};
        if (qf_eval(gamma, v)) return true;
    }
    return false;
}

Formula pair_atom_for_bit(const std::vector<std::string>& bins, unsigned bit) {
    const auto& r = bins[bit / 2];
    return bit % 2 == 0 ? atom(r, Var::X, Var::Y) : atom(r, Var::Y, Var::X);
}

// disjunction of the given 2-type patterns, as a decision diagram on the bits
Formula types_formula(const std::vector<std::string>& bins, std::vector<std::uint64_t> patterns, unsigned bit) {
    unsigned width = static_cast<unsigned>(2 * bins.size());
    if (patterns.empty()) return bottom();
    std::uint64_t remaining = std::uint64_t{1} << (width - bit);
    if (patterns.size() == remaining) return top();
    std::vector<std::uint64_t> on, off;
    for (auto p : patterns) ((p >> bit) & 1u ? on : off).push_back(p);
    Formula a = pair_atom_for_bit(bins, bit);
    Formula hi = types_formula(bins, on, bit + 1);
    Formula lo = types_formula(bins, off, bit + 1);
    return disj_s({conj_s({a, hi}), conj_s({neg(a), lo})});
}

Formula group_formula(const DegreeSemilinear& s, std::size_t g) {
    std::vector<std::uint64_t> pats;
    for (auto j : s.groups[g]) pats.push_back(two_type_at(j).bits);
    std::sort(pats.begin(), pats.end());
    return conj_s({neg(eq(Var::X, Var::Y)), types_formula(s.binaries, pats, 0)});
}

}  // namespace

SemilinearSet DegreeSemilinear::expand() const {
    std::size_t ell = dim();
    std::vector<bool> grouped(ell, false);
    for (auto& g : groups)
        for (auto j : g) grouped[j] = true;
    // all spreads of a feature vector over the coordinates of its groups
    auto spreads = [&](const Vec& fv) {
        std::vector<Vec> out{Vec(ell, 0)};
        for (std::size_t g = 0; g < groups.size(); ++g) {
            std::vector<Vec> next;
            const auto& cols = groups[g];
            for (auto& base : out) {
                std::function<void(std::size_t, Int, Vec&)> rec = [&](std::size_t i, Int left, Vec& cur) {
                    if (i + 1 == cols.size()) {
                        cur[cols[i]] = left;
                        next.push_back(cur);
                        cur[cols[i]] = 0;
                        return;
                    }
                    for (Int t = 0; t <= left; ++t) {
                        cur[cols[i]] = t;
                        rec(i + 1, left - t, cur);
                    }
                    cur[cols[i]] = 0;
                };
                Vec cur = base;
                rec(0, fv[g], cur);
            }
            out = std::move(next);
        }
        return out;
    };
    SemilinearSet full{ell, {}};
    for (auto& c : set.components) {
        std::vector<Vec> periods;
        for (auto& p : c.periods)
            for (auto& v : spreads(p)) periods.push_back(v);
        for (std::size_t j = 0; j < ell; ++j)
            if (!grouped[j]) {
                Vec u(ell, 0);
                u[j] = 1;
                periods.push_back(u);
            }
        for (auto& o : spreads(c.offset)) full.components.push_back({o, periods});
    }
    return canonical(full);
}

Vec DegreeSemilinear::features(const DegreeVector& deg) const {
    if (deg.size() != dim()) throw PreconditionError("degree vector has the wrong length");
    Vec out(groups.size(), 0);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (auto j : groups[g]) out[g] = checked_add(out[g], deg[j]);
    return out;
}

Vec DegreeSemilinear::features(const Structure& m, Element a) const {
    std::vector<int> group_of(dim(), -1);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (auto j : groups[g]) group_of[j] = static_cast<int>(g);
    Vec out(groups.size(), 0);
    for (auto& [b, t] : neighbour_types(m, a, binaries)) {
        int g = group_of[two_type_index(t)];
        if (g >= 0) ++out[static_cast<std::size_t>(g)];
    }
    return out;
}

DegreeConstraintSystem degree_rewrite(const NormalForm& nf) {
    DegreeConstraintSystem dcs;
    std::vector<std::string> bins;
    std::vector<ProfileAtom> atoms;
    for (auto& c : nf.constraints) {
        collect_x_atoms(c.guard, atoms);
        for (auto& t : c.terms) {
            bins.push_back(t.role.pred);
            collect_pair_binaries(t.filter, bins);
            collect_x_atoms(t.filter, atoms);
            if (!is_bottom(t.diag)) {
                atoms.push_back({true, t.diag_role});
                collect_x_atoms(t.diag, atoms);
            }
        }
    }
    for (auto& r : nf.sig.binary())
        if (std::find(bins.begin(), bins.end(), r) != bins.end()) dcs.binaries.push_back(r);
    if (dcs.binaries.size() > 10) throw ValidationError("too many binary predicates under degree constraints");
    for (auto& p : nf.sig.unary())
        if (std::find(atoms.begin(), atoms.end(), ProfileAtom{false, p}) != atoms.end())
            dcs.atoms.push_back({false, p});
    for (auto& r : nf.sig.binary())
        if (std::find(atoms.begin(), atoms.end(), ProfileAtom{true, r}) != atoms.end())
            dcs.atoms.push_back({true, r});
    if (dcs.atoms.size() > 16) throw ValidationError("too many unary atoms under degree constraints");

    std::size_t ell = dcs.dim();
    std::size_t k = dcs.atoms.size();
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        DegreeProfile prof;
        for (std::size_t i = 0; i < k; ++i) prof.values.push_back((mask >> i) & 1u);
        if (!gamma_allows(nf.gamma, dcs, prof.values)) continue;
        LocalView xv{&dcs, &prof.values, 0, false};
        for (auto& c : nf.constraints) {
            if (!qf_eval(c.guard, xv)) continue;
            LinearConstraint row{Vec(ell, 0), c.cmp, c.delta};
            for (auto& t : c.terms) {
                auto ri = static_cast<std::size_t>(
                    std::find(dcs.binaries.begin(), dcs.binaries.end(), t.role.pred) - dcs.binaries.begin());
                unsigned bit = t.role.inverse ? 2 * ri + 1 : 2 * ri;
                for (std::size_t j = 0; j < ell; ++j) {
                    std::uint64_t pat = two_type_at(j).bits;
                    if (!((pat >> bit) & 1u)) continue;
                    LocalView pv{&dcs, &prof.values, pat, true};
                    if (qf_eval(t.filter, pv)) row.coeffs[j] = checked_add(row.coeffs[j], t.coeff);
                }
                if (!is_bottom(t.diag) && atom_value(xv, {true, t.diag_role}) && qf_eval(t.diag, xv))
                    row.delta = checked_sub(row.delta, t.coeff);
            }
            prof.rows.push_back(std::move(row));
        }
        dcs.profiles.push_back(std::move(prof));
    }
    return dcs;
}

std::vector<DegreeSemilinear> build_semilinear(const DegreeConstraintSystem& dcs) {
    std::vector<DegreeSemilinear> out;
    std::size_t ell = dcs.dim();
    for (auto& prof : dcs.profiles) {
        DegreeSemilinear s;
        s.binaries = dcs.binaries;
        std::map<Vec, std::size_t> by_column;
        std::vector<Vec> cols;
        for (std::size_t j = 0; j < ell; ++j) {
            Vec col;
            bool zero = true;
            for (auto& r : prof.rows) {
                col.push_back(r.coeffs[j]);
                zero = zero && r.coeffs[j] == 0;
            }
            if (zero) continue;
            auto [it, fresh] = by_column.emplace(col, s.groups.size());
            if (fresh) {
                s.groups.emplace_back();
                cols.push_back(col);
            }
            s.groups[it->second].push_back(static_cast<std::uint32_t>(j));
        }
        std::vector<LinearConstraint> rows;
        for (std::size_t r = 0; r < prof.rows.size(); ++r) {
            LinearConstraint lc{Vec(s.groups.size(), 0), prof.rows[r].cmp, prof.rows[r].delta};
            for (std::size_t g = 0; g < s.groups.size(); ++g) lc.coeffs[g] = cols[g][r];
            rows.push_back(std::move(lc));
        }
        s.set = constraints_to_semilinear(s.groups.size(), rows);
        out.push_back(std::move(s));
    }
    return out;
}

Formula profile_formula(const DegreeConstraintSystem& dcs, const DegreeProfile& p, Var v) {
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < dcs.atoms.size(); ++i) {
        const auto& a = dcs.atoms[i];
        Formula f = a.loop ? atom(a.pred, v, v) : atom(a.pred, v);
        lits.push_back(p.values[i] ? f : neg(f));
    }
    return conj_s(lits);
}

std::optional<std::size_t> profile_of(const DegreeConstraintSystem& dcs, const Structure& m, Element a) {
    std::vector<bool> vals;
    for (auto& at : dcs.atoms) vals.push_back(at.loop ? m.binary(at.pred, a, a) : m.unary(at.pred, a));
    for (std::size_t i = 0; i < dcs.profiles.size(); ++i)
        if (dcs.profiles[i].values == vals) return i;
    return std::nullopt;
}

namespace {

// group formulas, counts and equalities built once per set so that the emitted sentence shares them
struct GroupCache {
    std::vector<Formula> at_x, at_y;
    std::map<std::tuple<Var, std::size_t, Int>, Formula> counts;
    std::map<std::pair<Var, Vec>, Formula> equal;

    explicit GroupCache(const DegreeSemilinear& s) {
        for (std::size_t g = 0; g < s.groups.size(); ++g) {
            at_x.push_back(group_formula(s, g));
            at_y.push_back(swap_vars(at_x.back()));
        }
    }
    Formula count(Var v, std::size_t g, Int k) {
        auto key = std::make_tuple(v, g, k);
        auto it = counts.find(key);
        if (it != counts.end()) return it->second;
        const auto& gs = v == Var::X ? at_x : at_y;
        return counts[key] = counting(Comparison::eq(), k, other(v), gs[g]);
    }
    Formula equals(const Vec& value, Var v) {
        auto key = std::make_pair(v, value);
        auto it = equal.find(key);
        if (it != equal.end()) return it->second;
        std::vector<Formula> parts;
        for (std::size_t g = 0; g < at_x.size(); ++g) parts.push_back(count(v, g, value[g]));
        return equal[key] = conj_s(parts);
    }
};

}  // namespace

Formula degree_equals(const DegreeSemilinear& s, const Vec& value, Var v) { return GroupCache(s).equals(value, v); }

PsiStar emit_c2(const NormalForm& nf, const DegreeConstraintSystem& dcs, const std::vector<DegreeSemilinear>& sets) {
    if (sets.size() != dcs.profiles.size()) throw PreconditionError("one semilinear set per profile expected");
    PsiStar ps;
    ps.sig = nf.sig;
    ps.gamma = nf.gamma;
    ps.pairs = nf.pairs;
    ps.system = dcs;
    ps.semilinear = sets;

    std::vector<Formula> same;
    for (auto& u : nf.sig.unary()) same.push_back(iff(atom(u, Var::X), atom(u, Var::Y)));
    for (auto& r : nf.sig.binary())
        same.push_back(iff(atom(r, Var::X, Var::X), atom(r, Var::Y, Var::Y)));
    Formula same_type = conj_s(same);

    std::vector<Formula> xis, phis;
    for (std::size_t p = 0; p < dcs.profiles.size(); ++p) {
        const auto& s = sets[p];
        GroupCache gc(s);
        Formula pi = profile_formula(dcs, dcs.profiles[p], Var::X);
        std::vector<Formula> cases, not_offset, witnesses;
        for (auto& c : s.set.components) {
            Formula off = gc.equals(c.offset, Var::X);
            std::vector<Formula> per;
            for (auto& q : c.periods) per.push_back(gc.equals(q, Var::X));
            Formula in_per = disj_s(per);
            cases.push_back(disj_s({off, in_per}));
            not_offset.push_back(neg_s(off));
            witnesses.push_back(conj_s({in_per, gc.equals(c.offset, Var::Y)}));
        }
        xis.push_back(forall(Var::X, implies(pi, disj_s(cases))));
        Formula body = exists(Var::Y, conj_s({same_type, disj_s(witnesses)}));
        phis.push_back(forall(Var::X, implies(conj_s({pi, conj_s(not_offset)}), body)));
    }
    ps.xi = conj_s(xis);
    ps.phi = conj_s(phis);
    std::vector<Formula> all{forall(Var::X, nf.gamma)};
    for (auto& pr : nf.pairs) all.push_back(forall(Var::X, forall(Var::Y, implies(pr.guard, pr.alpha))));
    all.push_back(ps.xi);
    all.push_back(ps.phi);
    ps.formula = conj_s(all);
    return ps;
}

PsiStar reduce_to_c2(const Formula& f, const Signature& sig) {
    NormalForm nf = normalize(f, sig);
    auto dcs = degree_rewrite(nf);
    auto sets = build_semilinear(dcs);
    return emit_c2(nf, dcs, sets);
}

Formula psi_formula(const PsiStar& ps) {
    std::vector<Formula> all{forall(Var::X, ps.gamma)};
    for (auto& pr : ps.pairs) all.push_back(forall(Var::X, forall(Var::Y, implies(pr.guard, pr.alpha))));
    for (std::size_t p = 0; p < ps.system.profiles.size(); ++p) {
        const auto& s = ps.semilinear[p];
        auto spec = std::make_shared<DegreeSpec>();
        spec->binaries = s.binaries;
        spec->groups = s.groups;
        spec->is_set = true;
        spec->set = std::make_shared<SemilinearSet>(s.set);
        Formula in_set = s.groups.empty() ? (s.set.components.empty() ? bottom() : top()) : degree_atom(Var::X, spec);
        all.push_back(forall(Var::X, implies(profile_formula(ps.system, ps.system.profiles[p], Var::X), in_set)));
    }
    return conj_s(all);
}

}  // namespace fraglab

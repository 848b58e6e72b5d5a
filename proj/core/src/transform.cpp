#include "fraglab/transform.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace fraglab {

namespace {

// non-null neighbours over every binary of m
std::vector<Element> neighbours(const Structure& m, Element a) {
    std::set<Element> out;
    for (std::size_t r = 0; r < m.binary_names().size(); ++r) {
        for (auto b : m.successors(r, a))
            if (b != a) out.insert(b);
        for (auto b : m.predecessors(r, a))
            if (b != a) out.insert(b);
    }
    return {out.begin(), out.end()};
}

void check_element(const Structure& m, Element a) {
    if (a >= m.size()) throw PreconditionError("element out of range");
}

// copies unary atoms and loops of `from` onto `to`
void copy_one_type(const Structure& m, StructureBuilder& b, Element from, Element to) {
    for (std::size_t p = 0; p < m.unary_names().size(); ++p)
        if (m.unary_at(p, from)) b.set_unary_at(p, to, true);
    for (std::size_t r = 0; r < m.binary_names().size(); ++r)
        if (m.binary_at(r, from, from)) b.set_binary_at(r, to, to, true);
}

// copies the 2-type of (a, c) in m onto (a2, c2)
void copy_pair(const Structure& m, StructureBuilder& b, Element a, Element c, Element a2, Element c2) {
    for (std::size_t r = 0; r < m.binary_names().size(); ++r) {
        if (m.binary_at(r, a, c)) b.set_binary_at(r, a2, c2, true);
        if (m.binary_at(r, c, a)) b.set_binary_at(r, c2, a2, true);
    }
}

StructureBuilder empty_like(const Structure& m, std::size_t n) { return StructureBuilder(n, m.signature()); }

}  // namespace

Structure merge_elements(const Structure& m, Element a, Element b) {
    check_element(m, a);
    check_element(m, b);
    if (a == b) throw PreconditionError("cannot merge an element with itself");
    if (!(one_type(m, a) == one_type(m, b))) throw PreconditionError("1-types differ");
    if (!two_type(m, a, b).is_null()) throw PreconditionError("2-type of the pair is not null");
    auto na = neighbours(m, a), nb = neighbours(m, b);
    std::vector<Element> common;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
    if (!common.empty()) throw PreconditionError("neighbourhoods not disjoint");
    std::size_t n = m.size();
    auto map = [&](Element e) -> Element {
        if (e == b) e = a;
        return e > b ? e - 1 : e;
    };
    StructureBuilder out = empty_like(m, n - 1);
    for (Element e = 0; e < n; ++e) {
        if (e == b) continue;
        copy_one_type(m, out, e, map(e));
    }
    for (std::size_t r = 0; r < m.binary_names().size(); ++r)
        for (Element e = 0; e < n; ++e)
            for (auto f : m.successors(r, e))
                if (e != f) out.set_binary_at(r, map(e), map(f), true);
    return out.build();
}

Structure split_element(const Structure& m, Element a, const std::vector<std::vector<Element>>& parts) {
    check_element(m, a);
    if (parts.empty()) throw PreconditionError("split needs at least one part");
    auto nb = neighbours(m, a);
    std::vector<Element> seen;
    for (auto& p : parts) seen.insert(seen.end(), p.begin(), p.end());
    std::sort(seen.begin(), seen.end());
    if (seen != nb) throw PreconditionError("partition does not cover the neighbourhood");
    StructureBuilder out(m);
    for (std::size_t i = 1; i < parts.size(); ++i) {
        Element t = out.add_element();
        copy_one_type(m, out, a, t);
        for (auto c : parts[i]) {
            for (std::size_t r = 0; r < m.binary_names().size(); ++r) {
                out.set_binary_at(r, a, c, false);
                out.set_binary_at(r, c, a, false);
            }
            copy_pair(m, out, a, c, t, c);
        }
    }
    return out.build();
}

std::vector<std::vector<Element>> plan_split(const Structure& m, Element a, const std::vector<DegreeVector>& degrees) {
    check_element(m, a);
    const auto& bins = m.binary_names();
    auto deg = degree_vector(m, a, bins);
    DegreeVector sum(deg.size(), 0);
    for (auto& d : degrees) {
        if (d.size() != deg.size()) throw PreconditionError("degree vector has the wrong length");
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (d[j] < 0) throw PreconditionError("degree vectors must be nonnegative");
            sum[j] = checked_add(sum[j], d[j]);
        }
    }
    if (sum != deg) throw PreconditionError("partition does not sum");
    std::vector<std::vector<Element>> parts(degrees.size());
    auto left = degrees;
    for (auto& [b, t] : neighbour_types(m, a, bins)) {
        std::size_t j = two_type_index(t);
        for (std::size_t p = 0; p < left.size(); ++p)
            if (left[p][j] > 0) {
                --left[p][j];
                parts[p].push_back(b);
                break;
            }
    }
    return parts;
}

Structure psi_model_to_psi_star(const PsiStar& ps, const Structure& m) {
    std::size_t n = m.size();
    // part of each element that receives the edge towards each neighbour
    std::vector<std::map<Element, std::size_t>> part_of(n);
    std::vector<std::size_t> part_count(n, 1);
    for (Element a = 0; a < n; ++a) {
        auto pi = profile_of(ps.system, m, a);
        if (!pi) throw PreconditionError("element " + std::to_string(a) + " violates gamma");
        const auto& s = ps.semilinear[*pi];
        Vec f = s.features(m, a);
        auto w = member_witness(s.set, f);
        if (!w) throw PreconditionError("degree of element " + std::to_string(a) + " is not in its semilinear set");
        const auto& comp = s.set.components[w->component];
        std::vector<Vec> parts{comp.offset};
        for (std::size_t j = 0; j < comp.periods.size(); ++j)
            for (Int t = 0; t < w->multipliers[j]; ++t) parts.push_back(comp.periods[j]);
        part_count[a] = parts.size();
        std::vector<int> group_of(s.dim(), -1);
        for (std::size_t g = 0; g < s.groups.size(); ++g)
            for (auto j : s.groups[g]) group_of[j] = static_cast<int>(g);
        std::map<Element, int> group_at;
        for (auto& [b, t] : neighbour_types(m, a, s.binaries)) group_at[b] = group_of[two_type_index(t)];
        for (auto b : neighbours(m, a)) {
            auto it = group_at.find(b);
            int g = it == group_at.end() ? -1 : it->second;
            std::size_t target = 0;
            if (g >= 0) {
                auto gi = static_cast<std::size_t>(g);
                for (std::size_t p = 0; p < parts.size(); ++p)
                    if (parts[p][gi] > 0) {
                        --parts[p][gi];
                        target = p;
                        break;
                    }
            }
            part_of[a][b] = target;
        }
    }
    std::vector<Element> first_new(n, 0);
    std::size_t total = n;
    for (Element a = 0; a < n; ++a) {
        first_new[a] = static_cast<Element>(total);
        total += part_count[a] - 1;
    }
    auto id = [&](Element a, std::size_t p) { return p == 0 ? a : static_cast<Element>(first_new[a] + p - 1); };
    StructureBuilder out = empty_like(m, total);
    for (Element a = 0; a < n; ++a)
        for (std::size_t p = 0; p < part_count[a]; ++p) copy_one_type(m, out, a, id(a, p));
    for (Element a = 0; a < n; ++a)
        for (auto& [c, p] : part_of[a])
            if (a < c) copy_pair(m, out, a, c, id(a, p), id(c, part_of[c].at(a)));
    return out.build();
}

namespace {

struct MergePlan {
    std::size_t copies;
    std::size_t n;
    std::vector<std::size_t> parent;
    std::vector<std::map<std::size_t, int>> adj;  // class -> neighbour classes
    std::vector<int> comp;                         // component an absorbing class is committed to, -1 if none

    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }

    bool try_merge(std::size_t keep, std::size_t gone, int component) {
        keep = find(keep);
        gone = find(gone);
        if (keep == gone || adj[keep].count(gone)) return false;
        if (comp[keep] >= 0 && comp[keep] != component) return false;
        for (auto& [k, c] : adj[gone])
            if (adj[keep].count(k)) return false;
        for (auto& [k, c] : adj[gone]) {
            adj[keep][k] = c;
            adj[k].erase(gone);
            adj[k][keep] = c;
        }
        adj[gone].clear();
        parent[gone] = keep;
        comp[keep] = component;
        return true;
    }
};

}  // namespace

Structure psi_star_model_to_psi(const PsiStar& ps, const Structure& m) {
    std::size_t n = m.size();
    std::vector<bool> periodic(n, false);
    std::vector<std::vector<std::pair<Element, int>>> partners(n);  // (offset element, component)
    std::vector<Vec> feat(n);
    std::vector<std::size_t> prof(n);
    for (Element a = 0; a < n; ++a) {
        auto pi = profile_of(ps.system, m, a);
        if (!pi) throw PreconditionError("element " + std::to_string(a) + " violates gamma");
        prof[a] = *pi;
        feat[a] = ps.semilinear[*pi].features(m, a);
        const auto& comps = ps.semilinear[*pi].set.components;
        periodic[a] = std::none_of(comps.begin(), comps.end(), [&](const LinearSet& c) { return c.offset == feat[a]; });
    }
    std::vector<Element> per;
    for (Element a = 0; a < n; ++a)
        if (periodic[a]) per.push_back(a);
    if (per.empty()) return m;
    for (auto b : per) {
        const auto& comps = ps.semilinear[prof[b]].set.components;
        auto tb = one_type(m, b);
        for (Element a = 0; a < n; ++a) {
            if (periodic[a] || prof[a] != prof[b] || !(one_type(m, a) == tb)) continue;
            for (std::size_t j = 0; j < comps.size(); ++j) {
                const auto& c = comps[j];
                if (c.offset == feat[a] && std::find(c.periods.begin(), c.periods.end(), feat[b]) != c.periods.end())
                    partners[b].push_back({a, static_cast<int>(j)});
            }
        }
        if (partners[b].empty())
            throw PreconditionError("no merge-able partner for periodic element " + std::to_string(b));
    }
    auto edges = [&] {
        std::vector<Tuple> out;
        for (Element a = 0; a < n; ++a)
            for (auto c : neighbours(m, a))
                if (a < c) out.push_back({a, c});
        return out;
    }();
    const std::size_t N = per.size();
    for (std::size_t attempt = 1; attempt <= 8; ++attempt) {
        const std::size_t C = N * attempt;
        const std::size_t total = 3 * C * n;
        auto at = [&](std::size_t layer, std::size_t copy, Element e) { return (layer * C + copy) * n + e; };
        MergePlan plan{C, n, std::vector<std::size_t>(total), std::vector<std::map<std::size_t, int>>(total),
                       std::vector<int>(total, -1)};
        std::iota(plan.parent.begin(), plan.parent.end(), 0);
        for (std::size_t cp = 0; cp < 3 * C; ++cp)
            for (auto [a, c] : edges) {
                plan.adj[cp * n + a][cp * n + c] = 1;
                plan.adj[cp * n + c][cp * n + a] = 1;
            }
        bool ok = true;
        for (std::size_t layer = 0; layer < 3 && ok; ++layer)
            for (std::size_t copy = 0; copy < C && ok; ++copy)
                for (std::size_t l = 0; l < N && ok; ++l) {
                    std::size_t b = at(layer, copy, per[l]);
                    bool done = false;
                    for (std::size_t t = 0; t < C && !done; ++t) {
                        std::size_t target = (copy + l + t) % C;
                        for (auto [w, j] : partners[per[l]])
                            if (plan.try_merge(at((layer + 1) % 3, target, w), b, j)) {
                                done = true;
                                break;
                            }
                    }
                    ok = done;
                }
        if (!ok) continue;
        std::vector<std::size_t> cls(total);
        std::map<std::size_t, Element> index;
        for (std::size_t e = 0; e < total; ++e) {
            cls[e] = plan.find(e);
            index.emplace(cls[e], 0);
        }
        Element next = 0;
        for (auto& [k, v] : index) v = next++;
        StructureBuilder out = empty_like(m, index.size());
        for (std::size_t e = 0; e < total; ++e) copy_one_type(m, out, static_cast<Element>(e % n), index[cls[e]]);
        for (std::size_t cp = 0; cp < 3 * C; ++cp)
            for (auto [a, c] : edges)
                copy_pair(m, out, a, c, index[cls[cp * n + a]], index[cls[cp * n + c]]);
        return out.build();
    }
    throw PreconditionError("could not merge the periodic elements");
}

}  // namespace fraglab

#include "fraglab/query.hpp"
#include "fraglab/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <map>
#include <numeric>
#include <set>

namespace fraglab {

namespace {

bool is_binary(const QueryAtom& a) { return a.args.size() == 2; }

std::vector<std::set<std::size_t>> query_graph(const ConjunctiveQuery& q) {
    std::vector<std::set<std::size_t>> adj(q.vars.size());
    for (auto& a : q.atoms)
        if (is_binary(a) && a.args[0] != a.args[1]) {
            adj[a.args[0]].insert(a.args[1]);
            adj[a.args[1]].insert(a.args[0]);
        }
    return adj;
}

std::string render(const std::vector<QueryAtom>& atoms, std::size_t nvars) {
    std::vector<std::string> parts;
    for (auto& a : atoms) {
        std::string s = a.pred + "(" + std::to_string(a.args[0]);
        if (is_binary(a)) s += "," + std::to_string(a.args[1]);
        parts.push_back(s + ")");
    }
    std::sort(parts.begin(), parts.end());
    parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
    std::string out = std::to_string(nvars) + ":";
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ";" : "") + parts[i];
    return out;
}

// colour refinement to cut down the permutations tried
std::vector<std::size_t> refine(const ConjunctiveQuery& q) {
    std::size_t n = q.vars.size();
    std::vector<std::string> sig(n);
    for (auto& a : q.atoms) {
        if (!is_binary(a)) {
            sig[a.args[0]] += "u" + a.pred + ";";
        } else if (a.args[0] == a.args[1]) {
            sig[a.args[0]] += "l" + a.pred + ";";
        }
    }
    std::vector<std::size_t> col(n, 0);
    for (int round = 0; round <= static_cast<int>(n); ++round) {
        std::vector<std::string> key(n);
        for (std::size_t v = 0; v < n; ++v) {
            std::vector<std::string> ns;
            for (auto& a : q.atoms)
                if (is_binary(a) && a.args[0] != a.args[1]) {
                    if (a.args[0] == v) ns.push_back(">" + a.pred + "#" + std::to_string(col[a.args[1]]));
                    if (a.args[1] == v) ns.push_back("<" + a.pred + "#" + std::to_string(col[a.args[0]]));
                }
            std::sort(ns.begin(), ns.end());
            key[v] = std::to_string(col[v]) + "|" + sig[v];
            for (auto& s : ns) key[v] += s + ",";
        }
        std::vector<std::string> sorted = key;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<std::size_t> next(n);
        for (std::size_t v = 0; v < n; ++v)
            next[v] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), key[v]) - sorted.begin());
        if (next == col) break;
        col = next;
    }
    return col;
}

Formula roll(const ConjunctiveQuery& q, const std::vector<std::set<std::size_t>>& adj, std::size_t v,
             std::size_t parent, Var cur) {
    std::vector<Formula> ks;
    for (auto& a : q.atoms) {
        if (!is_binary(a) && a.args[0] == v) ks.push_back(atom(a.pred, cur));
        if (is_binary(a) && a.args[0] == v && a.args[1] == v) ks.push_back(atom(a.pred, cur, cur));
    }
    Var nxt = other(cur);
    for (auto u : adj[v]) {
        if (u == parent) continue;
        std::vector<Formula> es;
        for (auto& a : q.atoms) {
            if (!is_binary(a)) continue;
            if (a.args[0] == v && a.args[1] == u) es.push_back(atom(a.pred, cur, nxt));
            if (a.args[0] == u && a.args[1] == v) es.push_back(atom(a.pred, nxt, cur));
        }
        es.push_back(roll(q, adj, u, v, nxt));
        ks.push_back(exists(nxt, conj(std::move(es))));
    }
    if (ks.empty()) return top();
    return ks.size() == 1 ? ks[0] : conj(std::move(ks));
}

}  // namespace

bool is_tree_shaped(const ConjunctiveQuery& q) {
    std::size_t n = q.vars.size();
    if (n == 0) return false;
    auto adj = query_graph(q);
    std::size_t edges = 0;
    for (auto& s : adj) edges += s.size();
    edges /= 2;
    if (edges != n - 1) return false;
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto u : adj[v])
            if (!seen[u]) {
                seen[u] = true;
                ++reached;
                stack.push_back(u);
            }
    }
    return reached == n;
}

std::string canonical_form(const ConjunctiveQuery& q) {
    std::size_t n = q.vars.size();
    auto col = refine(q);
    // variables sorted by colour; only permutations inside colour classes are tried
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return col[a] < col[b]; });
    std::vector<std::pair<std::size_t, std::size_t>> classes;  // [begin, end) in order
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && col[order[j]] == col[order[i]]) ++j;
        classes.push_back({i, j});
        i = j;
    }
    std::string best;
    bool have = false;
    std::vector<std::size_t> perm = order;
    std::size_t budget = 200000;
    auto visit = [&] {
        std::vector<std::size_t> label(n);
        for (std::size_t i = 0; i < n; ++i) label[perm[i]] = i;
        std::vector<QueryAtom> atoms;
        for (auto& a : q.atoms) {
            QueryAtom b = a;
            for (auto& x : b.args) x = label[x];
            atoms.push_back(b);
        }
        auto s = render(atoms, n);
        if (!have || s < best) {
            best = s;
            have = true;
        }
    };
    // odometer over per-class permutations
    for (auto& [b, e] : classes) std::sort(perm.begin() + static_cast<long>(b), perm.begin() + static_cast<long>(e));
    while (true) {
        visit();
        if (--budget == 0) throw PreconditionError("query too symmetric for canonical labelling");
        std::size_t c = classes.size();
        bool advanced = false;
        while (c-- > 0) {
            auto [b, e] = classes[c];
            if (std::next_permutation(perm.begin() + static_cast<long>(b), perm.begin() + static_cast<long>(e))) {
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    return best;
}

std::vector<ConjunctiveQuery> treeifications(const ConjunctiveQuery& q) {
    std::size_t n = q.vars.size();
    std::vector<ConjunctiveQuery> out;
    std::set<std::string> seen;
    auto keep = [&](ConjunctiveQuery c) {
        if (!is_tree_shaped(c)) return;
        if (seen.insert(canonical_form(c)).second) out.push_back(std::move(c));
    };
    keep(q);
    if (n == 0) return out;
    if (n > 12) throw PreconditionError("treeifications: too many variables");
    // restricted growth strings enumerate the partitions
    std::vector<std::size_t> rgs(n, 0), mx(n, 0);
    std::vector<ConjunctiveQuery> found;
    while (true) {
        std::size_t blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        ConjunctiveQuery c;
        c.vars.assign(blocks, "");
        for (std::size_t v = 0; v < n; ++v)
            if (c.vars[rgs[v]].empty()) c.vars[rgs[v]] = q.vars[v];
        std::set<QueryAtom> dup;
        for (auto& a : q.atoms) {
            QueryAtom b = a;
            for (auto& x : b.args) x = rgs[x];
            if (dup.insert(b).second) c.atoms.push_back(b);
        }
        found.push_back(std::move(c));
        bool more = false;
        for (std::size_t i = n; i-- > 1;)
            if (rgs[i] <= mx[i - 1]) {
                ++rgs[i];
                for (std::size_t j = i + 1; j < n; ++j) rgs[j] = 0;
                for (std::size_t j = i; j < n; ++j) mx[j] = std::max(mx[j - 1], rgs[j]);
                more = true;
                break;
            }
        if (!more) break;
    }
    // finer quotients first
    std::stable_sort(found.begin(), found.end(),
                     [](const ConjunctiveQuery& a, const ConjunctiveQuery& b) { return a.vars.size() > b.vars.size(); });
    for (auto& c : found) keep(std::move(c));
    return out;
}

Formula rollup(const ConjunctiveQuery& q, std::size_t root) {
    if (!is_tree_shaped(q)) throw PreconditionError("rollup expects a tree-shaped query");
    if (root >= q.vars.size()) throw PreconditionError("rollup: root is not a query variable");
    auto adj = query_graph(q);
    return roll(q, adj, root, q.vars.size(), Var::X);
}

Formula entail_reduce(const Formula& phi, const ConjunctiveQuery& q) {
    std::vector<Formula> parts{phi};
    for (auto& t : treeifications(q))
        parts.push_back(forall(Var::X, implies(eq(Var::X, Var::X), neg(rollup(t, 0)))));
    return conj_s(std::move(parts));
}

std::size_t default_pump_cap() {
    const char* env = std::getenv("FRAGLAB_PUMP_CAP");
    if (env && *env) {
        std::size_t v = 0;
        auto end = env + std::strlen(env);
        auto [p, ec] = std::from_chars(env, end, v);
        if (ec == std::errc() && p == end) return v;
    }
    return 16;
}

Structure pump(const Structure& m, const PumpOptions& opt) {
    auto g = gaifman(m);
    auto edges = g.edges();
    std::size_t cap = opt.cap ? *opt.cap : default_pump_cap();
    std::size_t k = edges.size();
    if (k > cap && !opt.force)
        throw PreconditionError("pump: " + std::to_string(k) + " Gaifman edges exceed the cap of " +
                                std::to_string(cap) + " (use --force)");
    if (k >= 40 || (m.size() << k) > (std::size_t{1} << 26)) throw PreconditionError("pump: result too large");
    const std::size_t coins = std::size_t{1} << k;
    std::map<Tuple, std::size_t> bit;
    for (std::size_t i = 0; i < k; ++i) bit[edges[i]] = i;
    auto id = [&](Element a, std::size_t f) { return static_cast<Element>(a * coins + f); };
    StructureBuilder b(m.size() * coins, m.signature());
    for (std::size_t p = 0; p < m.unary_names().size(); ++p)
        for (Element a = 0; a < m.size(); ++a)
            if (m.unary_at(p, a))
                for (std::size_t f = 0; f < coins; ++f) b.set_unary_at(p, id(a, f), true);
    for (std::size_t r = 0; r < m.binary_names().size(); ++r)
        for (Element a = 0; a < m.size(); ++a)
            for (auto c : m.successors(r, a)) {
                if (a == c) {
                    for (std::size_t f = 0; f < coins; ++f) b.set_binary_at(r, id(a, f), id(a, f), true);
                    continue;
                }
                std::size_t flip = std::size_t{1} << bit.at({std::min(a, c), std::max(a, c)});
                for (std::size_t f = 0; f < coins; ++f) b.set_binary_at(r, id(a, f), id(c, f ^ flip), true);
            }
    return b.build();
}

std::optional<std::vector<Element>> find_homomorphism(const ConjunctiveQuery& q, const Structure& m) {
    std::size_t n = q.vars.size();
    if (n == 0) return std::vector<Element>{};
    if (m.size() == 0) return std::nullopt;
    // atoms checked once their last variable is assigned
    std::vector<std::vector<const QueryAtom*>> due(n);
    for (auto& a : q.atoms) {
        std::size_t last = *std::max_element(a.args.begin(), a.args.end());
        due[last].push_back(&a);
    }
    std::vector<Element> h(n, 0);
    auto ok = [&](std::size_t v) {
        for (auto* a : due[v]) {
            if (!is_binary(*a)) {
                if (!m.unary(a->pred, h[a->args[0]])) return false;
            } else if (!m.binary(a->pred, h[a->args[0]], h[a->args[1]])) {
                return false;
            }
        }
        return true;
    };
    std::size_t v = 0;
    std::vector<bool> started(n, false);
    while (true) {
        if (!started[v]) {
            started[v] = true;
            h[v] = 0;
        } else {
            ++h[v];
        }
        while (h[v] < m.size() && !ok(v)) ++h[v];
        if (h[v] < m.size()) {
            if (v + 1 == n) return h;
            ++v;
            continue;
        }
        started[v] = false;
        if (v == 0) return std::nullopt;
        --v;
    }
}

Signature query_signature(const ConjunctiveQuery& q) {
    Signature sig;
    for (auto& a : q.atoms) {
        if (is_binary(a)) {
            if (!sig.has_binary(a.pred)) sig.add_binary(a.pred);
        } else if (!sig.has_unary(a.pred)) {
            sig.add_unary(a.pred);
        }
    }
    return sig;
}

}  // namespace fraglab

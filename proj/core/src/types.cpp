#include "fraglab/types.hpp"

#include <algorithm>

namespace fraglab {

namespace {

std::vector<std::size_t> resolve(const Structure& m, const std::vector<std::string>& names) {
    std::vector<std::size_t> idx;
    for (auto& r : names) {
        auto i = m.binary_index(r);
        idx.push_back(i ? *i : SIZE_MAX);
    }
    return idx;
}

TwoType pattern(const Structure& m, const std::vector<std::size_t>& idx, Element a, Element b) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] == SIZE_MAX) continue;
        if (m.binary_at(idx[i], a, b)) bits |= std::uint64_t{1} << (2 * i);
        if (m.binary_at(idx[i], b, a)) bits |= std::uint64_t{1} << (2 * i + 1);
    }
    return TwoType{bits};
}

}  // namespace

OneType one_type(const Structure& m, Element a) { return one_type(m, a, m.signature()); }

OneType one_type(const Structure& m, Element a, const Signature& sig) {
    if (a >= m.size()) throw PreconditionError("element out of range");
    OneType t;
    for (auto& u : sig.unary()) t.bits.push_back(m.unary(u, a));
    for (auto& r : sig.binary()) t.bits.push_back(m.binary(r, a, a));
    return t;
}

TwoType two_type(const Structure& m, Element a, Element b) { return two_type(m, a, b, m.binary_names()); }

TwoType two_type(const Structure& m, Element a, Element b, const std::vector<std::string>& binaries) {
    if (a >= m.size() || b >= m.size()) throw PreconditionError("element out of range");
    if (binaries.size() > 31) throw PreconditionError("too many binary predicates for a 2-type bitset");
    if (a == b) return TwoType{0};
    return pattern(m, resolve(m, binaries), a, b);
}

TwoType swap_two_type(TwoType t, std::size_t k) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (t.bits >> (2 * i) & 1) out |= std::uint64_t{1} << (2 * i + 1);
        if (t.bits >> (2 * i + 1) & 1) out |= std::uint64_t{1} << (2 * i);
    }
    return TwoType{out};
}

std::size_t two_type_count(std::size_t k) {
    if (k > 15) throw PreconditionError("too many binary predicates for dense 2-type enumeration");
    return (std::size_t{1} << (2 * k)) - 1;
}

std::vector<std::pair<Element, TwoType>> neighbour_types(const Structure& m, Element a,
                                                         const std::vector<std::string>& binaries) {
    if (a >= m.size()) throw PreconditionError("element out of range");
    if (binaries.size() > 31) throw PreconditionError("too many binary predicates for a 2-type bitset");
    auto idx = resolve(m, binaries);
    std::vector<Element> cand;
    for (auto r : idx) {
        if (r == SIZE_MAX) continue;
        for (auto b : m.successors(r, a)) cand.push_back(b);
        for (auto b : m.predecessors(r, a)) cand.push_back(b);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<std::pair<Element, TwoType>> out;
    for (auto b : cand) {
        if (b == a) continue;
        auto t = pattern(m, idx, a, b);
        if (!t.is_null()) out.emplace_back(b, t);
    }
    return out;
}

std::vector<Element> neighbourhood(const Structure& m, Element a, TwoType eta) {
    return neighbourhood(m, a, eta, m.binary_names());
}

std::vector<Element> neighbourhood(const Structure& m, Element a, TwoType eta,
                                   const std::vector<std::string>& binaries) {
    std::vector<Element> out;
    if (eta.is_null()) {
        // null neighbours: every b != a with no atom between them
        auto nb = neighbour_types(m, a, binaries);
        std::size_t j = 0;
        for (Element b = 0; b < m.size(); ++b) {
            while (j < nb.size() && nb[j].first < b) ++j;
            if (b == a || (j < nb.size() && nb[j].first == b)) continue;
            out.push_back(b);
        }
        return out;
    }
    for (auto& [b, t] : neighbour_types(m, a, binaries))
        if (t == eta) out.push_back(b);
    return out;
}

DegreeVector degree_vector(const Structure& m, Element a) { return degree_vector(m, a, m.binary_names()); }

DegreeVector degree_vector(const Structure& m, Element a, const std::vector<std::string>& binaries) {
    if (binaries.size() > 10) throw PreconditionError("too many binary predicates for a dense degree vector");
    DegreeVector d(two_type_count(binaries.size()), 0);
    for (auto& [b, t] : neighbour_types(m, a, binaries)) ++d[two_type_index(t)];
    return d;
}

}  // namespace fraglab

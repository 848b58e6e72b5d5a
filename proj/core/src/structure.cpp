#include "fraglab/structure.hpp"

#include <algorithm>

namespace fraglab {

std::optional<std::size_t> Structure::unary_index(const std::string& p) const {
    auto it = uidx_.find(p);
    if (it == uidx_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Structure::binary_index(const std::string& r) const {
    auto it = bidx_.find(r);
    if (it == bidx_.end()) return std::nullopt;
    return it->second;
}

bool Structure::unary(const std::string& p, Element a) const {
    auto i = unary_index(p);
    return i && a < n_ && unary_at(*i, a);
}

bool Structure::binary(const std::string& r, Element a, Element b) const {
    auto i = binary_index(r);
    return i && a < n_ && b < n_ && binary_at(*i, a, b);
}

bool Structure::binary_at(std::size_t r, Element a, Element b) const {
    const auto& s = out_[r][a];
    return std::binary_search(s.begin(), s.end(), b);
}

std::vector<Element> Structure::members(const std::string& p) const {
    std::vector<Element> out;
    auto i = unary_index(p);
    if (!i) return out;
    for (Element a = 0; a < n_; ++a)
        if (ubits_[*i][a]) out.push_back(a);
    return out;
}

std::vector<Tuple> Structure::tuples(const std::string& r) const {
    std::vector<Tuple> out;
    auto i = binary_index(r);
    if (!i) return out;
    for (Element a = 0; a < n_; ++a)
        for (Element b : out_[*i][a]) out.emplace_back(a, b);
    return out;
}

std::size_t Structure::tuple_count() const {
    std::size_t c = 0;
    for (auto& rel : out_)
        for (auto& s : rel) c += s.size();
    return c;
}

bool Structure::operator==(const Structure& o) const {
    return n_ == o.n_ && unames_ == o.unames_ && bnames_ == o.bnames_ && ubits_ == o.ubits_ && out_ == o.out_;
}

StructureBuilder::StructureBuilder(std::size_t n) : n_(n) {}

StructureBuilder::StructureBuilder(std::size_t n, const Signature& sig) : n_(n) {
    for (auto& u : sig.unary()) declare_unary(u);
    for (auto& b : sig.binary()) declare_binary(b);
}

StructureBuilder::StructureBuilder(const Structure& m) : n_(m.size()) {
    for (auto& u : m.unary_names()) declare_unary(u);
    for (auto& b : m.binary_names()) declare_binary(b);
    ubits_ = m.ubits_;
    for (std::size_t r = 0; r < bnames_.size(); ++r)
        for (Element a = 0; a < n_; ++a) {
            out_[r][a].insert(m.out_[r][a].begin(), m.out_[r][a].end());
            in_[r][a].insert(m.in_[r][a].begin(), m.in_[r][a].end());
        }
}

Element StructureBuilder::add_element() {
    for (auto& u : ubits_) u.push_back(0);
    for (auto& r : out_) r.emplace_back();
    for (auto& r : in_) r.emplace_back();
    return static_cast<Element>(n_++);
}

void StructureBuilder::declare_unary(const std::string& p) {
    if (bidx_.count(p)) throw ValidationError("predicate '" + p + "' declared as both unary and binary");
    if (uidx_.count(p)) return;
    uidx_[p] = unames_.size();
    unames_.push_back(p);
    ubits_.emplace_back(n_, 0);
}

void StructureBuilder::declare_binary(const std::string& r) {
    if (uidx_.count(r)) throw ValidationError("predicate '" + r + "' declared as both unary and binary");
    if (bidx_.count(r)) return;
    bidx_[r] = bnames_.size();
    bnames_.push_back(r);
    out_.emplace_back(n_);
    in_.emplace_back(n_);
}

void StructureBuilder::check(Element a) const {
    if (a >= n_) throw PreconditionError("element out of range");
}

void StructureBuilder::set_unary(const std::string& p, Element a, bool value) {
    check(a);
    declare_unary(p);
    ubits_[uidx_[p]][a] = value;
}

void StructureBuilder::set_binary_at(std::size_t r, Element a, Element b, bool value) {
    if (value) {
        out_[r][a].insert(b);
        in_[r][b].insert(a);
    } else {
        out_[r][a].erase(b);
        in_[r][b].erase(a);
    }
}

void StructureBuilder::set_binary(const std::string& r, Element a, Element b, bool value) {
    check(a);
    check(b);
    declare_binary(r);
    set_binary_at(bidx_[r], a, b, value);
}

bool StructureBuilder::unary(const std::string& p, Element a) const {
    auto it = uidx_.find(p);
    return it != uidx_.end() && a < n_ && ubits_[it->second][a];
}

bool StructureBuilder::binary(const std::string& r, Element a, Element b) const {
    auto it = bidx_.find(r);
    return it != bidx_.end() && a < n_ && out_[it->second][a].count(b);
}

Structure StructureBuilder::build() const {
    Structure m;
    m.n_ = n_;
    m.unames_ = unames_;
    m.bnames_ = bnames_;
    m.uidx_ = uidx_;
    m.bidx_ = bidx_;
    m.ubits_ = ubits_;
    m.out_.resize(bnames_.size());
    m.in_.resize(bnames_.size());
    for (std::size_t r = 0; r < bnames_.size(); ++r) {
        m.out_[r].resize(n_);
        m.in_[r].resize(n_);
        for (Element a = 0; a < n_; ++a) {
            m.out_[r][a].assign(out_[r][a].begin(), out_[r][a].end());
            m.in_[r][a].assign(in_[r][a].begin(), in_[r][a].end());
        }
    }
    return m;
}

Structure with_signature(const Structure& m, const Signature& sig) {
    StructureBuilder b(m.size(), sig);
    for (auto& u : m.unary_names()) {
        b.declare_unary(u);
        for (auto a : m.members(u)) b.set_unary(u, a);
    }
    for (auto& r : m.binary_names()) {
        b.declare_binary(r);
        for (auto [a, c] : m.tuples(r)) b.set_binary(r, a, c);
    }
    return b.build();
}

Structure reduct(const Structure& m, const Signature& sig) {
    StructureBuilder b(m.size(), sig);
    for (auto& u : sig.unary())
        for (auto a : m.members(u)) b.set_unary(u, a);
    for (auto& r : sig.binary())
        for (auto [a, c] : m.tuples(r)) b.set_binary(r, a, c);
    return b.build();
}

}  // namespace fraglab

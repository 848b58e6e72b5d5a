#pragma once

#include "fraglab/formula.hpp"
#include "fraglab/structure.hpp"

#include <map>
#include <string>
#include <vector>

namespace fraglab {

struct ShtpEntry {
    enum class Op { Unit, Add, Mul };
    Op op = Op::Unit;
    std::string w, u, v;  // w = 1, w = u + v, w = u * v
    bool operator==(const ShtpEntry&) const = default;
};

struct ShtpSystem {
    std::vector<ShtpEntry> entries;
    std::vector<std::string> variables() const;  // sorted by name
    bool operator==(const ShtpSystem&) const = default;
};

using ShtpSolution = std::map<std::string, Int>;

bool solves(const ShtpSystem& e, const ShtpSolution& s);

// fresh predicate names for entry i (1-based)
std::string shtp_var_pred(const std::string& v);
std::string shtp_first_half(std::size_t i);
std::string shtp_second_half(std::size_t i);
std::string shtp_mult(std::size_t i);
Signature shtp_signature(const ShtpSystem& e);

// exactly 50% satisfy (half and not r) or j; equates |r| and |j| on (half, r, j)-separated structures
Formula phi_eq(const std::string& half, const std::string& r, const std::string& j);

Formula shtp_encode(const ShtpSystem& e);
Structure shtp_witness(const ShtpSystem& e, const ShtpSolution& s);
// throws PreconditionError("model does not satisfy encoding") when M is not a model
ShtpSolution shtp_extract(const Structure& m, const ShtpSystem& e);

}  // namespace fraglab

#pragma once

#include "fraglab/error.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace fraglab {

struct SExpr {
    bool is_list = false;
    std::string atom;
    std::vector<SExpr> items;
    SourceSpan span;

    bool is_atom(std::string_view s) const { return !is_list && atom == s; }
    std::string to_string() const;
};

// exactly one expression; ';' starts a comment running to end of line
SExpr read_sexpr(std::string_view text);
std::vector<SExpr> read_sexprs(std::string_view text);

}  // namespace fraglab

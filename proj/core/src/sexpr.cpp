#include "fraglab/sexpr.hpp"

#include <cctype>

namespace fraglab {

namespace {

constexpr std::size_t kMaxDepth = 2000;

class Reader {
public:
    explicit Reader(std::string_view t) : text_(t) {}

    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    bool done() {
        skip();
        return pos_ >= text_.size();
    }

    SExpr read(std::size_t depth) {
        skip();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", here());
        if (depth > kMaxDepth) throw ParseError("nesting too deep", here());
        char c = text_[pos_];
        if (c == ')') throw ParseError("unexpected ')'", here());
        if (c == '(') {
            SExpr e;
            e.is_list = true;
            e.span = here();
            advance();
            while (true) {
                skip();
                if (pos_ >= text_.size()) throw ParseError("unclosed list", e.span);
                if (text_[pos_] == ')') {
                    advance();
                    return e;
                }
                e.items.push_back(read(depth + 1));
            }
        }
        SExpr e;
        e.span = here();
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
            if (static_cast<unsigned char>(d) < 0x20) throw ParseError("control character in input", here());
            e.atom.push_back(d);
            advance();
        }
        return e;
    }

    SourceSpan here() const { return span_; }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++span_.line;
            span_.column = 1;
        } else {
            ++span_.column;
        }
        ++pos_;
        span_.offset = pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    SourceSpan span_;
};

}  // namespace

std::string SExpr::to_string() const {
    if (!is_list) return atom;
    std::string s = "(";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ' ';
        s += items[i].to_string();
    }
    return s + ")";
}

SExpr read_sexpr(std::string_view text) {
    Reader r(text);
    if (r.done()) throw ParseError("empty input", r.here());
    SExpr e = r.read(0);
    if (!r.done()) throw ParseError("trailing input after expression", r.here());
    return e;
}

std::vector<SExpr> read_sexprs(std::string_view text) {
    Reader r(text);
    std::vector<SExpr> out;
    while (!r.done()) out.push_back(r.read(0));
    return out;
}

}  // namespace fraglab

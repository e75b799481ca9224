#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "qsphere/ncalg.hpp"

namespace qsphere {

/// Recursive-descent parser for the frozen CLI grammar
///
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' sint)?
///   atom   := rational | 'q' | 'a' | 'a*' | 'g' | 'g*' | '(' expr ')'
///
/// `a*` and `g*` are single tokens when the star is immediately adjacent;
/// multiplication `*` therefore requires surrounding whitespace or parentheses.
/// Division is only defined by scalar factors. A negative exponent is allowed on
/// `q`, on scalars, and on `a` (where it means the a* convention).
namespace parsedetail {

enum class Tok { Num, Q, A, AStar, G, GStar, Plus, Minus, Mul, Div, Pow, LParen, RParen, End };

struct Token {
    Tok kind;
    mpq_class num;
    std::size_t offset;
};

inline std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto isSpace = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (i < src.size()) {
        char c = src[i];
        if (isSpace(c)) {
            ++i;
            continue;
        }
        std::size_t at = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            std::string numStr(src.substr(i, j - i));
            // adjacent p/q is a rational literal
            if (j + 1 < src.size() && src[j] == '/' &&
                std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                std::size_t k = j + 1;
                while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
                std::string denStr(src.substr(j + 1, k - j - 1));
                mpq_class v(numStr + "/" + denStr);
                if (v.get_den() == 0) throw ParseError(at, "zero denominator in rational literal");
                v.canonicalize();
                out.push_back({Tok::Num, v, at});
                i = k;
            } else {
                out.push_back({Tok::Num, mpq_class(numStr), at});
                i = j;
            }
            continue;
        }
        switch (c) {
            case 'q': out.push_back({Tok::Q, 0, at}); ++i; break;
            case 'a':
            case 'g': {
                bool starred = (i + 1 < src.size() && src[i + 1] == '*');
                if (c == 'a')
                    out.push_back({starred ? Tok::AStar : Tok::A, 0, at});
                else
                    out.push_back({starred ? Tok::GStar : Tok::G, 0, at});
                i += starred ? 2 : 1;
                break;
            }
            case '*': {
                bool prevOk = (i == 0) || isSpace(src[i - 1]) || src[i - 1] == ')';
                bool nextOk = (i + 1 >= src.size()) || isSpace(src[i + 1]) || src[i + 1] == '(';
                if (!prevOk || !nextOk)
                    throw ParseError(at, "ambiguous '*': surround multiplication with spaces "
                                         "or parentheses ('a*'/'g*' bind to the generator)");
                out.push_back({Tok::Mul, 0, at});
                ++i;
                break;
            }
            case '/': out.push_back({Tok::Div, 0, at}); ++i; break;
            case '+': out.push_back({Tok::Plus, 0, at}); ++i; break;
            case '-': out.push_back({Tok::Minus, 0, at}); ++i; break;
            case '^': out.push_back({Tok::Pow, 0, at}); ++i; break;
            case '(': out.push_back({Tok::LParen, 0, at}); ++i; break;
            case ')': out.push_back({Tok::RParen, 0, at}); ++i; break;
            default:
                throw ParseError(at, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, 0, src.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    NCElement parse() {
        NCElement e = expr();
        expect(Tok::End, "trailing input");
        return e;
    }

private:
    enum class AtomKind { Scalar, GenA, GenAs, GenG, GenGs, Composite };
    struct Value {
        NCElement elem;
        AtomKind kind;
    };

    const Token& cur() const { return toks_[pos_]; }
    bool accept(Tok t) {
        if (cur().kind == t) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(Tok t, const char* what) {
        if (!accept(t)) throw ParseError(cur().offset, what);
    }

    NCElement expr() {
        bool neg = accept(Tok::Minus);
        NCElement acc = term();
        if (neg) acc = -acc;
        for (;;) {
            if (accept(Tok::Plus))
                acc += term();
            else if (accept(Tok::Minus))
                acc -= term();
            else
                return acc;
        }
    }

    NCElement term() {
        NCElement acc = factor();
        for (;;) {
            if (accept(Tok::Mul)) {
                acc *= factor();
            } else if (cur().kind == Tok::Div) {
                std::size_t at = cur().offset;
                ++pos_;
                NCElement rhs = factor();
                if (!rhs.isScalar())
                    throw ParseError(at, "division is only defined by scalar factors");
                RatFunc d = rhs.scalarValue();
                if (d.isZero()) throw ParseError(at, "division by zero");
                acc = acc * (RatFunc(1L) / d);
            } else {
                return acc;
            }
        }
    }

    NCElement factor() {
        Value v = atom();
        if (!accept(Tok::Pow)) return v.elem;
        std::size_t at = cur().offset;
        int e = signedInt();
        switch (v.kind) {
            case AtomKind::Scalar: {
                RatFunc c = v.elem.scalarValue();
                if (c.isZero() && e < 0) throw ParseError(at, "negative power of zero");
                return NCElement(c.pow(e));
            }
            case AtomKind::GenA:
                if (e == 0) throw ParseError(at, "zero exponent on a generator");
                return NCElement::monomial({e, 0, 0});
            case AtomKind::GenAs:
                if (e <= 0) throw ParseError(at, "exponent on 'a*' must be a positive integer");
                return NCElement::monomial({-e, 0, 0});
            case AtomKind::GenG:
                if (e <= 0) throw ParseError(at, "exponent on 'g' must be a positive integer");
                return NCElement::monomial({0, e, 0});
            case AtomKind::GenGs:
                if (e <= 0) throw ParseError(at, "exponent on 'g*' must be a positive integer");
                return NCElement::monomial({0, 0, e});
            case AtomKind::Composite: {
                if (v.elem.isScalar()) {
                    RatFunc c = v.elem.scalarValue();
                    if (c.isZero() && e < 0) throw ParseError(at, "negative power of zero");
                    return NCElement(c.pow(e));
                }
                if (e <= 0)
                    throw ParseError(at, "exponent on a noncommutative expression must be positive");
                NCElement r = NCElement::one();
                for (int i = 0; i < e; ++i) r *= v.elem;
                return r;
            }
        }
        throw ParseError(at, "unreachable");
    }

    int signedInt() {
        bool neg = accept(Tok::Minus);
        if (cur().kind != Tok::Num) throw ParseError(cur().offset, "expected integer exponent");
        mpq_class v = cur().num;
        if (v.get_den() != 1 || !v.get_num().fits_sint_p())
            throw ParseError(cur().offset, "exponent must be a small integer");
        ++pos_;
        int e = static_cast<int>(v.get_num().get_si());
        return neg ? -e : e;
    }

    Value atom() {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::Num: ++pos_; return {NCElement(RatFunc(t.num)), AtomKind::Scalar};
            case Tok::Q: ++pos_; return {NCElement(RatFunc::q(1)), AtomKind::Scalar};
            case Tok::A: ++pos_; return {NCElement::alpha(), AtomKind::GenA};
            case Tok::AStar: ++pos_; return {NCElement::alphaStar(), AtomKind::GenAs};
            case Tok::G: ++pos_; return {NCElement::gamma(), AtomKind::GenG};
            case Tok::GStar: ++pos_; return {NCElement::gammaStar(), AtomKind::GenGs};
            case Tok::LParen: {
                ++pos_;
                NCElement e = expr();
                expect(Tok::RParen, "expected ')'");
                return {e, AtomKind::Composite};
            }
            default: throw ParseError(t.offset, "expected an atom");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace parsedetail

/// Parse a string in the expression grammar into a normal-form element.
inline NCElement parseElement(std::string_view src) { return parsedetail::Parser(src).parse(); }

/// Parse a string that must denote a scalar (a rational function of q).
inline RatFunc parseScalar(std::string_view src) {
    NCElement e = parseElement(src);
    if (!e.isScalar()) throw ParseError(0, "expected a scalar expression");
    return e.scalarValue();
}

/// Deterministic canonical rendering; inverse of parseElement on canonical strings.
inline std::string printElement(const NCElement& x) { return x.str(); }

} // namespace qsphere

#include "berkdyn/parse.hpp"

#include <cctype>
#include <sstream>

namespace berkdyn {

namespace {

// rational function as a pair (num, den); den never zero
struct RF {
    Poly num;
    Poly den;
};

RF rf_const(const Rat& c) { return RF{Poly::constant(c), Poly::constant(1)}; }
RF rf_var() { return RF{Poly({Rat(0), Rat(1)}), Poly::constant(1)}; }
RF rf_add(const RF& a, const RF& b) { return RF{a.num * b.den + b.num * a.den, a.den * b.den}; }
RF rf_sub(const RF& a, const RF& b) { return RF{a.num * b.den - b.num * a.den, a.den * b.den}; }
RF rf_mul(const RF& a, const RF& b) { return RF{a.num * b.num, a.den * b.den}; }
RF rf_div(const RF& a, const RF& b, size_t pos) {
    if (b.num.is_zero()) fail(ErrorCode::SyntaxError, "division by zero at position " + std::to_string(pos));
    return RF{a.num * b.den, a.den * b.num};
}
RF rf_neg(const RF& a) { return RF{-a.num, a.den}; }

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    RF parse() {
        RF r = expr();
        skip_ws();
        if (pos_ != s_.size())
            fail(ErrorCode::SyntaxError, "unexpected character '" + std::string(1, s_[pos_]) +
                                             "' at position " + std::to_string(pos_));
        return r;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    RF expr() {
        RF acc = term();
        while (true) {
            if (eat('+'))
                acc = rf_add(acc, term());
            else if (eat('-'))
                acc = rf_sub(acc, term());
            else
                return acc;
        }
    }

    RF term() {
        RF acc = factor();
        while (true) {
            if (eat('*'))
                acc = rf_mul(acc, factor());
            else if (eat('/'))
                acc = rf_div(acc, factor(), pos_);
            else
                return acc;
        }
    }

    RF factor() {
        if (eat('-')) return rf_neg(factor());
        if (eat('+')) return factor();
        RF base = atom();
        if (eat('^')) {
            long e = integer();
            if (e < 0) fail(ErrorCode::SyntaxError, "negative exponent at position " + std::to_string(pos_));
            RF acc = rf_const(Rat(1));
            for (long i = 0; i < e; ++i) acc = rf_mul(acc, base);
            return acc;
        }
        return base;
    }

    RF atom() {
        skip_ws();
        if (eat('(')) {
            RF r = expr();
            if (!eat(')'))
                fail(ErrorCode::SyntaxError, "missing ')' at position " + std::to_string(pos_));
            return r;
        }
        char c = peek();
        if (c == 'z') {
            ++pos_;
            return rf_var();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return rf_const(Rat(integer()));
        fail(ErrorCode::SyntaxError, "expected a term at position " + std::to_string(pos_));
    }

    long integer() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_)
            fail(ErrorCode::SyntaxError, "expected a number at position " + std::to_string(pos_));
        return std::stol(s_.substr(start, pos_ - start));
    }

    const std::string& s_;
    size_t pos_ = 0;
};

} // namespace

RatMap parse_map(const std::string& text, const Int& p) {
    Parser parser(text);
    RF rf = parser.parse();
    if (rf.num.is_zero()) fail(ErrorCode::ConstantMap, "the zero map is constant");
    RatMap R(rf.num, rf.den, p);
    if (R.degree() < 1) fail(ErrorCode::ConstantMap, "constant maps are rejected");
    return R;
}

std::string render_poly(const Poly& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i <= f.degree(); ++i) {
        Rat c = f.coeff(static_cast<size_t>(i));
        if (c == 0) continue;
        if (!first) os << (c < 0 ? " - " : " + ");
        if (first && c < 0) os << "-";
        first = false;
        Rat ac = abs(c);
        bool unit = (ac == 1);
        if (i == 0 || !unit) {
            if (ac.get_den() == 1)
                os << ac.get_num().get_str();
            else
                os << ac.get_num().get_str() << "/" << ac.get_den().get_str();
        }
        if (i > 0) {
            if (!unit) os << "*";
            os << "z";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::string render_map(const RatMap& R) {
    std::string n = render_poly(R.num());
    if (R.den().degree() == 0 && R.den().coeff(0) == 1) return n;
    return "(" + n + ")/(" + render_poly(R.den()) + ")";
}

ProjPoint parse_proj_point(const std::string& text) {
    std::string s = text;
    // trim
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s == "inf" || s == "infinity" || s == "oo") return ProjPoint::infinity();
    auto r = rat_from_string(s);
    if (!r) fail(ErrorCode::SyntaxError, "not a rational point: '" + text + "'");
    return ProjPoint::finite(*r);
}

BerkPoint parse_point(const std::string& text, const Int& p) {
    std::string s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    auto inner = [&](size_t prefix) {
        if (s.back() != ')') fail(ErrorCode::SyntaxError, "missing ')' in point '" + text + "'");
        return s.substr(prefix, s.size() - prefix - 1);
    };
    if (s.rfind("II(", 0) == 0) {
        std::string body = inner(3);
        size_t comma = body.find(',');
        if (comma == std::string::npos)
            fail(ErrorCode::SyntaxError, "II(a, t) needs two arguments: '" + text + "'");
        auto a = rat_from_string(body.substr(0, comma));
        std::string texp = body.substr(comma + 1);
        while (!texp.empty() && std::isspace(static_cast<unsigned char>(texp.front())))
            texp.erase(texp.begin());
        auto t = rat_from_string(texp);
        if (!a || !t) fail(ErrorCode::SyntaxError, "bad rational in point '" + text + "'");
        return BerkPoint::type2(*a, *t, p);
    }
    if (s.rfind("I(", 0) == 0) {
        return BerkPoint::type1(parse_proj_point(inner(2)));
    }
    fail(ErrorCode::SyntaxError, "points are written II(a, t) or I(x): '" + text + "'");
}

Annulus parse_annulus(const std::string& text) {
    std::istringstream is(text);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(is, part, ';')) parts.push_back(part);
    if (parts.size() != 3)
        fail(ErrorCode::SyntaxError, "annulus is written center;t_in;t_out: '" + text + "'");
    auto c = rat_from_string(parts[0]);
    auto tin = rat_from_string(parts[1]);
    auto tout = rat_from_string(parts[2]);
    if (!c || !tin || !tout) fail(ErrorCode::SyntaxError, "bad rational in annulus '" + text + "'");
    return make_annulus(*c, *tin, *tout);
}

} // namespace berkdyn

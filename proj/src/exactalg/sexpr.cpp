#include "exactalg/sexpr.h"

#include <cctype>
#include <sstream>

namespace exactalg {

std::string to_sexpr(const Element& e) {
    std::ostringstream os;
    os << "(+";
    for (const auto& [m, c] : e.terms) {
        os << " (mon " << c.str();
        for (const auto& f : m)
            os << " (" << kind_name(f.kind) << " " << f.index << " " << f.power << ")";
        os << ")";
    }
    os << ")";
    return os.str();
}

namespace {

struct Lexer {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c))
            throw parse_error(std::string("expected '") + c + "' at offset " +
                              std::to_string(pos));
    }
    std::string token() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
               s[pos] != '(' && s[pos] != ')')
            ++pos;
        if (start == pos) throw parse_error("expected token at offset " + std::to_string(pos));
        return s.substr(start, pos - start);
    }
    bool at(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
};

int parse_int(const std::string& t) {
    size_t used = 0;
    int v = std::stoi(t, &used);
    if (used != t.size()) throw parse_error("bad integer: " + t);
    return v;
}

Rational parse_rational(const std::string& t) {
    auto slash = t.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(boost::multiprecision::cpp_int(t));
        return Rational(boost::multiprecision::cpp_int(t.substr(0, slash)),
                        boost::multiprecision::cpp_int(t.substr(slash + 1)));
    } catch (const std::exception&) {
        throw parse_error("bad rational: " + t);
    }
}

}  // namespace

Element parse_sexpr(const std::string& text, PresPtr pres) {
    Lexer lx{text};
    lx.expect('(');
    if (lx.token() != "+") throw parse_error("expected (+ ...)");
    Element out = make_scalar(0, pres);
    while (!lx.eat(')')) {
        lx.expect('(');
        if (lx.token() != "mon") throw parse_error("expected (mon ...)");
        Rational coeff = parse_rational(lx.token());
        std::vector<Factor> word;
        while (!lx.eat(')')) {
            lx.expect('(');
            auto k = kind_from_name(lx.token());
            if (!k) throw parse_error("unknown generator kind");
            int index = parse_int(lx.token());
            int power = parse_int(lx.token());
            lx.expect(')');
            word.push_back({*k, index, power});
        }
        Element term = pres ? normal_form(pres, word, coeff) : [&] {
            if (!word.empty()) throw parse_error("generator without presentation");
            return make_scalar(coeff);
        }();
        out = add(out, term);
    }
    lx.skip_ws();
    if (lx.pos != text.size()) throw parse_error("trailing input");
    return out;
}

}  // namespace exactalg

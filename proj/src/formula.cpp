#include "perconv/formula.hpp"

#include "perconv/elements.hpp"
#include "perconv/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace perconv {

double Composition::total() const {
    double t = 0.0;
    for (const auto& [sym, n] : entries) t += n;
    return t;
}

std::string Composition::key() const {
    std::string out;
    char buf[64];
    for (const auto& [sym, n] : entries) {
        std::snprintf(buf, sizeof buf, "%s:%.12g;", sym.c_str(), n);
        out += buf;
    }
    return out;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Composition run() {
        if (text_.empty()) throw FormulaSyntaxError("empty formula", 0);
        Composition c;
        parse_sequence(c, 1.0, 0);
        if (pos_ != text_.size())
            throw FormulaSyntaxError("unexpected character", pos_);
        if (c.entries.empty()) throw FormulaSyntaxError("formula names no elements", 0);
        return c;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    // Parses until end of input or a closing paren at this depth.
    void parse_sequence(Composition& out, double multiplier, int depth) {
        while (pos_ < text_.size()) {
            char c = peek();
            if (c == '(') {
                std::size_t open = pos_++;
                Composition group;
                parse_sequence(group, 1.0, depth + 1);
                if (peek() != ')')
                    throw FormulaSyntaxError("unbalanced '('", open);
                ++pos_;
                double n = parse_count();
                for (const auto& [sym, cnt] : group.entries)
                    add(out, sym, cnt * n * multiplier);
            } else if (c == ')') {
                if (depth == 0) throw FormulaSyntaxError("unbalanced ')'", pos_);
                return;
            } else if (std::isupper(static_cast<unsigned char>(c))) {
                std::size_t start = pos_++;
                while (pos_ < text_.size() &&
                       std::islower(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
                std::string sym(text_.substr(start, pos_ - start));
                if (!atomic_number_of(sym)) throw UnknownElement(sym);
                add(out, sym, parse_count() * multiplier);
            } else {
                throw FormulaSyntaxError("unexpected character", pos_);
            }
        }
    }

    double parse_count() {
        char c = peek();
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.') return 1.0;
        std::size_t start = pos_;
        bool dot = false;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(d))) {
                ++pos_;
            } else if (d == '.') {
                if (dot) throw FormulaSyntaxError("malformed number", start);
                dot = true;
                ++pos_;
            } else {
                break;
            }
        }
        std::string tok(text_.substr(start, pos_ - start));
        if (tok == ".") throw FormulaSyntaxError("malformed number", start);
        return std::strtod(tok.c_str(), nullptr);
    }

    static void add(Composition& out, const std::string& sym, double n) {
        if (n == 0.0) return; // explicit zero count contributes nothing
        auto [it, inserted] = out.entries.try_emplace(sym, n);
        if (!inserted) it->second += n;
    }
};

} // namespace

Composition parse_formula(std::string_view text) {
    return Parser(text).run();
}

Composition to_relative(const Composition& c) {
    if (c.entries.empty()) throw EmptyComposition();
    if (c.representation == Representation::Relative) return c;
    double t = c.total();
    Composition out;
    out.representation = Representation::Relative;
    for (const auto& [sym, n] : c.entries) out.entries.emplace(sym, n / t);
    return out;
}

} // namespace perconv

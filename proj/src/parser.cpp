#include "oista/parser.hpp"

#include <cctype>
#include <map>
#include <optional>

namespace oista {

namespace {

struct Token {
    enum Kind { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, Comma, End } kind;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    Lexer(const std::string& text, int line0 = 1, int col0 = 1)
        : text_(text), line_(line0), col_(col0) {}

    Token next() {
        skip_space();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) {
            t.kind = Token::End;
            return t;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                advance();
            // 'p/q' rational literal: '/' glued to digits on both sides
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
                std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                advance();
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    advance();
            }
            t.kind = Token::Number;
            t.text = text_.substr(start, pos_ - start);
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                advance();
            t.kind = Token::Ident;
            t.text = text_.substr(start, pos_ - start);
            return t;
        }
        advance();
        switch (c) {
            case '+': t.kind = Token::Plus; return t;
            case '-': t.kind = Token::Minus; return t;
            case '*': t.kind = Token::Star; return t;
            case '^': t.kind = Token::Caret; return t;
            case '(': t.kind = Token::LParen; return t;
            case ')': t.kind = Token::RParen; return t;
            case ',': t.kind = Token::Comma; return t;
            default:
                throw SyntaxError(std::string("unexpected character '") + c + "'", t.line, t.col);
        }
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_space() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            advance();
    }
    const std::string& text_;
    std::size_t pos_ = 0;
    int line_, col_;
};

class ExprParser {
public:
    ExprParser(const std::string& text, const SymbolRegistry& reg, bool time_mode, int line0,
               int col0)
        : lexer_(text, line0, col0), reg_(reg), time_mode_(time_mode) {
        cur_ = lexer_.next();
    }

    Polynomial parse_full() {
        Polynomial p = expr();
        expect(Token::End, "end of expression");
        return p;
    }

private:
    Polynomial expr() {
        bool negate = false;
        if (cur_.kind == Token::Minus) {
            negate = true;
            shift();
        }
        Polynomial acc = term();
        if (negate) acc = -acc;
        while (cur_.kind == Token::Plus || cur_.kind == Token::Minus) {
            bool minus = cur_.kind == Token::Minus;
            shift();
            Polynomial rhs = term();
            if (minus)
                acc -= rhs;
            else
                acc += rhs;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (cur_.kind == Token::Star) {
            shift();
            acc *= factor();
        }
        return acc;
    }

    Polynomial factor() {
        Polynomial b = base();
        if (cur_.kind == Token::Caret) {
            shift();
            if (cur_.kind != Token::Number || cur_.text.find('/') != std::string::npos)
                throw SyntaxError("exponent must be a nonnegative integer", cur_.line, cur_.col);
            unsigned long e = std::stoul(cur_.text);
            shift();
            b = b.pow(static_cast<std::uint32_t>(e));
        }
        return b;
    }

    Polynomial base() {
        if (cur_.kind == Token::Number) {
            Rational q = parse_rational(cur_.text);
            shift();
            return Polynomial::constant(q);
        }
        if (cur_.kind == Token::Ident) {
            std::string name = cur_.text;
            if (time_mode_) {
                if (name != "t")
                    throw SyntaxError("only 't' is allowed in an input signal, got '" + name + "'",
                                      cur_.line, cur_.col);
                shift();
                return Polynomial::variable(reg_.time());
            }
            int idx = reg_.state_index(name);
            if (idx < 0)
                throw SyntaxError("undeclared identifier '" + name + "'", cur_.line, cur_.col);
            shift();
            return Polynomial::variable(reg_.state(idx));
        }
        if (cur_.kind == Token::LParen) {
            shift();
            Polynomial p = expr();
            expect(Token::RParen, "')'");
            return p;
        }
        throw SyntaxError("expected a number, identifier, or '('", cur_.line, cur_.col);
    }

    void shift() { cur_ = lexer_.next(); }
    void expect(Token::Kind k, const char* what) {
        if (cur_.kind != k)
            throw SyntaxError(std::string("expected ") + what, cur_.line, cur_.col);
        shift();
    }

    Lexer lexer_;
    Token cur_;
    const SymbolRegistry& reg_;
    bool time_mode_;
};

struct Line {
    std::string key;   // empty for the bare header line
    std::string value;
    int line = 0;
    int value_col = 0;
};

std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> out;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string raw =
            text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        ++lineno;
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::size_t b = raw.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = raw.find_last_not_of(" \t\r");
        std::string body = raw.substr(b, e - b + 1);
        Line l;
        l.line = lineno;
        auto colon = body.find(':');
        if (colon == std::string::npos) {
            l.value = body;
            l.value_col = static_cast<int>(b) + 1;
        } else {
            l.key = body.substr(0, colon);
            std::size_t vb = body.find_first_not_of(" \t", colon + 1);
            l.value = vb == std::string::npos ? "" : body.substr(vb);
            l.value_col = static_cast<int>(b + (vb == std::string::npos ? colon + 1 : vb)) + 1;
        }
        out.push_back(std::move(l));
    }
    return out;
}

/// Splits "[a, b, c]" into element strings with their column offsets.
std::vector<std::pair<std::string, int>> split_vector(const Line& l) {
    const std::string& v = l.value;
    if (v.empty() || v.front() != '[')
        throw SyntaxError("expected '[' to open a vector", l.line, l.value_col);
    if (v.back() != ']')
        throw SyntaxError("expected ']' to close the vector", l.line,
                          l.value_col + static_cast<int>(v.size()) - 1);
    std::vector<std::pair<std::string, int>> out;
    int depth = 0;
    std::size_t start = 1;
    for (std::size_t i = 1; i + 1 <= v.size() - 1; ++i) {
        char c = v[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.emplace_back(v.substr(start, i - start), l.value_col + static_cast<int>(start));
            start = i + 1;
        }
    }
    out.emplace_back(v.substr(start, v.size() - 1 - start),
                     l.value_col + static_cast<int>(start));
    return out;
}

std::vector<Polynomial> parse_vector(const Line& l, const SymbolRegistry& reg) {
    std::vector<Polynomial> out;
    for (auto& [text, col] : split_vector(l)) {
        ExprParser p(text, reg, false, l.line, col);
        out.push_back(p.parse_full());
    }
    return out;
}

} // namespace

AffineSystem parse_system(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty()) throw SyntaxError("empty system file", 1, 1);
    if (!lines[0].key.empty() || lines[0].value != "affine")
        throw SyntaxError("first entry must be the header 'affine'", lines[0].line, 1);

    std::string name;
    std::vector<std::string> states;
    int inputs = -1;
    std::map<std::string, Line> sections;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& l = lines[i];
        if (l.key.empty())
            throw SyntaxError("expected 'key: value'", l.line, 1);
        if (l.key == "name") {
            name = l.value;
        } else if (l.key == "states") {
            std::size_t pos = 0;
            while (pos <= l.value.size()) {
                auto comma = l.value.find(',', pos);
                std::string item = l.value.substr(
                    pos, comma == std::string::npos ? std::string::npos : comma - pos);
                std::size_t b = item.find_first_not_of(" \t");
                if (b == std::string::npos)
                    throw SyntaxError("empty state name", l.line, l.value_col);
                std::size_t e = item.find_last_not_of(" \t");
                states.push_back(item.substr(b, e - b + 1));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        } else if (l.key == "inputs") {
            try {
                inputs = std::stoi(l.value);
            } catch (...) {
                throw SyntaxError("inputs must be a nonnegative integer", l.line, l.value_col);
            }
            if (inputs < 0)
                throw SyntaxError("inputs must be a nonnegative integer", l.line, l.value_col);
        } else {
            if (sections.count(l.key))
                throw SyntaxError("duplicate section '" + l.key + "'", l.line, 1);
            sections.emplace(l.key, l);
        }
    }
    if (states.empty()) throw SyntaxError("missing 'states:' declaration", 1, 1);
    if (inputs < 0) throw SyntaxError("missing 'inputs:' declaration", 1, 1);
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j)
            if (states[i] == states[j])
                throw SyntaxError("duplicate state name '" + states[i] + "'", 1, 1);
    if (!sections.count("h")) throw SyntaxError("missing 'h:' section", 1, 1);
    if (!sections.count("f")) throw SyntaxError("missing 'f:' section", 1, 1);

    const Line& hline = sections.at("h");

    AffineSystem sys;
    sys.name = name;
    sys.n = static_cast<int>(states.size());
    sys.m = inputs;
    // p comes from the h vector length
    {
        auto probe = split_vector(hline);
        sys.p = static_cast<int>(probe.size());
    }
    sys.registry = std::make_shared<SymbolRegistry>(states, sys.m, sys.p);
    const SymbolRegistry& reg = *sys.registry;

    sys.f = parse_vector(sections.at("f"), reg);
    if (static_cast<int>(sys.f.size()) != sys.n)
        throw SyntaxError("f must have " + std::to_string(sys.n) + " entries",
                          sections.at("f").line, sections.at("f").value_col);
    sys.h = parse_vector(hline, reg);

    sys.g.assign(sys.n, std::vector<Polynomial>(sys.m));
    for (int j = 1; j <= sys.m; ++j) {
        std::string key = "g" + std::to_string(j);
        auto it = sections.find(key);
        if (it == sections.end())
            throw SyntaxError("missing '" + key + ":' section", 1, 1);
        auto col = parse_vector(it->second, reg);
        if (static_cast<int>(col.size()) != sys.n)
            throw SyntaxError(key + " must have " + std::to_string(sys.n) + " entries",
                              it->second.line, it->second.value_col);
        for (int i = 0; i < sys.n; ++i) sys.g[i][j - 1] = std::move(col[i]);
    }
    for (auto& [key, line] : sections) {
        if (key == "f" || key == "h") continue;
        if (key.size() >= 2 && key[0] == 'g') {
            int idx = 0;
            try {
                idx = std::stoi(key.substr(1));
            } catch (...) {
                idx = 0;
            }
            if (idx >= 1 && idx <= sys.m) continue;
        }
        throw SyntaxError("unknown section '" + key + "'", line.line, 1);
    }
    return sys;
}

Polynomial parse_state_polynomial(const std::string& text,
                                  const std::shared_ptr<const SymbolRegistry>& registry) {
    ExprParser p(text, *registry, false, 1, 1);
    return p.parse_full();
}

Polynomial parse_time_polynomial(const std::string& text,
                                 const std::shared_ptr<const SymbolRegistry>& registry) {
    ExprParser p(text, *registry, true, 1, 1);
    return p.parse_full();
}

} // namespace oista

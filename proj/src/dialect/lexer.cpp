#include "suitesmith/dialect/token.hpp"

#include <cctype>
#include <cstdlib>

namespace suitesmith::dialect {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_cont(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

const char* kOperators[] = {
    "**=", "//=", "<<", ">>", "==", "!=", "<=", ">=", "->", "+=", "-=", "*=", "/=",
    "%=",  "**", "//", "&=", "|=", "^=", "(",  ")",  "[",  "]",  "{",  "}",  ",",
    ":",   ".",  ";",  "@",  "=",  "+",  "-",  "*",  "/",  "%",  "<",  ">",  "&",
    "|",   "^",  "~",
};

}  // namespace

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::vector<int> indents{0};
    size_t i = 0;
    int line = 1;
    int paren_depth = 0;
    bool at_line_start = true;

    auto col_of = [&](size_t pos) {
        // column from last newline before pos
        size_t nl = src.rfind('\n', pos == 0 ? 0 : pos - 1);
        return static_cast<int>(pos - (nl == std::string::npos ? 0 : nl + 1)) + 1;
    };

    while (i <= src.size()) {
        if (at_line_start && paren_depth == 0) {
            // measure indentation; skip blank and comment-only lines
            size_t j = i;
            int indent = 0;
            while (j < src.size() && (src[j] == ' ' || src[j] == '\t')) {
                indent += (src[j] == '\t') ? 8 - (indent % 8) : 1;
                ++j;
            }
            if (j >= src.size()) break;
            if (src[j] == '\n') {
                i = j + 1;
                ++line;
                continue;
            }
            if (src[j] == '#') {
                while (j < src.size() && src[j] != '\n') ++j;
                i = (j < src.size()) ? j + 1 : j;
                ++line;
                continue;
            }
            if (indent > indents.back()) {
                indents.push_back(indent);
                out.push_back({TokKind::Indent, "", line, 1});
            } else {
                while (indent < indents.back()) {
                    indents.pop_back();
                    out.push_back({TokKind::Dedent, "", line, 1});
                }
                if (indent != indents.back())
                    throw SyntaxError{"unindent does not match any outer indentation level", line, 1};
            }
            i = j;
            at_line_start = false;
            continue;
        }
        if (i >= src.size()) break;
        char c = src[i];
        if (c == '\n') {
            ++line;
            ++i;
            if (paren_depth == 0) {
                if (!out.empty() && out.back().kind != TokKind::Newline &&
                    out.back().kind != TokKind::Indent && out.back().kind != TokKind::Dedent)
                    out.push_back({TokKind::Newline, "", line - 1, col_of(i - 1)});
                at_line_start = true;
            }
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        if (c == '\\' && i + 1 < src.size() && src[i + 1] == '\n') {
            i += 2;
            ++line;
            continue;
        }
        int tok_col = col_of(i);
        // string literal, with optional r/b/f prefix
        {
            size_t s = i;
            bool raw = false, fstr = false;
            while (s < src.size() && (src[s] == 'r' || src[s] == 'R' || src[s] == 'b' || src[s] == 'B' ||
                                      src[s] == 'f' || src[s] == 'F') &&
                   s - i < 2) {
                if (src[s] == 'r' || src[s] == 'R') raw = true;
                if (src[s] == 'f' || src[s] == 'F') fstr = true;
                ++s;
            }
            if (s < src.size() && (src[s] == '\'' || src[s] == '"')) {
                if (fstr)
                    throw SyntaxError{"f-string literals are not supported in this dialect", line, tok_col};
                char q = src[s];
                bool triple = s + 2 < src.size() && src[s + 1] == q && src[s + 2] == q;
                size_t p = s + (triple ? 3 : 1);
                std::string value;
                int start_line = line;
                const std::string closer(triple ? 3 : 1, q);
                while (true) {
                    if (p >= src.size())
                        throw SyntaxError{"unterminated string literal", start_line, tok_col};
                    if (!triple && src[p] == '\n')
                        throw SyntaxError{"unterminated string literal", start_line, tok_col};
                    if (src[p] == q && src.compare(p, closer.size(), closer) == 0) {
                        p += closer.size();
                        break;
                    }
                    if (src[p] == '\\' && !raw && p + 1 < src.size()) {
                        char e = src[p + 1];
                        switch (e) {
                            case 'n': value += '\n'; break;
                            case 't': value += '\t'; break;
                            case 'r': value += '\r'; break;
                            case '\\': value += '\\'; break;
                            case '\'': value += '\''; break;
                            case '"': value += '"'; break;
                            case '0': value += '\0'; break;
                            case '\n': ++line; break;
                            default: value += '\\'; value += e; break;
                        }
                        p += 2;
                        continue;
                    }
                    if (src[p] == '\n') ++line;
                    value += src[p];
                    ++p;
                }
                Token t{TokKind::String, value, start_line, tok_col};
                t.raw = raw;
                out.push_back(t);
                i = p;
                continue;
            }
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            size_t p = i;
            bool is_float = false;
            if (c == '0' && p + 1 < src.size() && (src[p + 1] == 'x' || src[p + 1] == 'X')) {
                p += 2;
                while (p < src.size() && std::isxdigit(static_cast<unsigned char>(src[p]))) ++p;
            } else {
                while (p < src.size() && (std::isdigit(static_cast<unsigned char>(src[p])) || src[p] == '_')) ++p;
                if (p < src.size() && src[p] == '.') {
                    is_float = true;
                    ++p;
                    while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
                }
                if (p < src.size() && (src[p] == 'e' || src[p] == 'E')) {
                    size_t q = p + 1;
                    if (q < src.size() && (src[q] == '+' || src[q] == '-')) ++q;
                    if (q < src.size() && std::isdigit(static_cast<unsigned char>(src[q]))) {
                        is_float = true;
                        p = q;
                        while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
                    }
                }
            }
            Token t{TokKind::Number, src.substr(i, p - i), line, tok_col};
            t.is_float = is_float;
            out.push_back(t);
            i = p;
            continue;
        }
        if (is_ident_start(c)) {
            size_t p = i + 1;
            while (p < src.size() && is_ident_cont(src[p])) ++p;
            out.push_back({TokKind::Name, src.substr(i, p - i), line, tok_col});
            i = p;
            continue;
        }
        bool matched = false;
        for (const char* op : kOperators) {
            size_t n = std::string::traits_type::length(op);
            if (src.compare(i, n, op) == 0) {
                if (op[0] == '(' || op[0] == '[' || op[0] == '{') ++paren_depth;
                if (op[0] == ')' || op[0] == ']' || op[0] == '}') --paren_depth;
                if (paren_depth < 0)
                    throw SyntaxError{std::string("unmatched '") + op + "'", line, tok_col};
                out.push_back({TokKind::Op, op, line, tok_col});
                i += n;
                matched = true;
                break;
            }
        }
        if (!matched)
            throw SyntaxError{std::string("invalid character '") + c + "'", line, tok_col};
    }
    if (!out.empty() && out.back().kind != TokKind::Newline)
        out.push_back({TokKind::Newline, "", line, 1});
    while (indents.size() > 1) {
        indents.pop_back();
        out.push_back({TokKind::Dedent, "", line, 1});
    }
    out.push_back({TokKind::EndOfFile, "", line, 1});
    return out;
}

}  // namespace suitesmith::dialect

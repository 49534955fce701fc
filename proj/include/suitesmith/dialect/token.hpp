#pragma once

#include <string>
#include <vector>

namespace suitesmith::dialect {

enum class TokKind {
    Name,
    Number,
    String,
    Op,
    Newline,
    Indent,
    Dedent,
    EndOfFile,
};

struct Token {
    TokKind kind;
    std::string text;   // lexeme; for String, the decoded value
    int line = 1;
    int col = 1;
    bool is_float = false;  // Number only
    bool raw = false;       // String only: r-prefix
};

/// Raised by the lexer and parser on malformed input.
struct SyntaxError {
    std::string message;
    int line = 0;
    int col = 0;
};

std::vector<Token> lex(const std::string& source);

}  // namespace suitesmith::dialect

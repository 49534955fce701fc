#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace suitesmith::dialect {

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

enum class ExprKind {
    IntLit,
    FloatLit,
    StrLit,
    BoolLit,
    NoneLit,
    Name,
    BinOp,
    UnaryOp,
    BoolOp,     // and/or chains
    Compare,    // chained comparisons
    Call,
    Attribute,
    Subscript,
    Slice,
    ListLit,
    TupleLit,
    DictLit,
    SetLit,
    IfExp,
    Lambda,
};

struct Keyword {
    std::string name;
    ExprPtr value;
};

struct Expr {
    ExprKind kind;
    int line = 0;
    int col = 0;

    long long int_val = 0;
    double float_val = 0.0;
    std::string str_val;   // StrLit value; Name identifier; BinOp/UnaryOp/BoolOp operator; Attribute name
    bool bool_val = false;

    ExprPtr a;                       // left / operand / func / object / test
    ExprPtr b;                       // right / index / body
    ExprPtr c;                       // orelse / step
    std::vector<ExprPtr> elems;      // call args, list/tuple/set elems, BoolOp values, comparators
    std::vector<std::string> ops;    // Compare operators
    std::vector<Keyword> keywords;   // call keyword args
    std::vector<ExprPtr> keys;       // DictLit keys (values in elems)
    std::vector<std::string> params; // Lambda parameters
    int branch_id = -1;              // IfExp only
};

enum class StmtKind {
    ExprStmt,
    Assign,
    AugAssign,
    Assert,
    If,
    While,
    For,
    FuncDef,
    ClassDef,
    Return,
    Import,
    ImportFrom,
    Raise,
    Try,
    With,
    Pass,
    Break,
    Continue,
    Global,
};

struct ImportName {
    std::string module;
    std::string asname;  // empty = none
};

struct ExceptHandler {
    ExprPtr type;        // null = bare except
    std::string alias;   // "as e"
    std::vector<StmtPtr> body;
};

struct Param {
    std::string name;
    ExprPtr default_value;  // may be null
};

struct Stmt {
    StmtKind kind;
    int line = 0;
    int end_line = 0;  // last source line spanned by this statement (incl. body)
    int col = 0;

    ExprPtr expr;                  // ExprStmt / Assert test / If-While test / Return / Raise / For iter / With ctx
    ExprPtr target;                // Assign & AugAssign target, For target
    std::vector<ExprPtr> targets;  // extra targets in chained assignment (a = b = expr)
    ExprPtr value;                 // Assign & AugAssign value, Assert msg
    std::string op;                // AugAssign operator, e.g. "+="
    std::vector<StmtPtr> body;
    std::vector<StmtPtr> orelse;   // If/else; Try: not used
    std::vector<StmtPtr> final_body;  // Try finally
    std::vector<ExceptHandler> handlers;

    std::string name;              // FuncDef / ClassDef name; With alias; Global names joined
    std::vector<Param> params;     // FuncDef
    std::vector<ExprPtr> bases;    // ClassDef bases
    std::vector<ExprPtr> decorators;
    std::vector<ImportName> imports;   // Import / ImportFrom names
    std::string module;            // ImportFrom module
    std::vector<std::string> names;    // Global

    int branch_id = -1;  // set for If / While / For / (IfExp handled separately)
};

struct Module {
    std::vector<StmtPtr> stmts;
    int branch_count = 0;  // branch sites assigned across the whole module, incl. IfExp
};

using ModulePtr = std::shared_ptr<Module>;

/// Parses source text; throws SyntaxError on malformed input.
ModulePtr parse(const std::string& source);

}  // namespace suitesmith::dialect

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "suitesmith/dialect/ast.hpp"

namespace suitesmith::dialect {

struct Value;

struct ListObj {
    std::vector<Value> items;
};
struct TupleObj {
    std::vector<Value> items;
};
struct DictObj {
    // insertion-ordered; linear lookup keeps equality/ordering deterministic
    std::vector<std::pair<Value, Value>> items;
};
struct SetObj {
    std::vector<Value> items;  // no stored duplicates
};

struct Env;
using EnvPtr = std::shared_ptr<Env>;

struct FuncObj {
    std::string name;
    const Stmt* def = nullptr;  // FuncDef node; owning Module kept alive via `root`
    ModulePtr root;
    EnvPtr closure;
    std::string module_name;
    const Expr* lambda = nullptr;  // set instead of `def` for lambdas
};

struct BoundObj {
    std::shared_ptr<FuncObj> func;
    std::shared_ptr<Value> self;
};

struct BuiltinObj {
    std::string name;
    std::function<Value(std::vector<Value>&, std::vector<std::pair<std::string, Value>>&)> fn;
};

struct ClassObj {
    std::string name;
    std::shared_ptr<ClassObj> base;
    std::map<std::string, Value> attrs;
    bool is_exception = false;  // builtin exception type or derived from one
};

struct InstanceObj {
    std::shared_ptr<ClassObj> cls;
    std::map<std::string, Value> attrs;
};

struct ModuleObj {
    std::string name;
    EnvPtr env;
};

struct ApproxObj {
    Value* expected = nullptr;  // owned
    double rel = 1e-6;
    double abs_tol = 1e-12;
};

struct NoneType {};

struct Value {
    std::variant<NoneType, bool, long long, double, std::string, std::shared_ptr<ListObj>,
                 std::shared_ptr<TupleObj>, std::shared_ptr<DictObj>, std::shared_ptr<SetObj>,
                 std::shared_ptr<FuncObj>, std::shared_ptr<BoundObj>, std::shared_ptr<BuiltinObj>,
                 std::shared_ptr<ClassObj>, std::shared_ptr<InstanceObj>, std::shared_ptr<ModuleObj>,
                 std::shared_ptr<ApproxObj>>
        v;

    Value() : v(NoneType{}) {}
    template <typename T>
    Value(T x) : v(std::move(x)) {}

    template <typename T>
    bool is() const { return std::holds_alternative<T>(v); }
    template <typename T>
    const T& as() const { return std::get<T>(v); }
    template <typename T>
    T& as() { return std::get<T>(v); }
};

struct Env {
    EnvPtr parent;       // lexical chain; module env has no parent
    EnvPtr module_env;   // globals for name resolution inside functions
    std::map<std::string, Value> vars;
    std::vector<std::string> global_decls;
};

}  // namespace suitesmith::dialect

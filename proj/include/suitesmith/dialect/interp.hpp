#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "suitesmith/dialect/ast.hpp"
#include "suitesmith/dialect/value.hpp"

namespace suitesmith::dialect {

/// Runtime error raised by dialect code (AssertionError, NameError, ...).
struct PyError {
    std::string type;
    std::string message;
    int line = 0;
    Value instance;  // exception object, when one exists
};

/// Wall-clock budget exceeded; not catchable by dialect-level except blocks.
struct TimeoutSignal {};

/// pytest.skip() marker; surfaces as a skipped outcome, not a failure.
struct SkipSignal {
    std::string reason;
};

struct FileCoverage {
    std::set<int> lines;                      // executed statement lines
    std::set<std::pair<int, bool>> arms;      // (branch site id, direction taken)
};
using CoverageData = std::map<std::string, FileCoverage>;  // keyed by module name

/// Statically enumerates statement lines of a parsed module.
std::set<int> executable_lines(const Module& mod);

class Interpreter {
public:
    using SourceResolver = std::function<std::optional<std::string>(const std::string&)>;

    explicit Interpreter(SourceResolver resolver = {});

    /// Modules named here have line/branch hits recorded while executing.
    void instrument(const std::string& module_name);

    void set_deadline(std::chrono::steady_clock::time_point deadline) {
        deadline_ = deadline;
        has_deadline_ = true;
    }

    /// Parses and executes `source` as module `name`; the module becomes importable.
    /// Throws SyntaxError / PyError / TimeoutSignal.
    Value exec_module(const std::string& name, const std::string& source);
    Value exec_module(const std::string& name, ModulePtr ast);

    /// Imports by name: already-executed module, resolver-provided source, or builtin.
    Value import_module(const std::string& name, int line);

    Value call(const Value& callee, std::vector<Value> args);

    /// Looks up a top-level name in an executed module; nullopt if absent.
    std::optional<Value> module_attr(const std::string& module_name, const std::string& attr) const;

    const CoverageData& coverage() const { return coverage_; }
    const std::string& captured_output() const { return stdout_; }

    // value helpers shared with the metrics/test layers
    static bool truthy(const Value& v);
    static bool equals(const Value& a, const Value& b);
    static std::string repr(const Value& v);
    static std::string to_str(const Value& v);

private:
    struct Frame;
    enum class Flow { Normal, Break, Continue, Return };

    void check_budget();
    Flow exec_block(const std::vector<StmtPtr>& body, Frame& f);
    Flow exec_stmt(const Stmt& s, Frame& f);
    Value eval(const Expr& e, Frame& f);
    Value eval_call(const Expr& e, Frame& f);
    void assign_to(const Expr& target, const Value& val, Frame& f);
    Value lookup(const std::string& name, Frame& f, int line);
    Value get_attr(const Value& obj, const std::string& name, int line);
    void set_attr(Value& obj, const std::string& name, const Value& val, int line);
    Value get_item(const Value& obj, const Value& idx, int line);
    void set_item(Value& obj, const Value& idx, const Value& val, int line);
    Value binop(const std::string& op, const Value& a, const Value& b, int line);
    Value compare(const std::string& op, const Value& a, const Value& b, int line);
    Value call_function(const std::shared_ptr<FuncObj>& fn, const Value* self,
                        std::vector<Value>& args,
                        std::vector<std::pair<std::string, Value>>& kwargs, int line);
    Value instantiate(const std::shared_ptr<ClassObj>& cls, std::vector<Value>& args,
                      std::vector<std::pair<std::string, Value>>& kwargs, int line);
    [[noreturn]] void raise(const std::string& type, const std::string& msg, int line);

    Value make_builtin_module(const std::string& name);
    void install_builtins();
    std::shared_ptr<ClassObj> exception_class(const std::string& name);

    SourceResolver resolver_;
    EnvPtr builtins_;
    std::map<std::string, Value> modules_;            // executed modules
    std::map<std::string, ModulePtr> module_asts_;    // keep ASTs alive
    std::map<std::string, std::shared_ptr<ClassObj>> exc_classes_;
    std::set<std::string> instrumented_;
    CoverageData coverage_;
    std::string stdout_;

    std::chrono::steady_clock::time_point deadline_{};
    bool has_deadline_ = false;
    long long steps_ = 0;
    int depth_ = 0;
};

}  // namespace suitesmith::dialect

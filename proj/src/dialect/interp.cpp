#include "suitesmith/dialect/interp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "suitesmith/dialect/token.hpp"
#include "detail.hpp"

namespace suitesmith::dialect {

using namespace detail;

namespace {

void collect_lines(const Stmt& s, std::set<int>& out) {
    out.insert(s.line);
    for (const auto& c : s.body) collect_lines(*c, out);
    for (const auto& c : s.orelse) collect_lines(*c, out);
    for (const auto& c : s.final_body) collect_lines(*c, out);
    for (const auto& h : s.handlers)
        for (const auto& c : h.body) collect_lines(*c, out);
}

std::string fmt_double(double d) {
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    if (d == static_cast<long long>(d) && std::abs(d) < 1e16) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.1f", d);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", d);
    return buf;
}

const std::map<std::string, std::string>& exc_parents() {
    static const std::map<std::string, std::string> m = {
        {"Exception", "BaseException"},
        {"ArithmeticError", "Exception"},
        {"ZeroDivisionError", "ArithmeticError"},
        {"OverflowError", "ArithmeticError"},
        {"LookupError", "Exception"},
        {"IndexError", "LookupError"},
        {"KeyError", "LookupError"},
        {"AssertionError", "Exception"},
        {"ValueError", "Exception"},
        {"TypeError", "Exception"},
        {"NameError", "Exception"},
        {"AttributeError", "Exception"},
        {"ImportError", "Exception"},
        {"ModuleNotFoundError", "ImportError"},
        {"RuntimeError", "Exception"},
        {"RecursionError", "RuntimeError"},
        {"NotImplementedError", "RuntimeError"},
        {"StopIteration", "Exception"},
        {"IterationLimitError", "Exception"},
        {"Failed", "Exception"},
    };
    return m;
}

}  // namespace

std::set<int> executable_lines(const Module& mod) {
    std::set<int> out;
    for (const auto& s : mod.stmts) collect_lines(*s, out);
    return out;
}

struct Interpreter::Frame {
    EnvPtr env;
    std::string module;
    Value ret;
    std::optional<PyError> current_exc;
};

Interpreter::Interpreter(SourceResolver resolver) : resolver_(std::move(resolver)) {
    builtins_ = std::make_shared<Env>();
    install_builtins();
}

void Interpreter::instrument(const std::string& module_name) { instrumented_.insert(module_name); }

void Interpreter::check_budget() {
    if ((++steps_ & 1023) == 0 && has_deadline_) {
        if (std::chrono::steady_clock::now() > deadline_) throw TimeoutSignal{};
    }
}

[[noreturn]] void Interpreter::raise(const std::string& type, const std::string& msg, int line) {
    auto cls = exception_class(type);
    auto inst = std::make_shared<InstanceObj>();
    inst->cls = cls;
    auto args = std::make_shared<TupleObj>();
    if (!msg.empty()) args->items.push_back(Value{msg});
    inst->attrs["args"] = Value{args};
    throw PyError{type, msg, line, Value{inst}};
}

std::shared_ptr<ClassObj> Interpreter::exception_class(const std::string& name) {
    auto it = exc_classes_.find(name);
    if (it != exc_classes_.end()) return it->second;
    auto cls = std::make_shared<ClassObj>();
    cls->name = name;
    cls->is_exception = true;
    exc_classes_[name] = cls;
    auto p = exc_parents().find(name);
    if (p != exc_parents().end()) cls->base = exception_class(p->second);
    return cls;
}

// ---------------------------------------------------------------- value helpers

bool Interpreter::truthy(const Value& v) {
    if (v.is<NoneType>()) return false;
    if (v.is<bool>()) return v.as<bool>();
    if (v.is<long long>()) return v.as<long long>() != 0;
    if (v.is<double>()) return v.as<double>() != 0.0;
    if (v.is<std::string>()) return !v.as<std::string>().empty();
    if (v.is<std::shared_ptr<ListObj>>()) return !v.as<std::shared_ptr<ListObj>>()->items.empty();
    if (v.is<std::shared_ptr<TupleObj>>()) return !v.as<std::shared_ptr<TupleObj>>()->items.empty();
    if (v.is<std::shared_ptr<DictObj>>()) return !v.as<std::shared_ptr<DictObj>>()->items.empty();
    if (v.is<std::shared_ptr<SetObj>>()) return !v.as<std::shared_ptr<SetObj>>()->items.empty();
    return true;
}

static bool approx_eq_num(double actual, const ApproxObj& ap, double expected) {
    if (std::isnan(expected)) return std::isnan(actual);
    return std::abs(actual - expected) <= std::max(ap.rel * std::abs(expected), ap.abs_tol);
}

static bool approx_matches(const Value& actual, const ApproxObj& ap);

static bool approx_matches_one(const Value& actual, const ApproxObj& ap, const Value& expected) {
    if (is_num(expected) && is_num(actual))
        return approx_eq_num(as_double(actual), ap, as_double(expected));
    return Interpreter::equals(actual, expected);
}

static bool approx_matches(const Value& actual, const ApproxObj& ap) {
    const Value& exp = *ap.expected;
    auto elems = [](const Value& v) -> const std::vector<Value>* {
        if (v.is<std::shared_ptr<ListObj>>()) return &v.as<std::shared_ptr<ListObj>>()->items;
        if (v.is<std::shared_ptr<TupleObj>>()) return &v.as<std::shared_ptr<TupleObj>>()->items;
        return nullptr;
    };
    if (const auto* ee = elems(exp)) {
        const auto* ae = elems(actual);
        if (!ae || ae->size() != ee->size()) return false;
        for (size_t i = 0; i < ee->size(); ++i)
            if (!approx_matches_one((*ae)[i], ap, (*ee)[i])) return false;
        return true;
    }
    return approx_matches_one(actual, ap, exp);
}

bool Interpreter::equals(const Value& a, const Value& b) {
    if (a.is<std::shared_ptr<ApproxObj>>()) return approx_matches(b, *a.as<std::shared_ptr<ApproxObj>>());
    if (b.is<std::shared_ptr<ApproxObj>>()) return approx_matches(a, *b.as<std::shared_ptr<ApproxObj>>());
    if (is_num(a) && is_num(b)) {
        if (is_int_like(a) && is_int_like(b)) return as_int(a) == as_int(b);
        return as_double(a) == as_double(b);
    }
    if (a.is<NoneType>() || b.is<NoneType>()) return a.is<NoneType>() && b.is<NoneType>();
    if (a.is<std::string>() && b.is<std::string>()) return a.as<std::string>() == b.as<std::string>();
    auto seq_eq = [](const std::vector<Value>& x, const std::vector<Value>& y) {
        if (x.size() != y.size()) return false;
        for (size_t i = 0; i < x.size(); ++i)
            if (!equals(x[i], y[i])) return false;
        return true;
    };
    if (a.is<std::shared_ptr<ListObj>>() && b.is<std::shared_ptr<ListObj>>())
        return seq_eq(a.as<std::shared_ptr<ListObj>>()->items, b.as<std::shared_ptr<ListObj>>()->items);
    if (a.is<std::shared_ptr<TupleObj>>() && b.is<std::shared_ptr<TupleObj>>())
        return seq_eq(a.as<std::shared_ptr<TupleObj>>()->items, b.as<std::shared_ptr<TupleObj>>()->items);
    if (a.is<std::shared_ptr<SetObj>>() && b.is<std::shared_ptr<SetObj>>()) {
        const auto& x = a.as<std::shared_ptr<SetObj>>()->items;
        const auto& y = b.as<std::shared_ptr<SetObj>>()->items;
        if (x.size() != y.size()) return false;
        for (const auto& e : x) {
            bool found = false;
            for (const auto& f : y)
                if (equals(e, f)) { found = true; break; }
            if (!found) return false;
        }
        return true;
    }
    if (a.is<std::shared_ptr<DictObj>>() && b.is<std::shared_ptr<DictObj>>()) {
        const auto& x = a.as<std::shared_ptr<DictObj>>()->items;
        const auto& y = b.as<std::shared_ptr<DictObj>>()->items;
        if (x.size() != y.size()) return false;
        for (const auto& [k, v] : x) {
            bool found = false;
            for (const auto& [k2, v2] : y)
                if (equals(k, k2) && equals(v, v2)) { found = true; break; }
            if (!found) return false;
        }
        return true;
    }
    if (a.is<std::shared_ptr<BuiltinObj>>() && b.is<std::shared_ptr<BuiltinObj>>())
        return a.as<std::shared_ptr<BuiltinObj>>()->name == b.as<std::shared_ptr<BuiltinObj>>()->name;
    if (a.is<std::shared_ptr<ClassObj>>() && b.is<std::shared_ptr<ClassObj>>())
        return a.as<std::shared_ptr<ClassObj>>() == b.as<std::shared_ptr<ClassObj>>();
    if (a.is<std::shared_ptr<InstanceObj>>() && b.is<std::shared_ptr<InstanceObj>>())
        return a.as<std::shared_ptr<InstanceObj>>() == b.as<std::shared_ptr<InstanceObj>>();
    if (a.is<std::shared_ptr<FuncObj>>() && b.is<std::shared_ptr<FuncObj>>())
        return a.as<std::shared_ptr<FuncObj>>() == b.as<std::shared_ptr<FuncObj>>();
    return false;
}

std::string Interpreter::repr(const Value& v) {
    if (v.is<std::string>()) {
        std::string out = "'";
        for (char c : v.as<std::string>()) {
            if (c == '\n') out += "\\n";
            else if (c == '\t') out += "\\t";
            else if (c == '\'') out += "\\'";
            else if (c == '\\') out += "\\\\";
            else out += c;
        }
        return out + "'";
    }
    return to_str(v);
}

std::string Interpreter::to_str(const Value& v) {
    if (v.is<NoneType>()) return "None";
    if (v.is<bool>()) return v.as<bool>() ? "True" : "False";
    if (v.is<long long>()) return std::to_string(v.as<long long>());
    if (v.is<double>()) return fmt_double(v.as<double>());
    if (v.is<std::string>()) return v.as<std::string>();
    auto join = [](const std::vector<Value>& items, const char* open, const char* close) {
        std::string out = open;
        for (size_t i = 0; i < items.size(); ++i) {
            if (i) out += ", ";
            out += repr(items[i]);
        }
        return out + close;
    };
    if (v.is<std::shared_ptr<ListObj>>()) return join(v.as<std::shared_ptr<ListObj>>()->items, "[", "]");
    if (v.is<std::shared_ptr<TupleObj>>()) {
        const auto& items = v.as<std::shared_ptr<TupleObj>>()->items;
        if (items.size() == 1) return "(" + repr(items[0]) + ",)";
        return join(items, "(", ")");
    }
    if (v.is<std::shared_ptr<SetObj>>()) {
        const auto& items = v.as<std::shared_ptr<SetObj>>()->items;
        if (items.empty()) return "set()";
        return join(items, "{", "}");
    }
    if (v.is<std::shared_ptr<DictObj>>()) {
        std::string out = "{";
        const auto& items = v.as<std::shared_ptr<DictObj>>()->items;
        for (size_t i = 0; i < items.size(); ++i) {
            if (i) out += ", ";
            out += repr(items[i].first) + ": " + repr(items[i].second);
        }
        return out + "}";
    }
    if (v.is<std::shared_ptr<FuncObj>>())
        return "<function " + v.as<std::shared_ptr<FuncObj>>()->name + ">";
    if (v.is<std::shared_ptr<BoundObj>>())
        return "<bound method " + v.as<std::shared_ptr<BoundObj>>()->func->name + ">";
    if (v.is<std::shared_ptr<BuiltinObj>>())
        return "<builtin " + v.as<std::shared_ptr<BuiltinObj>>()->name + ">";
    if (v.is<std::shared_ptr<ClassObj>>())
        return "<class '" + v.as<std::shared_ptr<ClassObj>>()->name + "'>";
    if (v.is<std::shared_ptr<InstanceObj>>()) {
        const auto& inst = v.as<std::shared_ptr<InstanceObj>>();
        if (inst->cls->is_exception) {
            auto it = inst->attrs.find("args");
            std::string msg;
            if (it != inst->attrs.end() && it->second.is<std::shared_ptr<TupleObj>>()) {
                const auto& args = it->second.as<std::shared_ptr<TupleObj>>()->items;
                if (args.size() == 1) msg = to_str(args[0]);
                else if (!args.empty()) msg = to_str(it->second);
            }
            return msg;
        }
        return "<" + inst->cls->name + " object>";
    }
    if (v.is<std::shared_ptr<ModuleObj>>())
        return "<module '" + v.as<std::shared_ptr<ModuleObj>>()->name + "'>";
    if (v.is<std::shared_ptr<ApproxObj>>())
        return to_str(*v.as<std::shared_ptr<ApproxObj>>()->expected) + " ± tolerance";
    return "<object>";
}

// ---------------------------------------------------------------- execution

Value Interpreter::exec_module(const std::string& name, const std::string& source) {
    return exec_module(name, parse(source));
}

Value Interpreter::exec_module(const std::string& name, ModulePtr ast) {
    auto env = std::make_shared<Env>();
    env->module_env = env;
    auto mod = std::make_shared<ModuleObj>();
    mod->name = name;
    mod->env = env;
    modules_[name] = Value{mod};
    module_asts_[name] = ast;
    Frame f;
    f.env = env;
    f.module = name;
    exec_block(ast->stmts, f);
    return modules_[name];
}

std::optional<Value> Interpreter::module_attr(const std::string& module_name,
                                              const std::string& attr) const {
    auto it = modules_.find(module_name);
    if (it == modules_.end()) return std::nullopt;
    const auto& env = it->second.as<std::shared_ptr<ModuleObj>>()->env;
    auto v = env->vars.find(attr);
    if (v == env->vars.end()) return std::nullopt;
    return v->second;
}

Value Interpreter::import_module(const std::string& name, int line) {
    auto it = modules_.find(name);
    if (it != modules_.end()) return it->second;
    if (resolver_) {
        if (auto src = resolver_(name)) {
            try {
                return exec_module(name, *src);
            } catch (const SyntaxError& se) {
                modules_.erase(name);
                raise("ImportError", "cannot import '" + name + "': " + se.message, line);
            }
        }
    }
    if (name == "math" || name == "pytest") {
        Value m = make_builtin_module(name);
        modules_[name] = m;
        return m;
    }
    raise("ModuleNotFoundError", "No module named '" + name + "'", line);
}

Interpreter::Flow Interpreter::exec_block(const std::vector<StmtPtr>& body, Frame& f) {
    for (const auto& s : body) {
        Flow fl = exec_stmt(*s, f);
        if (fl != Flow::Normal) return fl;
    }
    return Flow::Normal;
}

Interpreter::Flow Interpreter::exec_stmt(const Stmt& s, Frame& f) {
    check_budget();
    const bool cov = instrumented_.count(f.module) > 0;
    if (cov) coverage_[f.module].lines.insert(s.line);
    auto record_arm = [&](int id, bool arm) {
        if (cov && id >= 0) coverage_[f.module].arms.insert({id, arm});
    };

    switch (s.kind) {
        case StmtKind::Pass:
            return Flow::Normal;
        case StmtKind::Break:
            return Flow::Break;
        case StmtKind::Continue:
            return Flow::Continue;
        case StmtKind::ExprStmt:
            eval(*s.expr, f);
            return Flow::Normal;
        case StmtKind::Assert: {
            Value t = eval(*s.expr, f);
            if (!truthy(t)) {
                std::string msg = s.value ? to_str(eval(*s.value, f)) : "";
                raise("AssertionError", msg, s.line);
            }
            return Flow::Normal;
        }
        case StmtKind::Assign: {
            Value v = eval(*s.value, f);
            assign_to(*s.target, v, f);
            for (const auto& extra : s.targets) assign_to(*extra, v, f);
            return Flow::Normal;
        }
        case StmtKind::AugAssign: {
            Value cur = eval(*s.target, f);
            Value rhs = eval(*s.value, f);
            std::string op = s.op.substr(0, s.op.size() - 1);
            Value res = binop(op, cur, rhs, s.line);
            assign_to(*s.target, res, f);
            return Flow::Normal;
        }
        case StmtKind::Return:
            f.ret = s.expr ? eval(*s.expr, f) : Value{};
            return Flow::Return;
        case StmtKind::If: {
            bool cond = truthy(eval(*s.expr, f));
            record_arm(s.branch_id, cond);
            if (cond) return exec_block(s.body, f);
            return exec_block(s.orelse, f);
        }
        case StmtKind::While: {
            while (true) {
                check_budget();
                bool cond = truthy(eval(*s.expr, f));
                record_arm(s.branch_id, cond);
                if (!cond) break;
                Flow fl = exec_block(s.body, f);
                if (fl == Flow::Break) return Flow::Normal;
                if (fl == Flow::Return) return fl;
            }
            return exec_block(s.orelse, f);
        }
        case StmtKind::For: {
            Value it = eval(*s.expr, f);
            std::vector<Value> items = iter_items(it, s.line);
            if (!items.empty()) record_arm(s.branch_id, true);
            for (const auto& item : items) {
                check_budget();
                assign_to(*s.target, item, f);
                Flow fl = exec_block(s.body, f);
                if (fl == Flow::Break) return Flow::Normal;
                if (fl == Flow::Return) return fl;
            }
            record_arm(s.branch_id, false);
            return exec_block(s.orelse, f);
        }
        case StmtKind::FuncDef: {
            auto fn = std::make_shared<FuncObj>();
            fn->name = s.name;
            fn->def = &s;
            fn->root = module_asts_.count(f.module) ? module_asts_[f.module] : nullptr;
            fn->closure = f.env;
            fn->module_name = f.module;
            Value v{fn};
            for (auto it = s.decorators.rbegin(); it != s.decorators.rend(); ++it) {
                Value dec = eval(**it, f);
                std::vector<Value> args{v};
                std::vector<std::pair<std::string, Value>> kw;
                if (dec.is<std::shared_ptr<BuiltinObj>>()) {
                    v = dec.as<std::shared_ptr<BuiltinObj>>()->fn(args, kw);
                } else if (is_callable(dec)) {
                    v = call(dec, {v});
                }
            }
            f.env->vars[s.name] = v;
            return Flow::Normal;
        }
        case StmtKind::ClassDef: {
            auto cls = std::make_shared<ClassObj>();
            cls->name = s.name;
            for (const auto& b : s.bases) {
                Value bv = eval(*b, f);
                if (bv.is<std::shared_ptr<ClassObj>>()) {
                    cls->base = bv.as<std::shared_ptr<ClassObj>>();
                    cls->is_exception = cls->base->is_exception;
                    break;
                }
            }
            Frame cf;
            cf.env = std::make_shared<Env>();
            cf.env->parent = f.env;
            cf.env->module_env = f.env->module_env;
            cf.module = f.module;
            exec_block(s.body, cf);
            for (auto& [k, v] : cf.env->vars) cls->attrs[k] = v;
            f.env->vars[s.name] = Value{cls};
            return Flow::Normal;
        }
        case StmtKind::Import: {
            for (const auto& in : s.imports) {
                std::string top = in.module.substr(0, in.module.find('.'));
                Value m = import_module(in.module, s.line);
                f.env->vars[in.asname.empty() ? top : in.asname] = m;
            }
            return Flow::Normal;
        }
        case StmtKind::ImportFrom: {
            Value m = import_module(s.module, s.line);
            const auto& menv = m.as<std::shared_ptr<ModuleObj>>()->env;
            for (const auto& in : s.imports) {
                if (in.module == "*") {
                    if (menv)
                        for (auto& [k, v] : menv->vars)
                            if (!k.empty() && k[0] != '_') f.env->vars[k] = v;
                    continue;
                }
                Value attr;
                bool found = false;
                if (menv) {
                    auto it = menv->vars.find(in.module);
                    if (it != menv->vars.end()) { attr = it->second; found = true; }
                }
                if (!found) {
                    // builtin modules carry their members through get_attr
                    try {
                        attr = get_attr(m, in.module, s.line);
                        found = true;
                    } catch (const PyError&) {
                        found = false;
                    }
                }
                if (!found)
                    raise("ImportError", "cannot import name '" + in.module + "' from '" + s.module + "'", s.line);
                f.env->vars[in.asname.empty() ? in.module : in.asname] = attr;
            }
            return Flow::Normal;
        }
        case StmtKind::Raise: {
            if (!s.expr) {
                if (f.current_exc) throw *f.current_exc;
                raise("RuntimeError", "No active exception to re-raise", s.line);
            }
            Value v = eval(*s.expr, f);
            if (v.is<std::shared_ptr<ClassObj>>()) {
                std::vector<Value> args;
                std::vector<std::pair<std::string, Value>> kw;
                v = instantiate(v.as<std::shared_ptr<ClassObj>>(), args, kw, s.line);
            }
            if (v.is<std::shared_ptr<InstanceObj>>() &&
                v.as<std::shared_ptr<InstanceObj>>()->cls->is_exception) {
                const auto& inst = v.as<std::shared_ptr<InstanceObj>>();
                throw PyError{inst->cls->name, to_str(v), s.line, v};
            }
            raise("TypeError", "exceptions must derive from BaseException", s.line);
        }
        case StmtKind::Try: {
            bool raised = false;
            try {
                Flow fl = exec_block(s.body, f);
                if (fl != Flow::Normal) {
                    for (const auto& fs : s.final_body) exec_stmt(*fs, f);
                    return fl;
                }
            } catch (PyError& err) {
                raised = true;
                bool handled = false;
                for (const auto& h : s.handlers) {
                    bool match = false;
                    if (!h.type) {
                        match = true;
                    } else {
                        Value tv = eval(*h.type, f);
                        std::vector<Value> cand;
                        if (tv.is<std::shared_ptr<TupleObj>>())
                            cand = tv.as<std::shared_ptr<TupleObj>>()->items;
                        else
                            cand.push_back(tv);
                        for (const auto& c : cand) {
                            if (!c.is<std::shared_ptr<ClassObj>>()) continue;
                            auto want = c.as<std::shared_ptr<ClassObj>>();
                            std::shared_ptr<ClassObj> got;
                            if (err.instance.is<std::shared_ptr<InstanceObj>>())
                                got = err.instance.as<std::shared_ptr<InstanceObj>>()->cls;
                            else
                                got = exception_class(err.type);
                            for (auto* k = got.get(); k; k = k->base.get()) {
                                if (k == want.get()) { match = true; break; }
                            }
                            if (match) break;
                        }
                    }
                    if (match) {
                        if (!h.alias.empty()) f.env->vars[h.alias] = err.instance;
                        auto saved = f.current_exc;
                        f.current_exc = err;
                        Flow fl;
                        try {
                            fl = exec_block(h.body, f);
                        } catch (...) {
                            f.current_exc = saved;
                            for (const auto& fs : s.final_body) exec_stmt(*fs, f);
                            throw;
                        }
                        f.current_exc = saved;
                        handled = true;
                        if (fl != Flow::Normal) {
                            for (const auto& fs : s.final_body) exec_stmt(*fs, f);
                            return fl;
                        }
                        break;
                    }
                }
                if (!handled) {
                    for (const auto& fs : s.final_body) exec_stmt(*fs, f);
                    throw;
                }
            }
            if (!raised) {
                Flow fl = exec_block(s.orelse, f);
                if (fl != Flow::Normal) {
                    for (const auto& fs : s.final_body) exec_stmt(*fs, f);
                    return fl;
                }
            }
            for (const auto& fs : s.final_body) exec_stmt(*fs, f);
            return Flow::Normal;
        }
        case StmtKind::With: {
            Value ctx = eval(*s.expr, f);
            if (ctx.is<std::shared_ptr<InstanceObj>>() &&
                ctx.as<std::shared_ptr<InstanceObj>>()->cls->name == "RaisesContext") {
                auto rc = ctx.as<std::shared_ptr<InstanceObj>>();
                Value expected = rc->attrs["expected"];
                try {
                    if (!s.name.empty()) {
                        auto info = std::make_shared<InstanceObj>();
                        info->cls = exception_class("Exception");
                        f.env->vars[s.name] = Value{info};
                    }
                    exec_block(s.body, f);
                } catch (PyError& err) {
                    std::shared_ptr<ClassObj> got;
                    if (err.instance.is<std::shared_ptr<InstanceObj>>())
                        got = err.instance.as<std::shared_ptr<InstanceObj>>()->cls;
                    else
                        got = exception_class(err.type);
                    std::vector<Value> cand;
                    if (expected.is<std::shared_ptr<TupleObj>>())
                        cand = expected.as<std::shared_ptr<TupleObj>>()->items;
                    else
                        cand.push_back(expected);
                    bool match = false;
                    for (const auto& c : cand) {
                        if (!c.is<std::shared_ptr<ClassObj>>()) continue;
                        for (auto* k = got.get(); k; k = k->base.get())
                            if (k == c.as<std::shared_ptr<ClassObj>>().get()) { match = true; break; }
                        if (match) break;
                    }
                    if (!match) throw;
                    if (!s.name.empty()) {
                        auto info = std::make_shared<InstanceObj>();
                        info->cls = exception_class("Exception");
                        info->attrs["value"] = err.instance;
                        info->attrs["type"] = Value{got};
                        f.env->vars[s.name] = Value{info};
                    }
                    return Flow::Normal;
                }
                raise("Failed", "DID NOT RAISE", s.line);
            }
            // generic context manager: __enter__ / __exit__ when present, else plain block
            Value entered = ctx;
            bool has_proto = false;
            if (ctx.is<std::shared_ptr<InstanceObj>>()) {
                auto inst = ctx.as<std::shared_ptr<InstanceObj>>();
                for (auto* k = inst->cls.get(); k; k = k->base.get())
                    if (k->attrs.count("__enter__")) { has_proto = true; break; }
            }
            if (has_proto) entered = call(get_attr(ctx, "__enter__", s.line), {});
            if (!s.name.empty()) f.env->vars[s.name] = entered;
            try {
                Flow fl = exec_block(s.body, f);
                if (has_proto)
                    call(get_attr(ctx, "__exit__", s.line), {Value{}, Value{}, Value{}});
                return fl;
            } catch (PyError&) {
                if (has_proto)
                    call(get_attr(ctx, "__exit__", s.line), {Value{}, Value{}, Value{}});
                throw;
            }
        }
        case StmtKind::Global:
            for (const auto& n : s.names) f.env->global_decls.push_back(n);
            return Flow::Normal;
    }
    return Flow::Normal;
}

void Interpreter::assign_to(const Expr& target, const Value& val, Frame& f) {
    switch (target.kind) {
        case ExprKind::Name: {
            const std::string& n = target.str_val;
            bool is_global = std::find(f.env->global_decls.begin(), f.env->global_decls.end(), n) !=
                             f.env->global_decls.end();
            if (is_global && f.env->module_env)
                f.env->module_env->vars[n] = val;
            else
                f.env->vars[n] = val;
            return;
        }
        case ExprKind::Attribute: {
            Value obj = eval(*target.a, f);
            set_attr(obj, target.str_val, val, target.line);
            return;
        }
        case ExprKind::Subscript: {
            Value obj = eval(*target.a, f);
            Value idx = eval(*target.b, f);
            set_item(obj, idx, val, target.line);
            return;
        }
        case ExprKind::TupleLit:
        case ExprKind::ListLit: {
            std::vector<Value> items = iter_items(val, target.line);
            if (items.size() != target.elems.size())
                raise("ValueError", "cannot unpack: expected " + std::to_string(target.elems.size()) +
                                        " values, got " + std::to_string(items.size()),
                      target.line);
            for (size_t i = 0; i < items.size(); ++i) assign_to(*target.elems[i], items[i], f);
            return;
        }
        default:
            raise("SyntaxError", "cannot assign to this expression", target.line);
    }
}

Value Interpreter::lookup(const std::string& name, Frame& f, int line) {
    for (Env* e = f.env.get(); e; e = e->parent.get()) {
        auto it = e->vars.find(name);
        if (it != e->vars.end()) return it->second;
    }
    if (f.env->module_env && f.env->module_env.get() != f.env.get()) {
        auto it = f.env->module_env->vars.find(name);
        if (it != f.env->module_env->vars.end()) return it->second;
    }
    auto it = builtins_->vars.find(name);
    if (it != builtins_->vars.end()) return it->second;
    raise("NameError", "name '" + name + "' is not defined", line);
}

Value Interpreter::eval(const Expr& e, Frame& f) {
    check_budget();
    switch (e.kind) {
        case ExprKind::IntLit: return Value{e.int_val};
        case ExprKind::FloatLit: return Value{e.float_val};
        case ExprKind::StrLit: return Value{e.str_val};
        case ExprKind::BoolLit: return Value{e.bool_val};
        case ExprKind::NoneLit: return Value{};
        case ExprKind::Name: return lookup(e.str_val, f, e.line);
        case ExprKind::BinOp: {
            Value a = eval(*e.a, f);
            Value b = eval(*e.b, f);
            return binop(e.str_val, a, b, e.line);
        }
        case ExprKind::UnaryOp: {
            Value a = eval(*e.a, f);
            if (e.str_val == "not") return Value{!truthy(a)};
            if (e.str_val == "-") {
                if (is_int_like(a)) return Value{-as_int(a)};
                if (a.is<double>()) return Value{-a.as<double>()};
                raise("TypeError", "bad operand type for unary -", e.line);
            }
            if (e.str_val == "+") {
                if (is_num(a)) return a;
                raise("TypeError", "bad operand type for unary +", e.line);
            }
            if (e.str_val == "~") {
                if (is_int_like(a)) return Value{~as_int(a)};
                raise("TypeError", "bad operand type for unary ~", e.line);
            }
            raise("TypeError", "unknown unary operator", e.line);
        }
        case ExprKind::BoolOp: {
            Value last;
            if (e.str_val == "and") {
                for (const auto& sub : e.elems) {
                    last = eval(*sub, f);
                    if (!truthy(last)) return last;
                }
                return last;
            }
            for (const auto& sub : e.elems) {
                last = eval(*sub, f);
                if (truthy(last)) return last;
            }
            return last;
        }
        case ExprKind::Compare: {
            Value left = eval(*e.a, f);
            for (size_t i = 0; i < e.ops.size(); ++i) {
                Value right = eval(*e.elems[i], f);
                Value r = compare(e.ops[i], left, right, e.line);
                if (!truthy(r)) return Value{false};
                left = right;
            }
            return Value{true};
        }
        case ExprKind::IfExp: {
            bool cond = truthy(eval(*e.a, f));
            if (instrumented_.count(f.module) && e.branch_id >= 0)
                coverage_[f.module].arms.insert({e.branch_id, cond});
            return cond ? eval(*e.b, f) : eval(*e.c, f);
        }
        case ExprKind::Call: return eval_call(e, f);
        case ExprKind::Attribute: {
            Value obj = eval(*e.a, f);
            return get_attr(obj, e.str_val, e.line);
        }
        case ExprKind::Subscript: {
            Value obj = eval(*e.a, f);
            if (e.b->kind == ExprKind::Slice) {
                auto get_or = [&](const ExprPtr& p, long long d) {
                    return p ? as_int(eval(*p, f)) : d;
                };
                const std::vector<Value>* seq = nullptr;
                const std::string* str = nullptr;
                if (obj.is<std::shared_ptr<ListObj>>()) seq = &obj.as<std::shared_ptr<ListObj>>()->items;
                else if (obj.is<std::shared_ptr<TupleObj>>()) seq = &obj.as<std::shared_ptr<TupleObj>>()->items;
                else if (obj.is<std::string>()) str = &obj.as<std::string>();
                else raise("TypeError", "object is not sliceable", e.line);
                long long n = static_cast<long long>(seq ? seq->size() : str->size());
                long long start = e.b->a ? as_int(eval(*e.b->a, f)) : 0;
                long long stop = e.b->b ? as_int(eval(*e.b->b, f)) : n;
                long long step = get_or(e.b->c, 1);
                if (step == 0) raise("ValueError", "slice step cannot be zero", e.line);
                if (!e.b->a && step < 0) start = n - 1;
                if (!e.b->b && step < 0) stop = -n - 1;
                auto clamp = [&](long long x) {
                    if (x < 0) x += n;
                    return x;
                };
                start = clamp(start);
                stop = e.b->b || step > 0 ? clamp(stop) : stop;
                if (str) {
                    std::string out;
                    for (long long i = start; step > 0 ? i < std::min(stop, n) : i > std::max(stop, -1LL);
                         i += step)
                        if (i >= 0 && i < n) out += (*str)[i];
                    return Value{out};
                }
                auto out = std::make_shared<ListObj>();
                for (long long i = start; step > 0 ? i < std::min(stop, n) : i > std::max(stop, -1LL);
                     i += step)
                    if (i >= 0 && i < n) out->items.push_back((*seq)[i]);
                return Value{out};
            }
            Value idx = eval(*e.b, f);
            return get_item(obj, idx, e.line);
        }
        case ExprKind::ListLit: {
            auto l = std::make_shared<ListObj>();
            for (const auto& el : e.elems) l->items.push_back(eval(*el, f));
            return Value{l};
        }
        case ExprKind::TupleLit: {
            auto t = std::make_shared<TupleObj>();
            for (const auto& el : e.elems) t->items.push_back(eval(*el, f));
            return Value{t};
        }
        case ExprKind::SetLit: {
            auto s = std::make_shared<SetObj>();
            for (const auto& el : e.elems) {
                Value v = eval(*el, f);
                bool dup = false;
                for (const auto& x : s->items)
                    if (equals(x, v)) { dup = true; break; }
                if (!dup) s->items.push_back(v);
            }
            return Value{s};
        }
        case ExprKind::DictLit: {
            auto d = std::make_shared<DictObj>();
            for (size_t i = 0; i < e.keys.size(); ++i) {
                Value k = eval(*e.keys[i], f);
                Value v = eval(*e.elems[i], f);
                bool replaced = false;
                for (auto& [k2, v2] : d->items)
                    if (equals(k2, k)) { v2 = v; replaced = true; break; }
                if (!replaced) d->items.emplace_back(k, v);
            }
            return Value{d};
        }
        case ExprKind::Lambda: {
            auto fn = std::make_shared<FuncObj>();
            fn->name = "<lambda>";
            fn->lambda = &e;
            fn->root = module_asts_.count(f.module) ? module_asts_[f.module] : nullptr;
            fn->closure = f.env;
            fn->module_name = f.module;
            return Value{fn};
        }
        case ExprKind::Slice:
            raise("SyntaxError", "slice outside subscript", e.line);
    }
    raise("RuntimeError", "unhandled expression", e.line);
}

Value Interpreter::eval_call(const Expr& e, Frame& f) {
    Value callee = eval(*e.a, f);
    std::vector<Value> args;
    for (const auto& a : e.elems) args.push_back(eval(*a, f));
    std::vector<std::pair<std::string, Value>> kwargs;
    for (const auto& kw : e.keywords) kwargs.emplace_back(kw.name, eval(*kw.value, f));

    if (callee.is<std::shared_ptr<BuiltinObj>>())
        return callee.as<std::shared_ptr<BuiltinObj>>()->fn(args, kwargs);
    if (callee.is<std::shared_ptr<FuncObj>>())
        return call_function(callee.as<std::shared_ptr<FuncObj>>(), nullptr, args, kwargs, e.line);
    if (callee.is<std::shared_ptr<BoundObj>>()) {
        const auto& b = callee.as<std::shared_ptr<BoundObj>>();
        return call_function(b->func, b->self.get(), args, kwargs, e.line);
    }
    if (callee.is<std::shared_ptr<ClassObj>>())
        return instantiate(callee.as<std::shared_ptr<ClassObj>>(), args, kwargs, e.line);
    raise("TypeError", "'" + to_str(callee) + "' object is not callable", e.line);
}

Value Interpreter::call(const Value& callee, std::vector<Value> args) {
    std::vector<std::pair<std::string, Value>> kwargs;
    if (callee.is<std::shared_ptr<BuiltinObj>>())
        return callee.as<std::shared_ptr<BuiltinObj>>()->fn(args, kwargs);
    if (callee.is<std::shared_ptr<FuncObj>>())
        return call_function(callee.as<std::shared_ptr<FuncObj>>(), nullptr, args, kwargs, 0);
    if (callee.is<std::shared_ptr<BoundObj>>()) {
        const auto& b = callee.as<std::shared_ptr<BoundObj>>();
        return call_function(b->func, b->self.get(), args, kwargs, 0);
    }
    if (callee.is<std::shared_ptr<ClassObj>>())
        return instantiate(callee.as<std::shared_ptr<ClassObj>>(), args, kwargs, 0);
    raise("TypeError", "object is not callable", 0);
}

Value Interpreter::call_function(const std::shared_ptr<FuncObj>& fn, const Value* self,
                                 std::vector<Value>& args,
                                 std::vector<std::pair<std::string, Value>>& kwargs, int line) {
    if (++depth_ > 200) {
        --depth_;
        raise("RecursionError", "maximum recursion depth exceeded", line);
    }
    struct DepthGuard {
        int& d;
        ~DepthGuard() { --d; }
    } guard{depth_};

    Frame cf;
    cf.env = std::make_shared<Env>();
    cf.env->parent = fn->closure;
    cf.env->module_env = fn->closure ? fn->closure->module_env : nullptr;
    cf.module = fn->module_name;

    if (fn->lambda) {
        const auto& params = fn->lambda->params;
        if (args.size() + (self ? 1 : 0) != params.size() || !kwargs.empty())
            raise("TypeError", fn->name + "() argument mismatch", line);
        size_t ai = 0;
        for (const auto& p : params) {
            if (self && ai == 0 && p == "self") { cf.env->vars[p] = *self; ++ai; continue; }
            cf.env->vars[p] = args[ai - (self ? 1 : 0)];
            ++ai;
        }
        return eval(*fn->lambda->a, cf);
    }

    const auto& params = fn->def->params;
    size_t pi = 0;
    size_t ai = 0;
    if (self) {
        if (params.empty())
            raise("TypeError", fn->name + "() takes no arguments but a receiver was given", line);
        cf.env->vars[params[0].name] = *self;
        pi = 1;
    }
    for (; pi < params.size() && ai < args.size(); ++pi, ++ai) cf.env->vars[params[pi].name] = args[ai];
    if (ai < args.size())
        raise("TypeError", fn->name + "() takes " + std::to_string(params.size()) +
                               " positional arguments but more were given",
              line);
    for (auto& [k, v] : kwargs) {
        bool ok = false;
        for (const auto& p : params)
            if (p.name == k) { ok = true; break; }
        if (!ok) raise("TypeError", fn->name + "() got an unexpected keyword argument '" + k + "'", line);
        if (cf.env->vars.count(k))
            raise("TypeError", fn->name + "() got multiple values for argument '" + k + "'", line);
        cf.env->vars[k] = v;
    }
    for (const auto& p : params) {
        if (cf.env->vars.count(p.name)) continue;
        if (p.default_value) {
            Frame df;
            df.env = fn->closure ? fn->closure : cf.env;
            df.module = fn->module_name;
            cf.env->vars[p.name] = eval(*p.default_value, df);
        } else {
            raise("TypeError", fn->name + "() missing required argument: '" + p.name + "'", line);
        }
    }
    Flow fl = exec_block(fn->def->body, cf);
    return fl == Flow::Return ? cf.ret : Value{};
}

Value Interpreter::instantiate(const std::shared_ptr<ClassObj>& cls, std::vector<Value>& args,
                               std::vector<std::pair<std::string, Value>>& kwargs, int line) {
    auto inst = std::make_shared<InstanceObj>();
    inst->cls = cls;
    Value self{inst};
    if (cls->is_exception) {
        auto t = std::make_shared<TupleObj>();
        t->items = args;
        inst->attrs["args"] = Value{t};
    }
    Value init;
    bool has_init = false;
    for (auto* k = cls.get(); k; k = k->base.get()) {
        auto it = k->attrs.find("__init__");
        if (it != k->attrs.end()) { init = it->second; has_init = true; break; }
    }
    if (has_init && init.is<std::shared_ptr<FuncObj>>()) {
        call_function(init.as<std::shared_ptr<FuncObj>>(), &self, args, kwargs, line);
    } else if (!cls->is_exception && (!args.empty() || !kwargs.empty())) {
        raise("TypeError", cls->name + "() takes no arguments", line);
    }
    return self;
}

// ---------------------------------------------------------------- attribute / item access

Value Interpreter::get_item(const Value& obj, const Value& idx, int line) {
    auto index_seq = [&](const std::vector<Value>& items) -> Value {
        if (!is_int_like(idx)) raise("TypeError", "indices must be integers", line);
        long long i = as_int(idx);
        long long n = static_cast<long long>(items.size());
        if (i < 0) i += n;
        if (i < 0 || i >= n) raise("IndexError", "index out of range", line);
        return items[i];
    };
    if (obj.is<std::shared_ptr<ListObj>>()) return index_seq(obj.as<std::shared_ptr<ListObj>>()->items);
    if (obj.is<std::shared_ptr<TupleObj>>()) return index_seq(obj.as<std::shared_ptr<TupleObj>>()->items);
    if (obj.is<std::string>()) {
        if (!is_int_like(idx)) raise("TypeError", "string indices must be integers", line);
        long long i = as_int(idx);
        long long n = static_cast<long long>(obj.as<std::string>().size());
        if (i < 0) i += n;
        if (i < 0 || i >= n) raise("IndexError", "string index out of range", line);
        return Value{std::string(1, obj.as<std::string>()[i])};
    }
    if (obj.is<std::shared_ptr<DictObj>>()) {
        for (const auto& [k, v] : obj.as<std::shared_ptr<DictObj>>()->items)
            if (equals(k, idx)) return v;
        raise("KeyError", repr(idx), line);
    }
    raise("TypeError", "object is not subscriptable", line);
}

void Interpreter::set_item(Value& obj, const Value& idx, const Value& val, int line) {
    if (obj.is<std::shared_ptr<ListObj>>()) {
        auto& items = obj.as<std::shared_ptr<ListObj>>()->items;
        if (!is_int_like(idx)) raise("TypeError", "indices must be integers", line);
        long long i = as_int(idx);
        long long n = static_cast<long long>(items.size());
        if (i < 0) i += n;
        if (i < 0 || i >= n) raise("IndexError", "list assignment index out of range", line);
        items[i] = val;
        return;
    }
    if (obj.is<std::shared_ptr<DictObj>>()) {
        auto& items = obj.as<std::shared_ptr<DictObj>>()->items;
        for (auto& [k, v] : items)
            if (equals(k, idx)) { v = val; return; }
        items.emplace_back(idx, val);
        return;
    }
    raise("TypeError", "object does not support item assignment", line);
}

void Interpreter::set_attr(Value& obj, const std::string& name, const Value& val, int line) {
    if (obj.is<std::shared_ptr<InstanceObj>>()) {
        obj.as<std::shared_ptr<InstanceObj>>()->attrs[name] = val;
        return;
    }
    if (obj.is<std::shared_ptr<ClassObj>>()) {
        obj.as<std::shared_ptr<ClassObj>>()->attrs[name] = val;
        return;
    }
    if (obj.is<std::shared_ptr<ModuleObj>>()) {
        obj.as<std::shared_ptr<ModuleObj>>()->env->vars[name] = val;
        return;
    }
    raise("AttributeError", "cannot set attribute '" + name + "'", line);
}

}  // namespace suitesmith::dialect

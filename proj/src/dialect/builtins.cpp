#include <algorithm>
#include <cmath>
#include <numeric>

#include "detail.hpp"
#include "suitesmith/dialect/interp.hpp"

namespace suitesmith::dialect {

using namespace detail;

namespace {

[[noreturn]] void throw_py(const std::string& type, const std::string& msg, int line = 0) {
    throw PyError{type, msg, line, Value{}};
}

Value make_builtin(const std::string& name,
                   std::function<Value(std::vector<Value>&, std::vector<std::pair<std::string, Value>>&)> fn) {
    auto b = std::make_shared<BuiltinObj>();
    b->name = name;
    b->fn = std::move(fn);
    return Value{b};
}

Value none() { return Value{}; }

void need_args(const std::string& name, const std::vector<Value>& args, size_t lo, size_t hi) {
    if (args.size() < lo || args.size() > hi)
        throw_py("TypeError", name + "() takes " + std::to_string(lo) +
                                  (hi == lo ? "" : ".." + std::to_string(hi)) + " arguments, got " +
                                  std::to_string(args.size()));
}

bool less_than(const Value& a, const Value& b);

bool value_lt(const Value& a, const Value& b) { return less_than(a, b); }

bool less_than(const Value& a, const Value& b) {
    if (is_num(a) && is_num(b)) return as_double(a) < as_double(b);
    if (a.is<std::string>() && b.is<std::string>()) return a.as<std::string>() < b.as<std::string>();
    auto seq_of = [](const Value& v) -> const std::vector<Value>* {
        if (v.is<std::shared_ptr<ListObj>>()) return &v.as<std::shared_ptr<ListObj>>()->items;
        if (v.is<std::shared_ptr<TupleObj>>()) return &v.as<std::shared_ptr<TupleObj>>()->items;
        return nullptr;
    };
    const auto* x = seq_of(a);
    const auto* y = seq_of(b);
    if (x && y) {
        for (size_t i = 0; i < std::min(x->size(), y->size()); ++i) {
            if (value_lt((*x)[i], (*y)[i])) return true;
            if (value_lt((*y)[i], (*x)[i])) return false;
        }
        return x->size() < y->size();
    }
    throw_py("TypeError", "'<' not supported between these operand types");
}

Value find_kw(std::vector<std::pair<std::string, Value>>& kwargs, const std::string& name) {
    for (auto& [k, v] : kwargs)
        if (k == name) return v;
    return none();
}
bool has_kw(std::vector<std::pair<std::string, Value>>& kwargs, const std::string& name) {
    for (auto& [k, v] : kwargs)
        if (k == name) return true;
    return false;
}

std::string join_seq(const std::string& sep, const std::vector<Value>& items) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        if (!items[i].is<std::string>()) throw_py("TypeError", "join() expects str items");
        out += items[i].as<std::string>();
    }
    return out;
}

std::vector<std::string> split_str(const std::string& s, const std::string& sep) {
    std::vector<std::string> out;
    if (sep.empty()) {  // whitespace split
        std::string cur;
        for (char c : s) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!cur.empty()) out.push_back(cur);
                cur.clear();
            } else
                cur += c;
        }
        if (!cur.empty()) out.push_back(cur);
        return out;
    }
    size_t pos = 0;
    while (true) {
        size_t p = s.find(sep, pos);
        if (p == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, p - pos));
        pos = p + sep.size();
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- operators

Value Interpreter::binop(const std::string& op, const Value& a, const Value& b, int line) {
    if (op == "+") {
        if (is_num(a) && is_num(b)) {
            if (is_int_like(a) && is_int_like(b)) return Value{as_int(a) + as_int(b)};
            return Value{as_double(a) + as_double(b)};
        }
        if (a.is<std::string>() && b.is<std::string>())
            return Value{a.as<std::string>() + b.as<std::string>()};
        if (a.is<std::shared_ptr<ListObj>>() && b.is<std::shared_ptr<ListObj>>()) {
            auto out = std::make_shared<ListObj>();
            out->items = a.as<std::shared_ptr<ListObj>>()->items;
            const auto& bi = b.as<std::shared_ptr<ListObj>>()->items;
            out->items.insert(out->items.end(), bi.begin(), bi.end());
            return Value{out};
        }
        if (a.is<std::shared_ptr<TupleObj>>() && b.is<std::shared_ptr<TupleObj>>()) {
            auto out = std::make_shared<TupleObj>();
            out->items = a.as<std::shared_ptr<TupleObj>>()->items;
            const auto& bi = b.as<std::shared_ptr<TupleObj>>()->items;
            out->items.insert(out->items.end(), bi.begin(), bi.end());
            return Value{out};
        }
        raise("TypeError", "unsupported operand type(s) for +", line);
    }
    if (op == "-") {
        if (is_num(a) && is_num(b)) {
            if (is_int_like(a) && is_int_like(b)) return Value{as_int(a) - as_int(b)};
            return Value{as_double(a) - as_double(b)};
        }
        if (a.is<std::shared_ptr<SetObj>>() && b.is<std::shared_ptr<SetObj>>()) {
            auto out = std::make_shared<SetObj>();
            for (const auto& x : a.as<std::shared_ptr<SetObj>>()->items) {
                bool in_b = false;
                for (const auto& y : b.as<std::shared_ptr<SetObj>>()->items)
                    if (equals(x, y)) { in_b = true; break; }
                if (!in_b) out->items.push_back(x);
            }
            return Value{out};
        }
        raise("TypeError", "unsupported operand type(s) for -", line);
    }
    if (op == "*") {
        if (is_num(a) && is_num(b)) {
            if (is_int_like(a) && is_int_like(b)) return Value{as_int(a) * as_int(b)};
            return Value{as_double(a) * as_double(b)};
        }
        auto repeat = [&](const std::vector<Value>& items, long long n) {
            auto out = std::make_shared<ListObj>();
            for (long long i = 0; i < n; ++i)
                out->items.insert(out->items.end(), items.begin(), items.end());
            return Value{out};
        };
        if (a.is<std::string>() && is_int_like(b)) {
            std::string out;
            for (long long i = 0; i < as_int(b); ++i) out += a.as<std::string>();
            return Value{out};
        }
        if (is_int_like(a) && b.is<std::string>()) {
            std::string out;
            for (long long i = 0; i < as_int(a); ++i) out += b.as<std::string>();
            return Value{out};
        }
        if (a.is<std::shared_ptr<ListObj>>() && is_int_like(b))
            return repeat(a.as<std::shared_ptr<ListObj>>()->items, as_int(b));
        if (is_int_like(a) && b.is<std::shared_ptr<ListObj>>())
            return repeat(b.as<std::shared_ptr<ListObj>>()->items, as_int(a));
        raise("TypeError", "unsupported operand type(s) for *", line);
    }
    if (op == "/") {
        if (!is_num(a) || !is_num(b)) raise("TypeError", "unsupported operand type(s) for /", line);
        double d = as_double(b);
        if (d == 0.0) raise("ZeroDivisionError", "division by zero", line);
        return Value{as_double(a) / d};
    }
    if (op == "//") {
        if (!is_num(a) || !is_num(b)) raise("TypeError", "unsupported operand type(s) for //", line);
        if (is_int_like(a) && is_int_like(b)) {
            if (as_int(b) == 0) raise("ZeroDivisionError", "integer division or modulo by zero", line);
            return Value{py_floordiv(as_int(a), as_int(b))};
        }
        double d = as_double(b);
        if (d == 0.0) raise("ZeroDivisionError", "float floor division by zero", line);
        return Value{std::floor(as_double(a) / d)};
    }
    if (op == "%") {
        if (is_int_like(a) && is_int_like(b)) {
            if (as_int(b) == 0) raise("ZeroDivisionError", "integer division or modulo by zero", line);
            return Value{py_mod(as_int(a), as_int(b))};
        }
        if (is_num(a) && is_num(b)) {
            double d = as_double(b);
            if (d == 0.0) raise("ZeroDivisionError", "float modulo", line);
            double r = std::fmod(as_double(a), d);
            if (r != 0.0 && ((r < 0) != (d < 0))) r += d;
            return Value{r};
        }
        raise("TypeError", "unsupported operand type(s) for %", line);
    }
    if (op == "**") {
        if (!is_num(a) || !is_num(b)) raise("TypeError", "unsupported operand type(s) for **", line);
        if (is_int_like(a) && is_int_like(b) && as_int(b) >= 0) {
            long long base = as_int(a), exp = as_int(b), out = 1;
            for (long long i = 0; i < exp; ++i) out *= base;
            return Value{out};
        }
        return Value{std::pow(as_double(a), as_double(b))};
    }
    if (op == "&" || op == "|" || op == "^" || op == "<<" || op == ">>") {
        if (is_int_like(a) && is_int_like(b)) {
            long long x = as_int(a), y = as_int(b);
            if (op == "&") return Value{x & y};
            if (op == "|") return Value{x | y};
            if (op == "^") return Value{x ^ y};
            if (op == "<<") return Value{x << y};
            return Value{x >> y};
        }
        if (a.is<std::shared_ptr<SetObj>>() && b.is<std::shared_ptr<SetObj>>()) {
            const auto& xs = a.as<std::shared_ptr<SetObj>>()->items;
            const auto& ys = b.as<std::shared_ptr<SetObj>>()->items;
            auto out = std::make_shared<SetObj>();
            auto contains = [](const std::vector<Value>& set, const Value& v) {
                for (const auto& e : set)
                    if (Interpreter::equals(e, v)) return true;
                return false;
            };
            if (op == "&") {
                for (const auto& x : xs)
                    if (contains(ys, x)) out->items.push_back(x);
            } else if (op == "|") {
                out->items = xs;
                for (const auto& y : ys)
                    if (!contains(out->items, y)) out->items.push_back(y);
            } else if (op == "^") {
                for (const auto& x : xs)
                    if (!contains(ys, x)) out->items.push_back(x);
                for (const auto& y : ys)
                    if (!contains(xs, y)) out->items.push_back(y);
            }
            return Value{out};
        }
        raise("TypeError", "unsupported operand type(s) for bitwise op", line);
    }
    raise("TypeError", "unknown operator '" + op + "'", line);
}

Value Interpreter::compare(const std::string& op, const Value& a, const Value& b, int line) {
    if (op == "==") {
        // user __eq__ hook
        if (a.is<std::shared_ptr<InstanceObj>>()) {
            auto inst = a.as<std::shared_ptr<InstanceObj>>();
            for (auto* k = inst->cls.get(); k; k = k->base.get()) {
                auto it = k->attrs.find("__eq__");
                if (it != k->attrs.end() && it->second.is<std::shared_ptr<FuncObj>>()) {
                    Value self = a;
                    std::vector<Value> args{b};
                    std::vector<std::pair<std::string, Value>> kw;
                    return call_function(it->second.as<std::shared_ptr<FuncObj>>(), &self, args, kw, line);
                }
            }
        }
        return Value{equals(a, b)};
    }
    if (op == "!=") {
        Value eq = compare("==", a, b, line);
        return Value{!truthy(eq)};
    }
    if (op == "is") {
        if (a.is<NoneType>() || b.is<NoneType>()) return Value{a.is<NoneType>() && b.is<NoneType>()};
        if (a.is<bool>() && b.is<bool>()) return Value{a.as<bool>() == b.as<bool>()};
        if (a.is<std::shared_ptr<InstanceObj>>() && b.is<std::shared_ptr<InstanceObj>>())
            return Value{a.as<std::shared_ptr<InstanceObj>>() == b.as<std::shared_ptr<InstanceObj>>()};
        if (a.is<std::shared_ptr<ListObj>>() && b.is<std::shared_ptr<ListObj>>())
            return Value{a.as<std::shared_ptr<ListObj>>() == b.as<std::shared_ptr<ListObj>>()};
        return Value{equals(a, b)};
    }
    if (op == "is not") {
        Value r = compare("is", a, b, line);
        return Value{!truthy(r)};
    }
    if (op == "in" || op == "not in") {
        bool found = false;
        if (b.is<std::string>()) {
            if (!a.is<std::string>()) raise("TypeError", "'in <string>' requires string operand", line);
            found = b.as<std::string>().find(a.as<std::string>()) != std::string::npos;
        } else {
            for (const auto& item : iter_items(b, line))
                if (equals(item, a)) { found = true; break; }
        }
        return Value{op == "in" ? found : !found};
    }
    try {
        if (op == "<") return Value{less_than(a, b)};
        if (op == ">") return Value{less_than(b, a)};
        if (op == "<=") return Value{!less_than(b, a)};
        if (op == ">=") return Value{!less_than(a, b)};
    } catch (PyError& e) {
        e.line = line;
        throw;
    }
    raise("TypeError", "unknown comparison '" + op + "'", line);
}

// ---------------------------------------------------------------- attributes

Value Interpreter::get_attr(const Value& obj, const std::string& name, int line) {
    if (obj.is<std::shared_ptr<ModuleObj>>()) {
        const auto& mod = obj.as<std::shared_ptr<ModuleObj>>();
        if (mod->name == "pytest.mark") {
            // any mark is a no-op decorator; calling it with config args yields another decorator
            std::function<Value(std::vector<Value>&, std::vector<std::pair<std::string, Value>>&)> marker =
                [](std::vector<Value>& args, std::vector<std::pair<std::string, Value>>&) -> Value {
                if (args.size() == 1 && is_callable(args[0])) return args[0];
                return make_builtin("marker", [](std::vector<Value>& a2,
                                                 std::vector<std::pair<std::string, Value>>&) -> Value {
                    if (a2.size() == 1 && is_callable(a2[0])) return a2[0];
                    return none();
                });
            };
            return make_builtin("mark." + name, marker);
        }
        if (mod->env) {
            auto it = mod->env->vars.find(name);
            if (it != mod->env->vars.end()) return it->second;
        }
        raise("AttributeError", "module '" + mod->name + "' has no attribute '" + name + "'", line);
    }
    if (obj.is<std::shared_ptr<InstanceObj>>()) {
        const auto& inst = obj.as<std::shared_ptr<InstanceObj>>();
        auto it = inst->attrs.find(name);
        if (it != inst->attrs.end()) return it->second;
        for (auto* k = inst->cls.get(); k; k = k->base.get()) {
            auto c = k->attrs.find(name);
            if (c != k->attrs.end()) {
                if (c->second.is<std::shared_ptr<FuncObj>>()) {
                    auto bm = std::make_shared<BoundObj>();
                    bm->func = c->second.as<std::shared_ptr<FuncObj>>();
                    bm->self = std::make_shared<Value>(obj);
                    return Value{bm};
                }
                return c->second;
            }
        }
        raise("AttributeError",
              "'" + inst->cls->name + "' object has no attribute '" + name + "'", line);
    }
    if (obj.is<std::shared_ptr<ClassObj>>()) {
        for (auto* k = obj.as<std::shared_ptr<ClassObj>>().get(); k; k = k->base.get()) {
            auto it = k->attrs.find(name);
            if (it != k->attrs.end()) return it->second;
        }
        raise("AttributeError",
              "type '" + obj.as<std::shared_ptr<ClassObj>>()->name + "' has no attribute '" + name + "'",
              line);
    }
    // builtin-type methods: receiver captured by value (shared pointers alias)
    if (obj.is<std::string>()) {
        const std::string s = obj.as<std::string>();
        auto method = [&](auto fn) { return make_builtin("str." + name, fn); };
        if (name == "upper")
            return method([s](std::vector<Value>&, auto&) {
                std::string r = s;
                std::transform(r.begin(), r.end(), r.begin(), ::toupper);
                return Value{r};
            });
        if (name == "lower")
            return method([s](std::vector<Value>&, auto&) {
                std::string r = s;
                std::transform(r.begin(), r.end(), r.begin(), ::tolower);
                return Value{r};
            });
        if (name == "strip" || name == "lstrip" || name == "rstrip") {
            bool l = name != "rstrip", r = name != "lstrip";
            return method([s, l, r](std::vector<Value>& args, auto&) {
                std::string chars = args.empty() ? " \t\n\r" : args[0].as<std::string>();
                size_t b = 0, e = s.size();
                if (l)
                    while (b < e && chars.find(s[b]) != std::string::npos) ++b;
                if (r)
                    while (e > b && chars.find(s[e - 1]) != std::string::npos) --e;
                return Value{s.substr(b, e - b)};
            });
        }
        if (name == "split")
            return method([s](std::vector<Value>& args, auto&) {
                std::string sep = args.empty() ? "" : args[0].as<std::string>();
                auto parts = split_str(s, sep);
                auto out = std::make_shared<ListObj>();
                for (auto& p : parts) out->items.push_back(Value{p});
                return Value{out};
            });
        if (name == "join")
            return method([s](std::vector<Value>& args, auto&) {
                need_args("join", args, 1, 1);
                return Value{join_seq(s, iter_items(args[0], 0))};
            });
        if (name == "replace")
            return method([s](std::vector<Value>& args, auto&) {
                need_args("replace", args, 2, 2);
                const std::string& from = args[0].as<std::string>();
                const std::string& to = args[1].as<std::string>();
                if (from.empty()) return Value{s};
                std::string out;
                size_t pos = 0;
                while (true) {
                    size_t p = s.find(from, pos);
                    if (p == std::string::npos) {
                        out += s.substr(pos);
                        break;
                    }
                    out += s.substr(pos, p - pos) + to;
                    pos = p + from.size();
                }
                return Value{out};
            });
        if (name == "startswith")
            return method([s](std::vector<Value>& args, auto&) {
                need_args("startswith", args, 1, 1);
                const std::string& p = args[0].as<std::string>();
                return Value{s.rfind(p, 0) == 0};
            });
        if (name == "endswith")
            return method([s](std::vector<Value>& args, auto&) {
                need_args("endswith", args, 1, 1);
                const std::string& p = args[0].as<std::string>();
                return Value{s.size() >= p.size() && s.compare(s.size() - p.size(), p.size(), p) == 0};
            });
        if (name == "find")
            return method([s](std::vector<Value>& args, auto&) {
                need_args("find", args, 1, 1);
                size_t p = s.find(args[0].as<std::string>());
                return Value{p == std::string::npos ? -1LL : static_cast<long long>(p)};
            });
        if (name == "count")
            return method([s](std::vector<Value>& args, auto&) {
                need_args("count", args, 1, 1);
                const std::string& sub = args[0].as<std::string>();
                if (sub.empty()) return Value{static_cast<long long>(s.size() + 1)};
                long long n = 0;
                size_t pos = 0;
                while ((pos = s.find(sub, pos)) != std::string::npos) { ++n; pos += sub.size(); }
                return Value{n};
            });
        if (name == "isdigit")
            return method([s](std::vector<Value>&, auto&) {
                bool ok = !s.empty();
                for (char c : s)
                    if (!std::isdigit(static_cast<unsigned char>(c))) ok = false;
                return Value{ok};
            });
        if (name == "isalpha")
            return method([s](std::vector<Value>&, auto&) {
                bool ok = !s.empty();
                for (char c : s)
                    if (!std::isalpha(static_cast<unsigned char>(c))) ok = false;
                return Value{ok};
            });
        if (name == "title")
            return method([s](std::vector<Value>&, auto&) {
                std::string r = s;
                bool start = true;
                for (char& c : r) {
                    if (std::isalpha(static_cast<unsigned char>(c))) {
                        c = start ? std::toupper(c) : std::tolower(c);
                        start = false;
                    } else
                        start = true;
                }
                return Value{r};
            });
        if (name == "capitalize")
            return method([s](std::vector<Value>&, auto&) {
                std::string r = s;
                std::transform(r.begin(), r.end(), r.begin(), ::tolower);
                if (!r.empty()) r[0] = std::toupper(static_cast<unsigned char>(r[0]));
                return Value{r};
            });
        if (name == "index")
            return method([s](std::vector<Value>& args, auto&) {
                need_args("index", args, 1, 1);
                size_t p = s.find(args[0].as<std::string>());
                if (p == std::string::npos) throw_py("ValueError", "substring not found");
                return Value{static_cast<long long>(p)};
            });
        if (name == "zfill")
            return method([s](std::vector<Value>& args, auto&) {
                need_args("zfill", args, 1, 1);
                long long w = as_int(args[0]);
                std::string r = s;
                while (static_cast<long long>(r.size()) < w) r = "0" + r;
                return Value{r};
            });
        raise("AttributeError", "'str' object has no attribute '" + name + "'", line);
    }
    if (obj.is<std::shared_ptr<ListObj>>()) {
        auto lst = obj.as<std::shared_ptr<ListObj>>();
        auto method = [&](auto fn) { return make_builtin("list." + name, fn); };
        if (name == "append")
            return method([lst](std::vector<Value>& args, auto&) {
                need_args("append", args, 1, 1);
                lst->items.push_back(args[0]);
                return none();
            });
        if (name == "extend")
            return method([lst](std::vector<Value>& args, auto&) {
                need_args("extend", args, 1, 1);
                for (auto& v : iter_items(args[0], 0)) lst->items.push_back(v);
                return none();
            });
        if (name == "insert")
            return method([lst](std::vector<Value>& args, auto&) {
                need_args("insert", args, 2, 2);
                long long i = as_int(args[0]);
                long long n = static_cast<long long>(lst->items.size());
                if (i < 0) i = std::max(0LL, n + i);
                i = std::min(i, n);
                lst->items.insert(lst->items.begin() + i, args[1]);
                return none();
            });
        if (name == "pop")
            return method([lst](std::vector<Value>& args, auto&) {
                if (lst->items.empty()) throw_py("IndexError", "pop from empty list");
                long long i = args.empty() ? static_cast<long long>(lst->items.size()) - 1 : as_int(args[0]);
                if (i < 0) i += static_cast<long long>(lst->items.size());
                if (i < 0 || i >= static_cast<long long>(lst->items.size()))
                    throw_py("IndexError", "pop index out of range");
                Value v = lst->items[i];
                lst->items.erase(lst->items.begin() + i);
                return v;
            });
        if (name == "remove")
            return method([lst](std::vector<Value>& args, auto&) {
                need_args("remove", args, 1, 1);
                for (size_t i = 0; i < lst->items.size(); ++i)
                    if (Interpreter::equals(lst->items[i], args[0])) {
                        lst->items.erase(lst->items.begin() + i);
                        return none();
                    }
                throw_py("ValueError", "list.remove(x): x not in list");
            });
        if (name == "index")
            return method([lst](std::vector<Value>& args, auto&) {
                need_args("index", args, 1, 1);
                for (size_t i = 0; i < lst->items.size(); ++i)
                    if (Interpreter::equals(lst->items[i], args[0])) return Value{static_cast<long long>(i)};
                throw_py("ValueError", "value not in list");
            });
        if (name == "count")
            return method([lst](std::vector<Value>& args, auto&) {
                need_args("count", args, 1, 1);
                long long n = 0;
                for (const auto& v : lst->items)
                    if (Interpreter::equals(v, args[0])) ++n;
                return Value{n};
            });
        if (name == "sort")
            return method([lst](std::vector<Value>&, std::vector<std::pair<std::string, Value>>& kw) {
                bool rev = Interpreter::truthy(find_kw(kw, "reverse"));
                std::stable_sort(lst->items.begin(), lst->items.end(), value_lt);
                if (rev) std::reverse(lst->items.begin(), lst->items.end());
                return none();
            });
        if (name == "reverse")
            return method([lst](std::vector<Value>&, auto&) {
                std::reverse(lst->items.begin(), lst->items.end());
                return none();
            });
        if (name == "clear")
            return method([lst](std::vector<Value>&, auto&) {
                lst->items.clear();
                return none();
            });
        if (name == "copy")
            return method([lst](std::vector<Value>&, auto&) {
                auto out = std::make_shared<ListObj>();
                out->items = lst->items;
                return Value{out};
            });
        raise("AttributeError", "'list' object has no attribute '" + name + "'", line);
    }
    if (obj.is<std::shared_ptr<DictObj>>()) {
        auto d = obj.as<std::shared_ptr<DictObj>>();
        auto method = [&](auto fn) { return make_builtin("dict." + name, fn); };
        if (name == "get")
            return method([d](std::vector<Value>& args, auto&) {
                need_args("get", args, 1, 2);
                for (const auto& [k, v] : d->items)
                    if (Interpreter::equals(k, args[0])) return v;
                return args.size() > 1 ? args[1] : none();
            });
        if (name == "keys")
            return method([d](std::vector<Value>&, auto&) {
                auto out = std::make_shared<ListObj>();
                for (const auto& [k, v] : d->items) out->items.push_back(k);
                return Value{out};
            });
        if (name == "values")
            return method([d](std::vector<Value>&, auto&) {
                auto out = std::make_shared<ListObj>();
                for (const auto& [k, v] : d->items) out->items.push_back(v);
                return Value{out};
            });
        if (name == "items")
            return method([d](std::vector<Value>&, auto&) {
                auto out = std::make_shared<ListObj>();
                for (const auto& [k, v] : d->items) {
                    auto t = std::make_shared<TupleObj>();
                    t->items = {k, v};
                    out->items.push_back(Value{t});
                }
                return Value{out};
            });
        if (name == "pop")
            return method([d](std::vector<Value>& args, auto&) {
                need_args("pop", args, 1, 2);
                for (size_t i = 0; i < d->items.size(); ++i)
                    if (Interpreter::equals(d->items[i].first, args[0])) {
                        Value v = d->items[i].second;
                        d->items.erase(d->items.begin() + i);
                        return v;
                    }
                if (args.size() > 1) return args[1];
                throw_py("KeyError", Interpreter::repr(args[0]));
            });
        if (name == "update")
            return method([d](std::vector<Value>& args, auto&) {
                need_args("update", args, 1, 1);
                if (!args[0].is<std::shared_ptr<DictObj>>()) throw_py("TypeError", "update() expects a dict");
                for (const auto& [k, v] : args[0].as<std::shared_ptr<DictObj>>()->items) {
                    bool replaced = false;
                    for (auto& [k2, v2] : d->items)
                        if (Interpreter::equals(k2, k)) { v2 = v; replaced = true; break; }
                    if (!replaced) d->items.emplace_back(k, v);
                }
                return none();
            });
        if (name == "setdefault")
            return method([d](std::vector<Value>& args, auto&) {
                need_args("setdefault", args, 1, 2);
                for (const auto& [k, v] : d->items)
                    if (Interpreter::equals(k, args[0])) return v;
                Value v = args.size() > 1 ? args[1] : none();
                d->items.emplace_back(args[0], v);
                return v;
            });
        if (name == "clear")
            return method([d](std::vector<Value>&, auto&) {
                d->items.clear();
                return none();
            });
        if (name == "copy")
            return method([d](std::vector<Value>&, auto&) {
                auto out = std::make_shared<DictObj>();
                out->items = d->items;
                return Value{out};
            });
        raise("AttributeError", "'dict' object has no attribute '" + name + "'", line);
    }
    if (obj.is<std::shared_ptr<SetObj>>()) {
        auto st = obj.as<std::shared_ptr<SetObj>>();
        auto method = [&](auto fn) { return make_builtin("set." + name, fn); };
        auto contains = [](const std::vector<Value>& set, const Value& v) {
            for (const auto& e : set)
                if (Interpreter::equals(e, v)) return true;
            return false;
        };
        if (name == "add")
            return method([st, contains](std::vector<Value>& args, auto&) {
                need_args("add", args, 1, 1);
                if (!contains(st->items, args[0])) st->items.push_back(args[0]);
                return none();
            });
        if (name == "remove" || name == "discard") {
            bool strict = name == "remove";
            return method([st, strict](std::vector<Value>& args, auto&) {
                need_args("remove", args, 1, 1);
                for (size_t i = 0; i < st->items.size(); ++i)
                    if (Interpreter::equals(st->items[i], args[0])) {
                        st->items.erase(st->items.begin() + i);
                        return none();
                    }
                if (strict) throw_py("KeyError", Interpreter::repr(args[0]));
                return none();
            });
        }
        if (name == "union" || name == "intersection" || name == "difference") {
            std::string which = name;
            return method([st, contains, which](std::vector<Value>& args, auto&) {
                need_args(which, args, 1, 1);
                std::vector<Value> other = iter_items(args[0], 0);
                auto out = std::make_shared<SetObj>();
                if (which == "union") {
                    out->items = st->items;
                    for (const auto& v : other)
                        if (!contains(out->items, v)) out->items.push_back(v);
                } else if (which == "intersection") {
                    for (const auto& v : st->items)
                        if (contains(other, v)) out->items.push_back(v);
                } else {
                    for (const auto& v : st->items)
                        if (!contains(other, v)) out->items.push_back(v);
                }
                return Value{out};
            });
        }
        if (name == "issubset")
            return method([st, contains](std::vector<Value>& args, auto&) {
                need_args("issubset", args, 1, 1);
                std::vector<Value> other = iter_items(args[0], 0);
                for (const auto& v : st->items)
                    if (!contains(other, v)) return Value{false};
                return Value{true};
            });
        raise("AttributeError", "'set' object has no attribute '" + name + "'", line);
    }
    raise("AttributeError", "object has no attribute '" + name + "'", line);
}

// ---------------------------------------------------------------- builtin modules

Value Interpreter::make_builtin_module(const std::string& name) {
    auto mod = std::make_shared<ModuleObj>();
    mod->name = name;
    mod->env = std::make_shared<Env>();
    auto def = [&](const std::string& n, auto fn) { mod->env->vars[n] = make_builtin(n, fn); };

    if (name == "math") {
        auto unary = [&](const std::string& n, double (*f)(double)) {
            def(n, [n, f](std::vector<Value>& args, std::vector<std::pair<std::string, Value>>&) {
                need_args(n, args, 1, 1);
                if (!is_num(args[0])) throw_py("TypeError", "must be real number");
                return Value{f(as_double(args[0]))};
            });
        };
        unary("sqrt", [](double x) {
            if (x < 0) throw_py("ValueError", "math domain error");
            return std::sqrt(x);
        });
        unary("exp", [](double x) { return std::exp(x); });
        unary("log", [](double x) {
            if (x <= 0) throw_py("ValueError", "math domain error");
            return std::log(x);
        });
        unary("log2", [](double x) { return std::log2(x); });
        unary("log10", [](double x) { return std::log10(x); });
        unary("sin", [](double x) { return std::sin(x); });
        unary("cos", [](double x) { return std::cos(x); });
        unary("tan", [](double x) { return std::tan(x); });
        unary("fabs", [](double x) { return std::fabs(x); });
        def("floor", [](std::vector<Value>& args, auto&) {
            need_args("floor", args, 1, 1);
            return Value{static_cast<long long>(std::floor(as_double(args[0])))};
        });
        def("ceil", [](std::vector<Value>& args, auto&) {
            need_args("ceil", args, 1, 1);
            return Value{static_cast<long long>(std::ceil(as_double(args[0])))};
        });
        def("trunc", [](std::vector<Value>& args, auto&) {
            need_args("trunc", args, 1, 1);
            return Value{static_cast<long long>(as_double(args[0]))};
        });
        def("pow", [](std::vector<Value>& args, auto&) {
            need_args("pow", args, 2, 2);
            return Value{std::pow(as_double(args[0]), as_double(args[1]))};
        });
        def("gcd", [](std::vector<Value>& args, auto&) {
            need_args("gcd", args, 2, 2);
            return Value{std::gcd(as_int(args[0]), as_int(args[1]))};
        });
        def("factorial", [](std::vector<Value>& args, auto&) {
            need_args("factorial", args, 1, 1);
            long long n = as_int(args[0]);
            if (n < 0) throw_py("ValueError", "factorial() not defined for negative values");
            long long r = 1;
            for (long long i = 2; i <= n; ++i) r *= i;
            return Value{r};
        });
        def("isclose", [](std::vector<Value>& args, std::vector<std::pair<std::string, Value>>& kw) {
            need_args("isclose", args, 2, 2);
            double rel = has_kw(kw, "rel_tol") ? as_double(find_kw(kw, "rel_tol")) : 1e-9;
            double abs_tol = has_kw(kw, "abs_tol") ? as_double(find_kw(kw, "abs_tol")) : 0.0;
            double a = as_double(args[0]), b = as_double(args[1]);
            return Value{std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_tol)};
        });
        def("isnan", [](std::vector<Value>& args, auto&) {
            need_args("isnan", args, 1, 1);
            return Value{std::isnan(as_double(args[0]))};
        });
        def("isinf", [](std::vector<Value>& args, auto&) {
            need_args("isinf", args, 1, 1);
            return Value{std::isinf(as_double(args[0]))};
        });
        mod->env->vars["pi"] = Value{3.141592653589793};
        mod->env->vars["e"] = Value{2.718281828459045};
        mod->env->vars["inf"] = Value{std::numeric_limits<double>::infinity()};
        mod->env->vars["nan"] = Value{std::numeric_limits<double>::quiet_NaN()};
        return Value{mod};
    }

    if (name == "pytest") {
        def("raises", [this](std::vector<Value>& args, auto&) -> Value {
            if (args.empty()) throw_py("TypeError", "raises() requires an exception type");
            if (args.size() == 1) {
                auto ctx = std::make_shared<InstanceObj>();
                auto cls = std::make_shared<ClassObj>();
                cls->name = "RaisesContext";
                ctx->cls = cls;
                ctx->attrs["expected"] = args[0];
                return Value{ctx};
            }
            // pytest.raises(Exc, callable, *call_args)
            Value fn = args[1];
            std::vector<Value> call_args(args.begin() + 2, args.end());
            try {
                call(fn, call_args);
            } catch (PyError& err) {
                std::shared_ptr<ClassObj> got;
                if (err.instance.is<std::shared_ptr<InstanceObj>>())
                    got = err.instance.as<std::shared_ptr<InstanceObj>>()->cls;
                else
                    got = exception_class(err.type);
                std::vector<Value> cand;
                if (args[0].is<std::shared_ptr<TupleObj>>())
                    cand = args[0].as<std::shared_ptr<TupleObj>>()->items;
                else
                    cand.push_back(args[0]);
                for (const auto& c : cand)
                    if (c.is<std::shared_ptr<ClassObj>>())
                        for (auto* k = got.get(); k; k = k->base.get())
                            if (k == c.as<std::shared_ptr<ClassObj>>().get()) {
                                auto info = std::make_shared<InstanceObj>();
                                info->cls = exception_class("Exception");
                                info->attrs["value"] = err.instance;
                                return Value{info};
                            }
                throw;
            }
            throw_py("Failed", "DID NOT RAISE");
        });
        def("approx", [](std::vector<Value>& args, std::vector<std::pair<std::string, Value>>& kw) {
            need_args("approx", args, 1, 1);
            auto ap = std::make_shared<ApproxObj>();
            ap->expected = new Value(args[0]);
            if (has_kw(kw, "rel")) ap->rel = as_double(find_kw(kw, "rel"));
            if (has_kw(kw, "abs")) ap->abs_tol = as_double(find_kw(kw, "abs"));
            return Value{ap};
        });
        def("skip", [](std::vector<Value>& args, auto&) -> Value {
            throw SkipSignal{args.empty() ? "" : Interpreter::to_str(args[0])};
        });
        def("fail", [](std::vector<Value>& args, auto&) -> Value {
            throw_py("Failed", args.empty() ? "" : Interpreter::to_str(args[0]));
        });
        def("fixture", [](std::vector<Value>& args, auto&) -> Value {
            if (args.size() == 1 && is_callable(args[0])) return args[0];
            return make_builtin("fixture", [](std::vector<Value>& a2, auto&) -> Value {
                return a2.empty() ? none() : a2[0];
            });
        });
        auto mark = std::make_shared<ModuleObj>();
        mark->name = "pytest.mark";
        mark->env = std::make_shared<Env>();
        mod->env->vars["mark"] = Value{mark};
        for (const auto& exc : {"ValueError", "TypeError", "ZeroDivisionError"})
            mod->env->vars[exc] = Value{exception_class(exc)};
        return Value{mod};
    }
    throw_py("ModuleNotFoundError", "No module named '" + name + "'");
}

// ---------------------------------------------------------------- builtin scope

void Interpreter::install_builtins() {
    auto def = [&](const std::string& n, auto fn) { builtins_->vars[n] = make_builtin(n, fn); };

    for (const auto& [exc, parent] : std::map<std::string, std::string>{
             {"BaseException", ""}}) {
        (void)parent;
        builtins_->vars[exc] = Value{exception_class(exc)};
    }
    for (const char* exc :
         {"Exception", "ArithmeticError", "ZeroDivisionError", "OverflowError", "LookupError",
          "IndexError", "KeyError", "AssertionError", "ValueError", "TypeError", "NameError",
          "AttributeError", "ImportError", "ModuleNotFoundError", "RuntimeError", "RecursionError",
          "NotImplementedError", "StopIteration"})
        builtins_->vars[exc] = Value{exception_class(exc)};

    def("len", [](std::vector<Value>& args, auto&) {
        need_args("len", args, 1, 1);
        const Value& v = args[0];
        if (v.is<std::string>()) return Value{static_cast<long long>(v.as<std::string>().size())};
        if (v.is<std::shared_ptr<ListObj>>())
            return Value{static_cast<long long>(v.as<std::shared_ptr<ListObj>>()->items.size())};
        if (v.is<std::shared_ptr<TupleObj>>())
            return Value{static_cast<long long>(v.as<std::shared_ptr<TupleObj>>()->items.size())};
        if (v.is<std::shared_ptr<DictObj>>())
            return Value{static_cast<long long>(v.as<std::shared_ptr<DictObj>>()->items.size())};
        if (v.is<std::shared_ptr<SetObj>>())
            return Value{static_cast<long long>(v.as<std::shared_ptr<SetObj>>()->items.size())};
        throw_py("TypeError", "object has no len()");
    });
    def("abs", [](std::vector<Value>& args, auto&) {
        need_args("abs", args, 1, 1);
        if (is_int_like(args[0])) return Value{std::abs(as_int(args[0]))};
        if (args[0].is<double>()) return Value{std::fabs(args[0].as<double>())};
        throw_py("TypeError", "bad operand type for abs()");
    });
    def("range", [](std::vector<Value>& args, auto&) {
        need_args("range", args, 1, 3);
        long long start = 0, stop = 0, step = 1;
        if (args.size() == 1) stop = as_int(args[0]);
        else {
            start = as_int(args[0]);
            stop = as_int(args[1]);
            if (args.size() == 3) step = as_int(args[2]);
        }
        if (step == 0) throw_py("ValueError", "range() arg 3 must not be zero");
        auto out = std::make_shared<ListObj>();
        long long count = step > 0 ? (stop - start + step - 1) / step : (start - stop - step - 1) / (-step);
        if (count > 10'000'000) throw_py("IterationLimitError", "range too large for this sandbox");
        for (long long i = start; step > 0 ? i < stop : i > stop; i += step)
            out->items.push_back(Value{i});
        return Value{out};
    });
    def("min", [](std::vector<Value>& args, auto&) {
        std::vector<Value> items = args.size() == 1 ? iter_items(args[0], 0) : args;
        if (items.empty()) throw_py("ValueError", "min() arg is an empty sequence");
        Value best = items[0];
        for (const auto& v : items)
            if (value_lt(v, best)) best = v;
        return best;
    });
    def("max", [](std::vector<Value>& args, auto&) {
        std::vector<Value> items = args.size() == 1 ? iter_items(args[0], 0) : args;
        if (items.empty()) throw_py("ValueError", "max() arg is an empty sequence");
        Value best = items[0];
        for (const auto& v : items)
            if (value_lt(best, v)) best = v;
        return best;
    });
    def("sum", [](std::vector<Value>& args, auto&) {
        need_args("sum", args, 1, 2);
        Value acc = args.size() > 1 ? args[1] : Value{0LL};
        for (const auto& v : iter_items(args[0], 0)) {
            if (is_int_like(acc) && is_int_like(v)) acc = Value{as_int(acc) + as_int(v)};
            else if (is_num(acc) && is_num(v)) acc = Value{as_double(acc) + as_double(v)};
            else throw_py("TypeError", "unsupported operand type(s) for +");
        }
        return acc;
    });
    def("round", [](std::vector<Value>& args, auto&) {
        need_args("round", args, 1, 2);
        double x = as_double(args[0]);
        if (args.size() == 1) {
            // banker's rounding
            double r = std::nearbyint(x);
            return Value{static_cast<long long>(r)};
        }
        long long nd = as_int(args[1]);
        double scale = std::pow(10.0, static_cast<double>(nd));
        return Value{std::nearbyint(x * scale) / scale};
    });
    def("str", [](std::vector<Value>& args, auto&) {
        if (args.empty()) return Value{std::string()};
        return Value{Interpreter::to_str(args[0])};
    });
    def("repr", [](std::vector<Value>& args, auto&) {
        need_args("repr", args, 1, 1);
        return Value{Interpreter::repr(args[0])};
    });
    def("int", [](std::vector<Value>& args, auto&) {
        if (args.empty()) return Value{0LL};
        const Value& v = args[0];
        if (is_int_like(v)) return Value{as_int(v)};
        if (v.is<double>()) return Value{static_cast<long long>(v.as<double>())};
        if (v.is<std::string>()) {
            try {
                size_t pos = 0;
                std::string s = v.as<std::string>();
                // strip whitespace
                size_t b = s.find_first_not_of(" \t\n");
                size_t e = s.find_last_not_of(" \t\n");
                if (b == std::string::npos) throw std::invalid_argument("empty");
                s = s.substr(b, e - b + 1);
                long long r = std::stoll(s, &pos, args.size() > 1 ? static_cast<int>(as_int(args[1])) : 10);
                if (pos != s.size()) throw std::invalid_argument("trailing");
                return Value{r};
            } catch (const std::exception&) {
                throw_py("ValueError", "invalid literal for int(): " + Interpreter::repr(v));
            }
        }
        throw_py("TypeError", "int() argument must be a string or a number");
    });
    def("float", [](std::vector<Value>& args, auto&) {
        if (args.empty()) return Value{0.0};
        const Value& v = args[0];
        if (is_num(v)) return Value{as_double(v)};
        if (v.is<std::string>()) {
            try {
                std::string s = v.as<std::string>();
                size_t pos = 0;
                double r = std::stod(s, &pos);
                while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
                if (pos != s.size()) throw std::invalid_argument("trailing");
                return Value{r};
            } catch (const std::exception&) {
                throw_py("ValueError", "could not convert string to float: " + Interpreter::repr(v));
            }
        }
        throw_py("TypeError", "float() argument must be a string or a number");
    });
    def("bool", [](std::vector<Value>& args, auto&) {
        return Value{!args.empty() && Interpreter::truthy(args[0])};
    });
    def("list", [](std::vector<Value>& args, auto&) {
        auto out = std::make_shared<ListObj>();
        if (!args.empty()) out->items = iter_items(args[0], 0);
        return Value{out};
    });
    def("tuple", [](std::vector<Value>& args, auto&) {
        auto out = std::make_shared<TupleObj>();
        if (!args.empty()) out->items = iter_items(args[0], 0);
        return Value{out};
    });
    def("dict", [](std::vector<Value>& args, std::vector<std::pair<std::string, Value>>& kw) {
        auto out = std::make_shared<DictObj>();
        if (!args.empty() && args[0].is<std::shared_ptr<DictObj>>())
            out->items = args[0].as<std::shared_ptr<DictObj>>()->items;
        for (auto& [k, v] : kw) out->items.emplace_back(Value{k}, v);
        return Value{out};
    });
    def("set", [](std::vector<Value>& args, auto&) {
        auto out = std::make_shared<SetObj>();
        if (!args.empty())
            for (const auto& v : iter_items(args[0], 0)) {
                bool dup = false;
                for (const auto& x : out->items)
                    if (Interpreter::equals(x, v)) { dup = true; break; }
                if (!dup) out->items.push_back(v);
            }
        return Value{out};
    });
    def("sorted", [this](std::vector<Value>& args, std::vector<std::pair<std::string, Value>>& kw) {
        need_args("sorted", args, 1, 1);
        std::vector<Value> items = iter_items(args[0], 0);
        Value key = find_kw(kw, "key");
        bool rev = truthy(find_kw(kw, "reverse"));
        if (is_callable(key)) {
            std::vector<std::pair<Value, Value>> keyed;
            for (auto& v : items) keyed.emplace_back(call(key, {v}), v);
            std::stable_sort(keyed.begin(), keyed.end(),
                             [](const auto& a, const auto& b) { return value_lt(a.first, b.first); });
            items.clear();
            for (auto& [k, v] : keyed) items.push_back(v);
        } else {
            std::stable_sort(items.begin(), items.end(), value_lt);
        }
        if (rev) std::reverse(items.begin(), items.end());
        auto out = std::make_shared<ListObj>();
        out->items = std::move(items);
        return Value{out};
    });
    def("reversed", [](std::vector<Value>& args, auto&) {
        need_args("reversed", args, 1, 1);
        std::vector<Value> items = iter_items(args[0], 0);
        std::reverse(items.begin(), items.end());
        auto out = std::make_shared<ListObj>();
        out->items = std::move(items);
        return Value{out};
    });
    def("enumerate", [](std::vector<Value>& args, auto&) {
        need_args("enumerate", args, 1, 2);
        long long start = args.size() > 1 ? as_int(args[1]) : 0;
        auto out = std::make_shared<ListObj>();
        for (const auto& v : iter_items(args[0], 0)) {
            auto t = std::make_shared<TupleObj>();
            t->items = {Value{start++}, v};
            out->items.push_back(Value{t});
        }
        return Value{out};
    });
    def("zip", [](std::vector<Value>& args, auto&) {
        std::vector<std::vector<Value>> seqs;
        for (const auto& a : args) seqs.push_back(iter_items(a, 0));
        size_t n = seqs.empty() ? 0 : seqs[0].size();
        for (const auto& s : seqs) n = std::min(n, s.size());
        auto out = std::make_shared<ListObj>();
        for (size_t i = 0; i < n; ++i) {
            auto t = std::make_shared<TupleObj>();
            for (const auto& s : seqs) t->items.push_back(s[i]);
            out->items.push_back(Value{t});
        }
        return Value{out};
    });
    def("any", [](std::vector<Value>& args, auto&) {
        need_args("any", args, 1, 1);
        for (const auto& v : iter_items(args[0], 0))
            if (Interpreter::truthy(v)) return Value{true};
        return Value{false};
    });
    def("all", [](std::vector<Value>& args, auto&) {
        need_args("all", args, 1, 1);
        for (const auto& v : iter_items(args[0], 0))
            if (!Interpreter::truthy(v)) return Value{false};
        return Value{true};
    });
    def("isinstance", [this](std::vector<Value>& args, auto&) {
        need_args("isinstance", args, 2, 2);
        const Value& v = args[0];
        std::vector<Value> types;
        if (args[1].is<std::shared_ptr<TupleObj>>())
            types = args[1].as<std::shared_ptr<TupleObj>>()->items;
        else
            types.push_back(args[1]);
        for (const auto& t : types) {
            if (t.is<std::shared_ptr<BuiltinObj>>()) {
                const std::string& n = t.as<std::shared_ptr<BuiltinObj>>()->name;
                if (n == "bool" && v.is<bool>()) return Value{true};
                if (n == "int" && is_int_like(v)) return Value{true};
                if (n == "float" && v.is<double>()) return Value{true};
                if (n == "str" && v.is<std::string>()) return Value{true};
                if (n == "list" && v.is<std::shared_ptr<ListObj>>()) return Value{true};
                if (n == "tuple" && v.is<std::shared_ptr<TupleObj>>()) return Value{true};
                if (n == "dict" && v.is<std::shared_ptr<DictObj>>()) return Value{true};
                if (n == "set" && v.is<std::shared_ptr<SetObj>>()) return Value{true};
            }
            if (t.is<std::shared_ptr<ClassObj>>() && v.is<std::shared_ptr<InstanceObj>>()) {
                for (auto* k = v.as<std::shared_ptr<InstanceObj>>()->cls.get(); k; k = k->base.get())
                    if (k == t.as<std::shared_ptr<ClassObj>>().get()) return Value{true};
            }
        }
        return Value{false};
    });
    def("type", [this](std::vector<Value>& args, auto&) -> Value {
        need_args("type", args, 1, 1);
        const Value& v = args[0];
        auto named = [&](const char* n) { return builtins_->vars.at(n); };
        if (v.is<bool>()) return named("bool");
        if (v.is<long long>()) return named("int");
        if (v.is<double>()) return named("float");
        if (v.is<std::string>()) return named("str");
        if (v.is<std::shared_ptr<ListObj>>()) return named("list");
        if (v.is<std::shared_ptr<TupleObj>>()) return named("tuple");
        if (v.is<std::shared_ptr<DictObj>>()) return named("dict");
        if (v.is<std::shared_ptr<SetObj>>()) return named("set");
        if (v.is<std::shared_ptr<InstanceObj>>())
            return Value{v.as<std::shared_ptr<InstanceObj>>()->cls};
        return named("type") /* self-describing fallback */;
    });
    def("print", [this](std::vector<Value>& args, auto&) {
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) stdout_ += ' ';
            stdout_ += to_str(args[i]);
        }
        stdout_ += '\n';
        return none();
    });
    def("callable", [](std::vector<Value>& args, auto&) {
        need_args("callable", args, 1, 1);
        return Value{is_callable(args[0])};
    });
    def("ord", [](std::vector<Value>& args, auto&) {
        need_args("ord", args, 1, 1);
        const std::string& s = args[0].as<std::string>();
        if (s.size() != 1) throw_py("TypeError", "ord() expected a character");
        return Value{static_cast<long long>(static_cast<unsigned char>(s[0]))};
    });
    def("chr", [](std::vector<Value>& args, auto&) {
        need_args("chr", args, 1, 1);
        return Value{std::string(1, static_cast<char>(as_int(args[0])))};
    });
    def("pow", [](std::vector<Value>& args, auto&) {
        need_args("pow", args, 2, 2);
        if (is_int_like(args[0]) && is_int_like(args[1]) && as_int(args[1]) >= 0) {
            long long base = as_int(args[0]), exp = as_int(args[1]), out = 1;
            for (long long i = 0; i < exp; ++i) out *= base;
            return Value{out};
        }
        return Value{std::pow(as_double(args[0]), as_double(args[1]))};
    });
}

}  // namespace suitesmith::dialect

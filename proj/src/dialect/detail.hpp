#pragma once

// Internal helpers shared by interp.cpp and builtins.cpp.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "suitesmith/dialect/interp.hpp"
#include "suitesmith/dialect/value.hpp"

namespace suitesmith::dialect::detail {

inline bool is_int_like(const Value& v) { return v.is<long long>() || v.is<bool>(); }
inline long long as_int(const Value& v) {
    return v.is<bool>() ? (v.as<bool>() ? 1 : 0) : v.as<long long>();
}
inline bool is_num(const Value& v) { return is_int_like(v) || v.is<double>(); }
inline double as_double(const Value& v) {
    return v.is<double>() ? v.as<double>() : static_cast<double>(as_int(v));
}

inline long long py_floordiv(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline long long py_mod(long long a, long long b) {
    long long r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) r += b;
    return r;
}

inline bool is_callable(const Value& v) {
    return v.is<std::shared_ptr<FuncObj>>() || v.is<std::shared_ptr<BoundObj>>() ||
           v.is<std::shared_ptr<BuiltinObj>>() || v.is<std::shared_ptr<ClassObj>>();
}

inline std::vector<Value> iter_items(const Value& v, int line) {
    if (v.is<std::shared_ptr<ListObj>>()) return v.as<std::shared_ptr<ListObj>>()->items;
    if (v.is<std::shared_ptr<TupleObj>>()) return v.as<std::shared_ptr<TupleObj>>()->items;
    if (v.is<std::shared_ptr<SetObj>>()) return v.as<std::shared_ptr<SetObj>>()->items;
    if (v.is<std::string>()) {
        std::vector<Value> out;
        for (char c : v.as<std::string>()) out.push_back(Value{std::string(1, c)});
        return out;
    }
    if (v.is<std::shared_ptr<DictObj>>()) {
        std::vector<Value> out;
        for (const auto& [k, _] : v.as<std::shared_ptr<DictObj>>()->items) out.push_back(k);
        return out;
    }
    throw PyError{"TypeError", "object is not iterable", line, Value{}};
}

}  // namespace suitesmith::dialect::detail

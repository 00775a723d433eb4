#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace npspec {

// Ground values: integers order before symbolic constants, symbols
// lexicographically among themselves. std::variant's ordering gives
// exactly that with the integer alternative first.
using Value = std::variant<std::int64_t, std::string>;
using GroundTuple = std::vector<Value>;

inline bool is_int(const Value& v) { return std::holds_alternative<std::int64_t>(v); }
inline std::int64_t as_int(const Value& v) { return std::get<std::int64_t>(v); }

inline std::string value_text(const Value& v) {
    if (is_int(v)) return std::to_string(as_int(v));
    return std::get<std::string>(v);
}

inline std::string tuple_text(const GroundTuple& t) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ",";
        out += value_text(t[i]);
    }
    out += ")";
    return out;
}

// A named extension that remembers insertion order (for deterministic
// enumeration and emission) while deduplicating tuples.
class Extension {
  public:
    Extension() = default;
    Extension(std::string name, int arity) : name_(std::move(name)), arity_(arity) {}

    const std::string& name() const { return name_; }
    int arity() const { return arity_; }
    std::size_t size() const { return ordered_.size(); }
    bool empty() const { return ordered_.empty(); }

    bool add(GroundTuple t) {
        if (!index_.insert(t).second) return false;
        ordered_.push_back(std::move(t));
        return true;
    }

    bool contains(const GroundTuple& t) const { return index_.count(t) > 0; }

    const std::vector<GroundTuple>& tuples() const { return ordered_; }

    friend bool operator==(const Extension& a, const Extension& b) {
        return a.index_ == b.index_;
    }

  private:
    std::string name_;
    int arity_ = 0;
    std::vector<GroundTuple> ordered_;
    std::set<GroundTuple> index_;
};

}  // namespace npspec

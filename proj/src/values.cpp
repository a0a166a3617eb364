#include "contraver/values.hpp"

#include <limits>
#include <type_traits>

namespace contraver::model {

std::int64_t SeqVal::at(std::int64_t i) const {
  if (i < 1 || i > length()) {
    throw RangeError("index " + std::to_string(i) + " outside 1.." + std::to_string(length()));
  }
  return elems_[static_cast<std::size_t>(i - 1)];
}

SeqVal SeqVal::interval(std::int64_t x, std::int64_t y) const {
  if (x > y) return {};
  if (x < 1 || y > length()) {
    throw RangeError("interval " + std::to_string(x) + ".." + std::to_string(y) + " outside 1.." +
                     std::to_string(length()));
  }
  return SeqVal(std::vector<std::int64_t>(elems_.begin() + (x - 1), elems_.begin() + y));
}

SeqVal SeqVal::extended(std::int64_t v) const {
  auto xs = elems_;
  xs.push_back(v);
  return SeqVal(std::move(xs));
}

SeqVal SeqVal::concat(const SeqVal& t) const {
  auto xs = elems_;
  xs.insert(xs.end(), t.elems_.begin(), t.elems_.end());
  return SeqVal(std::move(xs));
}

std::int64_t BagVal::occ(std::int64_t v) const {
  auto it = counts_.find(v);
  return it == counts_.end() ? 0 : it->second;
}

std::int64_t BagVal::size() const {
  std::int64_t n = 0;
  for (const auto& [_, c] : counts_) n += c;
  return n;
}

BagVal BagVal::extended(std::int64_t v) const {
  BagVal r = *this;
  ++r.counts_[v];
  return r;
}

BagVal BagVal::unite(const BagVal& c) const {
  BagVal r = *this;
  for (const auto& [v, n] : c.counts_) r.counts_[v] += n;
  return r;
}

BagVal to_bag(const SeqVal& s) {
  BagVal b;
  for (auto v : s.elements()) b = b.extended(v);
  return b;
}

std::string to_string(const SeqVal& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.elements().size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(s.elements()[i]);
  }
  return out + "]";
}

std::string to_string(const BagVal& b) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, n] : b.counts()) {
    if (!first) out += ", ";
    first = false;
    out += std::to_string(v) + ":" + std::to_string(n);
  }
  return out + "}";
}

namespace {

std::string scalar_text(const Scalar& s) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
        else return to_string(x);
      },
      s);
}

}  // namespace

std::string to_string(const Value& v) {
  if (const auto* sv = std::get_if<StructVal>(&v)) {
    std::string out = sv->type + "{";
    bool first = true;
    for (const auto& [name, field] : sv->fields) {
      if (!first) out += ", ";
      first = false;
      out += name + ": " + scalar_text(field);
    }
    return out + "}";
  }
  return scalar_text(to_scalar(v));
}

Value to_value(const Scalar& s) {
  return std::visit([](const auto& x) -> Value { return x; }, s);
}

Scalar to_scalar(const Value& v) {
  return std::visit(
      [](const auto& x) -> Scalar {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, StructVal>) throw Error("struct value used as a scalar");
        else return x;
      },
      v);
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw RangeError("integer overflow");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw RangeError("integer overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw RangeError("integer overflow");
  return r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  if (b == 0) throw DivByZero("division by zero");
  if (a == std::numeric_limits<std::int64_t>::min() && b == -1) throw RangeError("integer overflow");
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return checked_sub(a, checked_mul(b, floor_div(a, b))); }

}  // namespace contraver::model

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "contraver/source.hpp"

namespace contraver::model {

/// Out-of-range index or interval, or arithmetic leaving the int64 range.
class RangeError : public Error {
 public:
  using Error::Error;
};

class DivByZero : public Error {
 public:
  using Error::Error;
};

/// Finite sequence of integers, indexed from 1.
class SeqVal {
 public:
  SeqVal() = default;
  SeqVal(std::initializer_list<std::int64_t> xs) : elems_(xs) {}
  explicit SeqVal(std::vector<std::int64_t> xs) : elems_(std::move(xs)) {}

  std::int64_t length() const { return static_cast<std::int64_t>(elems_.size()); }
  const std::vector<std::int64_t>& elements() const { return elems_; }

  std::int64_t at(std::int64_t i) const;                    // RangeError outside 1..length
  SeqVal interval(std::int64_t x, std::int64_t y) const;    // empty when x > y
  SeqVal extended(std::int64_t v) const;
  SeqVal concat(const SeqVal& t) const;

  bool operator==(const SeqVal&) const = default;
  auto operator<=>(const SeqVal&) const = default;

 private:
  std::vector<std::int64_t> elems_;
};

/// Finite multiset of integers; only positive multiplicities are stored.
class BagVal {
 public:
  BagVal() = default;

  std::int64_t occ(std::int64_t v) const;
  std::int64_t size() const;
  const std::map<std::int64_t, std::int64_t>& counts() const { return counts_; }

  BagVal extended(std::int64_t v) const;
  BagVal unite(const BagVal& c) const;

  bool operator==(const BagVal&) const = default;
  auto operator<=>(const BagVal&) const = default;

 private:
  std::map<std::int64_t, std::int64_t> counts_;
};

BagVal to_bag(const SeqVal& s);

using Scalar = std::variant<std::int64_t, bool, SeqVal, BagVal>;

struct StructVal {
  std::string type;
  std::map<std::string, Scalar> fields;

  bool operator==(const StructVal&) const = default;
};

using Value = std::variant<std::int64_t, bool, SeqVal, BagVal, StructVal>;

std::string to_string(const SeqVal& s);
std::string to_string(const BagVal& b);
std::string to_string(const Value& v);

Value to_value(const Scalar& s);
Scalar to_scalar(const Value& v);  // throws Error for a struct

// Checked int64 arithmetic; RangeError on overflow.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t floor_div(std::int64_t a, std::int64_t b);  // DivByZero when b == 0
std::int64_t floor_mod(std::int64_t a, std::int64_t b);  // a - b * floor_div(a, b)

}  // namespace contraver::model

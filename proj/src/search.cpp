#include "contraver/search.hpp"

#include <map>
#include <random>

namespace contraver::smt {

using logic::Sort;
using model::BagVal;
using model::SeqVal;
using model::Value;

std::uint64_t stable_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

class StateSampler {
 public:
  explicit StateSampler(std::uint64_t seed) : rng_(seed) {}

  std::map<std::string, Value> draw(const std::map<std::string, Sort>& vars) {
    std::map<std::string, Value> env;
    seqs_.clear();
    for (const auto& [name, sort] : vars) {
      if (sort == Sort::Seq) {
        auto s = seq();
        seqs_.push_back(s);
        env[name] = std::move(s);
      }
    }
    for (const auto& [name, sort] : vars) {
      switch (sort) {
        case Sort::Int: env[name] = integer(); break;
        case Sort::Bool: env[name] = coin(2); break;
        case Sort::Bag: env[name] = bag(); break;
        case Sort::Seq: break;
      }
    }
    return env;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<SeqVal> seqs_;

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin(int n) { return uniform(0, n - 1) == 0; }

  SeqVal seq() {
    const auto n = uniform(0, 5);
    const bool narrow = coin(2);
    std::vector<std::int64_t> xs;
    for (std::int64_t k = 0; k < n; ++k) xs.push_back(narrow ? uniform(0, 3) : uniform(-3, 16));
    return SeqVal(std::move(xs));
  }

  std::int64_t integer() {
    if (!seqs_.empty() && !coin(3)) {
      const auto& s = seqs_[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(seqs_.size()) - 1))];
      if (coin(2) && s.length() > 0) return s.at(uniform(1, s.length()));
      return uniform(0, s.length() + 1);
    }
    return uniform(-3, 16);
  }

  BagVal bag() {
    if (!seqs_.empty() && !coin(4)) {
      const auto& s = seqs_[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(seqs_.size()) - 1))];
      return model::to_bag(s.interval(1, uniform(0, s.length())));
    }
    return model::to_bag(seq());
  }
};

std::string render(const std::map<std::string, Value>& env) {
  std::string out;
  for (const auto& [name, v] : env) {
    if (!out.empty()) out += "\n";
    out += name + " = " + model::to_string(v);
  }
  return out;
}

}  // namespace

std::optional<std::string> find_countermodel(const vc::VerificationCondition& vc,
                                             const std::vector<logic::GhostDef>& ghosts, unsigned trials) {
  if (trials == 0) return std::nullopt;
  auto vars = logic::free_vars(vc.hypothesis);
  for (const auto& [name, sort] : logic::free_vars(vc.goal)) vars.emplace(name, sort);
  std::map<std::string, logic::GhostDef> defs;
  for (const auto& g : ghosts) defs.emplace(g.name, g);
  logic::Domain dom;
  dom.ranges_only = true;
  StateSampler sampler(stable_hash(vc.id));
  for (unsigned t = 0; t < trials; ++t) {
    auto env = sampler.draw(vars);
    try {
      if (!std::get<bool>(logic::eval(vc.hypothesis, env, dom, defs))) continue;
      if (std::get<bool>(logic::eval(vc.goal, env, dom, defs))) continue;
    } catch (const Error&) {
      continue;
    }
    return render(env);
  }
  return std::nullopt;
}

}  // namespace contraver::smt

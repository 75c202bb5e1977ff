#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace acsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The timestamp domain is the non-negative integers plus a top element.
constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

// An immutable identifier within a sort. Equality is (sort, id) equality.
struct Atom {
  std::string sort;
  std::string id;

  auto operator<=>(const Atom&) const = default;
};

// A cell of a relational tuple: an atom or an integer (timestamps included).
struct Value {
  enum class Kind { kAtom, kInt };

  Kind kind = Kind::kInt;
  Atom atom;
  std::int64_t num = 0;

  static Value of(Atom a) { return Value{Kind::kAtom, std::move(a), 0}; }
  static Value of(std::int64_t n) { return Value{Kind::kInt, {}, n}; }

  bool is_atom() const { return kind == Kind::kAtom; }
  bool is_int() const { return kind == Kind::kInt; }

  const Atom& as_atom() const {
    if (!is_atom()) throw ConfigError("value is not an atom");
    return atom;
  }
  std::int64_t as_int() const {
    if (!is_int()) throw ConfigError("value is not an integer");
    return num;
  }

  auto operator<=>(const Value&) const = default;

  std::string str() const {
    if (is_atom()) return atom.id;
    if (num == kInfinity) return "inf";
    return std::to_string(num);
  }
};

using Tuple = std::vector<Value>;
using Args = std::vector<Value>;

// Finite, ordered atom populations plus the (unbounded) timestamp domain.
struct Universe {
  std::map<std::string, std::vector<Atom>> sorts;

  const std::vector<Atom>& sort(const std::string& name) const {
    auto it = sorts.find(name);
    if (it == sorts.end()) throw ConfigError("unknown sort: " + name);
    return it->second;
  }

  bool has_sort(const std::string& name) const {
    return sorts.contains(name);
  }

  void add_sort(const std::string& name, int count,
                const std::string& prefix) {
    auto& atoms = sorts[name];
    for (int i = 0; i < count; ++i) {
      atoms.push_back(Atom{name, prefix + std::to_string(i)});
    }
  }
};

// A protection state: named relations over values plus named integer
// scalars (e.g. a clock). Two states with equal contents have byte-identical
// canonical encodings, which is the dedup key for reachability.
class RelationalState {
 public:
  bool insert(const std::string& rel, Tuple t) {
    auto [it, added] = relations_[rel].insert(std::move(t));
    if (added) {
      ++tuple_count_;
      ++versions_[rel];
    }
    return added;
  }

  bool erase(const std::string& rel, const Tuple& t) {
    auto it = relations_.find(rel);
    if (it == relations_.end()) return false;
    bool removed = it->second.erase(t) > 0;
    if (removed) {
      --tuple_count_;
      ++versions_[rel];
    }
    return removed;
  }

  bool contains(const std::string& rel, const Tuple& t) const {
    auto it = relations_.find(rel);
    return it != relations_.end() && it->second.contains(t);
  }

  const std::set<Tuple>& tuples(const std::string& rel) const {
    static const std::set<Tuple> kEmpty;
    auto it = relations_.find(rel);
    return it == relations_.end() ? kEmpty : it->second;
  }

  void clear_relation(const std::string& rel) {
    auto it = relations_.find(rel);
    if (it == relations_.end()) return;
    if (!it->second.empty()) ++versions_[rel];
    tuple_count_ -= it->second.size();
    it->second.clear();
  }

  // Monotone per-relation mutation counter; any write to the relation bumps
  // it, so equal counters across an operation prove the relation untouched.
  std::uint64_t version(const std::string& rel) const {
    auto it = versions_.find(rel);
    return it == versions_.end() ? 0 : it->second;
  }

  std::int64_t scalar(const std::string& name) const {
    auto it = scalars_.find(name);
    return it == scalars_.end() ? 0 : it->second;
  }

  void set_scalar(const std::string& name, std::int64_t v) {
    scalars_[name] = v;
  }

  std::size_t tuple_count() const { return tuple_count_; }

  const std::map<std::string, std::set<Tuple>>& relations() const {
    return relations_;
  }
  const std::map<std::string, std::int64_t>& scalars() const {
    return scalars_;
  }

  bool operator==(const RelationalState& other) const {
    if (scalars_ != other.scalars_) return false;
    auto mine = normalized_relations();
    auto theirs = other.normalized_relations();
    if (mine.size() != theirs.size()) return false;
    for (auto a = mine.begin(), b = theirs.begin(); a != mine.end();
         ++a, ++b) {
      if (a->first != b->first || *a->second != *b->second) return false;
    }
    return true;
  }

  // Canonical byte encoding: relations sorted by name, tuples in set order
  // (lexicographic by (kind, sort, id, value)); empty relations are dropped.
  std::string canonical() const {
    std::ostringstream out;
    for (const auto& [name, tuples] : relations_) {
      if (tuples.empty()) continue;
      out << name << '\x1d';
      for (const Tuple& t : tuples) {
        for (const Value& v : t) {
          if (v.is_atom()) {
            out << 'a' << v.atom.sort << '\x1f' << v.atom.id;
          } else {
            out << 'i' << v.num;
          }
          out << '\x1e';
        }
        out << '\x1d';
      }
      out << '\x1c';
    }
    for (const auto& [name, v] : scalars_) {
      out << name << '=' << v << '\x1c';
    }
    return out.str();
  }

  // One relation per line, tuples in canonical order. CLI `dump-state`.
  std::string dump() const {
    std::ostringstream out;
    for (const auto& [name, v] : scalars_) {
      out << name << " = " << v << '\n';
    }
    for (const auto& [name, tuples] : relations_) {
      if (tuples.empty()) continue;
      out << name << ":";
      for (const Tuple& t : tuples) {
        out << " (";
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (i) out << ",";
          out << t[i].str();
        }
        out << ")";
      }
      out << '\n';
    }
    return out.str();
  }

 private:
  // Equality ignores relations that happen to exist but are empty.
  std::map<std::string, const std::set<Tuple>*> normalized_relations() const {
    std::map<std::string, const std::set<Tuple>*> out;
    for (const auto& [name, tuples] : relations_) {
      if (!tuples.empty()) out.emplace(name, &tuples);
    }
    return out;
  }

  std::map<std::string, std::set<Tuple>> relations_;
  std::map<std::string, std::int64_t> scalars_;
  std::size_t tuple_count_ = 0;
  std::map<std::string, std::uint64_t> versions_;
};

}  // namespace acsim

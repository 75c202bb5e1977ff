#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "acsim/relstate.hpp"
#include "acsim/rng.hpp"
#include "acsim/scheme.hpp"

namespace acsim {

// A cost value is a flat component vector; the owning measure gives the
// components their meaning. Integer-valued measures store exact integers in
// doubles (exact up to 2^53, far beyond anything a run accrues).
using CostVal = std::vector<double>;

enum class Ordering { kLessEq, kGreaterEq, kEqual, kIncomparable };

// An ordered abelian monoid: accrual operator, identity, partial order.
struct CostMeasure {
  std::string name;
  CostVal identity;
  std::function<CostVal(const CostVal&, const CostVal&)> combine;
  std::function<Ordering(const CostVal&, const CostVal&)> compare;
  // Draws a random element; used by the law fuzzer.
  std::function<CostVal(Rng&)> sample;

  std::size_t arity() const { return identity.size(); }
};

inline CostVal combine(const CostMeasure& m, const CostVal& a,
                       const CostVal& b) {
  return m.combine(a, b);
}

inline Ordering compare(const CostMeasure& m, const CostVal& a,
                        const CostVal& b) {
  return m.compare(a, b);
}

namespace detail {

inline Ordering compare_scalar(double a, double b) {
  if (a == b) return Ordering::kEqual;
  return a < b ? Ordering::kLessEq : Ordering::kGreaterEq;
}

// Product order: ≼ holds iff it holds in every component.
inline Ordering product_order(const std::vector<Ordering>& parts) {
  bool all_le = true;
  bool all_ge = true;
  for (Ordering o : parts) {
    if (o != Ordering::kLessEq && o != Ordering::kEqual) all_le = false;
    if (o != Ordering::kGreaterEq && o != Ordering::kEqual) all_ge = false;
  }
  if (all_le && all_ge) return Ordering::kEqual;
  if (all_le) return Ordering::kLessEq;
  if (all_ge) return Ordering::kGreaterEq;
  return Ordering::kIncomparable;
}

}  // namespace detail

// (ℕ, +, ≤)
inline CostMeasure nat_add_measure(std::string name = "nat_add") {
  return CostMeasure{
      std::move(name),
      {0.0},
      [](const CostVal& a, const CostVal& b) { return CostVal{a[0] + b[0]}; },
      [](const CostVal& a, const CostVal& b) {
        return detail::compare_scalar(a[0], b[0]);
      },
      [](Rng& rng) { return CostVal{static_cast<double>(rng.next_below(1000))}; },
  };
}

// (ℕ, max, ≤)
inline CostMeasure nat_max_measure(std::string name = "nat_max") {
  return CostMeasure{
      std::move(name),
      {0.0},
      [](const CostVal& a, const CostVal& b) {
        return CostVal{a[0] > b[0] ? a[0] : b[0]};
      },
      [](const CostVal& a, const CostVal& b) {
        return detail::compare_scalar(a[0], b[0]);
      },
      [](Rng& rng) { return CostVal{static_cast<double>(rng.next_below(1000))}; },
  };
}

// (ℝ≥0, +, ≤); the distinguished time measure is an instance of this.
inline CostMeasure real_time_measure(std::string name = "time") {
  return CostMeasure{
      std::move(name),
      {0.0},
      [](const CostVal& a, const CostVal& b) { return CostVal{a[0] + b[0]}; },
      [](const CostVal& a, const CostVal& b) {
        return detail::compare_scalar(a[0], b[0]);
      },
      // Samples lie on a 1/64 grid so sums of a few draws are exact doubles
      // and the algebraic laws can be checked with exact equality.
      [](Rng& rng) {
        return CostVal{static_cast<double>(rng.next_below(6400)) / 64.0};
      },
  };
}

// (ℤ⁺ × ℤ⁺, +, ≤): e.g. administrative work paired with data-entry work.
inline CostMeasure work_ratio_measure(std::string name = "work_ratio") {
  return CostMeasure{
      std::move(name),
      {0.0, 0.0},
      [](const CostVal& a, const CostVal& b) {
        return CostVal{a[0] + b[0], a[1] + b[1]};
      },
      [](const CostVal& a, const CostVal& b) {
        return detail::product_order({detail::compare_scalar(a[0], b[0]),
                                      detail::compare_scalar(a[1], b[1])});
      },
      [](Rng& rng) {
        return CostVal{static_cast<double>(rng.next_below(1000)),
                       static_cast<double>(rng.next_below(1000))};
      },
  };
}

// A vector of measures is again a measure: componentwise accrual, product
// order. Components are concatenated into one flat value.
inline CostMeasure vector_of(std::vector<CostMeasure> parts,
                             std::string name = "vector") {
  if (parts.empty()) throw ConfigError("vector_of: empty measure list");
  CostVal identity;
  for (const CostMeasure& p : parts) {
    identity.insert(identity.end(), p.identity.begin(), p.identity.end());
  }
  auto shared = std::make_shared<std::vector<CostMeasure>>(std::move(parts));
  auto split = [shared](const CostVal& v, std::size_t part) {
    std::size_t offset = 0;
    for (std::size_t i = 0; i < part; ++i) offset += (*shared)[i].arity();
    return CostVal(v.begin() + offset,
                   v.begin() + offset + (*shared)[part].arity());
  };
  return CostMeasure{
      std::move(name),
      std::move(identity),
      [shared, split](const CostVal& a, const CostVal& b) {
        CostVal out;
        for (std::size_t i = 0; i < shared->size(); ++i) {
          CostVal part = (*shared)[i].combine(split(a, i), split(b, i));
          out.insert(out.end(), part.begin(), part.end());
        }
        return out;
      },
      [shared, split](const CostVal& a, const CostVal& b) {
        std::vector<Ordering> parts;
        for (std::size_t i = 0; i < shared->size(); ++i) {
          parts.push_back((*shared)[i].compare(split(a, i), split(b, i)));
        }
        return detail::product_order(parts);
      },
      [shared](Rng& rng) {
        CostVal out;
        for (const CostMeasure& p : *shared) {
          CostVal part = p.sample(rng);
          out.insert(out.end(), part.begin(), part.end());
        }
        return out;
      },
  };
}

// Maps a fully parameterized scheme action and a state to a measure value.
// `use_post_state` selects whether the simulator hands the state before or
// after the action's effect (e.g. state-size measures read the post-state).
struct CostFunction {
  std::function<CostVal(const CommandInstance&, const RelationalState&)> eval;
  bool use_post_state = false;
};

inline CostFunction constant_cost(CostVal v) {
  return CostFunction{
      [v](const CommandInstance&, const RelationalState&) { return v; }, false};
}

inline CostFunction zero_cost(const CostMeasure& m) {
  return constant_cost(m.identity);
}

}  // namespace acsim

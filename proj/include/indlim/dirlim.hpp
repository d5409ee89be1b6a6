#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indlim/errors.hpp"

namespace indlim {

/// A directed sequence of objects indexed by min_index..max_index with
/// evaluable bonding maps. The engine is agnostic about what the elements
/// are; it only needs bond, equality, and (optionally) membership data.
///
/// Bonding maps must be pure. All identity checks are sampled, never
/// universally quantified; reports carry the seed and sample count so runs
/// can be replayed.
template <class Elem>
struct DirectedSystem {
  std::string name;
  int min_index = 1;
  int max_index = 1;

  /// epsilon_ij for i <= j, applied to an element of object i.
  std::function<Elem(int i, int j, const Elem&)> bond;
  std::function<bool(const Elem&, const Elem&)> equal;

  /// Element membership in object i. Optional; used by validate when present.
  std::function<bool(int i, const Elem&)> contains;

  /// Minimal index whose object contains (a preimage of) the element.
  /// Optional; when present, inject() canonicalizes levels with it.
  std::function<int(const Elem&)> min_level;

  /// Asserts that every bonding map is injective (the strictness proxy).
  bool injective = false;

  bool has_index(int i) const { return i >= min_index && i <= max_index; }
};

/// An element of the direct limit: an equivalence class (level, rep) of the
/// coproduct, stored by one representative.
template <class Elem>
struct LimitElement {
  const DirectedSystem<Elem>* system = nullptr;
  int level = 0;
  Elem rep{};
};

struct Violation {
  std::string law;      // "identity", "composition", "cone", "injectivity"
  int i = 0, j = 0, k = 0;
  std::string witness;  // rendering of the offending sample
};

struct ValidationReport {
  std::uint64_t seed = 0;
  int samples_checked = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the bonding laws epsilon_ii = id and epsilon_jk . epsilon_ij =
/// epsilon_ik on the given samples, for every admissible (i, j, k) above the
/// sample's index. Every violated identity is reported with its witness.
template <class Elem>
ValidationReport validate(const DirectedSystem<Elem>& system,
                          const std::vector<std::pair<int, Elem>>& samples,
                          const std::function<std::string(const Elem&)>& render = nullptr) {
  ValidationReport report;
  auto show = [&](const Elem& e) { return render ? render(e) : std::string("<sample>"); };
  for (const auto& [i, x] : samples) {
    if (!system.has_index(i))
      throw IndexOutOfRange("validate: sample index " + std::to_string(i) + " not in system '" +
                            system.name + "'");
    ++report.samples_checked;
    if (!system.equal(system.bond(i, i, x), x))
      report.violations.push_back({"identity", i, i, i, show(x)});
    for (int j = i; j <= system.max_index; ++j) {
      const Elem mid = system.bond(i, j, x);
      for (int k = j; k <= system.max_index; ++k) {
        if (!system.equal(system.bond(j, k, mid), system.bond(i, k, x)))
          report.violations.push_back({"composition", i, j, k, show(x)});
      }
    }
  }
  return report;
}

/// The canonical map epsilon_i into the limit. With min_level available the
/// representative keeps its minimal level, making repeated injections of the
/// same underlying element literally identical.
template <class Elem>
LimitElement<Elem> inject(const DirectedSystem<Elem>& system, int i, Elem x) {
  if (!system.has_index(i))
    throw IndexOutOfRange("inject: index " + std::to_string(i) + " not in system '" +
                          system.name + "'");
  int level = i;
  if (system.min_level) {
    const int m = system.min_level(x);
    if (m >= system.min_index && m <= i) level = m;
  }
  return LimitElement<Elem>{&system, level, std::move(x)};
}

/// (i,x) ~ (j,y) iff both map to the same element at level max(i,j). For a
/// directed sequence this is the two-case relation of the quotient
/// construction; no zig-zag closure is needed.
template <class Elem>
bool equivalent(const LimitElement<Elem>& a, const LimitElement<Elem>& b) {
  if (a.system == nullptr || a.system != b.system)
    throw SystemMismatch("equivalent: elements from different systems");
  const auto& sys = *a.system;
  const int top = std::max(a.level, b.level);
  return sys.equal(sys.bond(a.level, top, a.rep), sys.bond(b.level, top, b.rep));
}

/// Builds the mediating map out of the limit from a cone (psi_i) into a
/// common target. The cone condition psi_j . epsilon_ij = psi_i is verified
/// on the given samples first; a violation is an error carrying the witness,
/// since the induced map would not be well defined.
template <class Elem, class Target>
std::function<Target(const LimitElement<Elem>&)> universal_map(
    const DirectedSystem<Elem>& system,
    std::function<Target(int i, const Elem&)> cone,
    std::function<bool(const Target&, const Target&)> target_equal,
    const std::vector<std::pair<int, Elem>>& check_samples,
    const std::function<std::string(const Elem&)>& render = nullptr) {
  for (const auto& [i, x] : check_samples) {
    if (!system.has_index(i))
      throw IndexOutOfRange("universal_map: sample index " + std::to_string(i));
    for (int j = i; j <= system.max_index; ++j) {
      if (!target_equal(cone(j, system.bond(i, j, x)), cone(i, x))) {
        throw ConeConditionViolated(
            "cone condition fails at (i,j)=(" + std::to_string(i) + "," + std::to_string(j) +
            ") on sample " + (render ? render(x) : std::string("<sample>")));
      }
    }
  }
  return [cone, &system](const LimitElement<Elem>& le) {
    if (le.system != &system) throw SystemMismatch("universal_map: element from another system");
    return cone(le.level, le.rep);
  };
}

}  // namespace indlim

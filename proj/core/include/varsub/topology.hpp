#pragma once

#include <optional>
#include <string>

namespace varsub {

// Configuration-space cohomology data. Only the first two Betti numbers
// matter for the verdicts below; the time line is a contractible factor, so
// these are the Betti numbers of the configuration space itself. Unknown
// entries stay unset and produce an unknown-topology verdict.
struct TopologyInfo {
    std::string name; // empty when raw Betti numbers were supplied
    std::optional<int> betti1;
    std::optional<int> betti2;

    friend bool operator==(const TopologyInfo& a, const TopologyInfo& b) {
        return a.name == b.name && a.betti1 == b.betti1 && a.betti2 == b.betti2;
    }
};

// Case-insensitive lookup of the built-in table: R/R^n (contractible), S1,
// S2, mobius, T2. Throws std::invalid_argument for unknown names.
TopologyInfo lookup_topology(const std::string& name);

bool known_topology(const std::string& name);

enum class GlobalStatus {
    NotLocal,        // the local test already failed
    Global,          // local pass and the obstruction space vanishes
    Inconclusive,    // local pass, obstruction class may be nonzero
    UnknownTopology, // the relevant Betti number was not supplied
};

struct GlobalVerdict {
    GlobalStatus status = GlobalStatus::UnknownTopology;
    std::string explanation;
};

// Local residual verdict plus cohomology: a local pass upgrades to a global
// Lagrangian exactly when the second Betti number vanishes; a positive
// second Betti number leaves the verdict inconclusive, never upgraded.
GlobalVerdict global_status(bool locally_variational, const TopologyInfo& info);

// Same logic one degree down: whether a density with vanishing source form
// is globally a total derivative, controlled by the first Betti number. On a
// circle factor the angular density is the standard counterexample.
GlobalVerdict trivial_lagrangian_global(bool locally_null, const TopologyInfo& info);

// Display names: "not-locally-variational", "globally-variational",
// "global-inconclusive-obstruction-possible", "unknown-topology".
const char* global_status_name(GlobalStatus s);
// Degree-1 variant: "not-locally-trivial", "globally-trivial", same tail.
const char* triviality_status_name(GlobalStatus s);

} // namespace varsub

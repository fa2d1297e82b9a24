#include "varsub/topology.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace varsub {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// "r", "r^3", "r2" and the generic "r^n"/"r^m" all name a contractible space.
bool is_euclidean(const std::string& s) {
    if (s.empty() || s[0] != 'r') return false;
    std::size_t i = 1;
    if (i < s.size() && s[i] == '^') ++i;
    if (i == s.size() - 1 && (s[i] == 'n' || s[i] == 'm')) return true;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

GlobalVerdict verdict_from(bool local_pass, std::optional<int> betti, const std::string& where,
                           const char* local_fail_msg, const char* degree) {
    GlobalVerdict v;
    if (!local_pass) {
        v.status = GlobalStatus::NotLocal;
        v.explanation = local_fail_msg;
        return v;
    }
    if (!betti) {
        v.status = GlobalStatus::UnknownTopology;
        v.explanation = std::string("the degree-") + degree + " Betti number of " + where +
                        " was not supplied, so the global verdict is undetermined";
        return v;
    }
    if (*betti == 0) {
        v.status = GlobalStatus::Global;
        v.explanation = "the local test passes and " + where + " has no degree-" + degree +
                        " cohomology, so local primitives patch to a global one";
    } else {
        v.status = GlobalStatus::Inconclusive;
        v.explanation = "the local test passes but " + where + " has Betti number " +
                        std::to_string(*betti) + " in degree " + degree +
                        ", so a cohomology class may obstruct a global primitive";
    }
    return v;
}

} // namespace

bool known_topology(const std::string& name) {
    std::string s = lower(name);
    if (is_euclidean(s)) return true;
    return s == "s1" || s == "s^1" || s == "circle" || s == "s2" || s == "s^2" ||
           s == "sphere" || s == "mobius" || s == "t2" || s == "t^2" || s == "torus";
}

TopologyInfo lookup_topology(const std::string& name) {
    std::string s = lower(name);
    if (is_euclidean(s)) return {name, 0, 0};
    if (s == "s1" || s == "s^1" || s == "circle") return {name, 1, 0};
    if (s == "s2" || s == "s^2" || s == "sphere") return {name, 0, 1};
    if (s == "mobius") return {name, 1, 0};
    if (s == "t2" || s == "t^2" || s == "torus") return {name, 2, 1};
    throw std::invalid_argument("unknown topology name " + name +
                                "; use R/R^n, S1, S2, mobius, T2 or raw Betti numbers");
}

GlobalVerdict global_status(bool locally_variational, const TopologyInfo& info) {
    std::string where = info.name.empty() ? "the configuration space" : info.name;
    return verdict_from(locally_variational, info.betti2, where,
                        "the residual test failed, so no Lagrangian exists even locally", "2");
}

GlobalVerdict trivial_lagrangian_global(bool locally_null, const TopologyInfo& info) {
    std::string where = info.name.empty() ? "the configuration space" : info.name;
    return verdict_from(locally_null, info.betti1, where,
                        "the density is not even locally a total derivative", "1");
}

const char* global_status_name(GlobalStatus s) {
    switch (s) {
        case GlobalStatus::NotLocal: return "not-locally-variational";
        case GlobalStatus::Global: return "globally-variational";
        case GlobalStatus::Inconclusive: return "global-inconclusive-obstruction-possible";
        case GlobalStatus::UnknownTopology: return "unknown-topology";
    }
    return "unknown";
}

const char* triviality_status_name(GlobalStatus s) {
    switch (s) {
        case GlobalStatus::NotLocal: return "not-locally-trivial";
        case GlobalStatus::Global: return "globally-trivial";
        case GlobalStatus::Inconclusive: return "global-inconclusive-obstruction-possible";
        case GlobalStatus::UnknownTopology: return "unknown-topology";
    }
    return "unknown";
}

} // namespace varsub

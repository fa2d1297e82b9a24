#include "varsub/report.hpp"

#include <ostream>

#include "json.hpp"

namespace varsub {

namespace {

using nlohmann::json;

json assignment_json(const Assignment& a) {
    json out = json::object();
    for (const auto& [sym, val] : a) out[sym.str()] = val;
    return out;
}

json entry_json(const ResidualEntry& e) {
    json j;
    j["nu"] = e.nu;
    j["sigma"] = e.sigma;
    if (e.kappa >= 0) j["kappa"] = e.kappa;
    j["expr"] = e.expr.str();
    j["status"] = e.z.zero ? "zero" : "nonzero";
    j["certification"] = certification_name(e.z.cert);
    if (e.z.witness) {
        j["witness"] = {{"point", assignment_json(e.z.witness->point)},
                        {"value", e.z.witness->value}};
    }
    return j;
}

json report_json(const HelmholtzReport& rep) {
    json j;
    j["order"] = rep.order;
    j["normalization"] = rep.normalization;
    if (!rep.normalization_note.empty()) j["normalization_note"] = rep.normalization_note;
    j["families"] = json::array();
    for (const auto& fam : rep.families) {
        json f;
        f["label"] = fam.label;
        f["l"] = fam.l;
        f["entries"] = json::array();
        for (const auto& e : fam.entries) f["entries"].push_back(entry_json(e));
        j["families"].push_back(std::move(f));
    }
    j["verdict"] = rep.pass ? "pass" : "fail";
    j["certification"] = certification_name(rep.cert);
    j["effective_order"] = rep.effective_order;
    j["oracle"] = {{"prng", kPrngName},
                   {"seed", rep.oracle.seed},
                   {"samples", rep.oracle.samples},
                   {"tol", rep.oracle.tol}};
    if (rep.first_failure) {
        const auto& w = *rep.first_failure;
        json wj;
        wj["family"] = w.family;
        wj["l"] = w.l;
        wj["nu"] = w.nu;
        wj["sigma"] = w.sigma;
        if (w.kappa >= 0) wj["kappa"] = w.kappa;
        wj["point"] = assignment_json(w.point);
        wj["value"] = w.value;
        j["first_failure"] = std::move(wj);
    }
    return j;
}

json sf_json(const SourceForm& sf) {
    json j;
    j["base"] = sf.space.base;
    j["fibers"] = sf.space.fibers;
    j["order"] = sf.space.order;
    json comps = json::object();
    for (std::size_t i = 0; i < sf.components.size(); ++i)
        comps[sf.space.fibers[i]] = sf.components[i].str();
    j["components"] = std::move(comps);
    return j;
}

} // namespace

const char* certification_name(Certification c) {
    return c == Certification::Symbolic ? "symbolic" : "probabilistic";
}

void print_helmholtz(std::ostream& os, const HelmholtzReport& rep) {
    os << "residual test (order " << rep.order << ", " << rep.normalization
       << " normalization)\n";
    for (const auto& fam : rep.families) {
        os << "  family: " << fam.label << "\n";
        for (const auto& e : fam.entries) {
            os << "    [nu=" << e.nu << " sigma=" << e.sigma;
            if (e.kappa >= 0) os << " kappa=" << e.kappa;
            os << "] " << (e.z.zero ? "zero" : "NONZERO") << "  " << e.expr.str() << "\n";
        }
    }
    os << "verdict: " << (rep.pass ? "pass" : "fail") << " ("
       << certification_name(rep.cert) << ")\n";
    os << "effective order: " << rep.effective_order << "\n";
    if (rep.first_failure) {
        const auto& w = *rep.first_failure;
        os << "first failure: " << w.family << " nu=" << w.nu << " sigma=" << w.sigma
           << " value=" << w.value << " at";
        for (const auto& [sym, val] : w.point) os << " " << sym.str() << "=" << val;
        os << "\n";
    }
    os << "oracle: " << kPrngName << " seed=" << rep.oracle.seed
       << " samples=" << rep.oracle.samples << " tol=" << rep.oracle.tol << "\n";
}

void print_source_form(std::ostream& os, const SourceForm& sf, const std::string& heading) {
    os << heading << "\n";
    for (std::size_t i = 0; i < sf.components.size(); ++i)
        os << "  " << sf.space.fibers[i] << ": " << sf.components[i].str() << "\n";
}

void print_global(std::ostream& os, const GlobalVerdict& v) {
    os << "global status: " << global_status_name(v.status) << "\n  " << v.explanation << "\n";
}

std::string helmholtz_json(const HelmholtzReport& rep) { return report_json(rep).dump(2); }

std::string source_form_json(const SourceForm& sf) { return sf_json(sf).dump(2); }

std::string check_json(const HelmholtzReport& original, const SubmanifoldVerdict& v,
                       const GlobalVerdict* global) {
    json j;
    j["original"] = report_json(original);
    j["induced"] = sf_json(v.induced);
    j["induced_helmholtz"] = report_json(v.direct);
    j["pullback_helmholtz"] = report_json(v.pullback);
    j["routes_agree"] = true; // a disagreement aborts before reaching here
    j["variational_submanifold"] = v.variational;
    j["certification"] = certification_name(v.cert);
    if (global) {
        j["global_status"] = global_status_name(global->status);
        j["global_explanation"] = global->explanation;
    }
    return j.dump(2);
}

std::string catalog_json() {
    json j;
    j["embeddings"] = json::array();
    for (const auto& e : embedding_catalog())
        j["embeddings"].push_back({{"name", e.name},
                                   {"usage", e.usage},
                                   {"target_dim", e.target_dim},
                                   {"description", e.description}});
    j["topologies"] = json::array();
    for (const char* name : {"R^n", "S1", "S2", "mobius", "T2"}) {
        TopologyInfo info = lookup_topology(name);
        j["topologies"].push_back(
            {{"name", name}, {"betti1", *info.betti1}, {"betti2", *info.betti2}});
    }
    return j.dump(2);
}

} // namespace varsub

#pragma once

#include <iosfwd>
#include <string>

#include "varsub/embedding.hpp"
#include "varsub/topology.hpp"

namespace varsub {

// Human-readable report printers. Each takes the stream so the command line
// can direct them; JSON counterparts live in the same translation unit and
// return serialized objects matching the schema below:
//   {order, normalization, families: [{label, l, entries: [{nu, sigma,
//    kappa?, expr, status, witness?}]}], verdict, certification,
//    effective_order, oracle: {prng, seed, samples, tol}}
void print_helmholtz(std::ostream& os, const HelmholtzReport& rep);
void print_source_form(std::ostream& os, const SourceForm& sf, const std::string& heading);
void print_global(std::ostream& os, const GlobalVerdict& v);

std::string helmholtz_json(const HelmholtzReport& rep);

// Composite object for the full pipeline: {original, induced: {components,
// space}, induced_helmholtz, pullback_helmholtz, routes_agree, global_status,
// certification}.
std::string check_json(const HelmholtzReport& original, const SubmanifoldVerdict& v,
                       const GlobalVerdict* global);

std::string source_form_json(const SourceForm& sf);
std::string catalog_json();

const char* certification_name(Certification c);

} // namespace varsub

#pragma once

#include <string>

#include <json.hpp>

#include "conespec/cone.hpp"
#include "conespec/continuity.hpp"
#include "conespec/eigenpair.hpp"
#include "conespec/maps.hpp"
#include "conespec/parts.hpp"
#include "conespec/point.hpp"
#include "conespec/spectral.hpp"

namespace conespec {

using ojson = nlohmann::ordered_json;

// Points and cones: {"kind": ..., "dim": n, "data"/"facets": ...}
ojson point_to_json(const Point& p);
Point point_from_json(const ojson& j);

ojson cone_to_json(const ConeDescriptor& c);
ConeDescriptor cone_from_json(const ojson& j);

// Maps carry a "variant" tag.
ojson map_to_json(const MapDescriptor& m);
MapDescriptor map_from_json(const ojson& j);

ojson lattice_to_json(const PartsLattice& l);

ojson eigenpair_to_json(const EigenPair& p);
ojson radius_to_json(const RadiusEstimate& r);
ojson scan_to_json(const SpectrumScan& s);
ojson property_report_to_json(const PropertyReport& r);
ojson map_distance_to_json(const MapDistance& d);
ojson perturbation_to_json(const PerturbationReport& r);
ojson section3_to_json(const Section3Report& r);

/// Deterministic serializer: insertion-ordered keys, floats printed with 17
/// significant digits, infinities as the string "infinity". Identical
/// structures always produce identical bytes.
std::string dump_deterministic(const ojson& j, int indent = 2);

/// Fixed-order CSV rows (k, dist_lo, dist_hi, dist_sampled, r_k, r_k_lower,
/// r_k_upper) for a perturbation report.
std::string perturbation_to_csv(const PerturbationReport& r);

std::string format_double(double v);

}  // namespace conespec

#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "harmax/covering.hpp"
#include "harmax/differentiation.hpp"
#include "harmax/maximal.hpp"
#include "harmax/poisson.hpp"
#include "harmax/space.hpp"

// Descriptor parsing for the file formats the CLI accepts, and the tabular
// serializers for result objects. All parse errors surface as
// validation_error with the offending field named.

namespace harmax::io {

MetricMeasureSpace space_from_json(const nlohmann::json& j);
MeasurableSet set_from_json(const MetricMeasureSpace& space,
                            const nlohmann::json& j);
SampledFunction function_from_json(const MetricMeasureSpace& space,
                                   const nlohmann::json& j);
std::vector<Ball> family_from_json(const MetricMeasureSpace& space,
                                   const nlohmann::json& j);
KernelDomain domain_from_json(const nlohmann::json& j);
BoundaryGrid grid_from_json(const KernelDomain& domain,
                            const nlohmann::json& j);
BoundaryFn boundary_function_from_json(const nlohmann::json& j);

void write_cover_csv(std::ostream& os, const MetricMeasureSpace& space,
                     std::span<const Ball> family, const CoverSelection& sel);
void write_refined_csv(std::ostream& os, const RefinedCover& cover);
void write_distribution_csv(std::ostream& os, const WeakTypeReport& rep);
void write_weaktype_csv(std::ostream& os, const RestrictedWeakTypeResult& res);
void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep);
void write_chain_csv(std::ostream& os, const ChainTrace& trace);
void write_nontangential_csv(std::ostream& os, const NontangentialReport& rep);

} // namespace harmax::io

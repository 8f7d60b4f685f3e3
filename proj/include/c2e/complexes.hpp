#pragma once

// Point-wise construction of the conformal compatibility complexes from a
// chart.

#include <memory>

#include "c2e/conformal.hpp"
#include "c2e/harness.hpp"

namespace c2e {

/// Operator closures sharing one ConformalGeometry.
OperatorZoo conformal_zoo(std::shared_ptr<const ConformalGeometry> geo, int section_order);

/// Geometry at `point`, classified. `metric_order` bounds every derivative
/// the construction takes.
std::shared_ptr<const ConformalGeometry> conformal_geometry_at(const MetricChart& chart,
                                                               const std::vector<double>& point, int metric_order,
                                                               InversionRoute route = InversionRoute::Auto);

/// One-solution complex and its equivalence to the twisted de Rham complex.
/// Throws PreconditionError unless the point is generic and the obstruction
/// vanishes there.
EquivalenceData build_onesol_complex(const MetricChart& chart, const std::vector<double>& point, int metric_order,
                                     int section_order);

/// Length-3 complex E0 -> id - E0H0 -> H0 with its equivalence to the zero
/// complex. In dimension 4 and up H0 comes from (dZ, Φ); in dimension 3 from
/// the Cotton tensor. Throws PreconditionError when that data vanishes.
EquivalenceData build_nosol_complex(const MetricChart& chart, const std::vector<double>& point, int metric_order,
                                    int section_order);

}  // namespace c2e

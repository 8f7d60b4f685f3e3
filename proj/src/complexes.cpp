#include "c2e/complexes.hpp"

#include <cmath>

namespace c2e {

OperatorZoo conformal_zoo(std::shared_ptr<const ConformalGeometry> geo, int section_order) {
  OperatorZoo z;
  z.flavor = Flavor::Conformal;
  z.dim = geo->pack.dim;
  z.V1 = sym_tf_shape(1.0);
  z.sections = {z.dim, section_order, geo->pack.metric};
  z.E0 = [geo](const RealTensor& s) { return E0(s, geo->pack); };
  z.C1 = [geo](const RealTensor& t) { return C1(t, *geo); };
  z.D1 = [geo](const RealTensor& t) { return D1(t, *geo); };
  z.H1prime = [geo](const RealTensor& t) { return H1prime(t, *geo); };
  z.d_tilde = [geo](const RealTensor& t) { return d_tilde(t, *geo); };
  return z;
}

std::shared_ptr<const ConformalGeometry> conformal_geometry_at(const MetricChart& chart,
                                                               const std::vector<double>& point, int metric_order,
                                                               InversionRoute route) {
  return std::make_shared<const ConformalGeometry>(
      conformal_geometry(curvature_pack(chart, point, metric_order), route));
}

EquivalenceData build_onesol_complex(const MetricChart& chart, const std::vector<double>& point, int metric_order,
                                     int section_order) {
  auto geo = conformal_geometry_at(chart, point, metric_order);
  if (!geo->obstruction) throw PreconditionError(chart.name + ": Weyl tensor not generic at the sample point");
  if (geo->obstruction->classification != Classification::OneSolutionCandidate)
    throw PreconditionError(chart.name + ": obstruction does not vanish, no one-solution complex");
  return build_onesol_complex(conformal_zoo(geo, section_order));
}

EquivalenceData build_nosol_complex(const MetricChart& chart, const std::vector<double>& point, int metric_order,
                                    int section_order) {
  if (chart.dim == 3) {
    auto pack = std::make_shared<const CurvaturePack>(curvature_pack(chart, point, metric_order));
    auto inv = std::make_shared<const CottonInverse>(cotton_inverse(*pack));
    OperatorZoo z;
    z.dim = 3;
    z.V1 = sym_tf_shape(1.0);
    z.sections = {3, section_order, pack->metric};
    z.E0 = [pack](const RealTensor& s) { return E0(s, *pack); };
    return build_nosol_complex(
        z, [pack, inv](const RealTensor& t) { return H0_cotton(t, *pack, *inv); }, 1);
  }
  auto geo = conformal_geometry_at(chart, point, metric_order);
  if (!geo->obstruction) throw PreconditionError(chart.name + ": Weyl tensor not generic at the sample point");
  if (geo->obstruction->classification != Classification::NoSolution)
    throw PreconditionError(chart.name + ": obstruction vanishes, no left inverse of E0");
  auto data = std::make_shared<const NoSolutionData>(no_solution_data(*geo));
  return build_nosol_complex(
      conformal_zoo(geo, section_order),
      [geo, data](const RealTensor& t) { return H0_nosol(t, *geo, *data); }, 3);
}

}  // namespace c2e

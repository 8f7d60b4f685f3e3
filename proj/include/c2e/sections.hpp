#pragma once

// Bundle shapes, sections (direct sums of tensors) and seeded random sections.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "c2e/geometry.hpp"

namespace c2e {

enum class Symmetry { None, Scalar, Form, SymTraceFree, Sym, Hook };

/// Fibre type of a tensor bundle: valence, symmetry class and weight. Hook
/// shapes E_{[a1..ak]} ⊠ E_b carry k; forms carry their degree.
struct ShapeSpec {
  Valence valence;
  Symmetry symmetry = Symmetry::None;
  int k = 0;
  double weight = 0.0;
  Flavor flavor = Flavor::Conformal;

  std::string label() const;
  bool operator==(const ShapeSpec& o) const;
};

ShapeSpec density_shape(double weight, Flavor f = Flavor::Conformal);
ShapeSpec form_shape(int k, double weight, Flavor f = Flavor::Conformal);
ShapeSpec sym_tf_shape(double weight);
ShapeSpec sym_shape(double weight, Flavor f = Flavor::Projective);
ShapeSpec hook_shape(int k, double weight, Flavor f = Flavor::Conformal);

using BundleShape = std::vector<ShapeSpec>;
using Section = std::vector<RealTensor>;

std::string label(const BundleShape& b);

/// Projects a tensor onto the symmetry subspace of `shape`. The metric is
/// needed for trace removal (conformal flavor).
RealTensor project_to_shape(const RealTensor& t, const ShapeSpec& shape, const MetricPair<double>* metric);

/// Distance of t from its projection onto `shape`, relative to |t|; also
/// throws StructuralError if valence or weight disagree.
double shape_defect(const RealTensor& t, const ShapeSpec& shape, const MetricPair<double>* metric);

/// Generator for one (seed, point, trial, tag) stream.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t point, std::uint64_t trial, std::uint64_t tag);

/// Polynomial jet with i.i.d. uniform [-1, 1] coefficients in every
/// component, projected onto the shape.
RealTensor random_tensor(const ShapeSpec& shape, int dim, int order, const MetricPair<double>* metric,
                         std::mt19937_64& rng);
Section random_section(const BundleShape& shape, int dim, int order, const MetricPair<double>* metric,
                       std::mt19937_64& rng);

/// Seeded uniform sample point in the chart's box.
std::vector<double> sample_point(const MetricChart& chart, std::uint64_t seed, std::uint64_t index);

// ---- section arithmetic ----
Section operator+(const Section& a, const Section& b);
Section operator-(const Section& a, const Section& b);
Section operator*(const Section& a, double s);
double max_abs(const Section& s);
double max_abs_diff(const Section& a, const Section& b);
int min_order(const Section& s);

}  // namespace c2e

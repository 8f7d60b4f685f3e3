#include "c2e/sections.hpp"

namespace c2e {

std::string ShapeSpec::label() const {
  const std::string w = "[" + std::to_string(static_cast<int>(weight)) + "]";
  const std::string p = flavor == Flavor::Projective ? "proj:" : "";
  switch (symmetry) {
    case Symmetry::Scalar: return p + "E" + w;
    case Symmetry::Form: return p + "E_[" + std::to_string(k) + "-form]" + w;
    case Symmetry::SymTraceFree: return p + "E_(ab)0" + w;
    case Symmetry::Sym: return p + "E_(ab)" + w;
    case Symmetry::Hook: return p + "E_[" + std::to_string(k) + "]x1" + w;
    case Symmetry::None: return p + "E_" + to_string(valence) + w;
  }
  return "?";
}

bool ShapeSpec::operator==(const ShapeSpec& o) const {
  return valence == o.valence && symmetry == o.symmetry && k == o.k && weight == o.weight && flavor == o.flavor;
}

ShapeSpec density_shape(double weight, Flavor f) { return {{}, Symmetry::Scalar, 0, weight, f}; }
ShapeSpec form_shape(int k, double weight, Flavor f) {
  if (k == 0) return density_shape(weight, f);
  return {Valence(static_cast<std::size_t>(k), Slot::Down), Symmetry::Form, k, weight, f};
}
ShapeSpec sym_tf_shape(double weight) { return {valence("dd"), Symmetry::SymTraceFree, 1, weight, Flavor::Conformal}; }
ShapeSpec sym_shape(double weight, Flavor f) { return {valence("dd"), Symmetry::Sym, 1, weight, f}; }
ShapeSpec hook_shape(int k, double weight, Flavor f) {
  return {Valence(static_cast<std::size_t>(k + 1), Slot::Down), Symmetry::Hook, k, weight, f};
}

std::string label(const BundleShape& b) {
  if (b.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? " + " : "") + b[i].label();
  return s;
}

RealTensor project_to_shape(const RealTensor& t, const ShapeSpec& shape, const MetricPair<double>* metric) {
  if (t.valence() != shape.valence) throw StructuralError("section valence does not match " + shape.label());
  switch (shape.symmetry) {
    case Symmetry::None:
    case Symmetry::Scalar: return t;
    case Symmetry::Form: return antisymmetrize(t, slot_range(0, shape.k));
    case Symmetry::Sym: return symmetrize(t, {0, 1});
    case Symmetry::SymTraceFree:
      if (metric == nullptr) throw StructuralError("trace-free projection needs a metric");
      return trace_free_part(symmetrize(t, {0, 1}), *metric);
    case Symmetry::Hook: {
      RealTensor a = shape.k >= 2 ? antisymmetrize(t, slot_range(0, shape.k)) : t;
      return cartan_project(a, shape.k, metric, shape.flavor);
    }
  }
  return t;
}

double shape_defect(const RealTensor& t, const ShapeSpec& shape, const MetricPair<double>* metric) {
  if (t.valence() != shape.valence) throw StructuralError("output valence does not match " + shape.label());
  if (std::abs(t.weight() - shape.weight) > 1e-12) throw StructuralError("output weight does not match " + shape.label());
  return max_abs_diff(t, project_to_shape(t, shape, metric)) / (1.0 + t.max_abs());
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t point, std::uint64_t trial, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(point), static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

RealTensor random_tensor(const ShapeSpec& shape, int dim, int order, const MetricPair<double>* metric,
                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealTensor t(dim, shape.valence, shape.weight, jet_layout(dim, order));
  for (std::size_t f = 0; f < t.size(); ++f)
    for (std::size_t i = 0; i < t[f].size(); ++i) t[f][i] = u(rng);
  return project_to_shape(t, shape, metric);
}

Section random_section(const BundleShape& shape, int dim, int order, const MetricPair<double>* metric,
                       std::mt19937_64& rng) {
  Section s;
  for (const auto& sh : shape) s.push_back(random_tensor(sh, dim, order, metric, rng));
  return s;
}

std::vector<double> sample_point(const MetricChart& chart, std::uint64_t seed, std::uint64_t index) {
  std::mt19937_64 rng = make_rng(seed, index, 0, 0x9017);
  std::vector<double> p;
  for (const auto& [lo, hi] : chart.box) {
    std::uniform_real_distribution<double> u(lo, hi);
    p.push_back(u(rng));
  }
  return p;
}

Section operator+(const Section& a, const Section& b) {
  if (a.size() != b.size()) throw StructuralError("section sum shape mismatch");
  Section r;
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] + b[i]);
  return r;
}

Section operator-(const Section& a, const Section& b) {
  if (a.size() != b.size()) throw StructuralError("section difference shape mismatch");
  Section r;
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] - b[i]);
  return r;
}

Section operator*(const Section& a, double s) {
  Section r;
  for (const auto& t : a) r.push_back(t * s);
  return r;
}

double max_abs(const Section& s) {
  double m = 0.0;
  for (const auto& t : s) m = std::max(m, t.max_abs());
  return m;
}

double max_abs_diff(const Section& a, const Section& b) {
  if (a.size() != b.size()) throw StructuralError("section comparison shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, max_abs_diff(a[i], b[i]));
  return m;
}

int min_order(const Section& s) {
  int o = 1 << 20;
  for (const auto& t : s) o = std::min(o, t.order());
  return o;
}

}  // namespace c2e

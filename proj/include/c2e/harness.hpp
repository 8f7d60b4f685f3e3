#pragma once

// Differential operators as composable nodes, complexes, equivalences up to
// homotopy, and the seeded sweep that verifies them.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "c2e/sections.hpp"

namespace c2e {

struct OperatorNode {
  std::string name;
  BundleShape source;
  BundleShape target;
  int order = 0;  // derivatives consumed
  std::function<Section(const Section&)> eval;

  /// Applies the operator, checking the input against `source`.
  Section operator()(const Section& x) const;
};

/// Wraps a single-tensor operator.
OperatorNode tensor_operator(std::string name, ShapeSpec source, ShapeSpec target, int order,
                             std::function<RealTensor(const RealTensor&)> f);

/// a ∘ b; requires a.source == b.target.
OperatorNode compose(const OperatorNode& a, const OperatorNode& b);
OperatorNode identity(const BundleShape& shape);
/// Zero map. dim and order size the output when the source is the zero bundle.
OperatorNode zero(const BundleShape& source, const BundleShape& target, int dim = 0, int order = 0);
OperatorNode operator+(const OperatorNode& a, const OperatorNode& b);
OperatorNode operator-(const OperatorNode& a, const OperatorNode& b);
OperatorNode operator-(const OperatorNode& a);

/// Block operator between direct sums. entries[i][j] maps source[j] to
/// target[i]; an empty entry is zero.
OperatorNode block(std::string name, const BundleShape& source, const BundleShape& target,
                   const std::vector<std::vector<std::optional<OperatorNode>>>& entries);

/// Embeds a single-summand operator as a block column/row.
BundleShape concat(const BundleShape& a, const BundleShape& b);

/// Sampling data for sections at one point.
struct SectionContext {
  int dim = 0;
  int order = 0;
  std::optional<MetricPair<double>> metric;
};

struct ComplexSpec {
  std::string name;
  std::vector<OperatorNode> ops;  // ops[l] : bundle l -> bundle l+1
  SectionContext sections;

  std::vector<BundleShape> bundles() const;
  /// Throws StructuralError unless adjacent shapes compose.
  void validate() const;
};

/// Two complexes with cochain maps C : top -> bottom, D : bottom -> top and
/// homotopies H_l : top_{l+1} -> top_l, H'_l : bottom_{l+1} -> bottom_l.
struct EquivalenceData {
  ComplexSpec top;
  ComplexSpec bottom;
  std::vector<OperatorNode> C;
  std::vector<OperatorNode> D;
  std::vector<OperatorNode> H;
  std::vector<OperatorNode> Hp;

  void validate() const;
};

/// One identity evaluated on random inputs. `run` returns a relative residual.
struct IdentityCheck {
  std::string name;
  std::string relation;
  bool applicable = true;
  std::string note;
  std::function<double(std::mt19937_64&)> run;
};

/// |lhs - rhs| / (1 + max(|lhs|, |rhs|, |input|)).
double relative_residual(const Section& lhs, const Section& rhs, double input_scale = 0.0);

/// Complex property K_{l+1} ∘ K_l = 0 for every consecutive pair.
std::vector<IdentityCheck> complex_checks(const ComplexSpec& c);

/// Both complexes, commuting squares and both homotopy identities with edge
/// cases.
std::vector<IdentityCheck> equivalence_checks(const EquivalenceData& e);

/// lhs(x) = rhs(x) on random sections of lhs.source.
IdentityCheck operator_identity(std::string name, std::string relation, const OperatorNode& lhs,
                                const OperatorNode& rhs, const SectionContext& ctx);

/// Completes a first square to the next operator of a compatibility complex:
/// K1 = [id - K0 H0 - D1 C1 ; K1' C1].
OperatorNode lift_compatibility(const OperatorNode& K0, const std::optional<OperatorNode>& H0,
                                const OperatorNode& C1, const OperatorNode& D1, const OperatorNode& K1prime);

// ---- sweeps ----

struct SweepConfig {
  std::size_t points = 10;
  std::size_t trials = 5;
  std::uint64_t seed = 1;
  double tol = 1e-7;
};

enum class Execution { Serial, Parallel };

struct IdentityResult {
  std::string suite;
  std::string name;
  std::string relation;
  double max_residual = 0.0;
  double tol = 0.0;
  bool applicable = true;
  bool pass = true;
  std::size_t worst_point = 0;
  std::string note;
};

struct VerificationReport {
  std::string suite;
  std::vector<IdentityResult> results;
  std::vector<std::vector<double>> points;
  std::uint64_t seed = 0;

  bool all_pass() const;
  double max_residual() const;
  const IdentityResult* find(const std::string& name) const;
};

/// Builds the identity checks at sample point `index`; also returns the point.
using PointSuite = std::function<std::vector<IdentityCheck>(std::size_t index, std::vector<double>& point)>;

/// Runs every check on `trials` random inputs at each of `points` points and
/// keeps the maximum residual per identity. Point and trial streams are
/// seeded independently of the execution order, so both policies give the
/// same report.
VerificationReport run_sweep(const std::string& suite, const PointSuite& build, const SweepConfig& cfg,
                             Execution exec = Execution::Parallel);

/// check_complex / check_equivalence over a point family.
using ComplexFactory = std::function<ComplexSpec(std::size_t index, std::vector<double>& point)>;
using EquivalenceFactory = std::function<EquivalenceData(std::size_t index, std::vector<double>& point)>;
VerificationReport check_complex(const std::string& suite, const ComplexFactory& f, const SweepConfig& cfg,
                                 Execution exec = Execution::Parallel);
VerificationReport check_equivalence(const std::string& suite, const EquivalenceFactory& f, const SweepConfig& cfg,
                                     Execution exec = Execution::Parallel);

// ---- the compatibility complexes ----

/// Per-point operator data shared by the conformal and projective
/// constructions. V1 is E_(ab)0[1] (conformal) or E_(ab)[1] (projective).
struct OperatorZoo {
  Flavor flavor = Flavor::Conformal;
  int dim = 0;
  ShapeSpec V1;
  SectionContext sections;
  std::function<RealTensor(const RealTensor&)> E0, C1, D1, H1prime, d_tilde;
};

/// Top row E0 -> (id - D1C1 ; d̃C1) -> [[C1, -H1'], [0, d̃]] -> (0, d̃) -> d̃ -> ...
/// up to n-forms, with its equivalence to the twisted de Rham complex.
EquivalenceData build_onesol_complex(const OperatorZoo& zoo);

/// E0 -> id - E0 H0 -> H0 with its equivalence to the zero complex.
EquivalenceData build_nosol_complex(const OperatorZoo& zoo, std::function<RealTensor(const RealTensor&)> H0,
                                    int h0_order);

}  // namespace c2e

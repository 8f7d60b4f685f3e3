#pragma once

// Named verification suites: per-point identity checks for the sweep.

#include <cstdint>
#include <string>
#include <vector>

#include "c2e/harness.hpp"

namespace c2e {

/// Identity groups of the conformal identity suite.
enum IdentityGroup : unsigned {
  kCompGroup = 1u,        // E1∘E0 against W·∇σ + Yσ
  kOperatorGroup = 2u,    // C1∘E0, D1∘d̃, d̃∘d̃, C1∘D1 and the one-solution form
  kWeyl4DGroup = 4u,      // W^{abcd}W_{abce} = ¼|W|²δ
  kInvarianceGroup = 8u,  // transformation laws and invariance under rescaling
  kAllGroups = 15u,
};

/// Conformal identity suite on a metric chart. Identities that need a
/// generic Weyl tensor (or, for the one-solution form, a vanishing
/// obstruction) are reported as not applicable where that fails. The
/// invariance group uses three rescalings Υ seeded from `seed`.
PointSuite identity_suite(const std::string& chart, int order, std::uint64_t seed, unsigned groups = kAllGroups);

/// The one-solution complex, its equivalence with the twisted de Rham
/// complex, and the homotopies. PreconditionError at non-generic points.
PointSuite onesol_suite(const std::string& chart, int order, std::uint64_t seed);

/// The length-3 no-solution complex (Cotton route in dimension 3).
PointSuite nosol_suite(const std::string& chart, int order, std::uint64_t seed);

/// Projective one-solution complex (n >= 3) or the surface construction
/// (n = 2), with the genericity rank at every point.
PointSuite proj_suite(const std::string& chart, int order, std::uint64_t seed);

/// E_{k+1}∘E_k for k = 0 .. n-2. Zero on flat space, nonzero in general.
PointSuite bgg_suite(const std::string& chart, int order, std::uint64_t seed);

/// Algebraic Lorentzian checks on random Weyl scalars; the point records
/// the real and imaginary parts of Ψ0..Ψ4.
PointSuite np_suite(std::uint64_t seed);

struct SuiteInfo {
  std::string name;
  std::string default_chart;
  int default_order;
  std::string description;
};

const std::vector<SuiteInfo>& suite_catalog();
/// PreconditionError for unknown names.
const SuiteInfo& suite_info(const std::string& name);

/// Resolves defaults (order 0 means the suite default, empty chart the
/// suite's chart) and runs the sweep.
struct SuiteRequest {
  std::string suite = "identities";
  std::string chart;
  int order = 0;
  SweepConfig sweep;
};

SuiteRequest resolved(SuiteRequest r);
VerificationReport run_suite(const SuiteRequest& r, Execution exec = Execution::Parallel);

}  // namespace c2e

#include "c2e/suites.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "c2e/complexes.hpp"
#include "c2e/lorentz_np.hpp"
#include "c2e/projective.hpp"

namespace c2e {

namespace {

using RunFn = std::function<double(std::mt19937_64&)>;

IdentityCheck check(std::string name, std::string relation, RunFn f) {
  return {std::move(name), std::move(relation), true, "", std::move(f)};
}

IdentityCheck skipped(std::string name, std::string relation, std::string note) {
  return {std::move(name), std::move(relation), false, std::move(note), {}};
}

double rr(const RealTensor& lhs, const RealTensor& rhs, const RealTensor& x) {
  return relative_residual(Section{lhs}, Section{rhs}, x.max_abs());
}

std::uint64_t scale_seed(std::uint64_t seed, int j) { return seed * 1000 + static_cast<std::uint64_t>(j) + 1; }

// W_{abcd}∇^dσ + Y_{cab}σ
RealTensor comp_rhs(const RealTensor& sigma, const CurvaturePack& p) {
  const RealTensor du = raise(partial_derivative(sigma), 0, p.metric.ginv);
  return einsum("abcd,d->abc", p.weyl, du) + outer(permute(p.cotton, {1, 2, 0}), sigma);
}

struct Rescaled {
  RealJet ups;
  std::shared_ptr<const ConformalGeometry> geo;
};

void add_operator_checks(std::vector<IdentityCheck>& out, const std::shared_ptr<const ConformalGeometry>& geo, int m) {
  const CurvaturePack& p = geo->pack;
  const int n = p.dim;
  const MetricPair<double>* met = &p.metric;
  const char* ng = "Weyl tensor not generic at this point";
  struct Row {
    const char* name;
    const char* relation;
  };
  const Row rows[] = {
      {"C1∘E0 = ∇̃", "C1(E0 σ) = ∇̃σ"},
      {"D1∘d̃ = E0 + Φ", "D1(d̃σ) = E0σ + Φ(Z)σ"},
      {"d̃∘d̃ = dZ", "d̃(d̃σ) = (dZ)σ"},
      {"C1∘D1 with obstruction terms", "C1D1τ = τ - H'1 d̃τ - W̄^{rsp}_a[2Φ_pr τ_s + ½(dZ)_rs τ_p]"},
  };
  if (!geo->obstruction) {
    for (const auto& r : rows) out.push_back(skipped(r.name, r.relation, ng));
    out.push_back(skipped("id - C1∘D1 = H'1∘d̃", "τ - C1D1τ = H'1 d̃τ", ng));
    return;
  }
  const ObstructionPack& o = *geo->obstruction;
  out.push_back(check(rows[0].name, rows[0].relation, [geo, n, m, met](std::mt19937_64& rng) {
    const RealTensor s = random_tensor(density_shape(1), n, m, met, rng);
    return rr(C1(E0(s, geo->pack), *geo), nabla_tilde(s, *geo), s);
  }));
  out.push_back(check(rows[1].name, rows[1].relation, [geo, n, m, met](std::mt19937_64& rng) {
    const RealTensor s = random_tensor(density_shape(1), n, m, met, rng);
    return rr(D1(d_tilde(s, *geo), *geo), E0(s, geo->pack) + outer(geo->obstruction->Phi, s), s);
  }));
  out.push_back(check(rows[2].name, rows[2].relation, [geo, n, m, met](std::mt19937_64& rng) {
    const RealTensor s = random_tensor(density_shape(1), n, m, met, rng);
    return rr(d_tilde(d_tilde(s, *geo), *geo), outer(geo->obstruction->dZ, s), s);
  }));
  out.push_back(check(rows[3].name, rows[3].relation, [geo, n, m, met](std::mt19937_64& rng) {
    const RealTensor t = random_tensor(form_shape(1, 1), n, m, met, rng);
    const ObstructionPack& ob = *geo->obstruction;
    const RealTensor x = permute(outer(ob.Phi, t) * 2.0, {1, 2, 0}) + outer(ob.dZ, t) * 0.5;
    const RealTensor extra = wbar_contract(geo->wbar(), x, geo->pack.metric);
    return rr(C1(D1(t, *geo), *geo), t - H1prime(d_tilde(t, *geo), *geo) - extra, t);
  }));
  if (o.classification == Classification::OneSolutionCandidate) {
    out.push_back(check("id - C1∘D1 = H'1∘d̃", "τ - C1D1τ = H'1 d̃τ", [geo, n, m, met](std::mt19937_64& rng) {
      const RealTensor t = random_tensor(form_shape(1, 1), n, m, met, rng);
      return rr(t - C1(D1(t, *geo), *geo), H1prime(d_tilde(t, *geo), *geo), t);
    }));
  } else {
    out.push_back(skipped("id - C1∘D1 = H'1∘d̃", "τ - C1D1τ = H'1 d̃τ", "obstruction does not vanish at this point"));
  }
}

void add_weyl4d_check(std::vector<IdentityCheck>& out, const CurvaturePack& p) {
  const char* rel = "W^{abcd}W_{abce} = ¼|W|²δ^d_e";
  if (p.dim != 4) {
    out.push_back(skipped("4D quadratic Weyl identity", rel, "dimension is not 4"));
    return;
  }
  RealTensor wup = p.weyl;
  for (int s = 0; s < 4; ++s) wup = raise(wup, s, p.metric.ginv);
  const RealTensor lhs = einsum("abcd,abce->de", wup, p.weyl);
  const RealTensor norm = einsum("abcd,abcd->", wup, p.weyl);
  RealTensor rhs = RealTensor::zeros_like(lhs);
  for (int d = 0; d < 4; ++d) rhs.at({d, d}) = norm.value() * 0.25;
  const double r = relative_residual(lhs, rhs);
  out.push_back(check("4D quadratic Weyl identity", rel, [r](std::mt19937_64&) { return r; }));
}

void add_invariance_checks(std::vector<IdentityCheck>& out, const MetricChart& chart,
                           const std::shared_ptr<const ConformalGeometry>& geo, const std::vector<double>& pt, int m,
                           std::uint64_t seed) {
  const int n = chart.dim;
  auto scaled = std::make_shared<std::vector<Rescaled>>();
  for (int j = 0; j < 3; ++j) {
    const ConformalScale s = random_scale(n, scale_seed(seed, j));
    scaled->push_back({scale_jet(s, pt, m),
                       conformal_geometry_at(conformal_rescale(chart, s), pt, m, InversionRoute::Auto)});
  }
  const MetricPair<double>* met = &geo->pack.metric;

  // Each check returns the worst residual over the three rescalings.
  auto over_scales = [scaled](auto f) {
    return [scaled, f](std::mt19937_64& rng) {
      double worst = 0.0;
      for (const Rescaled& r : *scaled) worst = std::max(worst, f(r, rng));
      return worst;
    };
  };

  out.push_back(check("Weyl tensor invariance", "Ŵ_abcd = e^{2Υ}W_abcd",
                      over_scales([geo](const Rescaled& r, std::mt19937_64&) {
                        return relative_residual(r.geo->pack.weyl, transform_density(geo->pack.weyl, r.ups, 2.0));
                      })));
  out.push_back(check("Cotton tensor shift", "Ŷ_bcd = Y_bcd + Υ^a W_abcd",
                      over_scales([geo](const Rescaled& r, std::mt19937_64&) {
                        const CurvaturePack& p = geo->pack;
                        const RealTensor du = raise(scale_gradient(r.ups), 0, p.metric.ginv);
                        return relative_residual(r.geo->pack.cotton, p.cotton + einsum("a,abcd->bcd", du, p.weyl));
                      })));
  out.push_back(check("density connection law", "∇̂σ = ∇σ + wΥσ for w = 1, -2",
                      over_scales([geo, n, m, met](const Rescaled& r, std::mt19937_64& rng) {
                        double worst = 0.0;
                        for (double w : {1.0, -2.0}) {
                          const RealTensor s = random_tensor(density_shape(w), n, m, met, rng);
                          const RealTensor lhs = covariant_derivative(transform_density(s, r.ups, w), r.geo->pack.gamma);
                          RealTensor shift = outer(scale_gradient(r.ups), s) * w;
                          shift.set_weight(w);
                          const RealTensor rhs =
                              transform_density(covariant_derivative(s, geo->pack.gamma) + shift, r.ups, w);
                          worst = std::max(worst, rr(lhs, rhs, s));
                        }
                        return worst;
                      })));
  out.push_back(check("covector connection law", "∇̂τ = ∇τ - Υ_aτ_b - Υ_bτ_a + Υ^rτ_r g_ab",
                      over_scales([geo, n, m, met](const Rescaled& r, std::mt19937_64& rng) {
                        const RealTensor t = random_tensor(form_shape(1, 0), n, m, met, rng);
                        const RealTensor du = scale_gradient(r.ups);
                        const RealTensor ut = outer(du, t);
                        const RealTensor contr = einsum("r,r->", raise(du, 0, met->ginv), t);
                        RealTensor rhs = covariant_derivative(t, geo->pack.gamma) - ut - permute(ut, {1, 0});
                        RealTensor corr = outer(contr, met->g);
                        corr.set_weight(0.0);
                        rhs += corr;
                        return rr(covariant_derivative(t, r.geo->pack.gamma), rhs, t);
                      })));

  auto w1 = [](const RealTensor& t, const Rescaled& r) { return transform_density(t, r.ups, 1.0); };
  out.push_back(check("E0 invariance", "Ê0(e^Υσ) = e^Υ E0σ",
                      over_scales([geo, n, m, met, w1](const Rescaled& r, std::mt19937_64& rng) {
                        const RealTensor s = random_tensor(density_shape(1), n, m, met, rng);
                        return rr(E0(w1(s, r), r.geo->pack), w1(E0(s, geo->pack), r), s);
                      })));

  const char* ops[] = {"Z shift", "∇̃ invariance", "d̃ invariance", "D1 invariance",
                       "C1 invariance", "D̄ invariance", "H'1 invariance"};
  const char* rels[] = {"Ẑ_a = Z_a - Υ_a", "∇̃ commutes with rescaling", "d̃ on 1- and 2-forms commutes with rescaling",
                        "D1 commutes with rescaling", "C1 commutes with rescaling", "D̄ commutes with rescaling",
                        "H'1 commutes with rescaling"};
  bool generic = geo->obstruction.has_value();
  for (const Rescaled& r : *scaled) generic = generic && r.geo->obstruction.has_value();
  if (!generic) {
    for (int i = 0; i < 7; ++i) out.push_back(skipped(ops[i], rels[i], "Weyl tensor not generic at this point"));
    return;
  }
  out.push_back(check(ops[0], rels[0], over_scales([geo](const Rescaled& r, std::mt19937_64&) {
                        return relative_residual(r.geo->Z(), geo->Z() - scale_gradient(r.ups));
                      })));
  out.push_back(check(ops[1], rels[1], over_scales([geo, n, m, met, w1](const Rescaled& r, std::mt19937_64& rng) {
                        const RealTensor s = random_tensor(density_shape(1), n, m, met, rng);
                        return rr(nabla_tilde(w1(s, r), *r.geo), w1(nabla_tilde(s, *geo), r), s);
                      })));
  out.push_back(check(ops[2], rels[2], over_scales([geo, n, m, met, w1](const Rescaled& r, std::mt19937_64& rng) {
                        double worst = 0.0;
                        for (int k : {1, 2}) {
                          const RealTensor t = random_tensor(form_shape(k, 1), n, m, met, rng);
                          worst = std::max(worst, rr(d_tilde(w1(t, r), *r.geo), w1(d_tilde(t, *geo), r), t));
                        }
                        return worst;
                      })));
  out.push_back(check(ops[3], rels[3], over_scales([geo, n, m, met, w1](const Rescaled& r, std::mt19937_64& rng) {
                        const RealTensor t = random_tensor(form_shape(1, 1), n, m, met, rng);
                        return rr(D1(w1(t, r), *r.geo), w1(D1(t, *geo), r), t);
                      })));
  out.push_back(check(ops[4], rels[4], over_scales([geo, n, m, met, w1](const Rescaled& r, std::mt19937_64& rng) {
                        const RealTensor t = random_tensor(sym_tf_shape(1), n, m, met, rng);
                        return rr(C1(w1(t, r), *r.geo), w1(C1(t, *geo), r), t);
                      })));
  out.push_back(check(ops[5], rels[5], over_scales([geo, n, m, met, w1](const Rescaled& r, std::mt19937_64& rng) {
                        const RealTensor t = random_tensor(form_shape(2, 1), n, m, met, rng);
                        return rr(Dbar(w1(t, r), *r.geo), w1(Dbar(t, *geo), r), t);
                      })));
  out.push_back(check(ops[6], rels[6], over_scales([geo, n, m, met, w1](const Rescaled& r, std::mt19937_64& rng) {
                        const RealTensor t = random_tensor(form_shape(2, 1), n, m, met, rng);
                        return rr(H1prime(w1(t, r), *r.geo), w1(H1prime(t, *geo), r), t);
                      })));
}

// ---- NP helpers ----

NPScalars random_psi(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  NPScalars s;
  for (auto& p : s.psi) p = {u(rng), u(rng)};
  return s;
}

double psi_diff(const NPScalars& a, const NPScalars& b) {
  double d = 0.0;
  for (int i = 0; i < 5; ++i) d = std::max(d, std::abs(a.psi[i] - b.psi[i]));
  return d;
}

NullFrame random_frame(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lam(0.5, 2.0), th(0.0, 2.0 * M_PI);
  const double l = lam(rng);
  return boost_spin(canonical_frame(), l, th(rng));
}

// Entries of the Weyl map matrix for Ψ0 = Ψ1 = Ψ2 = 0, columns (v_n, v_m̄, v_m, v_l).
Eigen::Matrix<cplx, 16, 4> printed_weyl_map(cplx p3, cplx p4) {
  Eigen::Matrix<cplx, 16, 4> e = Eigen::Matrix<cplx, 16, 4>::Zero();
  e(7, 0) = std::conj(p3);
  e(9, 0) = p3;
  e(10, 0) = -std::conj(p4);
  e(10, 1) = -std::conj(p3);
  e(11, 2) = -std::conj(p3);
  e(12, 1) = -p3;
  e(13, 0) = -p4;
  e(13, 2) = -p3;
  e(14, 2) = std::conj(p4);
  e(14, 3) = std::conj(p3);
  e(15, 1) = p4;
  e(15, 3) = p3;
  return e;
}

std::vector<double> flatten(const NPScalars& s) {
  std::vector<double> v;
  for (const auto& p : s.psi) {
    v.push_back(p.real());
    v.push_back(p.imag());
  }
  return v;
}

}  // namespace

PointSuite identity_suite(const std::string& chart_name, int m, std::uint64_t seed, unsigned groups) {
  const MetricChart chart = make_chart(chart_name);
  return [chart, m, seed, groups](std::size_t i, std::vector<double>& pt) {
    pt = sample_point(chart, seed, i);
    auto geo = conformal_geometry_at(chart, pt, m);
    const int n = chart.dim;
    const MetricPair<double>* met = &geo->pack.metric;
    std::vector<IdentityCheck> out;
    if (groups & kCompGroup) {
      out.push_back(check("E1∘E0 = W·∇σ + Yσ", "E1(E0σ)_abc = W_abcd ∇^dσ + Y_cab σ",
                          [geo, n, m, met](std::mt19937_64& rng) {
                            const RealTensor s = random_tensor(density_shape(1), n, m, met, rng);
                            return rr(Ek(E0(s, geo->pack), geo->pack), comp_rhs(s, geo->pack), s);
                          }));
    }
    if (groups & kOperatorGroup) add_operator_checks(out, geo, m);
    if (groups & kWeyl4DGroup) add_weyl4d_check(out, geo->pack);
    if (groups & kInvarianceGroup) add_invariance_checks(out, chart, geo, pt, m, seed);
    return out;
  };
}

PointSuite onesol_suite(const std::string& chart_name, int m, std::uint64_t seed) {
  const MetricChart chart = make_chart(chart_name);
  return [chart, m, seed](std::size_t i, std::vector<double>& pt) {
    pt = sample_point(chart, seed, i);
    return equivalence_checks(build_onesol_complex(chart, pt, m, m));
  };
}

PointSuite nosol_suite(const std::string& chart_name, int m, std::uint64_t seed) {
  const MetricChart chart = make_chart(chart_name);
  return [chart, m, seed](std::size_t i, std::vector<double>& pt) {
    pt = sample_point(chart, seed, i);
    return equivalence_checks(build_nosol_complex(chart, pt, m, m));
  };
}

PointSuite proj_suite(const std::string& chart_name, int m, std::uint64_t seed) {
  const ProjectiveChart chart = make_projective_chart(chart_name);
  return [chart, m, seed](std::size_t i, std::vector<double>& pt) {
    pt = sample_point(chart.base, seed, i);
    const int n = chart.dim();
    if (n == 2) return equivalence_checks(build_nosol_proj_complex(chart, pt, m, m));
    const ProjectiveGeometry g = projective_geometry(projective_pack(chart, pt, m));
    const int rank = g.rank;
    std::vector<IdentityCheck> out{check("genericity rank", "rank of τ_c ↦ W_ab^c_d τ_c equals n, residual n - rank",
                                         [rank, n](std::mt19937_64&) { return static_cast<double>(n - rank); })};
    for (auto& c : equivalence_checks(build_onesol_proj_complex(chart, pt, m, m))) out.push_back(std::move(c));
    return out;
  };
}

PointSuite bgg_suite(const std::string& chart_name, int m, std::uint64_t seed) {
  const MetricChart chart = make_chart(chart_name);
  return [chart, m, seed](std::size_t i, std::vector<double>& pt) {
    pt = sample_point(chart, seed, i);
    auto pack = std::make_shared<const CurvaturePack>(curvature_pack(chart, pt, m));
    const int n = chart.dim;
    std::vector<IdentityCheck> out;
    for (int k = 0; k + 2 <= n; ++k) {
      const ShapeSpec src = k == 0 ? density_shape(1) : k == 1 ? sym_tf_shape(1) : hook_shape(k, 1);
      const std::string nm = "E" + std::to_string(k + 1) + "∘E" + std::to_string(k);
      out.push_back(check(nm, nm + " = 0", [pack, src, k, n, m](std::mt19937_64& rng) {
        const RealTensor x = random_tensor(src, n, m, &pack->metric, rng);
        const RealTensor y = k == 0 ? E0(x, *pack) : Ek(x, *pack);
        const RealTensor z = Ek(y, *pack);
        return rr(z, RealTensor::zeros_like(z), x);
      }));
    }
    return out;
  };
}

PointSuite np_suite(std::uint64_t seed) {
  return [seed](std::size_t i, std::vector<double>& pt) {
    std::mt19937_64 prng = make_rng(seed, i, 0, 0x4e50);
    const NPScalars psi = random_psi(prng);
    const NullFrame f = random_frame(prng);
    pt = flatten(psi);
    std::vector<IdentityCheck> out;
    out.push_back(check("NP round-trip", "np_scalars(reconstruct_weyl(Ψ)) = Ψ, absolute",
                        [psi, f](std::mt19937_64&) { return psi_diff(np_scalars(reconstruct_weyl(psi, f), f), psi); }));
    out.push_back(check("quadratic invariant", "W_abcd W^abcd = 16 Re(Ψ0Ψ4 - 4Ψ1Ψ3 + 3Ψ2²), absolute",
                        [psi, f](std::mt19937_64&) {
                          return std::abs(quadratic_invariant(reconstruct_weyl(psi, f), f.ginv) - np_quadratic(psi));
                        }));
    out.push_back(check("pure Ψ2 norm", "|W|² = 48 for Ψ2 = 1, absolute", [f](std::mt19937_64&) {
      NPScalars s;
      s.psi[2] = 1.0;
      return std::abs(quadratic_invariant(reconstruct_weyl(s, f), f.ginv) - 48.0);
    }));
    const cplx p3 = psi.psi[3], p4 = psi.psi[4];
    out.push_back(check("Weyl map block pattern", "matrix of v ↦ W_pqrs v^s for Ψ3, Ψ4 only, absolute",
                        [p3, p4, f](std::mt19937_64&) {
                          double worst = 0.0;
                          for (auto [a, b] : {std::pair{p3, cplx{}}, std::pair{cplx{}, p4}, std::pair{p3, p4}}) {
                            NPScalars s;
                            s.psi[3] = a;
                            s.psi[4] = b;
                            const WeylMap wm = weyl_map_matrix(reconstruct_weyl(s, f), f);
                            worst = std::max(worst, (wm.matrix - printed_weyl_map(a, b)).cwiseAbs().maxCoeff());
                          }
                          return worst;
                        }));
    out.push_back(check("Type III rank", "genericity rank is 4 when Ψ3 ≠ 0, residual 4 - rank",
                        [p3, p4, f](std::mt19937_64&) {
                          NPScalars s;
                          s.psi[3] = p3;
                          s.psi[4] = p4;
                          return 4.0 - genericity_rank(reconstruct_weyl(s, f), f);
                        }));
    out.push_back(check("Type N rank", "genericity rank is below 4 when only Ψ4 ≠ 0, residual 1 if rank is 4",
                        [p4, f](std::mt19937_64&) {
                          NPScalars s;
                          s.psi[4] = p4;
                          return genericity_rank(reconstruct_weyl(s, f), f) < 4 ? 0.0 : 1.0;
                        }));
    out.push_back(check("cubic identity", "V³_a^b = ¼V³_r^r δ_a^b when |W|² = 0, relative to 1 + |V³_r^r|",
                        [psi, f](std::mt19937_64&) {
                          NPScalars s = psi;
                          s.psi[0] = s.psi[1] = 0.0;
                          s.psi[2] = std::polar(0.5 + std::abs(psi.psi[2]), M_PI / 4);
                          const CubicInvariants c = cubic_invariants(reconstruct_weyl(s, f), f.ginv);
                          double d = 0.0;
                          for (int a = 0; a < 4; ++a)
                            for (int b = 0; b < 4; ++b)
                              d = std::max(d, std::abs(c.V3.at({a, b}) - (a == b ? 0.25 * c.trace : cplx{})));
                          return d / (1.0 + std::abs(c.trace));
                        }));
    return out;
  };
}

const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> c{
      {"identities", "s2xs2", 6, "operator identities, the 4D Weyl identity and conformal invariance"},
      {"onesol", "s2xs2", 6, "one-solution compatibility complex and its equivalence with twisted de Rham"},
      {"nosol", "perturbed:1", 8, "length-3 complex when E0 has a left inverse"},
      {"proj", "schwarzschild", 6, "projective one-solution complex (surface construction for n = 2)"},
      {"bgg-flat", "flat", 5, "E_{k+1}∘E_k, zero on flat space"},
      {"np", "", 0, "Newman-Penrose algebra on random Weyl scalars"},
  };
  return c;
}

const SuiteInfo& suite_info(const std::string& name) {
  for (const auto& s : suite_catalog())
    if (s.name == name) return s;
  throw PreconditionError("unknown suite '" + name + "'");
}

SuiteRequest resolved(SuiteRequest r) {
  const SuiteInfo& info = suite_info(r.suite);
  if (r.chart.empty()) r.chart = info.default_chart;
  if (r.order <= 0) r.order = info.default_order;
  return r;
}

VerificationReport run_suite(const SuiteRequest& req, Execution exec) {
  const SuiteRequest r = resolved(req);
  const std::uint64_t seed = r.sweep.seed;
  PointSuite s;
  if (r.suite == "identities") s = identity_suite(r.chart, r.order, seed);
  else if (r.suite == "onesol") s = onesol_suite(r.chart, r.order, seed);
  else if (r.suite == "nosol") s = nosol_suite(r.chart, r.order, seed);
  else if (r.suite == "proj") s = proj_suite(r.chart, r.order, seed);
  else if (r.suite == "bgg-flat") s = bgg_suite(r.chart, r.order, seed);
  else s = np_suite(seed);
  return run_sweep(r.suite, s, r.sweep, exec);
}

}  // namespace c2e

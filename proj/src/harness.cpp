#include "c2e/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace c2e {

namespace {

void check_section(const Section& x, const BundleShape& shape, const std::string& who, const char* side) {
  if (x.size() != shape.size())
    throw StructuralError(who + ": " + side + " has " + std::to_string(x.size()) + " summands, expected " +
                          label(shape));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].valence() != shape[i].valence || std::abs(x[i].weight() - shape[i].weight) > 1e-12)
      throw StructuralError(who + ": " + side + " summand " + std::to_string(i) + " is not " + shape[i].label());
  }
}

Section zero_section(const BundleShape& shape, int dim, int order) {
  Section s;
  for (const auto& sh : shape) s.push_back(RealTensor(dim, sh.valence, sh.weight, jet_layout(dim, order)));
  return s;
}

std::uint64_t name_tag(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

int section_dim(const Section& x) { return x.empty() ? 0 : x.front().jet_dim(); }

Section concat_sections(Section a, const Section& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

Section OperatorNode::operator()(const Section& x) const {
  check_section(x, source, name, "input");
  Section y = eval(x);
  check_section(y, target, name, "output");
  return y;
}

OperatorNode tensor_operator(std::string name, ShapeSpec source, ShapeSpec target, int order,
                             std::function<RealTensor(const RealTensor&)> f) {
  OperatorNode n{std::move(name), {source}, {target}, order, {}};
  n.eval = [f = std::move(f)](const Section& x) { return Section{f(x[0])}; };
  return n;
}

OperatorNode compose(const OperatorNode& a, const OperatorNode& b) {
  if (!(a.source == b.target))
    throw StructuralError("cannot compose " + a.name + " after " + b.name + ": " + label(b.target) + " vs " +
                          label(a.source));
  OperatorNode n{a.name + "∘" + b.name, b.source, a.target, a.order + b.order, {}};
  n.eval = [a, b](const Section& x) { return a(b(x)); };
  return n;
}

OperatorNode identity(const BundleShape& shape) {
  return OperatorNode{"id", shape, shape, 0, [](const Section& x) { return x; }};
}

OperatorNode zero(const BundleShape& source, const BundleShape& target, int dim, int order) {
  OperatorNode n{"0", source, target, 0, {}};
  n.eval = [target, dim, order](const Section& x) {
    if (x.empty()) return zero_section(target, dim, order);
    return zero_section(target, section_dim(x), std::max(0, min_order(x)));
  };
  return n;
}

namespace {
OperatorNode combine(const OperatorNode& a, const OperatorNode& b, double sign, const char* op) {
  if (!(a.source == b.source) || !(a.target == b.target))
    throw StructuralError("cannot add " + a.name + " and " + b.name + ": shapes differ");
  OperatorNode n{"(" + a.name + op + b.name + ")", a.source, a.target, std::max(a.order, b.order), {}};
  n.eval = [a, b, sign](const Section& x) {
    Section ya = a(x), yb = b(x);
    return sign > 0 ? ya + yb : ya - yb;
  };
  return n;
}
}  // namespace

OperatorNode operator+(const OperatorNode& a, const OperatorNode& b) { return combine(a, b, 1.0, " + "); }
OperatorNode operator-(const OperatorNode& a, const OperatorNode& b) { return combine(a, b, -1.0, " - "); }
OperatorNode operator-(const OperatorNode& a) {
  OperatorNode n{"-" + a.name, a.source, a.target, a.order, {}};
  n.eval = [a](const Section& x) { return a(x) * -1.0; };
  return n;
}

OperatorNode block(std::string name, const BundleShape& source, const BundleShape& target,
                   const std::vector<std::vector<std::optional<OperatorNode>>>& entries) {
  if (entries.size() != target.size()) throw StructuralError(name + ": block rows do not match target");
  int order = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].size() != source.size()) throw StructuralError(name + ": block columns do not match source");
    for (std::size_t j = 0; j < source.size(); ++j) {
      const auto& e = entries[i][j];
      if (!e) continue;
      if (!(e->source == BundleShape{source[j]}) || !(e->target == BundleShape{target[i]}))
        throw StructuralError(name + ": block entry (" + std::to_string(i) + "," + std::to_string(j) + ") " +
                              e->name + " has the wrong shape");
      order = std::max(order, e->order);
    }
  }
  OperatorNode n{std::move(name), source, target, order, {}};
  n.eval = [entries, source, target](const Section& x) {
    const int dim = section_dim(x);
    Section y;
    for (std::size_t i = 0; i < target.size(); ++i) {
      std::optional<RealTensor> acc;
      for (std::size_t j = 0; j < source.size(); ++j) {
        if (!entries[i][j]) continue;
        RealTensor v = (*entries[i][j])(Section{x[j]})[0];
        if (acc) {
          const int o = std::min(acc->order(), v.order());
          acc = acc->truncated(o) + v.truncated(o);
        } else {
          acc = std::move(v);
        }
      }
      if (!acc) acc = zero_section({target[i]}, dim, std::max(0, min_order(x)))[0];
      y.push_back(std::move(*acc));
    }
    return y;
  };
  return n;
}

BundleShape concat(const BundleShape& a, const BundleShape& b) {
  BundleShape r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

std::vector<BundleShape> ComplexSpec::bundles() const {
  std::vector<BundleShape> b;
  if (ops.empty()) return b;
  b.push_back(ops.front().source);
  for (const auto& k : ops) b.push_back(k.target);
  return b;
}

void ComplexSpec::validate() const {
  for (std::size_t l = 0; l + 1 < ops.size(); ++l)
    if (!(ops[l].target == ops[l + 1].source))
      throw StructuralError(name + ": " + ops[l].name + " and " + ops[l + 1].name + " do not compose");
}

void EquivalenceData::validate() const {
  top.validate();
  bottom.validate();
  const auto T = top.bundles(), B = bottom.bundles();
  if (T.size() != B.size()) throw StructuralError("equivalence rows have different lengths");
  const std::size_t N = T.size();
  if (C.size() != N || D.size() != N) throw StructuralError("equivalence needs one C and one D per bundle");
  if (H.size() + 1 != N || Hp.size() + 1 != N) throw StructuralError("equivalence needs one homotopy per arrow");
  for (std::size_t l = 0; l < N; ++l) {
    if (!(C[l].source == T[l]) || !(C[l].target == B[l])) throw StructuralError("C" + std::to_string(l) + " shape");
    if (!(D[l].source == B[l]) || !(D[l].target == T[l])) throw StructuralError("D" + std::to_string(l) + " shape");
  }
  for (std::size_t l = 0; l + 1 < N; ++l) {
    if (!(H[l].source == T[l + 1]) || !(H[l].target == T[l])) throw StructuralError("H" + std::to_string(l) + " shape");
    if (!(Hp[l].source == B[l + 1]) || !(Hp[l].target == B[l]))
      throw StructuralError("H'" + std::to_string(l) + " shape");
  }
}

double relative_residual(const Section& lhs, const Section& rhs, double input_scale) {
  if (lhs.size() != rhs.size()) throw StructuralError("residual of sections with different shapes");
  double diff = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const int o = std::min(lhs[i].order(), rhs[i].order());
    if (o < 0) throw BudgetError("derivative budget exhausted");
    diff = std::max(diff, max_abs_diff(lhs[i].truncated(o), rhs[i].truncated(o)));
  }
  return diff / (1.0 + std::max({max_abs(lhs), max_abs(rhs), input_scale}));
}

IdentityCheck operator_identity(std::string name, std::string relation, const OperatorNode& lhs,
                                const OperatorNode& rhs, const SectionContext& ctx) {
  if (!(lhs.source == rhs.source) || !(lhs.target == rhs.target))
    throw StructuralError(name + ": the two sides have different shapes");
  IdentityCheck c{std::move(name), std::move(relation), true, "", {}};
  c.run = [lhs, rhs, ctx](std::mt19937_64& rng) {
    const MetricPair<double>* m = ctx.metric ? &*ctx.metric : nullptr;
    Section x = random_section(lhs.source, ctx.dim, ctx.order, m, rng);
    return relative_residual(lhs(x), rhs(x), max_abs(x));
  };
  return c;
}

std::vector<IdentityCheck> complex_checks(const ComplexSpec& c) {
  c.validate();
  std::vector<IdentityCheck> out;
  for (std::size_t l = 0; l + 1 < c.ops.size(); ++l) {
    const OperatorNode kk = compose(c.ops[l + 1], c.ops[l]);
    const std::string nm = c.name + " K" + std::to_string(l + 1) + "∘K" + std::to_string(l);
    out.push_back(operator_identity(nm, c.ops[l + 1].name + " ∘ " + c.ops[l].name + " = 0", kk,
                                    zero(kk.source, kk.target), c.sections));
  }
  return out;
}

std::vector<IdentityCheck> equivalence_checks(const EquivalenceData& e) {
  e.validate();
  std::vector<IdentityCheck> out = complex_checks(e.top);
  for (auto& c : complex_checks(e.bottom)) out.push_back(std::move(c));
  const auto T = e.top.bundles(), B = e.bottom.bundles();
  const std::size_t N = T.size();
  const SectionContext& ts = e.top.sections;
  const SectionContext& bs = e.bottom.sections;
  for (std::size_t l = 0; l + 1 < N; ++l) {
    const std::string s = std::to_string(l), s1 = std::to_string(l + 1);
    out.push_back(operator_identity("square C" + s, "K'" + s + "∘C" + s + " = C" + s1 + "∘K" + s,
                                    compose(e.bottom.ops[l], e.C[l]), compose(e.C[l + 1], e.top.ops[l]), ts));
    out.push_back(operator_identity("square D" + s, "K" + s + "∘D" + s + " = D" + s1 + "∘K'" + s,
                                    compose(e.top.ops[l], e.D[l]), compose(e.D[l + 1], e.bottom.ops[l]), bs));
  }
  for (std::size_t l = 0; l < N; ++l) {
    const std::string s = std::to_string(l);
    // D_l C_l = id - K_{l-1} H_{l-1} - H_l K_l
    OperatorNode rhs = identity(T[l]);
    std::string rel = "D" + s + "∘C" + s + " = id";
    if (l > 0) {
      rhs = rhs - compose(e.top.ops[l - 1], e.H[l - 1]);
      rel += " - K" + std::to_string(l - 1) + "∘H" + std::to_string(l - 1);
    }
    if (l + 1 < N) {
      rhs = rhs - compose(e.H[l], e.top.ops[l]);
      rel += " - H" + s + "∘K" + s;
    }
    out.push_back(operator_identity("homotopy DC" + s, rel, compose(e.D[l], e.C[l]), rhs, ts));

    OperatorNode rhsp = identity(B[l]);
    std::string relp = "C" + s + "∘D" + s + " = id";
    if (l > 0) {
      rhsp = rhsp - compose(e.bottom.ops[l - 1], e.Hp[l - 1]);
      relp += " - K'" + std::to_string(l - 1) + "∘H'" + std::to_string(l - 1);
    }
    if (l + 1 < N) {
      rhsp = rhsp - compose(e.Hp[l], e.bottom.ops[l]);
      relp += " - H'" + s + "∘K'" + s;
    }
    out.push_back(operator_identity("homotopy CD" + s, relp, compose(e.C[l], e.D[l]), rhsp, bs));
  }
  return out;
}

OperatorNode lift_compatibility(const OperatorNode& K0, const std::optional<OperatorNode>& H0,
                                const OperatorNode& C1, const OperatorNode& D1, const OperatorNode& K1prime) {
  const BundleShape src = K0.target;
  OperatorNode first = identity(src) - compose(D1, C1);
  if (H0) first = first - compose(K0, *H0);
  const OperatorNode second = compose(K1prime, C1);
  OperatorNode n{"(" + first.name + " ; " + second.name + ")", src, concat(first.target, second.target),
                 std::max(first.order, second.order), {}};
  n.eval = [first, second](const Section& x) { return concat_sections(first(x), second(x)); };
  return n;
}

// ---- sweeps ----

bool VerificationReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const IdentityResult& r) { return r.pass; });
}

double VerificationReport::max_residual() const {
  double m = 0.0;
  for (const auto& r : results)
    if (r.applicable) m = std::max(m, r.max_residual);
  return m;
}

const IdentityResult* VerificationReport::find(const std::string& name) const {
  for (const auto& r : results)
    if (r.name == name) return &r;
  return nullptr;
}

namespace {

struct PointOutcome {
  std::vector<double> point;
  std::vector<IdentityResult> results;
  std::exception_ptr error;
};

PointOutcome run_point(const std::string& suite, const PointSuite& build, const SweepConfig& cfg, std::size_t i) {
  PointOutcome out;
  try {
    const auto checks = build(i, out.point);
    for (const auto& c : checks) {
      IdentityResult r{suite, c.name, c.relation, 0.0, cfg.tol, c.applicable, true, i, c.note};
      if (c.applicable && c.run) {
        for (std::size_t t = 0; t < cfg.trials; ++t) {
          std::mt19937_64 rng = make_rng(cfg.seed, i, t, name_tag(c.name));
          const double v = c.run(rng);
          if (!(v <= r.max_residual)) r.max_residual = std::isnan(v) ? INFINITY : v;
        }
      }
      out.results.push_back(std::move(r));
    }
  } catch (...) {
    out.error = std::current_exception();
  }
  return out;
}

}  // namespace

VerificationReport run_sweep(const std::string& suite, const PointSuite& build, const SweepConfig& cfg,
                             Execution exec) {
  std::vector<PointOutcome> outcomes(cfg.points);
  const auto n = static_cast<long>(cfg.points);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) outcomes[i] = run_point(suite, build, cfg, static_cast<std::size_t>(i));
  } else {
    for (long i = 0; i < n; ++i) outcomes[i] = run_point(suite, build, cfg, static_cast<std::size_t>(i));
  }
  for (const auto& o : outcomes)
    if (o.error) std::rethrow_exception(o.error);

  VerificationReport rep;
  rep.suite = suite;
  rep.seed = cfg.seed;
  std::map<std::string, std::size_t> index;
  for (const auto& o : outcomes) {
    rep.points.push_back(o.point);
    for (const auto& r : o.results) {
      auto it = index.find(r.name);
      if (it == index.end()) {
        index.emplace(r.name, rep.results.size());
        rep.results.push_back(r);
        continue;
      }
      IdentityResult& acc = rep.results[it->second];
      if (r.applicable && (!acc.applicable || r.max_residual > acc.max_residual)) {
        acc.max_residual = r.max_residual;
        acc.worst_point = r.worst_point;
        acc.applicable = true;
        acc.note = r.note;
      }
    }
  }
  for (auto& r : rep.results) r.pass = !r.applicable || r.max_residual <= r.tol;
  return rep;
}

VerificationReport check_complex(const std::string& suite, const ComplexFactory& f, const SweepConfig& cfg,
                                 Execution exec) {
  return run_sweep(
      suite, [&f](std::size_t i, std::vector<double>& p) { return complex_checks(f(i, p)); }, cfg, exec);
}

VerificationReport check_equivalence(const std::string& suite, const EquivalenceFactory& f, const SweepConfig& cfg,
                                     Execution exec) {
  return run_sweep(
      suite, [&f](std::size_t i, std::vector<double>& p) { return equivalence_checks(f(i, p)); }, cfg, exec);
}

// ---- the compatibility complexes ----

EquivalenceData build_onesol_complex(const OperatorZoo& z) {
  const int n = z.dim;
  const Flavor fl = z.flavor;
  const ShapeSpec E = density_shape(1.0, fl);
  auto L = [&](int k) { return form_shape(k, 1.0, fl); };
  const ShapeSpec V1 = z.V1;

  auto dt = [&](int k) {
    return tensor_operator(k == 0 ? "∇̃" : "d̃", L(k), L(k + 1), 1, z.d_tilde);
  };
  const OperatorNode E0 = tensor_operator("E0", E, V1, 2, z.E0);
  const OperatorNode C1 = tensor_operator("C1", V1, L(1), 1, z.C1);
  const OperatorNode D1 = tensor_operator("D1", L(1), V1, 1, z.D1);
  const OperatorNode H1p = tensor_operator("H'1", L(2), L(1), 1, z.H1prime);
  const OperatorNode idV1 = identity({V1});

  std::vector<BundleShape> T{{E}, {V1}, {V1, L(2)}, {L(1), L(3)}};
  for (int k = 4; k <= n; ++k) T.push_back({L(k)});
  std::vector<BundleShape> B;
  for (int k = 0; k <= n; ++k) B.push_back({L(k)});

  EquivalenceData e;
  e.top.name = "compatibility complex";
  e.bottom.name = "twisted de Rham";
  e.top.sections = e.bottom.sections = z.sections;

  // top row
  e.top.ops.push_back(E0);
  e.top.ops.push_back(block("(id - D1C1 ; d̃C1)", T[1], T[2],
                            {{idV1 - compose(D1, C1)}, {compose(dt(1), C1)}}));
  if (n >= 3) {
    e.top.ops.push_back(block("[[C1, -H'1], [0, d̃]]", T[2], T[3], {{C1, -H1p}, {std::nullopt, dt(2)}}));
  }
  if (n >= 4) e.top.ops.push_back(block("(0, d̃)", T[3], T[4], {{std::nullopt, dt(3)}}));
  for (int k = 4; k < n; ++k) e.top.ops.push_back(dt(k));

  for (int k = 0; k < n; ++k) e.bottom.ops.push_back(dt(k));
  e.top.sections = z.sections;

  // cochain maps
  const std::size_t N = T.size();
  for (std::size_t l = 0; l < N; ++l) {
    switch (l) {
      case 0:
        e.C.push_back(identity(T[0]));
        e.D.push_back(identity(B[0]));
        break;
      case 1:
        e.C.push_back(C1);
        e.D.push_back(D1);
        break;
      case 2:
        e.C.push_back(block("(0, id)", T[2], B[2], {{std::nullopt, identity(B[2])}}));
        e.D.push_back(block("(D1H'1 ; id - d̃H'1)", B[2], T[2],
                            {{compose(D1, H1p)}, {identity(B[2]) - compose(dt(1), H1p)}}));
        break;
      case 3:
        e.C.push_back(block("(0, id)", T[3], B[3], {{std::nullopt, identity(B[3])}}));
        e.D.push_back(block("(0 ; id)", B[3], T[3], {{std::nullopt}, {identity(B[3])}}));
        break;
      default:
        e.C.push_back(identity(T[l]));
        e.D.push_back(identity(B[l]));
    }
  }
  // homotopies
  for (std::size_t l = 0; l + 1 < N; ++l) {
    if (l == 1) {
      e.H.push_back(block("(id, 0)", T[2], T[1], {{idV1, std::nullopt}}));
      e.Hp.push_back(H1p);
    } else if (l == 2 && n >= 3) {
      e.H.push_back(block("[[D1, 0], [-d̃, 0]]", T[3], T[2], {{D1, std::nullopt}, {-dt(1), std::nullopt}}));
      e.Hp.push_back(zero(B[3], B[2]));
    } else {
      e.H.push_back(zero(T[l + 1], T[l]));
      e.Hp.push_back(zero(B[l + 1], B[l]));
    }
  }
  e.validate();
  return e;
}

EquivalenceData build_nosol_complex(const OperatorZoo& z, std::function<RealTensor(const RealTensor&)> H0f,
                                    int h0_order) {
  const ShapeSpec E = density_shape(1.0, z.flavor);
  const ShapeSpec V1 = z.V1;
  const OperatorNode E0 = tensor_operator("E0", E, V1, 2, z.E0);
  const OperatorNode H0 = tensor_operator("H0", V1, E, h0_order, std::move(H0f));
  const BundleShape T0{E}, T1{V1};

  EquivalenceData e;
  e.top.name = "compatibility complex";
  e.bottom.name = "zero complex";
  e.top.sections = e.bottom.sections = z.sections;
  e.top.ops = {E0, identity(T1) - compose(E0, H0), H0};
  const BundleShape O{};
  e.bottom.ops = {zero(O, O), zero(O, O), zero(O, O)};
  const std::vector<BundleShape> T{T0, T1, T1, T0};
  for (const auto& t : T) {
    e.C.push_back(zero(t, O));
    e.D.push_back(zero(O, t, z.dim, z.sections.order));
  }
  e.H = {H0, identity(T1), E0};
  e.Hp = {zero(O, O), zero(O, O), zero(O, O)};
  e.validate();
  return e;
}

}  // namespace c2e

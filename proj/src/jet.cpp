#include "c2e/jet.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace c2e {

namespace {

// Multi-indices of total degree `deg` in `dim` variables, lexicographically
// descending in the leading variable.
void enumerate_degree(int dim, int deg, int var, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (var == dim - 1) {
    cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(deg);
    out.push_back(cur);
    cur[static_cast<std::size_t>(var)] = 0;
    return;
  }
  for (int k = deg; k >= 0; --k) {
    cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(k);
    enumerate_degree(dim, deg - k, var + 1, cur, out);
  }
  cur[static_cast<std::size_t>(var)] = 0;
}

std::uint64_t key_of(const MultiIndex& a) {
  std::uint64_t k = 0;
  for (auto x : a) k = (k << 8) | x;
  return k;
}

}  // namespace

JetLayout::JetLayout(int dim, int order, const JetLayout* lower) : dim_(dim), order_(order) {
  if (dim < 1 || dim > kMaxJetDim) throw StructuralError("jet dimension out of range");
  if (order < 0) throw StructuralError("negative jet order");
  for (int d = 0; d <= order; ++d) {
    MultiIndex cur{};
    enumerate_degree(dim, d, 0, cur, alphas_);
    prefix_sizes_.push_back(alphas_.size());
  }
  degrees_.reserve(alphas_.size());
  for (const auto& a : alphas_) degrees_.push_back(std::accumulate(a.begin(), a.end(), 0));

  std::map<std::uint64_t, std::uint32_t> index;
  for (std::size_t i = 0; i < alphas_.size(); ++i) index[key_of(alphas_[i])] = static_cast<std::uint32_t>(i);

  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    for (std::size_t j = 0; j < alphas_.size(); ++j) {
      if (degrees_[i] + degrees_[j] > order) continue;
      MultiIndex s{};
      for (std::size_t v = 0; v < s.size(); ++v) s[v] = static_cast<std::uint8_t>(alphas_[i][v] + alphas_[j][v]);
      products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), index.at(key_of(s))});
    }
  }

  if (order >= 1) {
    const std::size_t lower_size = prefix_sizes_[static_cast<std::size_t>(order - 1)];
    partials_.resize(static_cast<std::size_t>(dim));
    for (int v = 0; v < dim; ++v) {
      auto& map = partials_[static_cast<std::size_t>(v)];
      map.reserve(lower_size);
      for (std::size_t t = 0; t < lower_size; ++t) {
        MultiIndex a = alphas_[t];
        a[static_cast<std::size_t>(v)] += 1;
        map.push_back({index.at(key_of(a)), static_cast<double>(a[static_cast<std::size_t>(v)])});
      }
    }
  }

  if (lower != nullptr) {
    chain_ = lower->chain_;
  }
  chain_.push_back(this);
}

std::size_t JetLayout::index_of(const MultiIndex& alpha) const {
  int deg = 0;
  for (int v = dim_; v < kMaxJetDim; ++v)
    if (alpha[static_cast<std::size_t>(v)] != 0) throw StructuralError("multi-index exceeds jet dimension");
  for (int v = 0; v < dim_; ++v) deg += alpha[static_cast<std::size_t>(v)];
  if (deg > order_) throw StructuralError("multi-index exceeds jet order");
  const std::size_t begin = deg == 0 ? 0 : prefix_sizes_[static_cast<std::size_t>(deg - 1)];
  const std::size_t end = prefix_sizes_[static_cast<std::size_t>(deg)];
  for (std::size_t i = begin; i < end; ++i)
    if (alphas_[i] == alpha) return i;
  throw StructuralError("multi-index not found in layout");
}

const JetLayout& JetLayout::truncated(int order) const {
  if (order < 0 || order > order_) throw StructuralError("invalid truncation order");
  return *chain_[static_cast<std::size_t>(order)];
}

const JetLayout& jet_layout(int dim, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> registry;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = registry.find({dim, order});
  if (it != registry.end()) return *it->second;
  const JetLayout* lower = nullptr;
  for (int m = 0; m <= order; ++m) {
    auto& slot = registry[{dim, m}];
    if (!slot) slot = std::make_unique<JetLayout>(dim, m, lower);
    lower = slot.get();
  }
  return *lower;
}

RealJet apply(Elementary f, const RealJet& a, double exponent) {
  const int n = a.order();
  const double a0 = a.value();
  // Taylor coefficients f^(k)(a0) / k! for k = 0..n.
  std::vector<double> d(static_cast<std::size_t>(n) + 1);
  switch (f) {
    case Elementary::Exp: {
      const double e = std::exp(a0);
      double fact = 1.0;
      for (int k = 0; k <= n; ++k) {
        if (k > 0) fact *= k;
        d[static_cast<std::size_t>(k)] = e / fact;
      }
      break;
    }
    case Elementary::Log: {
      if (!(a0 > 0.0)) throw NumericError("log of a jet with non-positive constant term");
      d[0] = std::log(a0);
      for (int k = 1; k <= n; ++k) d[static_cast<std::size_t>(k)] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * std::pow(a0, k));
      break;
    }
    case Elementary::Sin:
    case Elementary::Cos: {
      const double s = std::sin(a0), c = std::cos(a0);
      // derivatives cycle through sin, cos, -sin, -cos
      const double cyc_sin[4] = {s, c, -s, -c};
      const double cyc_cos[4] = {c, -s, -c, s};
      double fact = 1.0;
      for (int k = 0; k <= n; ++k) {
        if (k > 0) fact *= k;
        d[static_cast<std::size_t>(k)] = (f == Elementary::Sin ? cyc_sin[k % 4] : cyc_cos[k % 4]) / fact;
      }
      break;
    }
    case Elementary::Pow: {
      const bool integral = exponent == std::floor(exponent);
      if (!integral && !(a0 > 0.0)) throw NumericError("fractional power of a jet with non-positive constant term");
      if (integral && exponent < 0 && a0 == 0.0) throw NumericError("negative power of a jet with zero constant term");
      double coef = 1.0;
      for (int k = 0; k <= n; ++k) {
        if (k > 0) coef *= (exponent - (k - 1)) / k;
        d[static_cast<std::size_t>(k)] = coef * std::pow(a0, exponent - k);
        if (integral && exponent >= 0 && k > exponent) d[static_cast<std::size_t>(k)] = 0.0;
      }
      break;
    }
    case Elementary::Reciprocal: {
      if (a0 == 0.0) throw NumericError("reciprocal of a jet with zero constant term");
      for (int k = 0; k <= n; ++k) d[static_cast<std::size_t>(k)] = ((k % 2 == 0) ? 1.0 : -1.0) / std::pow(a0, k + 1);
      break;
    }
  }

  // Horner in the nilpotent part: f(a0 + u) = d0 + u (d1 + u (d2 + ...)).
  RealJet u = a;
  u[0] = 0.0;
  RealJet r = RealJet::constant(a.dim(), n, d[static_cast<std::size_t>(n)]);
  for (int k = n - 1; k >= 0; --k) {
    r = r * u;
    r[0] += d[static_cast<std::size_t>(k)];
  }
  return r;
}

std::vector<RealJet> coordinate_jets(std::span<const double> point, int order) {
  const int dim = static_cast<int>(point.size());
  std::vector<RealJet> x;
  x.reserve(point.size());
  for (int i = 0; i < dim; ++i) x.push_back(RealJet::variable(dim, order, i, point[static_cast<std::size_t>(i)]));
  return x;
}

}  // namespace c2e

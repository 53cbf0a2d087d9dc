#include "mlab/operators.hpp"

#include "binary_io.hpp"
#include "mlab/fft.hpp"
#include "mlab/parallel.hpp"
#include "mlab/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace mlab {

std::size_t TorusGrid::size() const {
  std::size_t s = 1;
  for (int i = 0; i < dimension; ++i) s *= points;
  return s;
}

double TorusGrid::cell_volume() const { return std::pow(spacing(), dimension); }

double TorusGrid::frequency(std::size_t j) const {
  return 2.0 * kPi * static_cast<double>(signed_bin(j, points)) / period;
}

std::vector<std::size_t> TorusGrid::unflatten(std::size_t i) const {
  std::vector<std::size_t> idx(static_cast<std::size_t>(dimension));
  for (int a = dimension - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = i % points;
    i /= points;
  }
  return idx;
}

void TorusGrid::validate() const {
  if (dimension < 1 || dimension > 3) throw std::invalid_argument("torus grid: dimension must be 1, 2 or 3");
  if (points < 2 || !is_power_of_two(points)) throw std::invalid_argument("torus grid: points per axis must be a power of two");
  if (!(period > 0) || !std::isfinite(period)) throw std::invalid_argument("torus grid: period must be positive");
  if (size() > max_total) throw std::invalid_argument("torus grid: " + std::to_string(size()) + " points exceed the cap");
}

nlohmann::json TorusGrid::to_json() const {
  return {{"dimension", dimension}, {"points", points}, {"period", period}, {"max_total", max_total}};
}

TorusGrid TorusGrid::from_json(const nlohmann::json& j) {
  TorusGrid g;
  g.dimension = j.value("dimension", g.dimension);
  g.points = j.value("points", g.points);
  g.period = j.value("period", g.period);
  g.max_total = j.value("max_total", g.max_total);
  g.validate();
  return g;
}

GridField GridField::zeros(const TorusGrid& g) {
  g.validate();
  return {g, VectorXcd::Zero(static_cast<Eigen::Index>(g.size()))};
}

void GridField::validate() const {
  grid.validate();
  if (static_cast<std::size_t>(values.size()) != grid.size()) throw std::invalid_argument("grid field: shape mismatch");
  if (!values.allFinite()) throw std::invalid_argument("grid field: non-finite entry");
}

namespace {

void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (!(a == b)) throw std::invalid_argument("operators: grids differ");
}

VectorXcd forward(const VectorXcd& v, const TorusGrid& g) { return fftn(v, g.dimension, g.points); }
VectorXcd backward(const VectorXcd& v, const TorusGrid& g) { return ifftn(v, g.dimension, g.points); }

}  // namespace

GridField SymbolOperator::apply(const GridField& x) const {
  require_same_grid(grid, x.grid);
  return {grid, backward(forward(x.values, grid).cwiseProduct(symbol), grid)};
}

SymbolOperator SymbolOperator::adjoint() const { return {grid, symbol.conjugate(), label + "*"}; }

SymbolOperator SymbolOperator::compose(const SymbolOperator& other) const {
  require_same_grid(grid, other.grid);
  return {grid, symbol.cwiseProduct(other.symbol), label + " . " + other.label};
}

bool SymbolOperator::nonnegative_real(double tol) const {
  for (const cplx& s : symbol)
    if (std::abs(s.imag()) > tol || s.real() < -tol) return false;
  return true;
}

void OperatorFamily::validate() const {
  if (members.empty()) throw std::invalid_argument("operator family: empty");
  for (const auto& m : members) require_same_grid(members.front().grid, m.grid);
  if (!parameters.empty() && parameters.size() != members.size())
    throw std::invalid_argument("operator family: parameter list does not match members");
}

SymbolOperator laplacian_halfpower_symbol(const TorusGrid& grid, SymbolVariant variant) {
  grid.validate();
  const double h = grid.spacing();
  std::vector<double> axis(grid.points);
  for (std::size_t j = 0; j < grid.points; ++j) {
    const double xi = grid.frequency(j);
    const double v = variant == SymbolVariant::Continuum ? xi : 2.0 / h * std::sin(xi * h / 2.0);
    axis[j] = v * v;
  }
  SymbolOperator a{grid, VectorXcd(static_cast<Eigen::Index>(grid.size())),
                   variant == SymbolVariant::Continuum ? "A" : "A_discrete"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double s = 0.0;
    std::size_t rest = i;
    for (int ax = 0; ax < grid.dimension; ++ax) {
      s += axis[rest % grid.points];
      rest /= grid.points;
    }
    a.symbol[static_cast<Eigen::Index>(i)] = std::sqrt(s);
  }
  return a;
}

SymbolOperator multiplier(const FuncExpr& f, const SymbolOperator& a, ZeroFrequency zero) {
  SymbolOperator out{a.grid, VectorXcd(a.symbol.size()), "f(" + a.label + ")"};
  // Symbols of radial operators repeat heavily; evaluate each value once.
  std::map<std::pair<double, double>, cplx> cache;
  for (Eigen::Index i = 0; i < a.symbol.size(); ++i) {
    const cplx s = a.symbol[i];
    if (s == cplx(0.0) && zero == ZeroFrequency::Project) {
      out.symbol[i] = 0.0;
      continue;
    }
    const auto key = std::make_pair(s.real(), s.imag());
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, s.imag() == 0.0 ? f(s.real()) : f(s)).first;
    out.symbol[i] = it->second;
  }
  return out;
}

GridField apply_multiplier(const FuncExpr& f, const SymbolOperator& a, const GridField& g, ZeroFrequency zero) {
  return multiplier(f, a, zero).apply(g);
}

double lp_norm(const GridField& g, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be at least 1");
  const VectorXd m = g.values.cwiseAbs();
  if (std::isinf(p)) return m.size() ? m.maxCoeff() : 0.0;
  const double scale = m.size() ? m.maxCoeff() : 0.0;
  if (scale == 0.0) return 0.0;
  const double s = (m / scale).array().pow(p).sum();
  return scale * std::pow(s * g.grid.cell_volume(), 1.0 / p);
}

GridField kernel(const SymbolOperator& t) {
  return {t.grid, backward(t.symbol, t.grid) / t.grid.cell_volume()};
}

GridField project_mean_zero(const GridField& g) {
  VectorXcd c = forward(g.values, g.grid);
  c[0] = 0.0;
  return {g.grid, backward(c, g.grid)};
}

namespace {

// Unweighted l^p norm; the cell volume cancels in operator-norm ratios.
double lp_plain(const VectorXcd& v, double p) {
  const VectorXd m = v.cwiseAbs();
  const double scale = m.maxCoeff();
  if (scale == 0.0) return 0.0;
  return scale * std::pow((m / scale).array().pow(p).sum(), 1.0 / p);
}

// |v|^{p-1} sgn(v) scaled to unit l^{p'} norm when ||v||_p = 1.
VectorXcd duality_map(const VectorXcd& v, double p) {
  const double n = lp_plain(v, p);
  if (n == 0.0) return VectorXcd::Zero(v.size());
  VectorXcd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    out[i] = a == 0.0 ? cplx(0.0) : v[i] / a * std::pow(a / n, p - 1.0);
  }
  return out;
}

struct Ascent {
  double value = 0.0;
  VectorXcd best;
  bool converged = false;
  int iterations = 0;
};

// Boyd's fixed-point ascent for ||T||_{p->p}.
Ascent boyd_ascent(const SymbolOperator& t, VectorXcd x, double p, const OpNormBudget& budget) {
  const double q = p / (p - 1.0);
  const TorusGrid& g = t.grid;
  const VectorXcd adj = t.symbol.conjugate();
  Ascent r;
  x /= lp_plain(x, p);
  for (int it = 0; it < budget.max_iterations; ++it) {
    r.iterations = it + 1;
    const VectorXcd y = backward(forward(x, g).cwiseProduct(t.symbol), g);
    const double ny = lp_plain(y, p);
    if (ny > r.value) {
      const double previous = r.value;
      r.value = ny;
      r.best = x;
      if (it > 0 && ny - previous <= budget.tolerance * ny) {
        r.converged = true;
        break;
      }
    } else if (it > 0) {
      r.converged = true;
      break;
    }
    if (ny == 0.0) break;
    const VectorXcd z = backward(forward(duality_map(y, p), g).cwiseProduct(adj), g);
    if (lp_plain(z, q) == 0.0) break;
    x = duality_map(z, q);
    x /= lp_plain(x, p);
  }
  if (r.best.size() == 0) r.best = x;
  return r;
}

struct Start {
  std::string name;
  VectorXcd x;
};

std::vector<Start> structured_inputs(const SymbolOperator& t, double p) {
  const TorusGrid& g = t.grid;
  const auto n = static_cast<Eigen::Index>(g.size());
  std::vector<Start> out;
  VectorXcd delta = VectorXcd::Zero(n);
  delta[0] = 1.0;
  out.push_back({"point_mass", delta});

  Eigen::Index arg = 0;
  t.symbol.cwiseAbs().maxCoeff(&arg);
  const auto peak = g.unflatten(static_cast<std::size_t>(arg));
  const double h = g.spacing();
  auto coord = [&](std::size_t j) { return h * static_cast<double>(signed_bin(j, g.points)); };
  VectorXcd wave(n);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    double phase = 0.0;
    for (int a = 0; a < g.dimension; ++a) phase += g.frequency(peak[static_cast<std::size_t>(a)]) * h * static_cast<double>(idx[static_cast<std::size_t>(a)]);
    wave[static_cast<Eigen::Index>(i)] = std::polar(1.0, phase);
  }
  out.push_back({"plane_wave", wave});

  for (double width = 2.0 * h; width <= g.period / 8.0; width *= 4.0) {
    VectorXcd gauss(n);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto idx = g.unflatten(i);
      double r2 = 0.0;
      for (int a = 0; a < g.dimension; ++a) r2 += std::pow(coord(idx[static_cast<std::size_t>(a)]) / width, 2);
      gauss[static_cast<Eigen::Index>(i)] = std::exp(-r2) * wave[static_cast<Eigen::Index>(i)];
    }
    out.push_back({"modulated_gaussian_" + std::to_string(width), gauss});
  }
  // Input maximising (Tx)(0): the dual of the reflected adjoint kernel.
  const VectorXcd k = backward(t.symbol.conjugate(), g);
  if (k.cwiseAbs().maxCoeff() > 0.0) out.push_back({"kernel_adapted", duality_map(k, p / (p - 1.0))});
  return out;
}

}  // namespace

nlohmann::json OpNormEstimate::to_json() const {
  return {{"lower_bound", lower_bound}, {"converged", converged}, {"iterations", iterations}, {"start", start}};
}

OpNormEstimate opnorm_estimate(const SymbolOperator& t, double p, const OpNormBudget& budget) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("opnorm_estimate: p must lie in (1, inf)");
  t.grid.validate();
  std::vector<Start> starts = structured_inputs(t, p);
  // Score every structured input, then ascend from the best ones and from
  // random inputs. Plane waves are fixed points, so they are not ascended.
  std::vector<double> score(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const VectorXcd& x = starts[i].x;
    score[i] = lp_plain(t.apply({t.grid, x}).values, p) / lp_plain(x, p);
  }
  OpNormEstimate out;
  std::size_t best_structured = 0;
  for (std::size_t i = 1; i < starts.size(); ++i)
    if (score[i] > score[best_structured]) best_structured = i;
  out.lower_bound = score[best_structured];
  out.certificate = {t.grid, starts[best_structured].x};
  out.start = starts[best_structured].name;
  out.converged = starts[best_structured].name == "plane_wave" && p == 2.0;

  std::vector<std::size_t> order(starts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  std::vector<Start> ascend;
  for (std::size_t i : order) {
    if (starts[i].name == "plane_wave") continue;
    ascend.push_back(starts[i]);
    if (ascend.size() == 2) break;
  }
  Rng rng(budget.seed);
  for (int r = 0; r < budget.random_starts; ++r) {
    VectorXcd x(static_cast<Eigen::Index>(t.grid.size()));
    for (auto& v : x) v = rng.complex_normal();
    ascend.push_back({"random_" + std::to_string(r), x});
  }
  std::vector<Ascent> results(ascend.size());
  parallel_for(ascend.size(), [&](std::size_t i) { results[i] = boyd_ascent(t, ascend[i].x, p, budget); });
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].value > out.lower_bound) {
      out.lower_bound = results[i].value;
      out.certificate = {t.grid, results[i].best};
      out.start = ascend[i].name;
      out.converged = results[i].converged;
      out.iterations = results[i].iterations;
    }
  }
  out.certificate.values /= lp_norm(out.certificate, p);
  return out;
}

double square_function_norm(std::span<const GridField> fields, double p) {
  if (fields.empty()) throw std::invalid_argument("square_function_norm: empty list");
  VectorXd s = VectorXd::Zero(fields.front().values.size());
  for (const auto& f : fields) {
    require_same_grid(fields.front().grid, f.grid);
    s += f.values.cwiseAbs2();
  }
  return lp_norm({fields.front().grid, s.cwiseSqrt().cast<cplx>()}, p);
}

namespace {

// Mean and standard error of (E X)^{1/2} from samples of X.
MonteCarloEstimate root_mean(const std::vector<double>& sq) {
  const double n = static_cast<double>(sq.size());
  double mean = 0.0;
  for (double v : sq) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sq) var += (v - mean) * (v - mean);
  var /= n - 1.0;
  MonteCarloEstimate r;
  r.samples = static_cast<int>(sq.size());
  r.estimate = std::sqrt(mean);
  r.standard_error = r.estimate > 0 ? std::sqrt(var / n) / (2.0 * r.estimate) : 0.0;
  return r;
}

std::vector<std::vector<double>> gaussian_draws(std::size_t samples, std::size_t terms, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> g(samples, std::vector<double>(terms));
  for (auto& row : g)
    for (double& v : row) v = rng.normal();
  return g;
}

}  // namespace

nlohmann::json MonteCarloEstimate::to_json() const {
  return {{"estimate", estimate}, {"standard_error", standard_error}, {"samples", samples}};
}

MonteCarloEstimate gaussian_sum_norm(std::span<const GridField> fields, double p, int samples, std::uint64_t seed) {
  if (fields.empty()) throw std::invalid_argument("gaussian_sum_norm: empty list");
  if (samples < 100) throw std::invalid_argument("gaussian_sum_norm: at least 100 samples required");
  for (const auto& f : fields) require_same_grid(fields.front().grid, f.grid);
  const auto draws = gaussian_draws(static_cast<std::size_t>(samples), fields.size(), seed);
  std::vector<double> sq(draws.size());
  parallel_for(draws.size(), [&](std::size_t s) {
    GridField sum = GridField::zeros(fields.front().grid);
    for (std::size_t k = 0; k < fields.size(); ++k) sum.values += draws[s][k] * fields[k].values;
    const double v = lp_norm(sum, p);
    sq[s] = v * v;
  });
  return root_mean(sq);
}

namespace {

// Mixed norm || (sum_i |x_i|^2)^{1/2} ||_p on the plain (unweighted) grid.
double mixed_norm(const std::vector<VectorXcd>& x, double p) {
  VectorXd s = VectorXd::Zero(x.front().size());
  for (const auto& v : x) s += v.cwiseAbs2();
  return lp_plain(s.cwiseSqrt().cast<cplx>(), p);
}

// Duality map of L^p(l^2): x_i |x|^{p-2} / ||x||^{p-1}.
std::vector<VectorXcd> mixed_duality(const std::vector<VectorXcd>& x, double p) {
  const double n = mixed_norm(x, p);
  VectorXd s = VectorXd::Zero(x.front().size());
  for (const auto& v : x) s += v.cwiseAbs2();
  s = s.cwiseSqrt();
  VectorXd w(s.size());
  for (Eigen::Index j = 0; j < s.size(); ++j) w[j] = s[j] == 0.0 ? 0.0 : std::pow(s[j] / n, p - 2.0) / n;
  std::vector<VectorXcd> out;
  for (const auto& v : x) out.push_back(v.cwiseProduct(w.cast<cplx>()));
  return out;
}

struct MixedAscent {
  double ratio = 0.0;
  std::vector<VectorXcd> best;
};

MixedAscent mixed_ascent(const std::vector<const SymbolOperator*>& ops, std::vector<VectorXcd> x, double p, int iterations) {
  const double q = p / (p - 1.0);
  const TorusGrid& g = ops.front()->grid;
  MixedAscent r;
  for (int it = 0; it <= iterations; ++it) {
    const double nx = mixed_norm(x, p);
    if (nx == 0.0) break;
    for (auto& v : x) v /= nx;
    std::vector<VectorXcd> y;
    for (std::size_t i = 0; i < ops.size(); ++i) y.push_back(backward(forward(x[i], g).cwiseProduct(ops[i]->symbol), g));
    const double ratio = mixed_norm(y, p);
    if (ratio > r.ratio * (1.0 + 1e-13)) {
      r.ratio = ratio;
      r.best = x;
    } else if (it > 0) {
      break;
    }
    if (ratio == 0.0 || it == iterations) break;
    std::vector<VectorXcd> z = mixed_duality(y, p);
    for (std::size_t i = 0; i < ops.size(); ++i)
      z[i] = backward(forward(z[i], g).cwiseProduct(ops[i]->symbol.conjugate()), g);
    if (mixed_norm(z, q) == 0.0) break;
    x = mixed_duality(z, q);
  }
  return r;
}

}  // namespace

nlohmann::json GammaEstimate::to_json() const {
  return {{"estimate", estimate},
          {"standard_error", standard_error},
          {"selection", selection},
          {"square_function_ratio", square_function_ratio}};
}

GammaEstimate gamma_bound_estimate(const OperatorFamily& family, double p, const GammaOptions& opt) {
  family.validate();
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("gamma_bound_estimate: p must lie in (1, inf)");
  if (opt.trials < 10) throw std::invalid_argument("gamma_bound_estimate: at least 10 trials required");
  const TorusGrid& g = family.members.front().grid;
  const auto n = static_cast<Eigen::Index>(g.size());
  const std::size_t m_cap = std::max<std::size_t>(1, std::min(opt.max_selection, family.members.size()));

  // Draw every trial's selection and inputs up front so results do not depend
  // on the thread schedule.
  Rng rng(opt.seed);
  struct Trial {
    std::vector<std::size_t> selection;
    std::vector<VectorXcd> inputs;
  };
  std::vector<Trial> trials(static_cast<std::size_t>(opt.trials));
  std::size_t loudest = 0;
  for (std::size_t i = 1; i < family.members.size(); ++i)
    if (family.members[i].sup_abs() > family.members[loudest].sup_abs()) loudest = i;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    Trial& tr = trials[t];
    if (t == 0) {
      // Single member at its symbol peak: attains sup ||T|| at p = 2.
      tr.selection = {loudest};
      Eigen::Index arg = 0;
      family.members[loudest].symbol.cwiseAbs().maxCoeff(&arg);
      VectorXcd hat = VectorXcd::Zero(n);
      hat[arg] = 1.0;
      tr.inputs = {backward(hat, g)};
      continue;
    }
    std::vector<std::size_t> idx(family.members.size());
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t m = 1 + rng.index(m_cap);
    for (std::size_t j = 0; j < m; ++j) std::swap(idx[j], idx[j + rng.index(idx.size() - j)]);
    tr.selection.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m));
    for (std::size_t j = 0; j < m; ++j) {
      VectorXcd x(n);
      for (auto& v : x) v = rng.complex_normal();
      tr.inputs.push_back(x);
    }
  }
  std::vector<MixedAscent> results(trials.size());
  parallel_for(trials.size(), [&](std::size_t t) {
    std::vector<const SymbolOperator*> ops;
    for (std::size_t k : trials[t].selection) ops.push_back(&family.members[k]);
    results[t] = mixed_ascent(ops, trials[t].inputs, p, opt.ascent_iterations);
  });
  std::size_t best = 0;
  for (std::size_t t = 1; t < results.size(); ++t)
    if (results[t].ratio > results[best].ratio) best = t;

  GammaEstimate out;
  out.selection = trials[best].selection;
  out.square_function_ratio = results[best].ratio;
  out.estimate = results[best].ratio;
  if (!opt.gaussian) return out;

  // Gaussian sums of the winning configuration with fresh draws, sharing the
  // draws between numerator and denominator.
  if (opt.gaussian_samples < 100) throw std::invalid_argument("gamma_bound_estimate: at least 100 Gaussian samples required");
  const auto& x = results[best].best;
  std::vector<VectorXcd> tx;
  for (std::size_t i = 0; i < x.size(); ++i) tx.push_back(family.members[out.selection[i]].apply({g, x[i]}).values);
  const auto draws = gaussian_draws(static_cast<std::size_t>(opt.gaussian_samples), x.size(), opt.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> num(draws.size()), den(draws.size());
  parallel_for(draws.size(), [&](std::size_t s) {
    VectorXcd a = VectorXcd::Zero(n), b = VectorXcd::Zero(n);
    for (std::size_t i = 0; i < x.size(); ++i) {
      a += draws[s][i] * tx[i];
      b += draws[s][i] * x[i];
    }
    num[s] = std::pow(lp_plain(a, p), 2);
    den[s] = std::pow(lp_plain(b, p), 2);
  });
  const double ns = static_cast<double>(draws.size());
  const double ma = std::accumulate(num.begin(), num.end(), 0.0) / ns;
  const double mb = std::accumulate(den.begin(), den.end(), 0.0) / ns;
  if (!(mb > 0)) throw std::invalid_argument("gamma_bound_estimate: degenerate denominator");
  const double ratio = ma / mb;
  // Delta method for a ratio of means.
  double var = 0.0;
  for (std::size_t s = 0; s < draws.size(); ++s) var += std::pow(num[s] - ratio * den[s], 2);
  var /= ns - 1.0;
  const double se_ratio = std::sqrt(var / ns) / mb;
  out.estimate = std::sqrt(ratio);
  out.standard_error = se_ratio / (2.0 * out.estimate);
  return out;
}

namespace {

void check_coverage(const SymbolOperator& a, const PartitionFamily& family) {
  if (!a.nonnegative_real()) throw std::invalid_argument("paley_littlewood: symbol must be real and non-negative");
  for (const cplx& s : a.symbol) {
    if (s.real() == 0.0) continue;
    if (std::abs(family.sum(s.real()) - 1.0) > 1e-10)
      throw std::invalid_argument("paley_littlewood: family does not cover the symbol value " + std::to_string(s.real()));
  }
}

}  // namespace

std::vector<GridField> paley_littlewood_components(const SymbolOperator& a, const PartitionFamily& family, const GridField& x) {
  require_same_grid(a.grid, x.grid);
  check_coverage(a, family);
  VectorXcd c = forward(x.values, a.grid);
  c[0] = 0.0;
  std::vector<GridField> out;
  for (int k = family.n_min(); k <= family.n_max(); ++k) {
    const Window w = family.window(k);
    VectorXcd ck(c.size());
    bool any = false;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      const double s = a.symbol[i].real();
      const double v = s == 0.0 ? 0.0 : w(s);
      ck[i] = c[i] * v;
      any = any || v != 0.0;
    }
    if (any) out.push_back({a.grid, backward(ck, a.grid)});
  }
  return out;
}

double paley_littlewood_ratio(const SymbolOperator& a, const PartitionFamily& family, const GridField& x, double p) {
  const GridField centred = project_mean_zero(x);
  const double den = lp_norm(centred, p);
  if (!(den > 0)) throw std::invalid_argument("paley_littlewood_ratio: x has no mean-zero part");
  const auto parts = paley_littlewood_components(a, family, x);
  if (parts.empty()) return 0.0;
  return square_function_norm(parts, p) / den;
}

nlohmann::json ResolventReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    rows.push_back({{"re", lambdas[i].real()}, {"im", lambdas[i].imag()}, {"value", values[i]}});
  return {{"max_value", max_value}, {"samples", rows}};
}

ResolventReport resolvent_check(const SymbolOperator& a, double theta, std::span<const cplx> lambdas, double p,
                                const OpNormBudget& budget) {
  if (!(theta >= 0) || !(theta < kPi)) throw std::invalid_argument("resolvent_check: theta must lie in [0, pi)");
  if (!a.nonnegative_real()) throw std::invalid_argument("resolvent_check: symbol must be real and non-negative");
  ResolventReport out;
  for (const cplx& lam : lambdas) {
    if (lam == cplx(0.0) || std::abs(std::arg(lam)) <= theta)
      throw std::invalid_argument("resolvent_check: lambda lies in the closed sector");
    SymbolOperator r{a.grid, VectorXcd(a.symbol.size()), "resolvent"};
    for (Eigen::Index i = 0; i < r.symbol.size(); ++i) r.symbol[i] = lam / (lam - a.symbol[i]);
    const double v = p == 2.0 ? r.sup_abs() : opnorm_estimate(r, p, budget).lower_bound;
    out.lambdas.push_back(lam);
    out.values.push_back(v);
    out.max_value = std::max(out.max_value, v);
  }
  return out;
}

SymbolOperator semigroup_operator(const SymbolOperator& a, double t, double theta) {
  if (!(std::abs(theta) < kPi / 2)) throw std::invalid_argument("semigroup_operator: |theta| must be below pi/2");
  if (!(t >= 0) || !std::isfinite(t)) throw std::invalid_argument("semigroup_operator: t must be non-negative");
  if (!a.nonnegative_real()) throw std::invalid_argument("semigroup_operator: symbol must be real and non-negative");
  const cplx z = std::polar(t, theta);
  SymbolOperator s{a.grid, (-z * a.symbol.array()).exp().matrix(), "exp(-z" + a.label + ")"};
  return s;
}

OperatorFamily wave_family(const SymbolOperator& a, double alpha, double beta, double t, int k_min, int k_max) {
  if (!(alpha > 0) || !(beta >= 0)) throw std::invalid_argument("wave_family: need alpha > 0 and beta >= 0");
  if (k_min > k_max) throw std::invalid_argument("wave_family: empty k range");
  if (!a.nonnegative_real()) throw std::invalid_argument("wave_family: symbol must be real and non-negative");
  OperatorFamily fam;
  if (beta < alpha) fam.notes.push_back("beta below alpha: outside the range where the family is expected to be bounded");
  for (int k = k_min; k <= k_max; ++k) {
    const double scale = std::exp2(k);
    SymbolOperator m{a.grid, VectorXcd(a.symbol.size()), "wave_k" + std::to_string(k)};
    for (Eigen::Index i = 0; i < m.symbol.size(); ++i) {
      const double s = scale * a.symbol[i].real();
      m.symbol[i] = std::pow(1.0 + s, -beta) * std::polar(1.0, t * s);
    }
    fam.members.push_back(std::move(m));
    fam.parameters.push_back({{"k", k}, {"t", t}, {"alpha", alpha}, {"beta", beta}});
  }
  return fam;
}

void write_field(std::ostream& out, const GridField& g) {
  using namespace detail;
  g.validate();
  put_u64(out, static_cast<std::uint64_t>(g.grid.dimension));
  put_f64(out, 0.0);
  put_f64(out, g.grid.spacing());
  put_u64(out, g.grid.points);
  for (const cplx& v : g.values) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
}

GridField read_field(std::istream& in) {
  using namespace detail;
  GridField g;
  const std::uint64_t d = get_u64(in);
  if (d < 1 || d > 3) throw std::runtime_error("read_field: bad dimension");
  g.grid.dimension = static_cast<int>(d);
  get_f64(in);  // origin
  const double step = get_f64(in);
  const std::uint64_t n = get_u64(in);
  if (n < 2 || n > (std::uint64_t{1} << 24)) throw std::runtime_error("read_field: implausible axis length");
  g.grid.points = static_cast<std::size_t>(n);
  g.grid.period = step * static_cast<double>(n);
  g.grid.max_total = std::max(g.grid.max_total, g.grid.size());
  g.values.resize(static_cast<Eigen::Index>(g.grid.size()));
  for (auto& v : g.values) {
    const double re = get_f64(in);
    v = cplx(re, get_f64(in));
  }
  g.validate();
  return g;
}

}  // namespace mlab

#include "mlab/norms.hpp"

#include "mlab/parallel.hpp"

#include <cmath>

namespace mlab {

std::string to_string(NormKind k) {
  switch (k) {
    case NormKind::BesovQ1:
      return "besov_q1";
    case NormKind::BesovQInf:
      return "besov_qinf";
    case NormKind::Mihlin:
      return "mihlin";
    case NormKind::EInfty:
      return "e_infty";
    case NormKind::EUnif:
      return "e_unif";
    case NormKind::ClassicalMihlin:
      return "classical_mihlin";
  }
  return "unknown";
}

nlohmann::json NormReport::to_json() const {
  nlohmann::json terms = nlohmann::json::object();
  for (const auto& [n, v] : per_band_terms) terms[std::to_string(n)] = v;
  return {{"norm_kind", to_string(kind)},
          {"alpha", alpha},
          {"value", value},
          {"per_band_terms", terms},
          {"truncation_bound", truncation_bound},
          {"tail_flagged", tail_flagged},
          {"notes", notes},
          {"grid",
           {{"origin", grid.origin},
            {"step", grid.step},
            {"size", grid.size},
            {"periodic", grid.periodic},
            {"extra", grid.extra}}}};
}

namespace {

GridDescriptor describe(const SampledFunction& f) { return {f.origin, f.step, f.size(), f.periodic, nlohmann::json::object()}; }

void check_alpha(double alpha) {
  if (!(alpha >= 0) || !std::isfinite(alpha)) throw std::invalid_argument("norm: alpha must be a finite non-negative number");
}

}  // namespace

BandProfile band_profile(const SampledFunction& f, const PartitionFamily& family) {
  const Spectrum spec(f);
  const double nyq = spec.nyquist() * (1.0 + 1e-12);
  BandProfile p;
  p.grid = describe(f);
  for (int n = family.n_min(); n <= family.n_max(); ++n) {
    const auto [lo, hi] = family.support(n);
    if (lo < -nyq || hi > nyq) throw std::invalid_argument("norm: insufficient frequency coverage for band " + std::to_string(n));
  }
  const int count = family.n_max() - family.n_min() + 1;
  std::vector<BandStats> stats(static_cast<std::size_t>(count));
  parallel_for(stats.size(), [&](std::size_t i) { stats[i] = spec.band(family.window(family.n_min() + static_cast<int>(i))); });
  for (int i = 0; i < count; ++i) {
    p.sup[family.n_min() + i] = stats[static_cast<std::size_t>(i)].sup;
    p.truncation[family.n_min() + i] = stats[static_cast<std::size_t>(i)].truncation;
  }
  p.uncovered = spec.uncovered_sup([&family](double xi) { return family.sum(xi); });
  if (p.uncovered > 1e-8 * std::max(1.0, spec.sup_abs()))
    p.notes.push_back("spectrum not resolved by the band range; residual sup " + std::to_string(p.uncovered));
  return p;
}

NormReport aggregate(const BandProfile& profile, NormKind kind, double alpha, BandWeight weight, Aggregate how) {
  check_alpha(alpha);
  NormReport r;
  r.kind = kind;
  r.alpha = alpha;
  r.grid = profile.grid;
  r.notes = profile.notes;
  double top_weight = 0.0;
  for (const auto& [n, s] : profile.sup) {
    const double w = weight == BandWeight::Dyadic ? std::exp2(std::abs(n) * alpha) : std::pow(bracket(n), alpha);
    const double term = w * s;
    r.per_band_terms[n] = term;
    r.value = how == Aggregate::Sum ? r.value + term : std::max(r.value, term);
    const double t = w * profile.truncation.at(n);
    r.truncation_bound = how == Aggregate::Sum ? r.truncation_bound + t : std::max(r.truncation_bound, t);
    top_weight = std::max(top_weight, w);
  }
  r.truncation_bound += top_weight * profile.uncovered;
  return r;
}

NormReport besov_norm(const SampledFunction& f, double alpha, BesovQ q, std::optional<int> n_abs_max, double sharpness) {
  check_alpha(alpha);
  f.validate();
  const int n = n_abs_max ? *n_abs_max : static_cast<int>(std::floor(std::log2(kPi / f.step * (1.0 + 1e-12))));
  if (n < 2) throw std::invalid_argument("besov_norm: insufficient frequency coverage (grid too coarse)");
  const BandProfile p = band_profile(f, dyadic_fourier_partition(n, sharpness));
  return aggregate(p, q == BesovQ::One ? NormKind::BesovQ1 : NormKind::BesovQInf, alpha, BandWeight::Dyadic,
                   q == BesovQ::One ? Aggregate::Sum : Aggregate::Sup);
}

FuncExpr exp_substitute(const FuncExpr& f) { return f.exp_substitute(); }

nlohmann::json MihlinGrid::to_json() const {
  return {{"x_min", x_min},
          {"x_max", x_max},
          {"n_max", n_max},
          {"log_periodic", log_periodic},
          {"truncation_width", truncation_width},
          {"return_width", return_width},
          {"tail_tolerance", tail_tolerance},
          {"accept_tail", accept_tail},
          {"sharpness", sharpness}};
}

MihlinGrid MihlinGrid::from_json(const nlohmann::json& j) {
  MihlinGrid g;
  g.x_min = j.value("x_min", g.x_min);
  g.x_max = j.value("x_max", g.x_max);
  g.n_max = j.value("n_max", g.n_max);
  g.log_periodic = j.value("log_periodic", g.log_periodic);
  g.truncation_width = j.value("truncation_width", g.truncation_width);
  g.return_width = j.value("return_width", g.return_width);
  g.tail_tolerance = j.value("tail_tolerance", g.tail_tolerance);
  g.accept_tail = j.value("accept_tail", g.accept_tail);
  g.sharpness = j.value("sharpness", g.sharpness);
  return g;
}

MihlinSample sample_mihlin(const FuncExpr& f, const MihlinGrid& g) {
  if (!(g.x_max > g.x_min)) throw std::invalid_argument("mihlin grid: x_max must exceed x_min");
  if (g.n_max < 2 || g.n_max > 24) throw std::invalid_argument("mihlin grid: n_max must lie in [2, 24]");
  const FuncExpr fe = exp_substitute(f);
  MihlinSample out;
  if (g.log_periodic) {
    const double period = g.x_max - g.x_min;
    const std::size_t n = next_power_of_two(static_cast<std::size_t>(std::ceil(period * std::exp2(g.n_max) / kPi)));
    out.samples = sample(fe, g.x_min, period / static_cast<double>(n), n);
    out.samples.periodic = true;
    out.tail = std::abs(fe(g.x_max) - fe(g.x_min));
    if (out.tail > g.tail_tolerance) {
      out.tail_flagged = true;
      out.notes.push_back("f(e^x) is not periodic over the declared log period");
      if (!g.accept_tail) throw std::runtime_error("mihlin_norm: log-periodic grid does not match the function");
    }
    return out;
  }
  const double st = g.truncation_width, sr = g.return_width;
  if (!(st > 0) || !(sr > 0)) throw std::invalid_argument("mihlin grid: taper widths must be positive");
  const cplx left = fe(g.x_min);
  cplx right;
  try {
    right = fe(300.0);
  } catch (const DomainError&) {
    right = fe(g.x_max);
    out.notes.push_back("right limit unavailable; using the value at x_max");
  }
  double left_dev = 0.0;
  for (int j = 0; j <= 64; ++j) left_dev = std::max(left_dev, std::abs(fe(g.x_min + 2.0 * j / 64) - left));
  const double right_dev = std::abs(fe(g.x_max) - right);
  out.tail = std::max(left_dev, right_dev);
  if (out.tail > g.tail_tolerance) {
    out.tail_flagged = true;
    out.notes.push_back("tail above tolerance: left " + std::to_string(left_dev) + ", right " + std::to_string(right_dev));
    if (!g.accept_tail) throw std::runtime_error("mihlin_norm: tail not negligible and not accepted");
  }
  const double cut_end = g.x_max + 6.0 * st;
  const double ramp_center = cut_end + 6.0 * sr;
  const double span = ramp_center + 6.0 * sr - g.x_min;
  const double step = kPi / std::exp2(g.n_max);
  const std::size_t n = next_power_of_two(static_cast<std::size_t>(std::ceil(span / step)));
  out.samples = sample(
      [&](double x) -> cplx {
        cplx v = right;
        if (x < cut_end) {
          const double w = 0.5 * std::erfc((x - g.x_max) / st);
          v = w * fe(x) + (1.0 - w) * right;
        }
        const double r = 0.5 * std::erfc(-(x - ramp_center) / sr);
        return (1.0 - r) * v + r * left;
      },
      g.x_min, step, n);
  out.samples.periodic = true;
  return out;
}

BandProfile mihlin_profile(const FuncExpr& f, const MihlinGrid& grid) {
  const MihlinSample s = sample_mihlin(f, grid);
  BandProfile p = band_profile(s.samples, dyadic_fourier_partition(grid.n_max, grid.sharpness));
  p.grid.extra = grid.to_json();
  p.grid.extra["tail"] = s.tail;
  p.grid.extra["tail_flagged"] = s.tail_flagged;
  p.notes.insert(p.notes.end(), s.notes.begin(), s.notes.end());
  p.uncovered += s.tail;
  return p;
}

NormReport mihlin_norm(const FuncExpr& f, double alpha, const MihlinGrid& grid) {
  check_alpha(alpha);
  const BandProfile p = mihlin_profile(f, grid);
  NormReport r = aggregate(p, NormKind::Mihlin, alpha, BandWeight::Dyadic, Aggregate::Sum);
  r.tail_flagged = p.grid.extra.value("tail_flagged", false);
  return r;
}

NormReport e_infty_norm(const SampledFunction& f, double alpha, std::optional<int> n_max, double sharpness) {
  check_alpha(alpha);
  f.validate();
  const int nyq = static_cast<int>(std::floor(kPi / f.step * (1.0 + 1e-12)));
  const int n = n_max ? *n_max : std::min(64, nyq - 1);
  if (n < 1 || n + 1 > nyq) throw std::invalid_argument("e_infty_norm: insufficient frequency coverage");
  const BandProfile p = band_profile(f, equidistant_partition(-n, n, sharpness));
  return aggregate(p, NormKind::EInfty, alpha, BandWeight::Bracket, Aggregate::Sum);
}

nlohmann::json EUnifGrid::to_json() const {
  return {{"period", period},   {"size", size},   {"k_min", k_min},
          {"k_max", k_max},     {"n_max", n_max}, {"dyadic_sharpness", dyadic_sharpness},
          {"equidistant_sharpness", equidistant_sharpness}};
}

BandProfile e_unif_profile(const FuncExpr& f, const EUnifGrid& g) {
  if (g.k_min > g.k_max) throw std::invalid_argument("e_unif: empty k range");
  const double step = g.period / static_cast<double>(g.size);
  if (g.n_max + 1 > kPi / step) throw std::invalid_argument("e_unif: insufficient frequency coverage");
  const PartitionFamily dy = dyadic_partition(-1, 1, g.dyadic_sharpness);
  const PartitionFamily eq = equidistant_partition(-g.n_max, g.n_max, g.equidistant_sharpness);
  const std::size_t nk = static_cast<std::size_t>(g.k_max - g.k_min + 1);
  std::vector<BandProfile> per_k(nk);
  parallel_for(nk, [&](std::size_t i) {
    const double scale = std::exp2(g.k_min + static_cast<int>(i));
    const SampledFunction h = sample(
        [&](double lam) -> cplx {
          const double w = dy(0, lam);
          return w == 0.0 ? cplx(0.0) : f(scale * lam) * w;
        },
        0.0, step, g.size);
    SampledFunction hp = h;
    hp.periodic = true;  // compactly supported inside one period
    per_k[i] = band_profile(hp, eq);
  });
  BandProfile out = per_k.front();
  out.grid.extra = g.to_json();
  nlohmann::json argmax = nlohmann::json::object();
  for (const auto& [n, s] : out.sup) argmax[std::to_string(n)] = g.k_min;
  for (std::size_t i = 1; i < nk; ++i) {
    for (const auto& [n, s] : per_k[i].sup) {
      if (s > out.sup[n]) {
        out.sup[n] = s;
        argmax[std::to_string(n)] = g.k_min + static_cast<int>(i);
      }
      out.truncation[n] = std::max(out.truncation[n], per_k[i].truncation.at(n));
    }
    out.uncovered = std::max(out.uncovered, per_k[i].uncovered);
  }
  out.grid.extra["argmax_k"] = argmax;
  return out;
}

NormReport e_unif_norm(const FuncExpr& f, double alpha, const EUnifGrid& grid) {
  check_alpha(alpha);
  return aggregate(e_unif_profile(f, grid), NormKind::EUnif, alpha, BandWeight::Bracket, Aggregate::Sum);
}

nlohmann::json ClassicalSeminorm::to_json() const {
  return {{"value", value}, {"divergent", divergent}, {"argmax_order", argmax_order}, {"argmax_t", argmax_t}};
}

namespace {

ClassicalSeminorm seminorm_on(const std::vector<FuncExpr>& derivs, double t_min, double t_max, std::size_t points) {
  ClassicalSeminorm r;
  const double lmin = std::log(t_min), lmax = std::log(t_max);
  for (std::size_t j = 0; j < points; ++j) {
    const double t = std::exp(lmin + (lmax - lmin) * static_cast<double>(j) / static_cast<double>(points - 1));
    for (std::size_t k = 0; k < derivs.size(); ++k) {
      const double v = std::pow(t, static_cast<double>(k)) * std::abs(derivs[k](t));
      if (v > r.value) {
        r.value = v;
        r.argmax_order = static_cast<int>(k);
        r.argmax_t = t;
      }
    }
  }
  return r;
}

}  // namespace

ClassicalSeminorm classical_mihlin_seminorm(const FuncExpr& f, int order, const ProbeGrid& grid, bool allow_fd) {
  if (order < 0) throw std::invalid_argument("classical_mihlin_seminorm: negative order");
  if (!(grid.t_min > 0) || !(grid.t_max > grid.t_min) || grid.points < 2)
    throw std::invalid_argument("classical_mihlin_seminorm: bad probe grid");
  std::vector<FuncExpr> derivs;
  for (int k = 0; k <= order; ++k) derivs.push_back(f.derivative(k, allow_fd));
  ClassicalSeminorm r = seminorm_on(derivs, grid.t_min, grid.t_max, grid.points);
  // Same density per decade on the widened grid.
  const double widen = 16.0;
  const double decades = std::log(grid.t_max / grid.t_min);
  const auto wide_points = static_cast<std::size_t>(
      std::ceil(static_cast<double>(grid.points - 1) * (decades + 2 * std::log(widen)) / decades)) + 1;
  const ClassicalSeminorm wide = seminorm_on(derivs, grid.t_min / widen, grid.t_max * widen, wide_points);
  r.divergent = wide.value > 2.0 * r.value + 1e-12;
  return r;
}

double algebra_defect(const FuncExpr& f, const FuncExpr& g, double alpha, const EUnifGrid& grid) {
  const double nf = e_unif_norm(f, alpha, grid).value;
  const double ng = e_unif_norm(g, alpha, grid).value;
  if (!(nf * ng > 0)) throw std::invalid_argument("algebra_defect: zero denominator");
  return e_unif_norm(f * g, alpha, grid).value / (nf * ng);
}

}  // namespace mlab

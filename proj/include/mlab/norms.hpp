#pragma once

#include "mlab/funcspec.hpp"
#include "mlab/partitions.hpp"
#include "mlab/transforms.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mlab {

enum class NormKind { BesovQ1, BesovQInf, Mihlin, EInfty, EUnif, ClassicalMihlin };
enum class BandWeight { Dyadic, Bracket };  // 2^{|n| a} or <n>^a
enum class Aggregate { Sum, Sup };

std::string to_string(NormKind k);

struct GridDescriptor {
  double origin = 0.0;
  double step = 0.0;
  std::size_t size = 0;
  bool periodic = false;
  nlohmann::json extra = nlohmann::json::object();
};

struct NormReport {
  NormKind kind = NormKind::BesovQ1;
  double alpha = 0.0;
  double value = 0.0;
  std::map<int, double> per_band_terms;
  double truncation_bound = 0.0;
  GridDescriptor grid;
  bool tail_flagged = false;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

// Unweighted band suprema of one sampled function, reusable across orders.
struct BandProfile {
  std::map<int, double> sup;
  std::map<int, double> truncation;
  double uncovered = 0.0;  // sup of the part of f no window reaches
  GridDescriptor grid;
  std::vector<std::string> notes;
};

BandProfile band_profile(const SampledFunction& f, const PartitionFamily& family);
NormReport aggregate(const BandProfile& profile, NormKind kind, double alpha, BandWeight weight, Aggregate how);

enum class BesovQ { One, Infinity };

// Dyadic-Fourier bands up to the largest |n| with 2^n inside the Nyquist band
// unless n_abs_max is given.
NormReport besov_norm(const SampledFunction& f, double alpha, BesovQ q, std::optional<int> n_abs_max = std::nullopt,
                      double sharpness = 1.0);

FuncExpr exp_substitute(const FuncExpr& f);

// Grid for f(e^x). In tapered mode f_e is kept on [x_min, x_max], rolled off
// to its right limit beyond x_max and ramped back to its left value so the
// periodic extension is smooth. In log-periodic mode f_e is sampled over one
// period x_max - x_min.
struct MihlinGrid {
  double x_min = -30.0;
  double x_max = 30.0;
  int n_max = 8;  // highest dyadic band; the step is pi / 2^n_max
  bool log_periodic = false;
  double truncation_width = 0.5;
  double return_width = 8.0;
  double tail_tolerance = 1e-8;
  bool accept_tail = false;
  double sharpness = 1.0;

  nlohmann::json to_json() const;
  static MihlinGrid from_json(const nlohmann::json& j);
};

struct MihlinSample {
  SampledFunction samples;
  double tail = 0.0;
  bool tail_flagged = false;
  std::vector<std::string> notes;
};

MihlinSample sample_mihlin(const FuncExpr& f, const MihlinGrid& grid);
BandProfile mihlin_profile(const FuncExpr& f, const MihlinGrid& grid);
NormReport mihlin_norm(const FuncExpr& f, double alpha, const MihlinGrid& grid = {});

NormReport e_infty_norm(const SampledFunction& f, double alpha, std::optional<int> n_max = std::nullopt,
                        double sharpness = 1.0);

struct EUnifGrid {
  double period = 16.0;
  std::size_t size = 512;
  int k_min = -16;
  int k_max = 16;
  int n_max = 64;
  double dyadic_sharpness = 1.0;
  double equidistant_sharpness = 1.0;

  nlohmann::json to_json() const;
};

// Max over k of the equidistant band suprema of f(2^k .) phi_0.
BandProfile e_unif_profile(const FuncExpr& f, const EUnifGrid& grid = {});
NormReport e_unif_norm(const FuncExpr& f, double alpha, const EUnifGrid& grid = {});

struct ProbeGrid {
  double t_min = 1e-6;
  double t_max = 1e6;
  std::size_t points = 2001;
};

struct ClassicalSeminorm {
  double value = 0.0;
  bool divergent = false;
  int argmax_order = 0;
  double argmax_t = 0.0;
  nlohmann::json to_json() const;
};

// max_{k <= order} sup_t t^k |f^(k)(t)| on a log-spaced grid. Divergence is
// flagged when widening the grid by 2^4 on both sides more than doubles it.
ClassicalSeminorm classical_mihlin_seminorm(const FuncExpr& f, int order, const ProbeGrid& grid = {},
                                            bool allow_finite_differences = false);

double algebra_defect(const FuncExpr& f, const FuncExpr& g, double alpha, const EUnifGrid& grid = {});

}  // namespace mlab

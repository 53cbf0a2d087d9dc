#pragma once

#include "mlab/core.hpp"
#include "mlab/funcspec.hpp"
#include "mlab/partitions.hpp"

#include <json.hpp>

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace mlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// d-dimensional torus [0, L)^d sampled with N points per axis, row-major.
struct TorusGrid {
  int dimension = 1;
  std::size_t points = 64;
  double period = 2.0 * kPi;
  std::size_t max_total = std::size_t{1} << 22;

  std::size_t size() const;
  double spacing() const { return period / static_cast<double>(points); }
  double cell_volume() const;
  // Angular frequency of DFT bin j along one axis.
  double frequency(std::size_t j) const;
  // Per-axis bin indices of flat index i.
  std::vector<std::size_t> unflatten(std::size_t i) const;
  void validate() const;
  bool operator==(const TorusGrid& o) const {
    return dimension == o.dimension && points == o.points && period == o.period;
  }
  nlohmann::json to_json() const;
  static TorusGrid from_json(const nlohmann::json& j);
};

struct GridField {
  TorusGrid grid;
  VectorXcd values;

  static GridField zeros(const TorusGrid& g);
  void validate() const;
};

// Fourier multiplier: (Tx)^ = symbol * x^.
struct SymbolOperator {
  TorusGrid grid;
  VectorXcd symbol;
  std::string label;

  GridField apply(const GridField& x) const;
  SymbolOperator adjoint() const;
  SymbolOperator compose(const SymbolOperator& other) const;
  double sup_abs() const { return symbol.cwiseAbs().maxCoeff(); }
  bool nonnegative_real(double tol = 0.0) const;
};

struct OperatorFamily {
  std::vector<SymbolOperator> members;
  std::vector<nlohmann::json> parameters;  // one entry per member
  std::vector<std::string> notes;

  void validate() const;
};

enum class SymbolVariant { Continuum, Discrete };
SymbolOperator laplacian_halfpower_symbol(const TorusGrid& grid, SymbolVariant variant = SymbolVariant::Continuum);

// How f(A) treats frequencies where A's symbol vanishes: evaluate f(0) (and
// fail if f is undefined there) or restrict to the mean-zero subspace.
enum class ZeroFrequency { Evaluate, Project };

SymbolOperator multiplier(const FuncExpr& f, const SymbolOperator& a, ZeroFrequency zero = ZeroFrequency::Evaluate);
GridField apply_multiplier(const FuncExpr& f, const SymbolOperator& a, const GridField& g,
                           ZeroFrequency zero = ZeroFrequency::Evaluate);

// (sum |g|^p h^d)^{1/p}, or max |g| for p = infinity.
double lp_norm(const GridField& g, double p);

// Convolution kernel of T sampled on the grid (index 0 is the origin).
GridField kernel(const SymbolOperator& t);

// Zero-frequency coefficient removed.
GridField project_mean_zero(const GridField& g);

struct OpNormBudget {
  int max_iterations = 200;
  double tolerance = 1e-12;
  int random_starts = 4;
  std::uint64_t seed = 1;
};

struct OpNormEstimate {
  double lower_bound = 0.0;
  GridField certificate;  // attains lower_bound
  bool converged = false;
  int iterations = 0;
  std::string start;  // which input the best ascent started from
  nlohmann::json to_json() const;
};

OpNormEstimate opnorm_estimate(const SymbolOperator& t, double p, const OpNormBudget& budget = {});

double square_function_norm(std::span<const GridField> fields, double p);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  int samples = 0;
  nlohmann::json to_json() const;
};

// (E || sum_k g_k x_k ||_p^2)^{1/2} with real standard Gaussians g_k.
MonteCarloEstimate gaussian_sum_norm(std::span<const GridField> fields, double p, int samples, std::uint64_t seed);

struct GammaOptions {
  int trials = 32;
  std::size_t max_selection = 8;
  int ascent_iterations = 60;
  bool gaussian = false;  // score the best configuration by Gaussian sums
  int gaussian_samples = 400;
  std::uint64_t seed = 1;
};

struct GammaEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;  // zero for square-function scoring
  std::vector<std::size_t> selection;
  double square_function_ratio = 0.0;
  nlohmann::json to_json() const;
};

GammaEstimate gamma_bound_estimate(const OperatorFamily& family, double p, const GammaOptions& options = {});

// phi_k(A) x for every window of the family, after removing the mean.
std::vector<GridField> paley_littlewood_components(const SymbolOperator& a, const PartitionFamily& family,
                                                   const GridField& x);
double paley_littlewood_ratio(const SymbolOperator& a, const PartitionFamily& family, const GridField& x, double p);

struct ResolventReport {
  double max_value = 0.0;
  std::vector<cplx> lambdas;
  std::vector<double> values;
  nlohmann::json to_json() const;
};

// ||lambda (lambda - A)^{-1}||_{p->p}: exact at p = 2, lower estimates otherwise.
ResolventReport resolvent_check(const SymbolOperator& a, double theta, std::span<const cplx> lambdas, double p = 2.0,
                                const OpNormBudget& budget = {});

// exp(-e^{i theta} t A).
SymbolOperator semigroup_operator(const SymbolOperator& a, double t, double theta);

// (1 + 2^k A)^{-beta} e^{i t 2^k A} for k in [k_min, k_max].
OperatorFamily wave_family(const SymbolOperator& a, double alpha, double beta, double t, int k_min, int k_max);

void write_field(std::ostream& out, const GridField& g);
GridField read_field(std::istream& in);

}  // namespace mlab

#pragma once

#include <utility>
#include <vector>

#include "perc/kernels.hpp"

namespace perc {

// Probability measure on (leaf, cell) atoms.
struct ProductMeasure {
  std::vector<Atom> atoms;
  std::vector<double> weights;

  void validate() const;  // simplex within 1e-12, atoms unique
};

struct CapacityResult {
  double energy = 0;
  double capacity = 0;  // 1/energy, 0 past the overflow guard
  ProductMeasure measure;
  double gap = 0;  // final duality gap 2*(energy - min potential)
  long long iterations = 0;
  bool converged = false;
};

struct DimSweep {
  std::vector<double> alphas;
  std::vector<double> capacities;
  std::vector<bool> converged;
  double threshold = 0;  // sup{alpha: capacity > cutoff}
  double cutoff = 1e-6;
  double resolution = 0;
};

double energy(const KernelMatrix& k, const ProductMeasure& mu);

// (K mu)_x per atom; its mu-average is the energy.
std::vector<double> potential(const KernelMatrix& k, const ProductMeasure& mu);

// Frank-Wolfe over the probability simplex with exact line search.  Each
// step moves toward the vertex of least potential (ties to the lowest
// index); stops when the duality gap 2*(mu'K mu - min_x (K mu)_x) <= tol.
CapacityResult minimize_energy(const KernelMatrix& k, double tol = 1e-8,
                               long long max_iter = 100000);

ProductMeasure uniform_measure(const KernelMatrix& k);

// Weight collected by each leaf index (atoms grouped over cells).
std::vector<double> leaf_marginal(const ProductMeasure& mu, int leaf_count);

// Phi-capacity per alpha over the discretized product set, generic trees.
DimSweep capacity_sweep(const Tree& t, const TargetSet& d,
                        const PercolationParams& params,
                        const std::vector<double>& alphas, double resolution,
                        double tol, double cutoff = 1e-6,
                        long long max_iter = 200000,
                        long long max_atoms = 8192);

// Same sweep through the reduced time-only kernel of a (possibly virtual)
// spherically symmetric tree.
DimSweep capacity_sweep_spherical(const std::vector<double>& log_level_counts,
                                  const TargetSet& d,
                                  const PercolationParams& params,
                                  const std::vector<double>& alphas,
                                  double resolution, double tol,
                                  double cutoff = 1e-6,
                                  long long max_iter = 200000);

// Positivity threshold estimated from capacity decay under joint grid
// refinement: alpha is accepted while the tail slope of log2 capacity per
// refinement step stays above -slope_cut.  resolutions are the half-widths,
// finest last.
double refined_sweep_threshold(const std::vector<DimSweep>& sweeps,
                               double slope_cut);

enum class SeriesVerdict { Diverges, Inconclusive, Converges };

struct SeriesProbe {
  SeriesVerdict verdict = SeriesVerdict::Inconclusive;
  double tail_log2_ratio = 0;  // mean log2 S_{k+1}/S_k over tail blocks
  bool stable = false;         // tail ratios agreed within tolerance
};

struct DimhResult {
  double threshold = 0;  // largest alpha whose series converges; 0 if none
  std::vector<SeriesProbe> per_alpha;
  bool conclusive = true;  // no inconclusive probe at the threshold boundary
};

// Numerical sup{alpha: sum_l p^-l l^(alpha-1) / |G_l| < infinity} decided by
// a ratio test on dyadic tail blocks [2^k, 2^{k+1}).
DimhResult dimh_sg(const std::vector<double>& log_level_counts,
                   const PercolationParams& params,
                   const std::vector<double>& alphas);

struct HpsResult {
  double partial_sum = 0;      // may overflow to inf for diverging series
  double log_partial_sum = 0;  // always finite
  SeriesProbe probe;
};

// Partial sums and a tail verdict for sum_l p^-l / (l |G_l|).
HpsResult hps_condition(const std::vector<double>& log_level_counts,
                        const PercolationParams& params, int terms);

// ([dim - (1-delta)]_+, [dim - (1-Delta)]_+), the codimension sandwich for
// dim_H(S(G) meet D) when D has Hausdorff dimension delta and packing
// dimension Delta.
std::pair<double, double> sandwich_bounds(double dim_sg, double delta,
                                          double Delta);

// log |G_l| helpers for virtual spherically symmetric families.
std::vector<double> log_levels_from_degrees(const std::vector<int>& degrees);
std::vector<double> log_levels_from_counts(
    const std::vector<long long>& counts);
// |G_l| = ceil(branching^l * l^gamma), exact ceil while it fits.
std::vector<double> log_levels_power_family(double branching, double gamma,
                                            int max_level);

}  // namespace perc

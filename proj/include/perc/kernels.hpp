#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "perc/params.hpp"
#include "perc/target_set.hpp"
#include "perc/tree.hpp"

namespace perc {

struct Tree;

enum class KernelKind { H, Phi, Lyons, BetaSet, Riesz };

const char* to_string(KernelKind k);
KernelKind kernel_kind_from_string(const std::string& name);

struct KernelSpec {
  KernelKind kind;
  PercolationParams params;
  double alpha = 0.5;  // Phi, Riesz; must lie in (0,1)
  double beta = 1.0;   // BetaSet; must lie in (0,1]
};

// Space-time correlation kernel (1 + (q/p) e^{-dt})^meet.  Equals p^-meet
// at dt = 0 and decreases to 1 as dt grows.
double h_value(const PercolationParams& params, int meet, double dt);

// h / dt^alpha; singular at dt = 0.
double phi_value(const PercolationParams& params, double alpha, int meet,
                 double dt);

// p^-meet, the time-free tree kernel; identical to h_value(params, meet, 0).
double lyons_value(const PercolationParams& params, int meet);

// meet^-beta p^-meet for meet >= 1; 1 at meet = 0 by convention.
double g_value(const PercolationParams& params, double beta, int meet);

// dt^-alpha; singular at dt = 0.
double riesz_value(double alpha, double dt);

struct Atom {
  int leaf;  // index into Tree::leaves
  int cell;  // index into TimeGrid cells

  bool operator==(const Atom&) const = default;
};

struct DiagPolicy {
  bool substituted = false;  // dt = cell half-width used on singular pairs
  double epsilon = 0;        // largest substituted half-width
  std::string note;
};

// Entries are clamped at kOverflowGuard; `clamped` records whether any
// entry hit the guard (energies then mean "diverged" downstream).
inline constexpr double kOverflowGuard = 1e300;

struct KernelMatrix {
  Eigen::MatrixXd entries;
  std::vector<Atom> atoms;
  DiagPolicy diag_policy;
  bool clamped = false;

  int size() const { return static_cast<int>(atoms.size()); }
};

// Dense kernel matrix over (leaf, cell) atoms in leaf-major order.  Pairs
// of singular kernels with dt = 0 are evaluated at the cell half-width;
// atomic cells are rejected for singular kernels.
KernelMatrix assemble_matrix(const Tree& t, const TimeGrid& grid,
                             const KernelSpec& spec,
                             long long max_atoms = 8192);

// Kernel matrix over time cells only, for a virtual spherically symmetric
// tree given by log |G_l|: entry (i,j) = M(|t_i - t_j|) (divided by
// dt^alpha for Phi), where M is ss_meet_kernel.  This is the reduced form
// of the product energy I(uniform x nu).
KernelMatrix assemble_ss_matrix(const std::vector<double>& log_level_counts,
                                const TimeGrid& grid, const KernelSpec& spec,
                                long long max_atoms = 8192);

// Exact I_h(uniform boundary x nu) for a finite spherically symmetric tree:
// the meet of two independent uniform boundary picks has mass
// 1/|G_l| - 1/|G_{l+1}| at l < n and 1/|G_n| at n (same-leaf pairs).
double ss_energy_series(const std::vector<long long>& level_counts,
                        const TimeGrid& grid, const std::vector<double>& nu,
                        const PercolationParams& params);

// Same meet-distribution kernel evaluated from log level counts,
// M(dt) = (1 - 1/x) * (A + x^n / |G_n|) + 1/x with x = 1 + (q/p) e^{-dt}
// and A = sum_{l<n} x^l / |G_l|; clamped at the overflow guard.
double ss_meet_kernel(const std::vector<double>& log_level_counts,
                      const PercolationParams& params, double dt);

// log of R(n) = integral of (1 + (q/p) e^{-|t-s|})^n dsigma dsigma, sigma
// the uniform weighting of the generator cells of d.
double log_r_of_n(const TargetSet& d, int n, const PercolationParams& params);
double r_of_n(const TargetSet& d, int n, const PercolationParams& params);

}  // namespace perc

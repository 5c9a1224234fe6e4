#include "perc/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace perc {

const char* to_string(KernelKind k) {
  switch (k) {
    case KernelKind::H: return "h";
    case KernelKind::Phi: return "phi";
    case KernelKind::Lyons: return "lyons";
    case KernelKind::BetaSet: return "betaset";
    case KernelKind::Riesz: return "riesz";
  }
  return "?";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "h") return KernelKind::H;
  if (name == "phi") return KernelKind::Phi;
  if (name == "lyons") return KernelKind::Lyons;
  if (name == "betaset") return KernelKind::BetaSet;
  if (name == "riesz") return KernelKind::Riesz;
  throw Error(Errc::ConfigInvalid, "unknown kernel kind '" + name + "'");
}

double h_value(const PercolationParams& params, int meet, double dt) {
  if (meet < 0) throw Error(Errc::ConfigInvalid, "negative meet depth");
  const double base = 1.0 + (params.q / params.p) * std::exp(-dt);
  return std::pow(base, static_cast<double>(meet));
}

double phi_value(const PercolationParams& params, double alpha, int meet,
                 double dt) {
  if (!(alpha > 0 && alpha < 1))
    throw Error(Errc::ConfigInvalid, "phi exponent must lie in (0,1)");
  if (!(dt > 0)) throw Error(Errc::ZeroTimeGap, "phi needs |t-s| > 0");
  return h_value(params, meet, dt) / std::pow(dt, alpha);
}

double lyons_value(const PercolationParams& params, int meet) {
  return h_value(params, meet, 0.0);
}

double g_value(const PercolationParams& params, double beta, int meet) {
  if (!(beta >= 0 && beta <= 1))
    throw Error(Errc::ConfigInvalid, "beta must lie in [0,1]");
  if (meet < 0) throw Error(Errc::ConfigInvalid, "negative meet depth");
  if (meet == 0) return 1.0;
  return std::pow(static_cast<double>(meet), -beta) *
         std::pow(params.p, -static_cast<double>(meet));
}

double riesz_value(double alpha, double dt) {
  if (!(alpha > 0 && alpha < 1))
    throw Error(Errc::ConfigInvalid, "riesz exponent must lie in (0,1)");
  if (!(dt > 0)) throw Error(Errc::ZeroTimeGap, "riesz needs |t-s| > 0");
  return std::pow(dt, -alpha);
}

namespace {

bool is_singular(KernelKind k) {
  return k == KernelKind::Phi || k == KernelKind::Riesz;
}

double clamp_entry(double v, bool& clamped) {
  if (v > kOverflowGuard || std::isinf(v)) {
    clamped = true;
    return kOverflowGuard;
  }
  return v;
}

}  // namespace

KernelMatrix assemble_matrix(const Tree& t, const TimeGrid& grid,
                             const KernelSpec& spec, long long max_atoms) {
  const int nleaves = static_cast<int>(t.leaves.size());
  const int ncells = grid.size();
  if (nleaves == 0 || ncells == 0)
    throw Error(Errc::EmptySpec, "no atoms to assemble");
  const long long natoms = static_cast<long long>(nleaves) * ncells;
  if (natoms > max_atoms)
    throw Error(Errc::BudgetExceeded, "kernel matrix atom count " +
                                          std::to_string(natoms) +
                                          " exceeds budget");
  if (is_singular(spec.kind) && grid.has_atomic_cells())
    throw Error(Errc::SingularDiagonal,
                "singular kernel over a grid with atomic cells");

  KernelMatrix k;
  k.atoms.reserve(static_cast<std::size_t>(natoms));
  for (int a = 0; a < nleaves; ++a)
    for (int c = 0; c < ncells; ++c) k.atoms.push_back({a, c});

  // Meets for all leaf pairs once; the same matrix entry is reused for
  // every cell pair.
  Eigen::MatrixXi meets(nleaves, nleaves);
  for (int a = 0; a < nleaves; ++a) {
    meets(a, a) = t.height;
    for (int b = a + 1; b < nleaves; ++b) {
      int m = meet_depth(t, t.leaves[a], t.leaves[b]);
      meets(a, b) = m;
      meets(b, a) = m;
    }
  }

  const int n = static_cast<int>(natoms);
  k.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const Atom& ai = k.atoms[static_cast<std::size_t>(i)];
    for (int j = i; j < n; ++j) {
      const Atom& aj = k.atoms[static_cast<std::size_t>(j)];
      double dt =
          std::abs(grid.cell_centers[ai.cell] - grid.cell_centers[aj.cell]);
      if (dt == 0.0 && is_singular(spec.kind)) {
        dt = grid.cell_half_widths[ai.cell];
        k.diag_policy.substituted = true;
        k.diag_policy.epsilon = std::max(k.diag_policy.epsilon, dt);
      }
      const int meet = meets(ai.leaf, aj.leaf);
      double v = 0;
      switch (spec.kind) {
        case KernelKind::H: v = h_value(spec.params, meet, dt); break;
        case KernelKind::Phi: v = phi_value(spec.params, spec.alpha, meet, dt); break;
        case KernelKind::Lyons: v = lyons_value(spec.params, meet); break;
        case KernelKind::BetaSet: v = g_value(spec.params, spec.beta, meet); break;
        case KernelKind::Riesz: v = riesz_value(spec.alpha, dt); break;
      }
      v = clamp_entry(v, k.clamped);
      k.entries(i, j) = v;
      k.entries(j, i) = v;
    }
  }
  k.diag_policy.note =
      is_singular(spec.kind)
          ? "dt=0 pairs evaluated at cell half-width"
          : "none (kernel finite at dt=0)";
  return k;
}

double ss_meet_kernel(const std::vector<double>& log_level_counts,
                      const PercolationParams& params, double dt) {
  const int n = static_cast<int>(log_level_counts.size()) - 1;
  if (n < 0) throw Error(Errc::EmptySpec, "no level counts");
  const double log_x = std::log1p((params.q / params.p) * std::exp(-dt));
  // A = sum_{l<n} x^l / |G_l|, truncated once the tail is negligible.
  double a = 0;
  for (int l = 0; l < n; ++l) {
    const double log_term = l * log_x - log_level_counts[l];
    if (log_term > 700.0) return kOverflowGuard;
    const double term = std::exp(log_term);
    a += term;
    if (term < a * 1e-18 && l > 64) break;
  }
  const double log_diag = n * log_x - log_level_counts[n];
  if (log_diag > 700.0) return kOverflowGuard;
  const double inv_x = std::exp(-log_x);
  const double value = (1.0 - inv_x) * (a + std::exp(log_diag)) + inv_x;
  return std::min(value, kOverflowGuard);
}

KernelMatrix assemble_ss_matrix(const std::vector<double>& log_level_counts,
                                const TimeGrid& grid, const KernelSpec& spec,
                                long long max_atoms) {
  const int n = grid.size();
  if (n == 0) throw Error(Errc::EmptySpec, "empty grid");
  if (n > max_atoms)
    throw Error(Errc::BudgetExceeded, "grid exceeds atom budget");
  const bool singular = spec.kind == KernelKind::Phi;
  if (spec.kind != KernelKind::H && spec.kind != KernelKind::Phi)
    throw Error(Errc::ConfigInvalid,
                "spherically symmetric reduction supports h and phi only");
  if (singular && grid.has_atomic_cells())
    throw Error(Errc::SingularDiagonal,
                "singular kernel over a grid with atomic cells");

  KernelMatrix k;
  k.atoms.reserve(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) k.atoms.push_back({0, c});
  k.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double dt = std::abs(grid.cell_centers[i] - grid.cell_centers[j]);
      if (dt == 0.0 && singular) {
        dt = grid.cell_half_widths[i];
        k.diag_policy.substituted = true;
        k.diag_policy.epsilon = std::max(k.diag_policy.epsilon, dt);
      }
      double v = ss_meet_kernel(log_level_counts, spec.params, dt);
      if (singular) v /= std::pow(dt, spec.alpha);
      v = clamp_entry(v, k.clamped);
      k.entries(i, j) = v;
      k.entries(j, i) = v;
    }
  }
  k.diag_policy.note = singular ? "dt=0 pairs evaluated at cell half-width"
                                : "none (kernel finite at dt=0)";
  return k;
}

double ss_energy_series(const std::vector<long long>& level_counts,
                        const TimeGrid& grid, const std::vector<double>& nu,
                        const PercolationParams& params) {
  if (level_counts.empty()) throw Error(Errc::EmptySpec, "no level counts");
  if (static_cast<int>(nu.size()) != grid.size())
    throw Error(Errc::DimensionMismatch, "nu size != grid size");
  double mass = 0;
  for (double w : nu) {
    if (w < 0) throw Error(Errc::NotASimplex, "negative weight");
    mass += w;
  }
  if (std::abs(mass - 1.0) > 1e-12)
    throw Error(Errc::NotASimplex, "weights do not sum to 1");

  const int n = static_cast<int>(level_counts.size()) - 1;
  double total = 0;
  for (int i = 0; i < grid.size(); ++i) {
    for (int j = 0; j < grid.size(); ++j) {
      const double dt =
          std::abs(grid.cell_centers[i] - grid.cell_centers[j]);
      const double x = 1.0 + (params.q / params.p) * std::exp(-dt);
      // Meet distribution of two uniform boundary picks: mass
      // 1/|G_l| - 1/|G_{l+1}| at l < n, 1/|G_n| on the diagonal.
      double m = 0, xl = 1.0;
      for (int l = 0; l < n; ++l) {
        m += (1.0 / level_counts[l] - 1.0 / level_counts[l + 1]) * xl;
        xl *= x;
      }
      m += xl / level_counts[n];
      total += nu[i] * nu[j] * m;
    }
  }
  return total;
}

double log_r_of_n(const TargetSet& d, int n, const PercolationParams& params) {
  if (!d.generator) throw Error(Errc::MissingGenerator, "target has no generator");
  if (n < 1) throw Error(Errc::ConfigInvalid, "R(n) needs n >= 1");
  const int cells = static_cast<int>(d.intervals.size());
  const double log_w = -2.0 * std::log(static_cast<double>(cells));
  std::vector<double> centers(static_cast<std::size_t>(cells));
  for (int i = 0; i < cells; ++i)
    centers[static_cast<std::size_t>(i)] =
        0.5 * (d.intervals[i].lo + d.intervals[i].hi);

  // max log term sits on the diagonal (dt = 0); sum exp relative to it.
  const double log_peak = n * std::log1p(params.q / params.p) + log_w;
  double acc = 0;
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      const double dt = std::abs(centers[i] - centers[j]);
      const double log_term =
          n * std::log1p((params.q / params.p) * std::exp(-dt)) + log_w;
      acc += std::exp(log_term - log_peak);
    }
  }
  return log_peak + std::log(acc);
}

double r_of_n(const TargetSet& d, int n, const PercolationParams& params) {
  return std::exp(log_r_of_n(d, n, params));
}

}  // namespace perc

#include "perc/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace perc {

void ProductMeasure::validate() const {
  if (atoms.size() != weights.size())
    throw Error(Errc::DimensionMismatch, "atoms/weights length mismatch");
  if (atoms.empty()) throw Error(Errc::EmptySpec, "empty measure");
  double mass = 0;
  for (double w : weights) {
    if (w < 0) throw Error(Errc::NotASimplex, "negative weight");
    mass += w;
  }
  if (std::abs(mass - 1.0) > 1e-12)
    throw Error(Errc::NotASimplex, "weights sum to " + std::to_string(mass));
  std::set<std::pair<int, int>> seen;
  for (const Atom& a : atoms)
    if (!seen.insert({a.leaf, a.cell}).second)
      throw Error(Errc::NotASimplex, "duplicate atom");
}

namespace {

// Maps mu's weights onto the matrix atom order.
Eigen::VectorXd align(const KernelMatrix& k, const ProductMeasure& mu) {
  mu.validate();
  if (mu.atoms.size() == k.atoms.size() &&
      std::equal(mu.atoms.begin(), mu.atoms.end(), k.atoms.begin()))
    return Eigen::Map<const Eigen::VectorXd>(
        mu.weights.data(), static_cast<Eigen::Index>(mu.weights.size()));

  std::map<std::pair<int, int>, int> index;
  for (int i = 0; i < k.size(); ++i)
    index[{k.atoms[static_cast<std::size_t>(i)].leaf,
           k.atoms[static_cast<std::size_t>(i)].cell}] = i;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(k.size());
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    auto it = index.find({mu.atoms[i].leaf, mu.atoms[i].cell});
    if (it == index.end())
      throw Error(Errc::DimensionMismatch, "measure atom not in matrix");
    w[it->second] = mu.weights[i];
  }
  return w;
}

}  // namespace

double energy(const KernelMatrix& k, const ProductMeasure& mu) {
  const Eigen::VectorXd w = align(k, mu);
  return w.dot(k.entries * w);
}

std::vector<double> potential(const KernelMatrix& k, const ProductMeasure& mu) {
  const Eigen::VectorXd w = align(k, mu);
  const Eigen::VectorXd pot = k.entries * w;
  return {pot.data(), pot.data() + pot.size()};
}

ProductMeasure uniform_measure(const KernelMatrix& k) {
  ProductMeasure mu;
  mu.atoms = k.atoms;
  mu.weights.assign(k.atoms.size(), 1.0 / static_cast<double>(k.size()));
  return mu;
}

std::vector<double> leaf_marginal(const ProductMeasure& mu, int leaf_count) {
  std::vector<double> marginal(static_cast<std::size_t>(leaf_count), 0.0);
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    if (mu.atoms[i].leaf < 0 || mu.atoms[i].leaf >= leaf_count)
      throw Error(Errc::DimensionMismatch, "leaf index out of range");
    marginal[static_cast<std::size_t>(mu.atoms[i].leaf)] += mu.weights[i];
  }
  return marginal;
}

CapacityResult minimize_energy(const KernelMatrix& k, double tol,
                               long long max_iter) {
  const int n = k.size();
  if (n == 0) throw Error(Errc::EmptySpec, "empty kernel matrix");

  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, 1.0 / n);
  Eigen::VectorXd pot = k.entries * mu;
  double e = mu.dot(pot);

  CapacityResult result;
  long long it = 0;
  double gap = std::numeric_limits<double>::infinity();
  constexpr long long kRefreshEvery = 4096;
  for (; it < max_iter; ++it) {
    int j = 0;
    double pmin = pot[0];
    for (int i = 1; i < n; ++i) {
      if (pot[i] < pmin) {
        pmin = pot[i];
        j = i;
      }
    }
    gap = 2.0 * (e - pmin);
    if (gap <= tol) break;

    // Exact line search for f(mu + g*(e_j - mu)); the quadratic optimum is
    // (e - pot_j) / (K_jj - 2 pot_j + e), clamped into [0,1].
    const double denom = k.entries(j, j) - 2.0 * pmin + e;
    double g = denom > 0 ? std::min(1.0, (e - pmin) / denom) : 1.0;
    const double keep = 1.0 - g;
    e = keep * keep * e + 2.0 * g * keep * pmin + g * g * k.entries(j, j);
    mu *= keep;
    mu[j] += g;
    pot *= keep;
    pot += g * k.entries.col(j);
    if ((it + 1) % kRefreshEvery == 0) {  // control drift of the running pot
      pot.noalias() = k.entries * mu;
      e = mu.dot(pot);
    }
  }

  pot.noalias() = k.entries * mu;
  e = mu.dot(pot);
  result.energy = e;
  result.capacity = e >= kOverflowGuard * 1e-8 ? 0.0 : 1.0 / e;
  result.gap = 2.0 * (e - pot.minCoeff());
  result.iterations = it;
  result.converged = result.gap <= tol;
  result.measure.atoms = k.atoms;
  result.measure.weights.assign(mu.data(), mu.data() + mu.size());
  return result;
}

namespace {

DimSweep finish_sweep(DimSweep sweep) {
  sweep.threshold = 0;
  for (std::size_t i = 0; i < sweep.alphas.size(); ++i)
    if (sweep.capacities[i] > sweep.cutoff)
      sweep.threshold = std::max(sweep.threshold, sweep.alphas[i]);
  return sweep;
}

}  // namespace

DimSweep capacity_sweep(const Tree& t, const TargetSet& d,
                        const PercolationParams& params,
                        const std::vector<double>& alphas, double resolution,
                        double tol, double cutoff, long long max_iter,
                        long long max_atoms) {
  if (d.is_single_point())
    throw Error(Errc::SingularDiagonal, "phi sweep needs a non-atomic target");
  const TimeGrid grid = discretize(d, resolution);
  DimSweep sweep;
  sweep.cutoff = cutoff;
  sweep.resolution = resolution;
  sweep.alphas = alphas;
  std::sort(sweep.alphas.begin(), sweep.alphas.end());
  for (double alpha : sweep.alphas) {
    KernelSpec spec{KernelKind::Phi, params, alpha, 1.0};
    const KernelMatrix k = assemble_matrix(t, grid, spec, max_atoms);
    const CapacityResult r = minimize_energy(k, tol, max_iter);
    sweep.capacities.push_back(r.capacity);
    sweep.converged.push_back(r.converged);
  }
  return finish_sweep(std::move(sweep));
}

DimSweep capacity_sweep_spherical(const std::vector<double>& log_level_counts,
                                  const TargetSet& d,
                                  const PercolationParams& params,
                                  const std::vector<double>& alphas,
                                  double resolution, double tol, double cutoff,
                                  long long max_iter) {
  if (d.is_single_point())
    throw Error(Errc::SingularDiagonal, "phi sweep needs a non-atomic target");
  const TimeGrid grid = discretize(d, resolution);
  DimSweep sweep;
  sweep.cutoff = cutoff;
  sweep.resolution = resolution;
  sweep.alphas = alphas;
  std::sort(sweep.alphas.begin(), sweep.alphas.end());

  // The meet kernel is alpha-free; build it once over the distinct gaps.
  const int n = grid.size();
  Eigen::MatrixXd meet_part(n, n);
  Eigen::MatrixXd gaps(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double dt = std::abs(grid.cell_centers[i] - grid.cell_centers[j]);
      if (dt == 0.0) dt = grid.cell_half_widths[i];
      if (!(dt > 0))
        throw Error(Errc::SingularDiagonal, "atomic cell in phi sweep");
      const double m = ss_meet_kernel(log_level_counts, params, dt);
      meet_part(i, j) = meet_part(j, i) = m;
      gaps(i, j) = gaps(j, i) = dt;
    }
  }

  for (double alpha : sweep.alphas) {
    KernelMatrix k;
    k.atoms.reserve(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) k.atoms.push_back({0, c});
    k.entries.resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = meet_part(i, j) * std::pow(gaps(i, j), -alpha);
        if (v > kOverflowGuard) {
          v = kOverflowGuard;
          k.clamped = true;
        }
        k.entries(i, j) = k.entries(j, i) = v;
      }
    k.diag_policy = {true, grid.half_width,
                     "dt=0 pairs evaluated at cell half-width"};
    const CapacityResult r = minimize_energy(k, tol, max_iter);
    sweep.capacities.push_back(r.capacity);
    sweep.converged.push_back(r.converged);
  }
  return finish_sweep(std::move(sweep));
}

double refined_sweep_threshold(const std::vector<DimSweep>& sweeps,
                               double slope_cut) {
  if (sweeps.size() < 2)
    throw Error(Errc::ConfigInvalid, "refined threshold needs >= 2 sweeps");
  const std::size_t nalpha = sweeps.front().alphas.size();
  for (const DimSweep& s : sweeps)
    if (s.alphas != sweeps.front().alphas)
      throw Error(Errc::ConfigInvalid, "sweeps use different alpha grids");

  double threshold = 0;
  for (std::size_t a = 0; a < nalpha; ++a) {
    // least-squares slope of log2 capacity against refinement step
    double mx = 0, my = 0;
    const std::size_t m = sweeps.size();
    std::vector<double> ys;
    for (std::size_t s = 0; s < m; ++s) {
      const double cap = std::max(sweeps[s].capacities[a], 1e-300);
      ys.push_back(std::log2(cap));
    }
    for (std::size_t s = 0; s < m; ++s) {
      mx += static_cast<double>(s);
      my += ys[s];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0, sxy = 0;
    for (std::size_t s = 0; s < m; ++s) {
      sxx += (s - mx) * (s - mx);
      sxy += (s - mx) * (ys[s] - my);
    }
    if (sxy / sxx >= -slope_cut)
      threshold = std::max(threshold, sweeps.front().alphas[a]);
  }
  return threshold;
}

namespace {

// log-space sums over dyadic blocks [2^k, 2^{k+1}) of exp(log_term(l)).
std::vector<double> dyadic_block_log_sums(
    const std::function<double(long long)>& log_term, long long lmax) {
  std::vector<double> blocks;
  for (long long lo = 1; lo <= lmax; lo *= 2) {
    const long long hi = std::min(lmax + 1, lo * 2);
    double peak = -std::numeric_limits<double>::infinity();
    for (long long l = lo; l < hi; ++l) peak = std::max(peak, log_term(l));
    if (std::isinf(peak)) {
      blocks.push_back(peak);
      continue;
    }
    double acc = 0;
    for (long long l = lo; l < hi; ++l) acc += std::exp(log_term(l) - peak);
    blocks.push_back(peak + std::log(acc));
  }
  return blocks;
}

SeriesProbe probe_from_blocks(const std::vector<double>& blocks,
                              double conv_cut, double div_cut) {
  SeriesProbe probe;
  const std::size_t nb = blocks.size();
  const std::size_t tail = std::min<std::size_t>(4, nb - 1);
  if (nb < 2 || tail == 0) return probe;  // inconclusive
  double mean = 0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = nb - tail; i < nb; ++i) {
    const double r = (blocks[i] - blocks[i - 1]) / std::log(2.0);
    mean += r;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  mean /= static_cast<double>(tail);
  probe.tail_log2_ratio = mean;
  probe.stable = hi - lo < 0.5 || hi < conv_cut;  // fast decay counts as stable
  if (mean <= conv_cut)
    probe.verdict = SeriesVerdict::Converges;
  else if (mean >= div_cut)
    probe.verdict = SeriesVerdict::Diverges;
  else
    probe.verdict = SeriesVerdict::Inconclusive;
  return probe;
}

}  // namespace

DimhResult dimh_sg(const std::vector<double>& log_level_counts,
                   const PercolationParams& params,
                   const std::vector<double>& alphas) {
  const long long lmax = static_cast<long long>(log_level_counts.size()) - 1;
  if (lmax < 16)
    throw Error(Errc::ConfigInvalid, "need at least 16 series terms");
  std::vector<double> grid = alphas;
  std::sort(grid.begin(), grid.end());
  double step = 0.05;
  if (grid.size() >= 2) {
    step = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < grid.size(); ++i)
      step = std::min(step, grid[i] - grid[i - 1]);
  }
  // Blocks of a just-convergent series decay by ~step/2 in log2 per block;
  // anything slower is treated as divergent.
  const double margin = std::max(0.01, 0.5 * step);
  const double log_p = std::log(params.p);

  DimhResult result;
  for (double alpha : grid) {
    auto log_term = [&](long long l) {
      return -static_cast<double>(l) * log_p +
             (alpha - 1.0) * std::log(static_cast<double>(l)) -
             log_level_counts[static_cast<std::size_t>(l)];
    };
    const auto blocks = dyadic_block_log_sums(log_term, lmax);
    const SeriesProbe probe = probe_from_blocks(blocks, -margin, -margin);
    result.per_alpha.push_back(probe);
    if (probe.verdict == SeriesVerdict::Converges)
      result.threshold = std::max(result.threshold, alpha);
    if (!probe.stable) result.conclusive = false;
  }
  return result;
}

HpsResult hps_condition(const std::vector<double>& log_level_counts,
                        const PercolationParams& params, int terms) {
  if (terms < 16) throw Error(Errc::ConfigInvalid, "need at least 16 terms");
  const long long lmax =
      std::min<long long>(terms,
                          static_cast<long long>(log_level_counts.size()) - 1);
  if (lmax < 16)
    throw Error(Errc::ConfigInvalid, "need at least 16 level counts");
  const double log_p = std::log(params.p);
  auto log_term = [&](long long l) {
    return -static_cast<double>(l) * log_p -
           std::log(static_cast<double>(l)) -
           log_level_counts[static_cast<std::size_t>(l)];
  };
  const auto blocks = dyadic_block_log_sums(log_term, lmax);
  double peak = -std::numeric_limits<double>::infinity();
  for (double b : blocks) peak = std::max(peak, b);
  double acc = 0;
  for (double b : blocks) acc += std::exp(b - peak);

  HpsResult result;
  result.log_partial_sum = peak + std::log(acc);
  result.partial_sum = std::exp(result.log_partial_sum);
  result.probe = probe_from_blocks(blocks, -0.25, -0.1);
  return result;
}

std::pair<double, double> sandwich_bounds(double dim_sg, double delta,
                                          double Delta) {
  if (delta > Delta)
    throw Error(Errc::OrderViolation,
                "Hausdorff dimension exceeds packing dimension");
  if (delta < 0 || Delta > 1)
    throw Error(Errc::ConfigInvalid, "dimensions must lie in [0,1]");
  return {std::max(0.0, dim_sg - (1.0 - delta)),
          std::max(0.0, dim_sg - (1.0 - Delta))};
}

std::vector<double> log_levels_from_degrees(const std::vector<int>& degrees) {
  std::vector<double> logs(degrees.size() + 1, 0.0);
  for (std::size_t l = 0; l < degrees.size(); ++l) {
    if (degrees[l] < 1) throw Error(Errc::ConfigInvalid, "degree < 1");
    logs[l + 1] = logs[l] + std::log(static_cast<double>(degrees[l]));
  }
  return logs;
}

std::vector<double> log_levels_from_counts(
    const std::vector<long long>& counts) {
  std::vector<double> logs;
  logs.reserve(counts.size());
  for (long long c : counts) {
    if (c < 1) throw Error(Errc::ConfigInvalid, "level count < 1");
    logs.push_back(std::log(static_cast<double>(c)));
  }
  return logs;
}

std::vector<double> log_levels_power_family(double branching, double gamma,
                                            int max_level) {
  if (!(branching > 1)) throw Error(Errc::ConfigInvalid, "branching <= 1");
  std::vector<double> logs(static_cast<std::size_t>(max_level) + 1, 0.0);
  const double log_b = std::log(branching);
  for (int l = 1; l <= max_level; ++l) {
    const double exact = l * log_b + gamma * std::log(static_cast<double>(l));
    if (exact < 62 * std::log(2.0)) {
      const double count = std::ceil(std::exp(exact) - 1e-9);
      logs[static_cast<std::size_t>(l)] = std::log(count);
    } else {
      logs[static_cast<std::size_t>(l)] = exact;
    }
  }
  return logs;
}

}  // namespace perc

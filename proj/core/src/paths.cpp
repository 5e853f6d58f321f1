#include "ifspec/paths.hpp"

#include <algorithm>
#include <cmath>

#include "ifspec/fourier.hpp"
#include "ifspec/rng.hpp"

namespace ifspec {

double InvariantSetSpec::distance(const DVec& x) const {
  switch (kind) {
    case Kind::full_space:
      return 0.0;
    case Kind::cycle: {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : cycle_points) {
        double d = 0;
        for (size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - p[i]));
        best = std::min(best, d);
      }
      return best;
    }
    case Kind::subspace_translate: {
      double d = 0;
      for (size_t i = subspace_rank; i < x.size(); ++i)
        d = std::max(d, std::abs(x[i] - translate[i - subspace_rank]));
      return d;
    }
  }
  return 0.0;
}

InvariantSetSpec InvariantSetSpec::from_cycle(const Cycle& c, double tol) {
  InvariantSetSpec s;
  s.kind = Kind::cycle;
  s.label = "cycle";
  for (const auto& p : c.points) {
    DVec dp(p.size());
    for (size_t i = 0; i < p.size(); ++i) dp[i] = to_double(p[i]);
    s.cycle_points.push_back(dp);
  }
  s.distance_tol = tol;
  return s;
}

InvariantSetSpec InvariantSetSpec::subspace(int rank, const DVec& y0, double tol) {
  InvariantSetSpec s;
  s.kind = Kind::subspace_translate;
  s.label = "subspace translate";
  s.subspace_rank = rank;
  s.translate = y0;
  s.distance_tol = tol;
  return s;
}

InvariantSetSpec InvariantSetSpec::everything() {
  InvariantSetSpec s;
  s.kind = Kind::full_space;
  s.label = "full space";
  s.distance_tol = 1.0;
  return s;
}

namespace {

// per-step transition weights W_B(sigma_l y) for all l at once:
// b.sigma_l(y) = (R^{-1}b).y + (R^{-1}b).l, so precompute u_b = R^{-1}b and
// the unit phases of the constants (R^{-1}b).l
struct TransitionKernel {
  int d, n;
  std::vector<DVec> u;                  // u_b rows
  Mat<Cplx> digit_phase;                // [b][l] = e^{2 pi i u_b . l}
  Mat<double> s_inv;                    // dual map matrix
  std::vector<DVec> l_digits;

  TransitionKernel(const HadamardTriple& t)
      : d(t.dim()), n(t.size()), digit_phase(t.size(), t.size()),
        s_inv(to_doubles(t.dual().inverse())) {
    for (int bi = 0; bi < n; ++bi) {
      QVec ub = t.scaling.inverse() * to_rational(t.b_digits[bi]);
      DVec ud(d);
      for (int i = 0; i < d; ++i) ud[i] = to_double(ub[i]);
      u.push_back(ud);
      for (int li = 0; li < n; ++li) {
        Rat dot(0);
        for (int i = 0; i < d; ++i) dot += ub[i] * Rat(t.l_digits[li][i]);
        digit_phase(bi, li) = unit_phase(dot);
      }
    }
    for (int li = 0; li < n; ++li) {
      DVec lv(d);
      for (int i = 0; i < d; ++i) lv[i] = to_double(t.l_digits[li][i]);
      l_digits.push_back(lv);
    }
  }

  // weights[l] = W_B(sigma_l y); returns the total (1 for Hadamard triples)
  double weights(const DVec& y, std::vector<double>& out) const {
    thread_local std::vector<Cplx> base;
    base.assign(n, Cplx{});
    for (int bi = 0; bi < n; ++bi) {
      double t_b = 0;
      for (int i = 0; i < d; ++i) t_b += u[bi][i] * y[i];
      double a = 2.0 * M_PI * (t_b - std::floor(t_b));
      base[bi] = Cplx{std::cos(a), std::sin(a)};
    }
    double total = 0;
    for (int li = 0; li < n; ++li) {
      Cplx acc{0.0, 0.0};
      for (int bi = 0; bi < n; ++bi) acc += base[bi] * digit_phase(bi, li);
      out[li] = std::norm(acc) / (double)(n * n);
      total += out[li];
    }
    return total;
  }

  void step(DVec& y, int li) const {
    thread_local DVec z;
    z.assign(d, 0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) z[i] += s_inv(i, j) * (y[j] + l_digits[li][j]);
    y = z;
  }
};

}  // namespace

PathEnsemble simulate_paths(const DVec& x, const HadamardTriple& t, int n_steps,
                            int n_paths, std::uint64_t seed,
                            const std::vector<InvariantSetSpec>& targets) {
  if (n_steps < 1 || n_paths < 1)
    fail(Errc::validation_error, "n_steps and n_paths must be >= 1");
  if (t.size() > 255) fail(Errc::validation_error, "digit sets larger than 255 unsupported");
  TransitionKernel kernel(t);
  PathEnsemble ens;
  ens.start = x;
  ens.n_steps = n_steps;
  ens.n_paths = n_paths;
  ens.seed = seed;
  ens.final_states.reserve(n_paths);
  ens.words.resize((size_t)n_paths * n_steps);
  ens.classification.assign(n_paths, -1);
  ens.tail_distances.assign(n_paths, 0.0);

  int tail_len = (n_steps + 3) / 4;
  std::vector<double> w(t.size());
  std::vector<double> tail_acc(targets.size());
  constexpr int kChunk = 4096;

  for (int base = 0; base < n_paths; base += kChunk) {
    Rng rng(derive_seed(seed, base / kChunk));
    int hi = std::min(n_paths, base + kChunk);
    for (int p = base; p < hi; ++p) {
      DVec y = x;
      std::fill(tail_acc.begin(), tail_acc.end(), 0.0);
      for (int s = 0; s < n_steps; ++s) {
        double total = kernel.weights(y, w);
        if (total < 1e-15)
          fail(Errc::degenerate_weights, "all transition weights vanish along a path");
        double u = rng.next_double() * total;
        int pick = 0;
        double acc = 0;
        for (int li = 0; li < (int)w.size(); ++li) {
          acc += w[li];
          if (u <= acc || li == (int)w.size() - 1) {
            pick = li;
            break;
          }
        }
        kernel.step(y, pick);
        ens.words[(size_t)p * n_steps + s] = (std::uint8_t)pick;
        if (s >= n_steps - tail_len)
          for (size_t f = 0; f < targets.size(); ++f) tail_acc[f] += targets[f].distance(y);
      }
      ens.final_states.push_back(y);
      for (size_t f = 0; f < targets.size(); ++f) {
        double mean_dist = tail_acc[f] / tail_len;
        if (mean_dist < targets[f].distance_tol) {
          ens.classification[p] = (int)f;
          ens.tail_distances[p] = mean_dist;
          break;
        }
      }
    }
  }
  return ens;
}

namespace {
HfEstimate estimate_from(const PathEnsemble& ens, int target_index) {
  HfEstimate e;
  e.n_paths = ens.n_paths;
  for (int c : ens.classification)
    if (c == target_index) ++e.classified;
  e.value = (double)e.classified / ens.n_paths;
  e.stderr_ = std::sqrt(e.value * (1.0 - e.value) / ens.n_paths);
  return e;
}
}  // namespace

HfEstimate estimate_hf(const DVec& x, const HadamardTriple& t, const InvariantSetSpec& f,
                       int n_steps, int n_paths, std::uint64_t seed) {
  PathEnsemble ens = simulate_paths(x, t, n_steps, n_paths, seed, {f});
  return estimate_from(ens, 0);
}

RuelleCheck ruelle_residual(const DVec& x, const HadamardTriple& t, const InvariantSetSpec& f,
                            int n_steps, int n_paths, std::uint64_t seed) {
  RuelleCheck out;
  out.at_x = estimate_hf(x, t, f, n_steps, n_paths, seed);
  int d = t.dim();
  Mat<double> s_inv = to_doubles(t.dual().inverse());
  double lhs = 0, var = out.at_x.stderr_ * out.at_x.stderr_;
  for (int li = 0; li < t.size(); ++li) {
    DVec y(d, 0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) y[i] += s_inv(i, j) * (x[j] + to_double(t.l_digits[li][j]));
    double wl = wb_eval(t.b_digits, y);
    HfEstimate hi = estimate_hf(y, t, f, n_steps, n_paths, derive_seed(seed, 1000 + li));
    out.weights.push_back(wl);
    out.at_images.push_back(hi);
    lhs += wl * hi.value;
    var += wl * wl * hi.stderr_ * hi.stderr_;
  }
  out.residual = std::abs(lhs - out.at_x.value);
  out.threshold = 3.0 * std::sqrt(var);
  out.pass = out.residual <= std::max(out.threshold, 1e-12);
  return out;
}

TotalMassCheck total_mass_check(const DVec& x, const HadamardTriple& t,
                                const std::vector<InvariantSetSpec>& targets, int n_steps,
                                int n_paths, std::uint64_t seed) {
  PathEnsemble ens = simulate_paths(x, t, n_steps, n_paths, seed, targets);
  TotalMassCheck out;
  int classified = 0;
  for (size_t f = 0; f < targets.size(); ++f) {
    HfEstimate e = estimate_from(ens, (int)f);
    classified += e.classified;
    out.per_target.push_back(e);
  }
  out.mass = (double)classified / n_paths;
  out.stderr_ = std::sqrt(out.mass * (1.0 - out.mass) / n_paths);
  out.unclassified_fraction = 1.0 - out.mass;
  out.pass = std::abs(out.mass - 1.0) <= std::max(3.0 * out.stderr_, 1e-12);
  return out;
}

}  // namespace ifspec

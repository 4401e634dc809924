#include "qetune/qcels.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "qetune/errors.hpp"

namespace qetune {

std::vector<double> to_vector(const QcelsHyperparams& hp) {
  return {hp.delta_t, static_cast<double>(hp.n_z),
          static_cast<double>(hp.ham_terms), hp.ham_cutoff, hp.alpha};
}

QcelsHyperparams qcels_from_vector(std::span<const double> v) {
  if (v.size() != 5) throw ShapeError("qcels hyperparam vector needs 5 fields");
  QcelsHyperparams hp;
  hp.delta_t = v[0];
  hp.n_z = static_cast<int>(std::llround(v[1]));
  hp.ham_terms = static_cast<int>(std::llround(v[2]));
  hp.ham_cutoff = v[3];
  hp.alpha = v[4];
  return hp;
}

namespace {

using Cd = std::complex<double>;
using Series = std::span<const Cd>;
using Times = std::span<const double>;

void check_series(Series zs, Times ts) {
  if (zs.size() != ts.size() || zs.size() < 2)
    throw std::invalid_argument("series and times must match, length >= 2");
  if (ts[0] != 0.0) throw std::invalid_argument("ts[0] must be 0");
}

bool is_constant(Series zs) {
  for (std::size_t n = 1; n < zs.size(); ++n)
    if (std::abs(zs[n] - zs[0]) > 1e-13) return false;
  return true;
}

std::vector<Cd> mode(double theta, Times ts) {
  std::vector<Cd> e(ts.size());
  for (std::size_t n = 0; n < ts.size(); ++n)
    e[n] = std::polar(1.0, -theta * ts[n]);
  return e;
}

double residual_of(Series zs, const std::vector<Cd>& fit) {
  double r = 0.0;
  for (std::size_t n = 0; n < zs.size(); ++n) r += std::norm(fit[n] - zs[n]);
  return r;
}

// --- single-frequency profile ---------------------------------------------
// For fixed theta the model r (e^{-i theta t} - 1) + 1 is linear in the real
// amplitude r; the optimum is the projection clamped to [0, 1].

struct ProfilePoint {
  double r = 0.0;
  double residual = 0.0;
};

ProfilePoint profile_single(double theta, Series zs, Times ts) {
  double num = 0.0, den = 0.0;
  std::vector<Cd> e = mode(theta, ts);
  for (std::size_t n = 0; n < zs.size(); ++n) {
    Cd a = e[n] - 1.0;
    Cd b = zs[n] - 1.0;
    num += (std::conj(a) * b).real();
    den += std::norm(a);
  }
  double r = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
  double res = 0.0;
  for (std::size_t n = 0; n < zs.size(); ++n)
    res += std::norm(r * (e[n] - 1.0) + 1.0 - zs[n]);
  return {r, res};
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// --- constrained two-amplitude least squares --------------------------------
// minimize || r1 u + r2 v - w ||^2 over the polygon
//   r1 >= 0, r2 >= 0, r1 + r2 <= 1, r2 <= r2_cap.
// Convex QP over a polygon: the optimum is the unconstrained solution when
// feasible, otherwise the best of the edge/corner minimizers.

struct AmpFit {
  double r1 = 0.0, r2 = 0.0;
  double value = 0.0;  // objective at (r1, r2)
};

AmpFit amp_lsq(const std::vector<Cd>& u, const std::vector<Cd>& v,
               const std::vector<Cd>& w, double r2_cap) {
  double g11 = 0.0, g12 = 0.0, g22 = 0.0, d1 = 0.0, d2 = 0.0, c = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) {
    g11 += std::norm(u[n]);
    g22 += std::norm(v[n]);
    g12 += (std::conj(u[n]) * v[n]).real();
    d1 += (std::conj(u[n]) * w[n]).real();
    d2 += (std::conj(v[n]) * w[n]).real();
    c += std::norm(w[n]);
  }
  auto value = [&](double r1, double r2) {
    return g11 * r1 * r1 + 2.0 * g12 * r1 * r2 + g22 * r2 * r2 -
           2.0 * d1 * r1 - 2.0 * d2 * r2 + c;
  };
  const double cap2 = std::min(1.0, std::max(0.0, r2_cap));
  auto feasible = [&](double r1, double r2) {
    return r1 >= -1e-12 && r2 >= -1e-12 && r1 + r2 <= 1.0 + 1e-12 &&
           r2 <= cap2 + 1e-12;
  };
  std::vector<std::pair<double, double>> cands;
  double det = g11 * g22 - g12 * g12;
  if (std::abs(det) > 1e-30) {
    double r1 = (d1 * g22 - d2 * g12) / det;
    double r2 = (d2 * g11 - d1 * g12) / det;
    if (feasible(r1, r2)) cands.emplace_back(r1, r2);
  }
  // r2 = 0 edge
  if (g11 > 0.0) cands.emplace_back(std::clamp(d1 / g11, 0.0, 1.0), 0.0);
  // r1 = 0 edge
  if (g22 > 0.0) cands.emplace_back(0.0, std::clamp(d2 / g22, 0.0, cap2));
  // r2 = cap2 edge
  if (g11 > 0.0)
    cands.emplace_back(
        std::clamp((d1 - g12 * cap2) / g11, 0.0, 1.0 - cap2), cap2);
  // r1 + r2 = 1 edge, parameterized by r1 in [1 - cap2, 1]
  {
    double denom = g11 - 2.0 * g12 + g22;
    double r1 = denom > 1e-30
                    ? (g22 - g12 + d1 - d2) / denom
                    : 1.0;
    r1 = std::clamp(r1, 1.0 - cap2, 1.0);
    cands.emplace_back(r1, 1.0 - r1);
  }
  cands.emplace_back(0.0, 0.0);
  AmpFit best;
  best.value = std::numeric_limits<double>::infinity();
  for (auto [r1, r2] : cands) {
    r1 = std::clamp(r1, 0.0, 1.0);
    r2 = std::clamp(r2, 0.0, std::min(cap2, 1.0 - r1));
    double f = value(r1, r2);
    if (f < best.value) best = {r1, r2, f};
  }
  return best;
}

// --- Nelder-Mead over the frequency coordinates ----------------------------

using Point = std::vector<double>;

Point nelder_mead(const std::function<double(const Point&)>& f, Point start,
                  const Point& step, int max_iter) {
  const std::size_t d = start.size();
  std::vector<std::pair<double, Point>> simplex;
  simplex.reserve(d + 1);
  simplex.emplace_back(f(start), start);
  for (std::size_t k = 0; k < d; ++k) {
    Point p = start;
    p[k] += step[k];
    simplex.emplace_back(f(p), p);
  }
  auto order = [&] {
    std::sort(simplex.begin(), simplex.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  };
  order();
  for (int it = 0; it < max_iter; ++it) {
    if (simplex.back().first - simplex.front().first < 1e-14) break;
    Point centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k)
        centroid[k] += simplex[i].second[k] / static_cast<double>(d);
    const Point& worst = simplex.back().second;
    auto blend = [&](double coef) {
      Point p(d);
      for (std::size_t k = 0; k < d; ++k)
        p[k] = centroid[k] + coef * (centroid[k] - worst[k]);
      return p;
    };
    Point refl = blend(1.0);
    double f_refl = f(refl);
    if (f_refl < simplex.front().first) {
      Point exp_p = blend(2.0);
      double f_exp = f(exp_p);
      simplex.back() = f_exp < f_refl ? std::make_pair(f_exp, exp_p)
                                      : std::make_pair(f_refl, refl);
    } else if (f_refl < simplex[d - 1].first) {
      simplex.back() = {f_refl, refl};
    } else {
      Point contr = blend(f_refl < simplex.back().first ? 0.5 : -0.5);
      double f_contr = f(contr);
      if (f_contr < std::min(f_refl, simplex.back().first)) {
        simplex.back() = {f_contr, contr};
      } else {
        for (std::size_t i = 1; i <= d; ++i) {
          for (std::size_t k = 0; k < d; ++k)
            simplex[i].second[k] =
                0.5 * (simplex[i].second[k] + simplex[0].second[k]);
          simplex[i].first = f(simplex[i].second);
        }
      }
    }
    order();
  }
  return simplex.front().second;
}

// Multi-start simplex search with a shrunken-simplex restart and a final
// coordinate-wise golden polish; the per-coordinate profiles are smooth, so
// the polish reliably clears simplex stagnation.
Point refine_frequencies(const std::function<double(const Point&)>& f,
                         const std::vector<Point>& starts, const Point& step,
                         const Point& polish_width, int max_iter) {
  Point best;
  double best_val = std::numeric_limits<double>::infinity();
  for (const auto& s0 : starts) {
    Point p = nelder_mead(f, s0, step, max_iter);
    double v = f(p);
    if (v < best_val) {
      best_val = v;
      best = p;
    }
  }
  Point shrunk = step;
  for (double& s : shrunk) s *= 0.2;
  Point p = nelder_mead(f, best, shrunk, max_iter);
  if (f(p) < best_val) best = p;

  for (int round = 0; round < 3; ++round) {
    for (std::size_t k = 0; k < best.size(); ++k) {
      double w = polish_width[k];
      Point probe = best;
      double xk = golden_min(
          [&](double x) {
            probe[k] = x;
            return f(probe);
          },
          best[k] - w, best[k] + w, 1e-13 * std::max(1.0, std::abs(best[k])));
      probe[k] = xk;
      if (f(probe) <= f(best)) best = probe;
    }
  }
  return best;
}

// Model evaluators shared by the stage objectives. Stage 2 keeps the
// constant remainder; stage 3 attaches the remainder to a third frequency.

std::vector<Cd> stage2_fit_values(double r1, double th1, double r2, double th2,
                                  Times ts) {
  std::vector<Cd> f(ts.size());
  for (std::size_t n = 0; n < ts.size(); ++n)
    f[n] = r1 * std::polar(1.0, -th1 * ts[n]) +
           r2 * std::polar(1.0, -th2 * ts[n]) + (1.0 - r1 - r2);
  return f;
}

std::vector<Cd> stage3_fit_values(double r1, double th1, double r2, double th2,
                                  double th3, Times ts) {
  std::vector<Cd> f(ts.size());
  for (std::size_t n = 0; n < ts.size(); ++n)
    f[n] = r1 * std::polar(1.0, -th1 * ts[n]) +
           r2 * std::polar(1.0, -th2 * ts[n]) +
           (1.0 - r1 - r2) * std::polar(1.0, -th3 * ts[n]);
  return f;
}

struct StageEval {
  AmpFit amps;
  double residual = 0.0;
};

StageEval eval_stage2(double th1, double th2, Series zs, Times ts,
                      double r2_cap) {
  std::vector<Cd> u = mode(th1, ts), v = mode(th2, ts), w(ts.size());
  for (auto& e : u) e -= 1.0;
  for (auto& e : v) e -= 1.0;
  for (std::size_t n = 0; n < ts.size(); ++n) w[n] = zs[n] - 1.0;
  StageEval out;
  out.amps = amp_lsq(u, v, w, r2_cap);
  out.residual = out.amps.value;
  return out;
}

StageEval eval_stage3(double th1, double th2, double th3, Series zs, Times ts,
                      double r2_cap) {
  std::vector<Cd> e1 = mode(th1, ts), e2 = mode(th2, ts), e3 = mode(th3, ts);
  std::vector<Cd> u(ts.size()), v(ts.size()), w(ts.size());
  for (std::size_t n = 0; n < ts.size(); ++n) {
    u[n] = e1[n] - e3[n];
    v[n] = e2[n] - e3[n];
    w[n] = zs[n] - e3[n];
  }
  StageEval out;
  out.amps = amp_lsq(u, v, w, r2_cap);
  out.residual = out.amps.value;
  return out;
}

}  // namespace

FitResult fit_single(Series zs, Times ts) {
  check_series(zs, ts);
  FitResult out;
  out.stage = 1;
  if (is_constant(zs)) {
    out.degenerate = true;
    out.amplitudes = {0.0};
    out.frequencies = {0.0};
    out.residual = residual_of(zs, std::vector<Cd>(zs.size(), Cd{1.0, 0.0}));
    return out;
  }
  const double dt = ts[1] - ts[0];
  const double window = M_PI / dt;  // Nyquist bound on recoverable theta
  const int grid_n = std::max<int>(256, 32 * static_cast<int>(ts.size()));
  const double spacing = 2.0 * window / grid_n;
  std::vector<double> grid_res(grid_n + 1);
  for (int i = 0; i <= grid_n; ++i)
    grid_res[i] = profile_single(-window + i * spacing, zs, ts).residual;

  // Collect local minima on the grid, keep the best 8 as restart points.
  std::vector<std::pair<double, int>> minima;
  for (int i = 0; i <= grid_n; ++i) {
    bool left_ok = i == 0 || grid_res[i] <= grid_res[i - 1];
    bool right_ok = i == grid_n || grid_res[i] <= grid_res[i + 1];
    if (left_ok && right_ok) minima.emplace_back(grid_res[i], i);
  }
  std::sort(minima.begin(), minima.end());
  if (minima.size() > 8) minima.resize(8);

  double best_theta = 0.0;
  double best_res = std::numeric_limits<double>::infinity();
  for (const auto& [res, idx] : minima) {
    double lo = std::max(-window, -window + (idx - 1) * spacing);
    double hi = std::min(window, -window + (idx + 1) * spacing);
    double theta = golden_min(
        [&](double th) { return profile_single(th, zs, ts).residual; }, lo, hi,
        1e-12 * std::max(1.0, window));
    double r = profile_single(theta, zs, ts).residual;
    if (r < best_res) {
      best_res = r;
      best_theta = theta;
    }
  }
  ProfilePoint p = profile_single(best_theta, zs, ts);
  out.amplitudes = {p.r};
  out.frequencies = {best_theta};
  out.residual = p.residual;
  return out;
}

SequentialFit fit_stages(Series zs, Times ts, double alpha) {
  check_series(zs, ts);
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must be in (0, 1]");
  SequentialFit seq;
  seq.stage1 = fit_single(zs, ts);
  if (seq.stage1.degenerate) {
    // Stage-s arity is preserved; the stage-3 model degenerates to the
    // constant 1 (amplitudes 0, 0, 1).
    seq.stage2 = {2, {0.0, 0.0}, {0.0, 0.0}, seq.stage1.residual, true};
    seq.stage3 = {3, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}, seq.stage1.residual,
                  true};
    return seq;
  }

  const double dt = ts[1] - ts[0];
  const double window = M_PI / dt;
  const double th1_seed = seq.stage1.frequencies[0];
  const double r1_seed = seq.stage1.amplitudes[0];
  const double bound = alpha * std::abs(th1_seed);  // correction window
  const double r2_cap = r1_seed;
  const double t_span = ts.back() - ts.front();
  const double th1_halfwidth =
      std::min(window, 1.5 * 2.0 * M_PI / std::max(t_span, 1e-12));
  auto clamp_th1 = [&](double th) {
    return std::clamp(th, std::max(-window, th1_seed - th1_halfwidth),
                      std::min(window, th1_seed + th1_halfwidth));
  };
  auto clamp_corr = [&](double th) { return std::clamp(th, -bound, bound); };

  // ---- stage 2: coarse (th1, th2) grid, then simplex polish ----
  {
    auto objective = [&](const Point& p) {
      return eval_stage2(clamp_th1(p[0]), clamp_corr(p[1]), zs, ts, r2_cap)
          .residual;
    };
    std::vector<Point> starts;
    starts.push_back({th1_seed, 0.0});
    const int n1 = 49, n2 = 65;
    const double spacing1 = 2.0 * th1_halfwidth / (n1 - 1);
    const double spacing2 = 2.0 * bound / (n2 - 1);
    std::vector<std::pair<double, Point>> cells;
    for (int i = 0; i < n1; ++i) {
      double th1 = clamp_th1(th1_seed + th1_halfwidth * (2.0 * i / (n1 - 1) - 1.0));
      for (int j = 0; j < n2; ++j) {
        double th2 = bound * (2.0 * j / (n2 - 1) - 1.0);
        cells.emplace_back(objective({th1, th2}), Point{th1, th2});
      }
    }
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < cells.size() && starts.size() < 8; ++i)
      starts.push_back(cells[i].second);

    Point step = {0.05 * th1_halfwidth + 1e-9, 0.05 * bound + 1e-9};
    Point polish = {1.5 * spacing1 + 1e-9, 1.5 * spacing2 + 1e-9};
    Point best_p = refine_frequencies(objective, starts, step, polish, 300);
    double th1 = clamp_th1(best_p[0]), th2 = clamp_corr(best_p[1]);
    StageEval ev = eval_stage2(th1, th2, zs, ts, r2_cap);
    FitResult st2;
    st2.stage = 2;
    st2.amplitudes = {ev.amps.r1, ev.amps.r2};
    st2.frequencies = {th1, th2};
    st2.residual = residual_of(
        zs, stage2_fit_values(ev.amps.r1, th1, ev.amps.r2, th2, ts));
    // Keep the seed when refinement did not improve on stage 1.
    if (st2.residual > seq.stage1.residual) {
      st2.amplitudes = {r1_seed, 0.0};
      st2.frequencies = {th1_seed, 0.0};
      st2.residual = seq.stage1.residual;
    }
    seq.stage2 = st2;
  }

  // ---- stage 3: seeded from stage 2, third frequency on the remainder ----
  {
    const double th1_s2 = seq.stage2.frequencies[0];
    const double th2_s2 = seq.stage2.frequencies[1];
    auto objective = [&](const Point& p) {
      return eval_stage3(clamp_th1(p[0]), clamp_corr(p[1]), clamp_corr(p[2]),
                         zs, ts, r2_cap)
          .residual;
    };
    std::vector<Point> starts;
    starts.push_back({th1_s2, th2_s2, 0.0});
    // coarse (th1, th2, th3) sweep seeded near the stage-2 solution
    const int n1 = 9, n2 = 21, n3 = 21;
    const double spacing2 = 2.0 * bound / (n2 - 1);
    std::vector<std::pair<double, Point>> cells;
    for (int i = 0; i < n1; ++i) {
      double th1 =
          clamp_th1(th1_s2 + 0.5 * th1_halfwidth * (2.0 * i / (n1 - 1) - 1.0));
      for (int j = 0; j < n2; ++j) {
        double th2 = bound * (2.0 * j / (n2 - 1) - 1.0);
        for (int k3 = 0; k3 < n3; ++k3) {
          double th3 = bound * (2.0 * k3 / (n3 - 1) - 1.0);
          cells.emplace_back(objective({th1, th2, th3}), Point{th1, th2, th3});
        }
      }
    }
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < cells.size() && starts.size() < 8; ++i)
      starts.push_back(cells[i].second);

    Point step = {0.05 * th1_halfwidth + 1e-9, 0.05 * bound + 1e-9,
                  0.05 * bound + 1e-9};
    Point polish = {1.5 * spacing2 + 1e-9, 1.5 * spacing2 + 1e-9,
                    1.5 * spacing2 + 1e-9};
    Point best_p = refine_frequencies(objective, starts, step, polish, 300);
    double th1 = clamp_th1(best_p[0]);
    double th2 = clamp_corr(best_p[1]);
    double th3 = clamp_corr(best_p[2]);
    StageEval ev = eval_stage3(th1, th2, th3, zs, ts, r2_cap);
    FitResult st3;
    st3.stage = 3;
    st3.amplitudes = {ev.amps.r1, ev.amps.r2,
                      1.0 - ev.amps.r1 - ev.amps.r2};
    st3.frequencies = {th1, th2, th3};
    st3.residual = residual_of(zs, stage3_fit_values(ev.amps.r1, th1,
                                                     ev.amps.r2, th2, th3, ts));
    if (st3.residual > seq.stage2.residual) {
      // Stage-2 model embeds exactly as stage 3 with theta3 = 0.
      double r1 = seq.stage2.amplitudes[0], r2 = seq.stage2.amplitudes[1];
      st3.amplitudes = {r1, r2, 1.0 - r1 - r2};
      st3.frequencies = {seq.stage2.frequencies[0], seq.stage2.frequencies[1],
                         0.0};
      st3.residual = seq.stage2.residual;
    }
    seq.stage3 = st3;
  }
  return seq;
}

FitResult fit_sequential(Series zs, Times ts, double alpha) {
  return fit_stages(zs, ts, alpha).stage3;
}

namespace {

void validate(const QcelsHyperparams& hp) {
  if (!(hp.delta_t > 0.0)) throw std::invalid_argument("delta_t must be > 0");
  if (hp.n_z < 2) throw std::invalid_argument("n_Z must be >= 2");
  if (hp.ham_terms < 1) throw std::invalid_argument("ham_terms must be >= 1");
  if (hp.ham_cutoff < 0.0)
    throw std::invalid_argument("ham_cutoff must be >= 0");
  if (!(hp.alpha > 0.0 && hp.alpha <= 1.0))
    throw std::invalid_argument("alpha must be in (0, 1]");
}

}  // namespace

EnergyEstimate qcels_solve(const PauliHamiltonian& h,
                           const QcelsHyperparams& hp, ShotBudget& budget,
                           bool exact_mode, std::uint64_t rng_seed) {
  validate(hp);
  auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t used0 = budget.used();

  PauliHamiltonian work = compress(h, hp.ham_cutoff,
                                   static_cast<std::size_t>(hp.ham_terms));
  Statevector ref = hartree_fock_reference(work);

  std::uint64_t shots_per_point = 0;
  if (!exact_mode) {
    std::uint64_t denom = 2ull * static_cast<std::uint64_t>(hp.n_z - 1);
    shots_per_point = budget.remaining() / denom;
    if (shots_per_point == 0)
      throw BudgetError("shot budget too small for any sampling: " +
                        std::to_string(budget.remaining()) + " remaining");
  }

  std::vector<std::complex<double>> zs = expectation_series(
      ref, work, hp.delta_t, hp.n_z, shots_per_point, budget, rng_seed);
  std::vector<double> ts(hp.n_z);
  for (int n = 0; n < hp.n_z; ++n) ts[n] = n * hp.delta_t;

  SequentialFit fit = fit_stages(zs, ts, hp.alpha);

  EnergyEstimate est;
  if (fit.stage3.degenerate) {
    // Constant series carries no frequency; report the reference-state
    // diagonal energy instead of aborting.
    std::uint64_t ref_index = 0;
    for (std::uint64_t i = 0; i < ref.dim(); ++i)
      if (std::norm(ref.amp(i)) > 0.5) ref_index = i;
    est.value = diagonal_expectation(work, ref_index);
    est.degenerate = true;
  } else {
    auto max_it = std::max_element(fit.stage3.amplitudes.begin(),
                                   fit.stage3.amplitudes.end());
    est.value = fit.stage3.frequencies[static_cast<std::size_t>(
        max_it - fit.stage3.amplitudes.begin())];
  }
  est.shots_used = budget.used() - used0;
  est.iterations = static_cast<std::uint64_t>(hp.n_z);
  est.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return est;
}

}  // namespace qetune

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "generators.hpp"
#include "hypersens/classical_model.hpp"
#include "hypersens/grouping_analysis.hpp"
#include "hypersens/haar_validation.hpp"
#include "hypersens/kicked_top.hpp"
#include "hypersens/pairwise_angles.hpp"
#include "hypersens/random_vector_theory.hpp"
#include "oracles.hpp"

using namespace hypersens;
using hypersens::testing::Gen;
using hypersens::testing::case_seed;

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool sandwich_holds(const std::vector<SweepPoint>& sweep, double hs, double tol, double* worst) {
  bool ok = true;
  for (const auto& p : sweep) {
    const double low = p.delta_H - hs;                  // <= 0
    const double high = hs - (p.delta_H + p.delta_I);  // <= 0
    *worst = std::max({*worst, low, high});
    ok = ok && low <= tol && high <= tol;
  }
  return ok;
}

// Full-scale kicked-top run (J = 511.5, n = 12) with the quantities several criteria share.
struct TopRun {
  double theta = 0.0, phi_az = 0.0, lyapunov = 0.0;
  std::vector<double> entropy_per_step;  // index t = 0 .. n
  double delta_H_S = 0.0;
  std::size_t n_d = 0;
  std::vector<SweepPoint> sweep;
  double mass_below_pi_4 = 0.0;
  // histories j and j + N/2 differ only in the first kick
  double first_step_pair_lo = 0.0, first_step_pair_hi = 0.0;
  double seconds = 0.0;
};

std::vector<double> sweep_grid() {
  std::vector<double> phis = uniform_phi_grid(kDefaultSweepPoints);
  phis.push_back(kPi / 4);
  std::sort(phis.begin(), phis.end());
  return phis;
}

TopRun full_run(const ResolvedInitialState& init) {
  const auto start = Clock::now();
  TopRun run;
  run.theta = init.theta;
  run.phi_az = init.phi_az;
  run.lyapunov = init.lyapunov;

  TopParams p;
  p.spin = Spin(1023);  // J = 511.5
  p.k = 3.0;
  p.g = 0.003;
  p.steps = 12;
  run.entropy_per_step.push_back(0.0);
  EvolveOptions opts;
  opts.on_level = [&](int, const ComplexMatrix& v) {
    const std::vector<double> q(static_cast<std::size_t>(v.cols()), 1.0 / static_cast<double>(v.cols()));
    const Eigen::VectorXd s = ensemble_spectrum(v, q);
    run.entropy_per_step.push_back(entropy_from_eigenvalues(std::span<const double>(s.data(), s.size())));
  };
  const VectorEnsemble e = evolve_histories(InitialState::coherent(init.theta, init.phi_az), p, opts);

  const Eigen::VectorXd s = ensemble_spectrum(e);
  const std::span<const double> spec(s.data(), s.size());
  run.delta_H_S = entropy_from_eigenvalues(spec);
  run.n_d = explored_dimensions(spec, e.dim(), 0.02);

  const auto angles = PairwiseAngles::compute(e.vectors());
  std::size_t below = 0;
  for (double a : angles.packed()) below += a < kPi / 4 ? 1 : 0;
  run.mass_below_pi_4 = static_cast<double>(below) / static_cast<double>(angles.packed().size());
  run.first_step_pair_lo = kPi;
  const Index half = e.size() / 2;
  for (Index j = 0; j < half; ++j) {
    run.first_step_pair_lo = std::min(run.first_step_pair_lo, angles(j, j + half));
    run.first_step_pair_hi = std::max(run.first_step_pair_hi, angles(j, j + half));
  }

  const auto grid = sweep_grid();
  run.sweep = resolution_sweep(e, angles, grid);
  run.seconds = seconds_since(start);
  return run;
}

const SweepPoint& at_phi(const TopRun& run, double phi) {
  return *std::min_element(run.sweep.begin(), run.sweep.end(), [phi](const auto& a, const auto& b) {
    return std::abs(a.phi - phi) < std::abs(b.phi - phi);
  });
}

// ---------------------------------------------------------------------------

Verdict criterion_1(const ResolvedInitialState& chaotic) {
  const auto start = Clock::now();
  TopParams p;
  p.spin = Spin(51);  // J = 25.5, D = 52
  p.k = 3.0;
  p.g = 0.003;
  p.steps = 10;
  const auto e = evolve_histories(InitialState::coherent(chaotic.theta, chaotic.phi_az), p);
  double worst = 0.0;
  for (Index j = 0; j < e.size(); ++j) worst = std::max(worst, std::abs(e.vectors().col(j).norm() - 1.0));
  const double t = seconds_since(start);
  Verdict v;
  v.pass = e.size() == 1024 && e.dim() == 52 && worst < 1e-10 && t < 10.0;
  v.detail = fmt("N=%lld D=%lld max|norm-1|=%.2e (< 1e-10), %.2f s (< 10 s)", static_cast<long long>(e.size()),
                 static_cast<long long>(e.dim()), worst, t);
  return v;
}

Verdict criterion_2(const std::vector<const TopRun*>& full_runs) {
  constexpr double kTol = 1e-9;
  constexpr int kConfigs = 500;
  double worst = -1.0;
  int failures = 0, haar = 0, top = 0;
  for (int c = 0; c < kConfigs; ++c) {
    Gen gen(case_seed(9002, c));
    std::vector<double> phis = uniform_phi_grid(24);
    for (int i = 0; i < 6; ++i) phis.push_back(gen.real(0.0, kPi / 2));
    std::sort(phis.begin(), phis.end());
    std::optional<VectorEnsemble> e;
    if (c % 2 == 0) {
      const Index n = gen.integer(2, 96);
      const Index d = gen.integer(2, 24);
      const double spread = gen.coin() ? 0.0 : gen.real(0.05, 1.0);
      e.emplace(gen.ensemble(n, d, gen.coin(), spread, gen.integer(1, 5)));
      ++haar;
    } else {
      TopParams p;
      p.spin = Spin(gen.integer(1, 15));
      p.k = gen.real(0.5, 6.0);
      p.g = gen.real(0.001, 0.3);
      p.steps = gen.integer(1, 6);
      e.emplace(evolve_histories(InitialState::coherent(gen.real(0.0, kPi), gen.real(0.0, 2 * kPi)), p));
      ++top;
    }
    const auto sweep = resolution_sweep(*e, phis);
    if (!sandwich_holds(sweep, ensemble_entropy(*e), kTol, &worst)) ++failures;
  }
  for (const TopRun* r : full_runs) {
    if (!sandwich_holds(r->sweep, r->delta_H_S, kTol, &worst)) ++failures;
  }
  Verdict v;
  v.pass = failures == 0;
  v.detail = fmt("%d Haar/clustered + %d kicked-top + %zu full-scale configurations, %d violations, worst slack %.2e "
                 "(tol 1e-9)",
                 haar, top, full_runs.size(), failures, worst);
  return v;
}

Verdict criterion_3() {
  const auto start = Clock::now();
  double worst_comp = 0.0, worst_slope = 0.0;
  for (double d : {2.0, 4.0, 16.0, 64.0, 1024.0}) {
    for (int i = 1; i <= 200; ++i) {
      const double phi = kPi / 2 * i / 201.0;
      worst_comp = std::max(worst_comp, std::abs(tradeoff_curve(d, sphere_information(d, phi)) - sphere_entropy(d, phi)));
      // ~eps^(1/5) of the distance to the boundary balances truncation against
      // cancellation in H near log2 D
      const double h = 1e-3 * std::min(phi, kPi / 2 - phi);
      const double di = oracle::derivative([d](double x) { return sphere_information(d, x); }, phi, h);
      const double dh = oracle::derivative([d](double x) { return sphere_entropy(d, x); }, phi, h);
      const double fd = di / dh;
      worst_slope = std::max(worst_slope, std::abs(marginal_tradeoff(d, phi) - fd) / std::abs(fd));
    }
  }
  const double t = seconds_since(start);
  Verdict v;
  v.pass = worst_comp <= 1e-12 && worst_slope <= 1e-4 && t < 1.0;
  v.detail = fmt("composition max error %.2e (<= 1e-12), marginal max rel error %.2e (<= 1e-4), %.3f s (< 1 s)",
                 worst_comp, worst_slope, t);
  return v;
}

Verdict criterion_4() {
  const auto start = Clock::now();
  HaarValidationOptions opts;
  opts.dim = 16;
  opts.samples = 2000;
  const auto r = validate_haar(opts);
  const double t = seconds_since(start);
  Verdict v;
  v.pass = r.passed && (r.p_value > 0.01 || r.l1_distance < 0.05) && t < 60.0;
  v.detail = fmt("chi2=%.2f dof=%d p=%.3f (> 0.01) L1=%.4f (< 0.05), %.2f s (< 60 s)", r.chi_square,
                 r.degrees_of_freedom, r.p_value, r.l1_distance, t);
  return v;
}

// First sweep angle at which Delta I equals `bits` exactly.
std::optional<double> onset(const TopRun& run, double bits) {
  for (const auto& p : run.sweep) {
    if (std::abs(p.delta_I - bits) < 1e-9) return p.phi;
  }
  return std::nullopt;
}

Verdict criterion_5(const TopRun& run) {
  const double small_phi = run.sweep[1].phi;
  const bool twelve = std::abs(run.sweep[1].delta_I - 12.0) < 1e-9;
  const auto near = [](std::optional<double> phi, double target) {
    return phi && *phi >= 0.5 * target && *phi <= 1.5 * target;
  };
  const auto on11 = onset(run, 11.0);
  const auto on10 = onset(run, 10.0);
  const double above = 1.0 - run.mass_below_pi_4;
  const bool large = above >= 0.85;
  const bool nd = run.n_d >= 35 && run.n_d <= 60;
  Verdict v;
  v.pass = twelve && near(on11, kPi / 16) && near(on10, kPi / 8) && large && nd && run.seconds < 1800.0;
  v.detail = fmt("dI(%.3f)=%.6f; drop to 11 bits at %.3f (window [%.3f, %.3f]); drop to 10 bits at %.3f "
                 "(window [%.3f, %.3f]); first-kick sibling angles [%.5f, %.5f]; pair mass above pi/4 %.3f "
                 "(>= 0.85); n_d=%zu (35..60); %.0f s (< 1800 s)",
                 small_phi, run.sweep[1].delta_I, on11.value_or(NAN), kPi / 32, 3 * kPi / 32, on10.value_or(NAN),
                 kPi / 16, 3 * kPi / 16, run.first_step_pair_lo, run.first_step_pair_hi, above, run.n_d, run.seconds);
  return v;
}

Verdict criterion_6(const TopRun& regular, const TopRun& chaotic) {
  const double reg = at_phi(regular, kPi / 4).delta_I;
  const double cha = at_phi(chaotic, kPi / 4).delta_I;
  Verdict v;
  v.pass = regular.n_d >= 1 && regular.n_d <= 3 && regular.mass_below_pi_4 >= 0.85 && reg < 0.5 * cha;
  v.detail = fmt("n_d=%zu (1..3); pair mass below pi/4 %.3f (>= 0.85); dI(pi/4) regular %.3f vs chaotic %.3f "
                 "(< half)",
                 regular.n_d, regular.mass_below_pi_4, reg, cha);
  return v;
}

Verdict criterion_7(const TopRun& run) {
  const double cap = 0.8 * std::log2(1024.0);
  std::vector<double> t, h;
  for (std::size_t i = 0; i < run.entropy_per_step.size(); ++i) {
    if (run.entropy_per_step[i] < cap) {
      t.push_back(static_cast<double>(i));
      h.push_back(run.entropy_per_step[i]);
    }
  }
  const double n = static_cast<double>(t.size());
  double st = 0, sh = 0, stt = 0, sth = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sh += h[i];
    stt += t[i] * t[i];
    sth += t[i] * h[i];
  }
  const double kappa = (n * sth - st * sh) / (n * stt - st * st);
  const double b = (sh - kappa * st) / n;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    ss_res += std::pow(h[i] - (kappa * t[i] + b), 2);
    ss_tot += std::pow(h[i] - sh / n, 2);
  }
  const double r2 = 1.0 - ss_res / ss_tot;
  Verdict v;
  v.pass = t.size() >= 3 && r2 > 0.9 && kappa > 0.0;
  v.detail = fmt("%zu steps with dH_S < %.1f bits, kappa=%.4f bits/step (> 0), R^2=%.4f (> 0.9)", t.size(), cap, kappa,
                 r2);
  return v;
}

// phi with sphere_entropy(d, phi) = h, by bisection.
double phi_for_entropy(double d, double h) {
  double lo = 0.0, hi = kPi / 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (sphere_entropy(d, mid) < h ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Verdict criterion_8() {
  constexpr int kEnsembles = 80;
  int matched = 0, skipped = 0, failures = 0;
  double worst = 1e300;
  // diagnostic only: points whose spheres hold on average >= 4 D sample vectors
  double worst_filled = 1e300;
  for (int c = 0; c < kEnsembles; ++c) {
    Gen gen(case_seed(9008, c));
    const Index d = gen.integer(2, 32);
    const Index n = gen.integer(8, 512);
    const auto e = haar_ensemble(d, n, case_seed(9108, c));
    const auto sweep = resolution_sweep(e, uniform_phi_grid(40));
    const double cap = std::log2(static_cast<double>(n));
    for (const auto& p : sweep) {
      if (p.delta_H <= 0.0) {
        ++skipped;
        continue;
      }
      const double theory = sphere_information(static_cast<double>(d), phi_for_entropy(static_cast<double>(d), p.delta_H));
      // A sample of N vectors cannot carry more than log2 N bits.
      if (theory > cap) {
        ++skipped;
        continue;
      }
      ++matched;
      const double margin = p.delta_I - (theory - 1.0);
      worst = std::min(worst, margin);
      if (theory <= std::log2(static_cast<double>(n) / (4.0 * static_cast<double>(d)))) {
        worst_filled = std::min(worst_filled, margin);
      }
      if (margin < 0.0) ++failures;
    }
  }
  Verdict v;
  v.pass = failures == 0 && matched > 0;
  v.detail = fmt("%d Haar ensembles (D <= 32, N <= 512): %d matched points, %d outside the resolvable range, "
                 "%d below theory - 1 bit, smallest margin %.3f bits (%.3f where spheres hold >= 4D vectors)",
                 kEnsembles, matched, skipped, failures, worst, worst_filled);
  return v;
}

bool matches_labels(const Grouping& g, const std::vector<int>& labels) {
  std::size_t assigned = 0;
  for (std::size_t r = 0; r < g.groups.size(); ++r) {
    for (Index j : g.groups[r].members) {
      if (labels[static_cast<std::size_t>(j)] != static_cast<int>(r)) return false;
      ++assigned;
    }
  }
  return assigned == labels.size() &&
         g.groups.size() == static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end()) + 1);
}

Verdict criterion_9() {
  constexpr int kInstances = 200;
  int mismatches = 0;
  for (int c = 0; c < kInstances; ++c) {
    Gen gen(case_seed(9009, c));
    const Index n = gen.integer(1, 64);
    const Index d = gen.integer(2, 16);
    const double spread = gen.coin() ? 0.0 : gen.real(0.05, 1.0);
    const auto e = gen.ensemble(n, d, gen.coin(), spread, gen.integer(1, 6));
    const double phi = gen.real(0.0, kPi / 2);
    const auto labels = oracle::greedy_labels(e.vectors(), phi);
    const auto streamed = greedy_group(e, phi);
    const auto stored = greedy_group(PairwiseAngles::compute(e.vectors()), e.probabilities(), phi);
    if (!matches_labels(streamed, labels) || !matches_labels(stored, labels)) ++mismatches;
  }
  Verdict v;
  v.pass = mismatches == 0;
  v.detail = fmt("%d instances (N <= 64, D <= 16), %d partitions differ from the reference", kInstances, mismatches);
  return v;
}

Verdict criterion_10() {
  constexpr int kDraws = 100;
  int law = 0, linear = 0, flag = 0;
  for (int c = 0; c < kDraws; ++c) {
    Gen gen(case_seed(9010, c));
    CellModelParams p;
    p.K = gen.real(0.0, 3.0);
    p.t0 = gen.real(0.0, 5.0);
    p.t = p.t0 + gen.real(0.0, 10.0);
    p.F = gen.integer(1, 5);
    const double hs = p.K * p.t;
    p.delta_H_tol = gen.real(0.0, hs);
    if (hypersensitivity_law(p) != occupied_cells(p.K, p.t, p.t0)) ++law;

    auto q = p;
    q.delta_H_tol = gen.real(0.0, hs);
    const auto a = required_information(p);
    const auto b = required_information(q);
    const double expect = a.cells * (q.delta_H_tol - p.delta_H_tol);
    const bool lin = std::abs((a.bits - b.bits) - expect) <= 1e-12 * std::max(1.0, a.cells * hs) &&
                     std::abs(a.bits - a.cells * (hs - p.delta_H_tol)) <= 1e-12 * std::max(1.0, a.bits);
    if (!lin) ++linear;

    // flip at delta_H_tol / F = 1; K t large enough to admit tol = F
    CellModelParams f = p;
    f.K = 1.0;
    f.t0 = 0.0;
    f.t = 10.0;
    f.delta_H_tol = f.F;
    const bool at = required_information(f).valid;
    f.delta_H_tol = std::nextafter(static_cast<double>(f.F), 0.0);
    const bool below = required_information(f).valid;
    if (!at || below) ++flag;
  }
  Verdict v;
  v.pass = law == 0 && linear == 0 && flag == 0;
  v.detail = fmt("%d draws: law != cells %d, linearity failures %d, validity flag failures %d", kDraws, law, linear,
                 flag);
  return v;
}

}  // namespace

int main() {
  const auto scan = scan_lyapunov(3.0);
  const auto chaotic_init = chaotic_center(scan);
  const auto regular_init = regular_center(scan);
  std::printf("initial states: chaotic (%.5f, %.5f) lambda=%.3f, regular (%.5f, %.5f) lambda=%.4f\n",
              chaotic_init.theta, chaotic_init.phi_az, chaotic_init.lyapunov, regular_init.theta,
              regular_init.phi_az, regular_init.lyapunov);
  std::fflush(stdout);

  const TopRun chaotic = full_run(chaotic_init);
  const TopRun regular = full_run(regular_init);

  const std::vector<std::function<Verdict()>> criteria{
      [&] { return criterion_1(chaotic_init); },
      [&] { return criterion_2({&chaotic, &regular}); },
      criterion_3,
      criterion_4,
      [&] { return criterion_5(chaotic); },
      [&] { return criterion_6(regular, chaotic); },
      [&] { return criterion_7(chaotic); },
      criterion_8,
      criterion_9,
      criterion_10,
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2zu %s  %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

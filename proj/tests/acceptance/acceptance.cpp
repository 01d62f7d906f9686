// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "phopfield/analysis.hpp"
#include "phopfield/dynamics.hpp"
#include "phopfield/harness/commands.hpp"
#include "phopfield/oracles.hpp"
#include "phopfield/parallel.hpp"

using namespace phopfield;

namespace {

constexpr std::uint64_t kSeed = 7;

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ComplexMatrix random_complex(int n, CounterRng& rng) {
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = cplx{rng.normal(), rng.normal()};
  }
  return a;
}

PhotonicModel haar_model(int m, std::uint64_t seed) {
  return PhotonicModel(ScatteringSpec{haar_random_unitary(m, seed), dft_matrix(m), PhotonConfiguration({0, 0}, m)}, 2);
}

// Runtime budgets are part of the criterion.
Verdict with_budget(Verdict v, double elapsed, double budget) {
  v.detail += ", " + fmt("%.2f", elapsed) + " s (budget " + fmt("%.0f", budget) + " s)";
  v.pass = v.pass && elapsed < budget;
  return v;
}

Verdict criterion_1() {
  const auto start = Clock::now();
  CounterRng rng(derive_seed(kSeed, "criterion-1"));
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n) {
    for (int t = 0; t < 100; ++t) {
      const auto a = random_complex(n, rng);
      const cplx ref = oracle::permanent_leibniz(a);
      worst = std::max(worst, std::abs(permanent(a) - ref) / std::abs(ref));
    }
  }
  bool ones_exact = true;
  double factorial = 1.0;
  for (int n = 1; n <= 6; ++n) {
    factorial *= n;
    ones_exact = ones_exact && permanent(ComplexMatrix::Ones(n, n)) == cplx{factorial, 0.0};
  }
  Verdict v{worst < 1e-12 && ones_exact,
            "max relative error " + fmt("%.2e", worst) + " (< 1e-12), perm(ones) = n! " + (ones_exact ? "exact" : "NOT exact")};
  return with_budget(v, seconds_since(start), 1.0);
}

Verdict criterion_2() {
  const ConfigurationSpace a(6, 2), b(10, 2), c(2, 2);
  const bool ok = a.size() == 21 && a.bunched_count() == 6 && b.size() == 55 && c.size() == 3;
  std::ostringstream d;
  d << "(6,2): " << a.size() << " outcomes, " << a.bunched_count() << " bunched; (10,2): " << b.size()
    << "; (2,2): " << c.size();
  return {ok, d.str()};
}

Verdict criterion_3() {
  const auto start = Clock::now();
  CounterRng rng(derive_seed(kSeed, "criterion-3"));
  double norm_err = 0.0, trivial_err = 0.0;
  for (int m : {6, 10}) {
    for (int t = 0; t < 50; ++t) {
      const auto model = haar_model(m, rng());
      const auto p = model.output_distribution(random_spins(m, rng));
      norm_err = std::max(norm_err, std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0));
    }
    const auto model = haar_model(m, rng());
    const auto all = TargetSet::all(model.space());
    for (int t = 0; t < 20; ++t) {
      trivial_err = std::max(trivial_err, std::abs(model.target_probability(random_spins(m, rng), all) - 1.0));
    }
  }
  Verdict v{norm_err < 1e-9 && trivial_err < 1e-9,
            "max |sum P - 1| " + fmt("%.2e", norm_err) + ", max |P_S(K=C) - 1| " + fmt("%.2e", trivial_err)};
  return with_budget(v, seconds_since(start), 10.0);
}

Verdict criterion_4() {
  const auto start = Clock::now();
  CounterRng rng(derive_seed(kSeed, "criterion-4"));
  const ConfigurationSpace space(6, 2);
  double worst = 0.0;
  for (std::size_t s = 0; s < 5; ++s) {
    const auto disorder = make_disorder(6, space, derive_seed(kSeed, "criterion-4-disorder"), s);
    const PhotonicModel model(ScatteringSpec{disorder.scattering, dft_matrix(6), PhotonConfiguration({0, 0}, 6)}, 2);
    const TargetSet targets(space, std::vector<std::size_t>(disorder.target_order.begin(), disorder.target_order.begin() + 5));
    const auto j = synaptic_tensor(model.pattern_tensor(targets), space.size());
    for (int t = 0; t < 50; ++t) {
      const auto sigma = random_spins(6, rng);
      const double direct = model.target_probability(sigma, targets);
      const auto summed = model.amplitudes(sigma, AmplitudePath::configuration_sum);
      const auto dense = oracle::evolve_state_vector(disorder.scattering.matrix, space, model.input().amplitudes, sigma);
      double p_sum = 0.0, p_dense = 0.0;
      for (auto k : targets.ordinals()) {
        p_sum += std::norm(summed[k]);
        p_dense += std::norm(dense[k]);
      }
      const double tensor = tensor_target_probability(j, space, sigma);
      worst = std::max({worst, std::abs(direct - tensor), std::abs(direct - p_dense), std::abs(p_sum - p_dense)});
    }
  }
  Verdict v{worst < 1e-9, "max disagreement direct / tensor / state vector " + fmt("%.2e", worst)};
  return with_budget(v, seconds_since(start), 30.0);
}

Verdict criterion_5() {
  const PhotonicModel model(ScatteringSpec{identity_unitary(2), dft_matrix(2), PhotonConfiguration({0, 1}, 2)}, 2);
  const auto p = model.output_distribution(SpinConfiguration::all_up(2));
  const auto& s = model.space();
  const double p11 = p[s.index(PhotonConfiguration({0, 0}, 2))];
  const double p22 = p[s.index(PhotonConfiguration({1, 1}, 2))];
  const double p12 = p[s.index(PhotonConfiguration({0, 1}, 2))];
  const bool ok = std::abs(p11 - 0.5) < 1e-12 && std::abs(p22 - 0.5) < 1e-12 && std::abs(p12) < 1e-12;
  return {ok, "P(1,1) = " + fmt("%.15f", p11) + ", P(2,2) = " + fmt("%.15f", p22) + ", P(1,2) = " + fmt("%.2e", p12)};
}

Verdict criterion_6() {
  const auto start = Clock::now();
  const int m = 4;
  const double temperature = 0.5;
  const ConfigurationSpace space(m, 2);
  const auto disorder = make_disorder(m, space, derive_seed(kSeed, "criterion-6"), 0);
  const PhotonicModel model(ScatteringSpec{disorder.scattering, dft_matrix(m), PhotonConfiguration({0, 0}, m)}, 2);
  const TargetSet targets(space, std::vector<std::size_t>(disorder.target_order.begin(), disorder.target_order.begin() + 2));

  // Exact energies by enumeration through the dense state-vector oracle.
  std::vector<double> energies(16);
  for (unsigned bits = 0; bits < 16; ++bits) {
    const auto amps = oracle::evolve_state_vector(model.spec().scattering.matrix, space, model.input().amplitudes,
                                                  oracle::spins_from_bits(bits, m));
    double p = 0.0;
    for (auto k : targets.ordinals()) p += std::norm(amps[k]);
    energies[bits] = -m * p;
  }
  const auto boltzmann = oracle::boltzmann_distribution(energies, temperature);
  // Conditional acceptance probability of one proposal from each state.
  std::vector<double> accept_prob(16, 0.0);
  for (unsigned bits = 0; bits < 16; ++bits) {
    for (int i = 0; i < m; ++i) {
      const double de = energies[bits ^ (1u << i)] - energies[bits];
      accept_prob[bits] += (de <= 0.0 ? 1.0 : std::exp(-de / temperature)) / m;
    }
  }

  const EnergyEvaluator evaluator(model, targets);
  MCParams params;
  params.temperature = temperature;
  MetropolisChain chain(evaluator, SpinConfiguration::all_up(m), params, derive_seed(kSeed, "criterion-6-chain"));
  for (int t = 0; t < 1000; ++t) chain.run_mcs();
  const int steps = 1'000'000;
  std::vector<double> visits(16, 0.0);
  double expected = 0.0, variance = 0.0, accepted = 0.0;
  for (int t = 0; t < steps; ++t) {
    for (int p = 0; p < m; ++p) {
      const double a = accept_prob[oracle::bits_from_spins(chain.spins())];
      expected += a;
      variance += a * (1.0 - a);
      accepted += chain.update() ? 1.0 : 0.0;
    }
    visits[oracle::bits_from_spins(chain.spins())] += 1.0 / steps;
  }
  const double tvd = total_variation_distance(visits, boltzmann);
  const double z = (accepted - expected) / std::sqrt(variance);
  Verdict v{tvd < 0.02 && std::abs(z) < 3.0,
            "TVD to Boltzmann " + fmt("%.4f", tvd) + " (< 0.02), acceptance " + fmt("%.5f", accepted / (4.0 * steps)) +
                " vs exp(-dE/T) prediction " + fmt("%.5f", expected / (4.0 * steps)) + ", z = " + fmt("%.2f", z) +
                " (|z| < 3)"};
  return with_budget(v, seconds_since(start), 120.0);
}

// First lag at which F_self drops below 0.2; infinity if it never does.
double decorrelation_lag(const Trajectory& traj, int max_lag) {
  for (int tau = 0; tau <= max_lag; ++tau) {
    if (autocorrelation(traj, tau) < 0.2) return tau;
  }
  return std::numeric_limits<double>::infinity();
}

Verdict criterion_7() {
  const auto start = Clock::now();
  const int m = 6;
  const ConfigurationSpace space(m, 2);
  const auto disorder = make_disorder(m, space, derive_seed(kSeed, "criterion-7"), 0);
  const PhotonicModel model(ScatteringSpec{disorder.scattering, dft_matrix(m), PhotonConfiguration({0, 0}, m)}, 2);
  const TargetSet targets(space, std::vector<std::size_t>(disorder.target_order.begin(), disorder.target_order.begin() + 3));
  const EnergyEvaluator evaluator(model, targets);
  const int n_steps = 4000, max_lag = 1000;
  int ordered = 0;
  std::string lags;
  for (std::uint64_t s = 0; s < 10; ++s) {
    double lag[2];
    const double temps[2] = {0.5, 0.1};
    for (int ti = 0; ti < 2; ++ti) {
      MCParams params;
      params.temperature = temps[ti];
      params.n_steps = n_steps;
      params.seed = derive_seed(kSeed, "criterion-7-seed", {s});
      CounterRng init(derive_seed(params.seed, "initial"));
      lag[ti] = decorrelation_lag(run_trajectory(evaluator, random_spins(m, init), params), max_lag);
    }
    if (lag[0] < lag[1]) ++ordered;
    lags += (s ? " " : "") + fmt("%.0f", lag[0]) + "/" + (std::isinf(lag[1]) ? std::string(">") + std::to_string(max_lag) : fmt("%.0f", lag[1]));
  }
  Verdict v{ordered >= 8, std::to_string(ordered) + "/10 seeds decorrelate sooner at T=0.5 (need >= 8); lags T=0.5/T=0.1: " + lags};
  return with_budget(v, seconds_since(start), 120.0);
}

SweepConfig criterion_8_config(unsigned threads) {
  SweepConfig cfg;
  cfg.mode_count = 10;
  cfg.photon_count = 2;
  cfg.grid = {{0.01, 0.05}, {0.1, 1.0}, {0.1, 0.05}, {0.03, 0.05}};
  cfg.disorder_count = 20;
  cfg.replica_count = 50;
  cfg.n_steps = 2000;
  cfg.master_seed = kSeed;
  cfg.threads = threads;
  return cfg;
}

std::string votes(const PointResult& p) {
  std::ostringstream o;
  o << "MR " << p.votes[0] << " SG " << p.votes[1] << " PM " << p.votes[2] << " coex " << p.coexistence_votes;
  return o.str();
}

Verdict criterion_8(const PhaseDiagram& d, double elapsed) {
  const double n = 20.0;
  const auto& mr = d.points[0];
  const auto& pm = d.points[1];
  const auto& sg = d.points[2];
  const auto& cx = d.points[3];
  int sg_or_coex = 0;
  for (const auto& o : sg.realizations) {
    if (o.label && (o.label->phase == Phase::spin_glass || (o.label->phase == Phase::retrieval && o.label->coexistence))) {
      ++sg_or_coex;
    }
  }
  const bool a = mr.votes[0] / n >= 0.7;
  const bool b = pm.votes[2] / n >= 0.7;
  const bool c = sg_or_coex / n >= 0.7;
  const bool e = cx.coexistence_votes / n >= 0.5;
  std::ostringstream o;
  o << "(0.01,0.05) " << votes(mr) << (a ? " ok" : " FAIL") << "; (0.1,1.0) " << votes(pm) << (b ? " ok" : " FAIL")
    << "; (0.1,0.05) SG-or-coex " << sg_or_coex << "/20 [" << votes(sg) << "]" << (c ? " ok" : " FAIL")
    << "; (0.03,0.05) coexistence " << cx.coexistence_votes << "/20 [" << votes(cx) << "]" << (e ? " ok" : " FAIL");
  Verdict v{a && b && c && e, o.str()};
  // The 30 min figure is a desktop target, not a hard limit.
  v.detail += ", " + fmt("%.1f", elapsed) + " s";
  return v;
}

bool same_outcomes(const PhaseDiagram& x, const PhaseDiagram& y) {
  if (x.points.size() != y.points.size()) return false;
  for (std::size_t p = 0; p < x.points.size(); ++p) {
    const auto& a = x.points[p];
    const auto& b = y.points[p];
    if (a.votes != b.votes || a.coexistence_votes != b.coexistence_votes || !(a.abs_m == b.abs_m) || !(a.q == b.q)) {
      return false;
    }
    for (std::size_t r = 0; r < a.realizations.size(); ++r) {
      const auto& la = a.realizations[r].label;
      const auto& lb = b.realizations[r].label;
      if (la.has_value() != lb.has_value()) return false;
      if (la && (la->phase != lb->phase || la->coexistence != lb->coexistence)) return false;
    }
  }
  return true;
}

Verdict criterion_9() {
  const auto start = Clock::now();
  const int m = 10;
  harness::RunConfig cfg;
  cfg.mode_count = m;
  cfg.scattering.kind = "hadamard";
  cfg.scattering.rows = harness::default_hadamard_rows(m);
  cfg.seed = kSeed;
  const PhotonicModel model(ScatteringSpec{harness::build_scattering(cfg), dft_matrix(m), PhotonConfiguration({0, 0}, m)}, 2);
  const TargetSet targets(model.space(), {PhotonConfiguration({0, 0}, m), PhotonConfiguration({1, 1}, m)});
  const EnergyEvaluator evaluator(model, targets);
  MCParams params;
  params.temperature = 0.05;
  params.n_steps = 1000;
  params.seed = derive_seed(kSeed, "criterion-9");
  params.record_spins = false;
  const auto ensemble = run_replicas(evaluator, params, 50, 0, 0);
  const auto order = collect_order_parameters(model.space(), model.pattern_tensor(targets), ensemble.final_states());
  int retrieved = 0, well_formed = 0;
  double worst_imag = 0.0;
  for (int a = 0; a < order.replica_count; ++a) {
    const cplx m0 = order.m[static_cast<std::size_t>(a) * 2];
    const cplx m1 = order.m[static_cast<std::size_t>(a) * 2 + 1];
    const cplx best = std::abs(m0) >= std::abs(m1) ? m0 : m1;
    const double mag = std::abs(best);
    worst_imag = std::max(worst_imag, std::abs(best.imag()));
    if (std::abs(best.imag()) < 0.05 && (mag < 0.1 || std::abs(mag - 1.0) < 0.1)) ++well_formed;
    if (mag > 0.9) ++retrieved;
  }
  Verdict v{well_formed == order.replica_count && retrieved >= 30,
            std::to_string(retrieved) + "/50 replicas with |m| > 0.9 (need >= 30), " + std::to_string(well_formed) +
                "/50 with |m| in {~0, ~1} and |Im m| < 0.05, max |Im m| " + fmt("%.1e", worst_imag)};
  return with_budget(v, seconds_since(start), 300.0);
}

Verdict criterion_10() {
  const auto start = Clock::now();
  const int m = 10;
  const auto samples = sample_pm_abs_m(m, 100000, derive_seed(kSeed, "criterion-10"));
  auto hist = make_abs_m_histogram();
  for (double v : samples) hist.add(v);
  const auto empirical = hist.masses();
  std::vector<double> reference(hist.bins());
  for (std::size_t b = 0; b < hist.bins(); ++b) {
    const double lo = hist.lower() + static_cast<double>(b) * hist.width();
    const double hi = b + 1 == hist.bins() ? 40.0 : lo + hist.width();
    reference[b] = pm_reference_mass(lo, hi, m);
  }
  const double tvd = total_variation_distance(empirical, reference);
  Verdict v{tvd < 0.1, "TVD to the renormalized reference law " + fmt("%.4f", tvd) + " (< 0.1)"};
  return with_budget(v, seconds_since(start), 60.0);
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const Verdict& v) {
    std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", id, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  };
  auto guarded = [&](int id, const std::function<Verdict()>& f) {
    try {
      report(id, f());
    } catch (const std::exception& e) {
      report(id, Verdict{false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, criterion_1);
  guarded(2, criterion_2);
  guarded(3, criterion_3);
  guarded(4, criterion_4);
  guarded(5, criterion_5);
  guarded(6, criterion_6);
  guarded(7, criterion_7);

  PhaseDiagram all_cores, one_thread, three_threads;
  guarded(8, [&] {
    const auto start = Clock::now();
    all_cores = sweep_phase_diagram(criterion_8_config(0));
    return criterion_8(all_cores, seconds_since(start));
  });
  guarded(9, criterion_9);
  guarded(10, criterion_10);
  guarded(11, [&] {
    one_thread = sweep_phase_diagram(criterion_8_config(1));
    three_threads = sweep_phase_diagram(criterion_8_config(3));
    const bool same = same_outcomes(all_cores, one_thread) && same_outcomes(all_cores, three_threads);
    return Verdict{same, std::string("criterion 8 rerun with 1 and 3 threads (first run used ") +
                             std::to_string(resolve_threads(0)) + "): labels and histograms " +
                             (same ? "identical" : "DIFFER")};
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures ? 1 : 0;
}

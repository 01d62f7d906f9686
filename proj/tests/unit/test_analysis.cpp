#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "phopfield/analysis.hpp"

using namespace phopfield;

namespace {
PhotonicModel haar_model(int m, std::uint64_t seed) {
  return PhotonicModel(ScatteringSpec{haar_random_unitary(m, seed), dft_matrix(m), PhotonConfiguration({0, 0}, m)}, 2);
}
SpinConfiguration random_sigma(int m, CounterRng& rng) {
  SpinConfiguration s = SpinConfiguration::all_up(m);
  for (int i = 0; i < m; ++i) if (rng.below(2)) s.flip(i);
  return s;
}
}  // namespace

TEST_CASE("magnetization is the output amplitude of the pattern") {
  const auto model = haar_model(6, 4);
  const TargetSet k(model.space(), std::vector<std::size_t>{2, 10});
  const auto x = model.pattern_tensor(k);
  CounterRng rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto sigma = random_sigma(6, rng);
    const auto p = model.output_distribution(sigma);
    for (auto kk : k.ordinals()) {
      const cplx m = magnetization(model.space(), x, kk, sigma);
      CHECK(std::norm(m) == doctest::Approx(p[kk]).epsilon(1e-12));
      CHECK(std::abs(magnetization(model.space(), x, kk, -sigma) - m) < 1e-12);
    }
  }
  CHECK_THROWS_AS(magnetization(model.space(), x, 3, SpinConfiguration::all_up(6)), std::out_of_range);
}

TEST_CASE("overlap") {
  const SpinConfiguration a({1, -1, 1, 1}), b({1, 1, 1, -1});
  CHECK(overlap(a, a) == 1.0);
  CHECK(overlap(a, -a) == -1.0);
  CHECK(overlap(a, b) == 0.0);
  CHECK(overlap(a, b) == overlap(b, a));
}

TEST_CASE("paramagnetic reference law") {
  CHECK(pm_reference_printed_integral(10) == doctest::Approx(92.0 / 110.0).epsilon(1e-8));
  for (auto form : {PmReferenceForm::printed_renormalized, PmReferenceForm::normalized_prefactor}) {
    CHECK(pm_reference_mass(0.0, 10.0, 10, form) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(pm_reference_pdf(0.2, 10, form) > 0.0);
  }
  CHECK(pm_reference_pdf(0.2, 10) == doctest::Approx(pm_reference_pdf_printed(0.2, 10) * 110.0 / 92.0).epsilon(1e-8));
}

TEST_CASE("retrieval thresholds") {
  const auto fixed = retrieval_threshold(ThresholdMode::fixed, 10, 10);
  CHECK(fixed.value == doctest::Approx(1.0 / std::numbers::pi));
  CHECK(fixed.value == doctest::Approx(0.3183).epsilon(1e-4));
  CHECK(retrieval_quantile_level(10, 10) == doctest::Approx(1.0 - 10.0 / 512.0));
  std::vector<double> calib(1000);
  for (std::size_t i = 0; i < calib.size(); ++i) calib[i] = static_cast<double>(i) / 1000.0;
  const auto q = retrieval_threshold(ThresholdMode::quantile, 10, 10, calib);
  CHECK(q.value == doctest::Approx(1.0 - 10.0 / 512.0).epsilon(0.01));
  CHECK_FALSE(q.degenerate);
  const auto deg = retrieval_threshold(ThresholdMode::quantile, 600, 10, calib);
  CHECK(deg.degenerate);
  CHECK(deg.value == 0.0);
}

TEST_CASE("histograms") {
  Histogram h(0.0, 0.5, 4);
  h.add(-3.0);
  h.add(0.7);
  h.add(99.0, 2);
  CHECK(h.counts() == std::vector<std::uint64_t>{1, 1, 0, 2});
  Histogram g = h;
  g.merge(h);
  CHECK(g.total() == 8);
  CHECK(g.masses()[3] == 0.5);
  CHECK(h.center(1) == 0.75);
  CHECK_THROWS(g.merge(Histogram(0.0, 0.1, 4)));
  const auto qh = make_overlap_histogram(10);
  CHECK(qh.bins() == 11);
  CHECK(qh.center(0) == doctest::Approx(-1.0));
  CHECK(qh.center(10) == doctest::Approx(1.0));
}

TEST_CASE("kurtosis") {
  CHECK(kurtosis(std::vector<double>{0.8, -0.8, 0.8, -0.8}) == doctest::Approx(1.0));
  CHECK(kurtosis(std::vector<double>{0.3, 0.3}) == 0.0);
  CounterRng rng(2);
  std::vector<double> g(200000);
  for (auto& v : g) v = rng.normal();
  CHECK(kurtosis(g) == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("phase classification rules") {
  OrderParameters o;
  o.mode_count = 10;
  o.replica_count = 40;
  o.pattern_count = 1;
  CounterRng rng(3);
  SUBCASE("retrieval mass of at least 1/N_P") {
    o.pattern_count = 2;
    for (int a = 0; a < 80; ++a) o.abs_m.push_back(a % 2 ? 0.9 : 0.05);
    for (int i = 0; i < 780; ++i) o.q.push_back(rng.normal() / std::sqrt(10.0));
    const auto label = classify_phase(o, 1.0 / std::numbers::pi);
    CHECK(label.phase == Phase::retrieval);
    CHECK(label.retrieval_mass == doctest::Approx(0.5));
    CHECK_FALSE(label.coexistence);
  }
  SUBCASE("a single pattern needs every replica retrieved") {
    for (int a = 0; a < 40; ++a) o.abs_m.push_back(a % 2 ? 0.9 : 0.05);
    for (int i = 0; i < 780; ++i) o.q.push_back(rng.normal() / std::sqrt(10.0));
    CHECK(classify_phase(o, 1.0 / std::numbers::pi).phase != Phase::retrieval);
    o.abs_m.assign(40, 0.9);
    CHECK(classify_phase(o, 1.0 / std::numbers::pi).phase == Phase::retrieval);
  }
  SUBCASE("Gaussian overlaps without retrieval") {
    o.abs_m.assign(40, 0.05);
    for (int i = 0; i < 780; ++i) o.q.push_back(rng.normal() / std::sqrt(10.0));
    CHECK(classify_phase(o, 1.0 / std::numbers::pi).phase == Phase::paramagnet);
  }
  SUBCASE("bimodal overlaps without retrieval") {
    o.abs_m.assign(40, 0.05);
    for (int i = 0; i < 780; ++i) o.q.push_back(i % 2 ? 0.8 : -0.8);
    CHECK(classify_phase(o, 1.0 / std::numbers::pi).phase == Phase::spin_glass);
  }
  SUBCASE("coexistence needs a central overlap peak") {
    o.abs_m.assign(40, 0.9);
    for (int i = 0; i < 780; ++i) o.q.push_back(i % 4 == 0 ? 0.8 : 0.0);
    const auto label = classify_phase(o, 1.0 / std::numbers::pi);
    CHECK(label.phase == Phase::retrieval);
    CHECK(label.coexistence);
    CHECK(label.central_q_reference == doctest::Approx(central_overlap_reference(10)));
  }
  SUBCASE("too few replicas") {
    o.replica_count = 10;
    o.abs_m.assign(10, 0.05);
    o.q.assign(45, 0.0);
    CHECK_THROWS_AS(classify_phase(o, 0.3), std::invalid_argument);
  }
}

TEST_CASE("central overlap reference at M = 10") {
  // Gaussian N(0, 1/10) evaluated on the lattice q in {-0.2, 0, 0.2}: only q = 0 has |q| <= 1/10.
  CHECK(central_overlap_reference(10) == doctest::Approx(0.252).epsilon(0.01));
}

TEST_CASE("load to pattern count") {
  CHECK(pattern_count_for_load(0.01, 10, 2) == 1);
  CHECK(pattern_count_for_load(0.1, 10, 2) == 10);
  CHECK(pattern_count_for_load(0.03, 10, 2) == 3);
  CHECK(pattern_count_for_load(0.025, 10, 2) == 3);
  CHECK_THROWS(pattern_count_for_load(0.001, 10, 2));
  CHECK_THROWS(pattern_count_for_load(0.6, 10, 2));
}

TEST_CASE("disorder realizations are seeded and nested") {
  const ConfigurationSpace space(6, 2);
  const auto a = make_disorder(6, space, 9, 0);
  const auto b = make_disorder(6, space, 9, 0);
  const auto c = make_disorder(6, space, 9, 1);
  CHECK(a.scattering.matrix == b.scattering.matrix);
  CHECK(a.target_order == b.target_order);
  CHECK(a.scattering.matrix != c.scattering.matrix);
  auto sorted = a.target_order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
}

TEST_CASE("high temperature magnetization samples") {
  const auto v = sample_pm_abs_m(6, 2000, 5);
  CHECK(v.size() == 2000);
  double mean = 0.0;
  for (double x : v) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0 + 1e-12);
    mean += x;
  }
  CHECK(mean / 2000 < 0.5);
}

TEST_CASE("small sweep is deterministic across thread counts") {
  SweepConfig cfg;
  cfg.mode_count = 4;
  cfg.grid = {{0.07, 0.05}, {0.07, 2.0}, {0.2, 0.05}, {0.2, 2.0}};
  cfg.disorder_count = 3;
  cfg.replica_count = 12;
  cfg.min_replicas = 10;
  cfg.n_steps = 60;
  cfg.master_seed = 4;
  cfg.threads = 1;
  const auto a = sweep_phase_diagram(cfg);
  cfg.threads = 3;
  const auto b = sweep_phase_diagram(cfg);
  REQUIRE(a.points.size() == 4);
  for (std::size_t p = 0; p < 4; ++p) {
    CHECK(a.points[p].votes == b.points[p].votes);
    CHECK(a.points[p].abs_m == b.points[p].abs_m);
    CHECK(a.points[p].q == b.points[p].q);
    CHECK(a.points[p].abs_m.total() == 3u * 12u * a.points[p].pattern_count);
    CHECK(a.points[p].q.total() == 3u * 66u);
    CHECK(a.points[p].votes[0] + a.points[p].votes[1] + a.points[p].votes[2] + a.points[p].unclassified == 3);
  }
  cfg.replica_count = 5;
  const auto sparse = sweep_phase_diagram(cfg);
  CHECK(sparse.points[0].unclassified == 3);
  CHECK_FALSE(sparse.points[0].majority.has_value());
}

TEST_CASE("boundary extraction") {
  auto point = [](double alpha, double t, Phase phase) {
    PointResult p;
    p.requested = {alpha, t};
    RealizationOutcome o;
    o.label = PhaseLabel{};
    o.label->phase = phase;
    p.realizations = {o, o};
    return p;
  };
  const std::vector<PointResult> points{point(0.01, 0.1, Phase::retrieval), point(0.01, 0.5, Phase::retrieval),
                                        point(0.01, 1.0, Phase::paramagnet)};
  const auto b = extract_boundaries(points);
  REQUIRE(b.size() == 1);
  CHECK(b[0].direction == Boundary::Direction::along_temperature);
  CHECK(b[0].mean == doctest::Approx(0.75));
  CHECK(b[0].sem == 0.0);
  CHECK(b[0].samples == 2);
  CHECK(b[0].from == Phase::retrieval);
  CHECK(b[0].to == Phase::paramagnet);
}

#include "phopfield/harness/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "phopfield/dynamics.hpp"
#include "phopfield/oracles.hpp"
#include "phopfield/parallel.hpp"

namespace phopfield::harness {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json seed_lineage(const RunConfig& config, json streams) {
  return {{"master_seed", config.seed},
          {"rng", std::string(CounterRng::kName)},
          {"derivation", "child = derive_seed(master, role, indices): splitmix64 chain over fnv1a(role) and each index"},
          {"streams", std::move(streams)}};
}

class RunDirectory {
 public:
  RunDirectory(const std::string& command, const RunConfig& config, json lineage)
      : command_(command), config_(config), lineage_(std::move(lineage)) {
    path_ = fs::path(config.out) / (command + "-" + config_hash(command, config));
    fs::create_directories(path_);
    preamble_ = "# config: " + json(config).dump() + "\n# seeds: " + lineage_.dump() + "\n";
  }

  const fs::path& path() const noexcept { return path_; }

  std::ofstream csv(const std::string& name, const std::string& header) const {
    std::ofstream out(path_ / name);
    if (!out) throw std::runtime_error("cannot write " + (path_ / name).string());
    out << preamble_ << header << '\n';
    return out;
  }

  void write_metadata(json results) const {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream stamp;
    stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    json meta{{"command", command_},
              {"config", config_},
              {"config_hash", config_hash(command_, config_)},
              {"seeds", lineage_},
              {"results", std::move(results)},
              {"created", stamp.str()}};
    std::ofstream out(path_ / "metadata.json");
    out << meta.dump(2) << '\n';
  }

 private:
  std::string command_;
  RunConfig config_;
  json lineage_;
  fs::path path_;
  std::string preamble_;
};

ScatteringSpec build_spec(const RunConfig& config) {
  return ScatteringSpec{build_scattering(config), build_prep(config), build_injection(config)};
}

std::string label_of(const PhotonConfiguration& k) {
  std::string s;
  for (int m : k.one_based()) {
    if (!s.empty()) s += '-';
    s += std::to_string(m);
  }
  return s;
}

std::vector<SpinConfiguration> requested_spins(const RunConfig& config) {
  std::vector<SpinConfiguration> out;
  if (!config.spins.empty()) {
    for (const auto& s : config.spins) out.emplace_back(s);
    return out;
  }
  if (config.mode_count > 20) throw std::invalid_argument("refusing to enumerate more than 2^20 spin settings");
  const unsigned total = 1u << config.mode_count;
  out.reserve(total);
  for (unsigned bits = 0; bits < total; ++bits) out.push_back(oracle::spins_from_bits(bits, config.mode_count));
  return out;
}

}  // namespace

RunOutcome cmd_distribution(const RunConfig& config, std::ostream& log) {
  config.validate();
  const PhotonicModel model(build_spec(config), config.photon_count);
  const auto spins = requested_spins(config);
  RunDirectory dir("distribution", config,
                   seed_lineage(config, {{"scattering", "disorder-S[scattering.index] or hadamard-completion[index]"},
                                         {"sampling", "distribution-sample[sigma ordinal]"}}));

  auto dist_csv = dir.csv("distribution.csv", config.sample ? "sigma,k,p_exact,p_sampled" : "sigma,k,p_exact");
  std::ofstream tvd_csv;
  if (config.sample) tvd_csv = dir.csv("tvd.csv", "sigma,tvd");

  double tvd_sum = 0.0;
  double max_norm_error = 0.0;
  for (std::size_t s = 0; s < spins.size(); ++s) {
    const auto p = model.output_distribution(spins[s]);
    max_norm_error = std::max(max_norm_error, std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0));
    std::vector<double> sampled;
    if (config.sample) {
      sampled = empirical_distribution(sample_counts(p, config.events, derive_seed(config.seed, "distribution-sample", {s})));
      const double tvd = total_variation_distance(sampled, p);
      tvd_sum += tvd;
      tvd_csv << spins[s].to_string() << ',' << num(tvd) << '\n';
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
      dist_csv << spins[s].to_string() << ',' << label_of(model.space()[k]) << ',' << num(p[k]);
      if (config.sample) dist_csv << ',' << num(sampled[k]);
      dist_csv << '\n';
    }
  }
  json results{{"spin_settings", spins.size()},
               {"outcomes", model.space().size()},
               {"max_normalization_error", max_norm_error}};
  if (config.sample) results["mean_tvd"] = tvd_sum / static_cast<double>(spins.size());
  dir.write_metadata(results);
  log << "distribution: " << spins.size() << " spin settings x " << model.space().size() << " outcomes -> "
      << dir.path().string() << '\n';
  return {0, dir.path().string()};
}

RunOutcome cmd_mc(const RunConfig& config, std::ostream& log) {
  config.validate();
  const PhotonicModel model(build_spec(config), config.photon_count);
  RunDirectory dir("mc", config,
                   seed_lineage(config, {{"scattering", "disorder-S[scattering.index]"},
                                         {"targets", "disorder-K[scattering.index]"},
                                         {"chains", "mc[pattern set, temperature] -> replica[0, a]"}}));
  auto energy_csv = dir.csv("energies.csv", "n_patterns,temperature,replica,step,energy");
  auto fself_csv = dir.csv("fself.csv", "n_patterns,temperature,tau,f_self");

  std::vector<std::size_t> counts;
  if (config.targets.kind == "explicit") {
    counts.push_back(config.targets.configs.size());
  } else {
    for (int n : config.pattern_counts) counts.push_back(static_cast<std::size_t>(n));
  }

  json runs = json::array();
  for (std::size_t ci = 0; ci < counts.size(); ++ci) {
    const auto targets = build_targets(config, model.space(), counts[ci]);
    if (targets.covers(model.space())) log << "warning: K = C, the energy landscape is flat\n";
    const EnergyEvaluator evaluator(model, targets, config.resolved_energy_mode());
    for (std::size_t ti = 0; ti < config.temperatures.size(); ++ti) {
      MCParams params;
      params.temperature = config.temperatures[ti];
      params.n_steps = config.n_steps;
      params.burn_in = config.burn_in;
      params.seed = derive_seed(config.seed, "mc", {ci, ti});
      params.reestimate_incumbent = config.reestimate_incumbent;
      const auto ensemble = run_replicas(evaluator, params, config.replicas, 0, config.threads);

      const std::string prefix = std::to_string(targets.size()) + ',' + num(params.temperature) + ',';
      double acceptance = 0.0;
      for (std::size_t a = 0; a < ensemble.replicas.size(); ++a) {
        const auto& traj = ensemble.replicas[a];
        acceptance += traj.acceptance_rate();
        for (std::size_t t = 0; t < traj.energies.size(); ++t) {
          energy_csv << prefix << a << ',' << t << ',' << num(traj.energies[t]) << '\n';
        }
      }
      const int window = config.n_steps - params.resolved_burn_in();
      const int max_lag = std::min(config.max_lag, window);
      int decorrelation_lag = -1;
      for (int tau = 0; tau <= max_lag; ++tau) {
        double f = 0.0;
        for (const auto& traj : ensemble.replicas) f += autocorrelation(traj, tau);
        f /= static_cast<double>(ensemble.replicas.size());
        if (decorrelation_lag < 0 && f < 0.2) decorrelation_lag = tau;
        fself_csv << prefix << tau << ',' << num(f) << '\n';
      }
      runs.push_back({{"n_patterns", targets.size()},
                      {"alpha", targets.load(model.space())},
                      {"temperature", params.temperature},
                      {"mean_acceptance", acceptance / static_cast<double>(ensemble.replicas.size())},
                      {"first_lag_below_0.2", decorrelation_lag}});
      log << "mc: N_P=" << targets.size() << " T=" << params.temperature << " done\n";
    }
  }
  dir.write_metadata({{"runs", runs}});
  log << "mc -> " << dir.path().string() << '\n';
  return {0, dir.path().string()};
}

RunOutcome cmd_phase_diagram(const RunConfig& config, std::ostream& log) {
  config.validate();
  if (config.scattering.kind != "haar") {
    throw std::invalid_argument("phase-diagram draws Haar disorder; scattering.kind must be haar");
  }
  SweepConfig sweep;
  sweep.mode_count = config.mode_count;
  sweep.photon_count = config.photon_count;
  sweep.grid = config.resolved_grid();
  if (sweep.grid.empty()) throw std::invalid_argument("phase-diagram needs alphas x temperatures or a grid");
  sweep.disorder_count = config.disorder;
  sweep.replica_count = config.replicas;
  sweep.n_steps = config.n_steps;
  sweep.burn_in = config.burn_in;
  sweep.energy_mode = config.resolved_energy_mode();
  sweep.reestimate_incumbent = config.reestimate_incumbent;
  sweep.threshold_mode = config.resolved_threshold_mode();
  sweep.prep = config.prep;
  sweep.injection = config.injection;
  sweep.min_replicas = config.min_replicas;
  sweep.master_seed = config.seed;
  sweep.threads = config.threads;
  const auto diagram = sweep_phase_diagram(sweep);

  RunDirectory dir("phase-diagram", config,
                   seed_lineage(config, {{"scattering", "disorder-S[realization]"},
                                         {"targets", "disorder-K[realization]"},
                                         {"chains", "sweep-mc[point, realization] -> replica[0, a]"}}));
  auto points_csv = dir.csv("points.csv",
                            "point,alpha,realized_alpha,n_patterns,temperature,votes_mr,votes_sg,votes_pm,"
                            "coexistence,unclassified,majority");
  auto labels_csv = dir.csv("labels.csv",
                            "point,realization,label,coexistence,retrieval_mass,kurtosis,central_q_mass,threshold,"
                            "mean_final_energy");
  auto m_csv = dir.csv("hist_abs_m.csv", "point,abs_m_center,mass");
  auto q_csv = dir.csv("hist_q.csv", "point,q,mass");
  auto b_csv = dir.csv("boundaries.csv", "direction,fixed_value,from,to,mean,sem,samples");

  json labels = json::array();
  for (std::size_t p = 0; p < diagram.points.size(); ++p) {
    const auto& pt = diagram.points[p];
    const std::string majority = pt.majority ? short_name(*pt.majority) : "none";
    points_csv << p << ',' << num(pt.requested.alpha) << ',' << num(pt.realized_alpha) << ',' << pt.pattern_count
               << ',' << num(pt.requested.temperature) << ',' << pt.votes[0] << ',' << pt.votes[1] << ','
               << pt.votes[2] << ',' << pt.coexistence_votes << ',' << pt.unclassified << ',' << majority << '\n';
    for (std::size_t r = 0; r < pt.realizations.size(); ++r) {
      const auto& o = pt.realizations[r];
      labels_csv << p << ',' << r << ',';
      if (o.label) {
        labels_csv << short_name(o.label->phase) << ',' << (o.label->coexistence ? 1 : 0) << ','
                   << num(o.label->retrieval_mass) << ',' << num(o.label->kurtosis) << ','
                   << num(o.label->central_q_mass);
      } else {
        labels_csv << "none,0,,,";
      }
      labels_csv << ',' << num(o.threshold) << ',' << num(o.mean_final_energy) << '\n';
    }
    const auto m_mass = pt.abs_m.masses();
    for (std::size_t b = 0; b < m_mass.size(); ++b) m_csv << p << ',' << num(pt.abs_m.center(b)) << ',' << num(m_mass[b]) << '\n';
    const auto q_mass = pt.q.masses();
    for (std::size_t b = 0; b < q_mass.size(); ++b) q_csv << p << ',' << num(pt.q.center(b)) << ',' << num(q_mass[b]) << '\n';
    labels.push_back({{"alpha", pt.requested.alpha},
                      {"realized_alpha", pt.realized_alpha},
                      {"temperature", pt.requested.temperature},
                      {"majority", majority},
                      {"votes", {{"MR", pt.votes[0]}, {"SG", pt.votes[1]}, {"PM", pt.votes[2]}}},
                      {"coexistence", pt.coexistence_votes}});
  }
  for (const auto& b : diagram.boundaries) {
    b_csv << (b.direction == Boundary::Direction::along_temperature ? "temperature" : "alpha") << ','
          << num(b.fixed_value) << ',' << short_name(b.from) << ',' << short_name(b.to) << ',' << num(b.mean) << ','
          << num(b.sem) << ',' << b.samples << '\n';
  }
  dir.write_metadata({{"points", labels}, {"boundaries", diagram.boundaries.size()}});
  log << "phase-diagram: " << diagram.points.size() << " points x " << config.disorder << " realizations -> "
      << dir.path().string() << '\n';
  return {0, dir.path().string()};
}

std::vector<std::vector<int>> default_hadamard_rows(int mode_count) {
  std::vector<int> ones(static_cast<std::size_t>(mode_count), 1);
  std::vector<int> split(ones);
  for (int i = mode_count / 2; i < mode_count; ++i) split[static_cast<std::size_t>(i)] = -1;
  return {ones, split};
}

RunOutcome cmd_hopfield(const RunConfig& config, std::ostream& log) {
  config.validate();
  if (config.scattering.kind != "hadamard") throw std::invalid_argument("hopfield needs scattering.kind = hadamard");
  const PhotonicModel model(build_spec(config), config.photon_count);
  const auto& rows = config.scattering.rows;
  RunDirectory dir("hopfield", config,
                   seed_lineage(config, {{"scattering", "hadamard-completion[scattering.index]"},
                                         {"chains", "hopfield[pattern set, temperature] -> replica[0, a]"}}));
  auto joint_csv = dir.csv("m_joint.csv", "n_patterns,temperature,pattern,re_m_center,im_m_center,mass");
  auto q_csv = dir.csv("hist_q.csv", "n_patterns,temperature,q,mass");
  auto final_csv = dir.csv("final_m.csv", "n_patterns,temperature,replica,pattern,re_m,im_m,abs_m");

  std::vector<TargetSet> target_sets;
  if (config.targets.kind == "explicit") {
    target_sets.push_back(build_targets(config, model.space(), 0));
  } else {
    for (int n : config.pattern_counts) {
      if (static_cast<std::size_t>(n) > rows.size()) throw std::invalid_argument("more patterns than Hadamard rows");
      std::vector<PhotonConfiguration> members;
      for (int r = 0; r < n; ++r) {
        members.emplace_back(std::vector<int>(static_cast<std::size_t>(config.photon_count), r), config.mode_count);
      }
      target_sets.emplace_back(model.space(), members);
    }
  }

  constexpr double kJointWidth = 0.05;
  constexpr int kJointBins = 44;  // [-1.1, 1.1]
  json runs = json::array();
  for (std::size_t si = 0; si < target_sets.size(); ++si) {
    const auto& targets = target_sets[si];
    const EnergyEvaluator evaluator(model, targets, config.resolved_energy_mode());
    const auto patterns = model.pattern_tensor(targets);
    for (std::size_t ti = 0; ti < config.temperatures.size(); ++ti) {
      MCParams params;
      params.temperature = config.temperatures[ti];
      params.n_steps = config.n_steps;
      params.burn_in = config.burn_in;
      params.seed = derive_seed(config.seed, "hopfield", {si, ti});
      params.reestimate_incumbent = config.reestimate_incumbent;
      params.record_spins = false;
      const auto ensemble = run_replicas(evaluator, params, config.replicas, 0, config.threads);
      const auto order = collect_order_parameters(model.space(), patterns, ensemble.final_states());

      const std::string prefix = std::to_string(targets.size()) + ',' + num(params.temperature) + ',';
      int retrieved = 0;
      double max_imag = 0.0;
      for (int a = 0; a < order.replica_count; ++a) {
        bool hit = false;
        for (std::size_t k = 0; k < order.pattern_count; ++k) {
          const cplx m = order.m[static_cast<std::size_t>(a) * order.pattern_count + k];
          hit = hit || std::abs(m) > 0.9;
          max_imag = std::max(max_imag, std::abs(m.imag()));
          final_csv << prefix << a << ',' << k << ',' << num(m.real()) << ',' << num(m.imag()) << ','
                    << num(std::abs(m)) << '\n';
        }
        if (hit) ++retrieved;
      }
      for (std::size_t k = 0; k < order.pattern_count; ++k) {
        std::vector<std::uint64_t> grid(kJointBins * kJointBins, 0);
        auto bin = [&](double v) { return std::clamp(static_cast<int>(std::floor((v + 1.1) / kJointWidth)), 0, kJointBins - 1); };
        for (int a = 0; a < order.replica_count; ++a) {
          const cplx m = order.m[static_cast<std::size_t>(a) * order.pattern_count + k];
          ++grid[static_cast<std::size_t>(bin(m.real()) * kJointBins + bin(m.imag()))];
        }
        for (int re = 0; re < kJointBins; ++re) {
          for (int im = 0; im < kJointBins; ++im) {
            const auto c = grid[static_cast<std::size_t>(re * kJointBins + im)];
            if (!c) continue;
            joint_csv << prefix << k << ',' << num(-1.1 + (re + 0.5) * kJointWidth) << ','
                      << num(-1.1 + (im + 0.5) * kJointWidth) << ',' << num(static_cast<double>(c) / order.replica_count)
                      << '\n';
          }
        }
      }
      auto qh = make_overlap_histogram(config.mode_count);
      for (double q : order.q) qh.add(q);
      const auto qm = qh.masses();
      for (std::size_t b = 0; b < qm.size(); ++b) q_csv << prefix << num(qh.center(b)) << ',' << num(qm[b]) << '\n';
      runs.push_back({{"n_patterns", targets.size()},
                      {"temperature", params.temperature},
                      {"retrieved_fraction", static_cast<double>(retrieved) / order.replica_count},
                      {"max_abs_imag_m", max_imag}});
      log << "hopfield: N_P=" << targets.size() << " T=" << params.temperature << " retrieved "
          << retrieved << "/" << order.replica_count << '\n';
    }
  }
  dir.write_metadata({{"runs", runs}});
  log << "hopfield -> " << dir.path().string() << '\n';
  return {0, dir.path().string()};
}

std::vector<OracleCheck> run_oracle_suite(const ValidateOptions& options) {
  std::vector<OracleCheck> checks;
  auto run = [&](const std::string& name, double tolerance, auto&& body) {
    OracleCheck c{name, false, 0.0, tolerance, ""};
    try {
      c.max_error = body();
      c.passed = c.max_error <= tolerance;
    } catch (const std::exception& e) {
      c.passed = false;
      c.max_error = std::numeric_limits<double>::infinity();
      c.note = e.what();
    }
    checks.push_back(std::move(c));
  };
  CounterRng rng(derive_seed(options.seed, "validate"));
  auto random_matrix = [&](int n) {
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = cplx{rng.normal(), rng.normal()};
    }
    return a;
  };

  run("permanent vs Leibniz expansion (n <= 6, relative)", 1e-12, [&] {
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n) {
      for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_matrix(n);
        const cplx ref = oracle::permanent_leibniz(a);
        worst = std::max(worst, std::abs(permanent(a) - ref) / std::max(1.0, std::abs(ref)));
      }
    }
    return worst;
  });

  run("permanent of the all-ones matrix equals n! (n <= 10, relative)", 1e-12, [&] {
    double worst = 0.0;
    double factorial = 1.0;
    for (int n = 1; n <= 10; ++n) {
      factorial *= n;
      const ComplexMatrix ones = ComplexMatrix::Ones(n, n);
      worst = std::max(worst, std::abs(permanent(ones) - factorial) / factorial);
    }
    return worst;
  });

  const auto convention = options.corrupt_multiplicity ? MultiplicityConvention::occupation_product
                                                       : MultiplicityConvention::factorial;
  run("output normalization (M in {4, 6}, n_ph in {2, 3})", 1e-9, [&] {
    double worst = 0.0;
    for (int m : {4, 6}) {
      for (int n : {2, 3}) {
        for (int trial = 0; trial < 5; ++trial) {
          const PhotonicModel model(ScatteringSpec{haar_random_unitary(m, rng()), dft_matrix(m),
                                                   PhotonConfiguration(std::vector<int>(static_cast<std::size_t>(n), 0), m)},
                                    n, convention);
          const auto p = model.output_distribution(random_spins(m, rng));
          worst = std::max(worst, std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0));
        }
      }
    }
    return worst;
  });

  run("amplitude: composed vs configuration sum vs state vector (M <= 6)", 1e-9, [&] {
    double worst = 0.0;
    for (auto [m, n] : {std::pair{4, 2}, std::pair{4, 3}, std::pair{6, 2}}) {
      for (int trial = 0; trial < 3; ++trial) {
        const auto s = haar_random_unitary(m, rng());
        const auto prep = haar_random_unitary(m, rng());
        std::vector<int> inj(static_cast<std::size_t>(n));
        for (auto& v : inj) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
        const PhotonicModel model(ScatteringSpec{s, prep, PhotonConfiguration(inj, m)}, n);
        const auto sigma = random_spins(m, rng);
        const auto composed = model.amplitudes(sigma, AmplitudePath::composed);
        const auto summed = model.amplitudes(sigma, AmplitudePath::configuration_sum);
        const auto input = oracle::prepared_state_vector(prep.matrix, model.space(), PhotonConfiguration(inj, m));
        const auto dense = oracle::evolve_state_vector(s.matrix, model.space(), input, sigma);
        for (std::size_t k = 0; k < composed.size(); ++k) {
          worst = std::max({worst, std::abs(composed[k] - summed[k]), std::abs(composed[k] - dense[k]),
                            std::abs(model.input().amplitudes[k] - input[k])});
        }
      }
    }
    return worst;
  });

  run("target probability vs synaptic tensor form (M = 6)", 1e-9, [&] {
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const PhotonicModel model(ScatteringSpec{haar_random_unitary(6, rng()), dft_matrix(6),
                                               PhotonConfiguration({0, 0}, 6)},
                                2);
      std::vector<std::size_t> ks;
      for (std::size_t k = 0; k < model.space().size(); k += 4) ks.push_back(k);
      const TargetSet targets(model.space(), ks);
      const auto j = synaptic_tensor(model.pattern_tensor(targets), model.space().size());
      for (int s = 0; s < 10; ++s) {
        const auto sigma = random_spins(6, rng);
        worst = std::max(worst, std::abs(model.target_probability(sigma, targets) -
                                         tensor_target_probability(j, model.space(), sigma)));
      }
    }
    return worst;
  });

  run("Metropolis detailed balance (M = 4, T = 0.5, TVD)", 0.02, [&] {
    const PhotonicModel model(ScatteringSpec{haar_random_unitary(4, derive_seed(options.seed, "validate-db")),
                                             dft_matrix(4), PhotonConfiguration({0, 0}, 4)},
                              2);
    const TargetSet targets(model.space(), std::vector<std::size_t>{1, 7});
    std::vector<double> energies;
    for (unsigned bits = 0; bits < 16; ++bits) {
      const auto amps = oracle::evolve_state_vector(model.spec().scattering.matrix, model.space(),
                                                    model.input().amplitudes, oracle::spins_from_bits(bits, 4));
      double p = 0.0;
      for (auto k : targets.ordinals()) p += std::norm(amps[k]);
      energies.push_back(-4.0 * p);
    }
    const auto exact = oracle::boltzmann_distribution(energies, 0.5);
    const EnergyEvaluator evaluator(model, targets);
    MCParams params;
    params.temperature = 0.5;
    MetropolisChain chain(evaluator, SpinConfiguration::all_up(4), params, derive_seed(options.seed, "validate-chain"));
    std::vector<double> visits(16, 0.0);
    const int steps = 1'000'000;
    for (int t = 0; t < 1000; ++t) chain.run_mcs();
    for (int t = 0; t < steps; ++t) {
      chain.run_mcs();
      visits[oracle::bits_from_spins(chain.spins())] += 1.0 / steps;
    }
    return total_variation_distance(visits, exact);
  });
  return checks;
}

int cmd_validate(const ValidateOptions& options, std::ostream& log) {
  const auto checks = run_oracle_suite(options);
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    log << (c.passed ? "PASS " : "FAIL ") << c.name << "  max_error=" << num(c.max_error)
        << " tolerance=" << c.tolerance;
    if (!c.note.empty()) log << "  (" << c.note << ")";
    log << '\n';
  }
  log << (all ? "all oracles passed" : "oracle failures detected") << '\n';
  return all ? 0 : 1;
}

}  // namespace phopfield::harness

// Experiment runner: one subcommand per experiment kind, plus `verify` for
// the acceptance suite. Exit status: 0 all verdicts pass, 1 a verdict
// failed, 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stir/acceptance.hpp"
#include "stir/coupling.hpp"
#include "stir/oracle.hpp"
#include "stir/partition.hpp"
#include "stir/split_merge.hpp"
#include "stir/stats.hpp"
#include "stir/stirring.hpp"

#ifndef STIRSIM_VERSION
#define STIRSIM_VERSION "dev"
#endif

namespace {

using nlohmann::json;
using namespace stir;

constexpr int kExitPass = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string kind;
  int d = 1;
  std::vector<int> n{6};
  std::optional<double> T;
  std::optional<std::int64_t> M;
  double theta = 1.0;
  std::int64_t replicas = 1000;
  std::uint64_t seed = 1;
  double eps = 0.01;
  std::int64_t k = 10;
  int grid = 11;
  std::optional<double> threshold;
  std::string chain = "discrete";
  std::string out = "out";
  bool quick = false;
};

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

json config_json(const Config& c) {
  json j;
  j["experiment"] = c.kind;
  j["d"] = c.d;
  j["n"] = c.n;
  j["T"] = c.T ? json(*c.T) : json(nullptr);
  j["M"] = c.M ? json(*c.M) : json(nullptr);
  j["theta"] = c.theta;
  j["replicas"] = c.replicas;
  j["seed"] = c.seed;
  j["eps"] = c.eps;
  j["k"] = c.k;
  j["grid"] = c.grid;
  j["threshold"] = c.threshold ? json(*c.threshold) : json(nullptr);
  j["chain"] = c.chain;
  j["quick"] = c.quick;
  return j;
}

std::filesystem::path output_dir(const Config& c) {
  std::filesystem::path dir{c.out};
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out{path};
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

// Manifest and verdicts; returns the exit status.
int finish(const Config& c, const std::vector<Verdict>& verdicts, json results) {
  const auto dir = output_dir(c);
  const json cfg = config_json(c);
  json manifest;
  manifest["experiment"] = c.kind;
  manifest["config"] = cfg;
  manifest["config_hash"] = hex(fnv1a(cfg.dump()));
  manifest["seed"] = c.seed;
  manifest["version"] = STIRSIM_VERSION;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");

  json vj = json::array();
  bool all = true;
  for (const Verdict& v : verdicts) {
    vj.push_back(json::parse(v.to_json()));
    all = all && v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.test << ": " << v.statistic << " (threshold " << v.threshold
              << ")\n";
  }
  results["verdicts"] = vj;
  write_text(dir / "results.json", results.dump(2) + "\n");
  return all ? kExitPass : kExitVerdict;
}

TorusLattice lattice_of(const Config& c, int side, bool allow_small = false) {
  if (c.d < 1) {
    throw UsageError("--d must be at least 1");
  }
  if (side < (allow_small ? 2 : 3)) {
    throw UsageError("--n must be at least 3");
  }
  return TorusLattice{c.d, side};
}

void require_replicas(const Config& c) {
  if (c.replicas < 1) {
    throw UsageError("--replicas must be at least 1");
  }
}

// Default TV threshold: twice the expected TV of an exact sample of the same
// size, using E|p_hat - p| ~ sqrt(2 p (1 - p) / (pi R)).
double tv_threshold(const Config& c, const std::vector<double>& probabilities) {
  if (c.threshold) {
    return *c.threshold;
  }
  const double r = static_cast<double>(c.replicas);
  double expected = 0.0;
  for (double p : probabilities) {
    expected += 0.5 * std::sqrt(2.0 * p * (1.0 - p) / (std::numbers::pi * r));
  }
  return 2.0 * expected;
}

std::vector<double> exact_probabilities(const std::map<CycleType, Rational>& law) {
  std::vector<double> out;
  for (const auto& [type, p] : law) {
    out.push_back(to_double(p));
  }
  return out;
}

// Default KS threshold: two-sample critical value at level 0.01.
double ks_threshold(const Config& c) {
  return c.threshold.value_or(1.63 * std::sqrt(2.0 / static_cast<double>(c.replicas)));
}

std::string law_csv(const std::map<std::string, std::pair<double, double>>& rows) {
  std::string csv = "cycle_type,empirical,exact\n";
  for (const auto& [type, pq] : rows) {
    std::ostringstream line;
    line << '"' << type << "\"," << std::setprecision(10) << pq.first << ',' << pq.second << '\n';
    csv += line.str();
  }
  return csv;
}

std::string type_label(const CycleType& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    s += (i ? " " : "") + std::to_string(t[i]);
  }
  return s;
}

int run_stationarity(const Config& c) {
  require_replicas(c);
  const TorusLattice lattice = lattice_of(c, c.n.front());
  const auto n = static_cast<std::int64_t>(lattice.vertex_count());
  if (n > kMaxEnumerationSize + 2) {
    throw UsageError("stationarity compares to the exact law and needs N <= 12");
  }
  const double T = c.T.value_or(50.0);
  const auto finals = run_replicas(c.replicas, [&](std::int64_t r) {
    Rng rng{c.seed, static_cast<std::uint64_t>(r)};
    CyclePermutation perm = CyclePermutation::uniform(lattice.vertex_count(), rng);
    run_stirring(lattice, perm, T, rng);
    return perm.lengths();
  });
  EmpiricalLaw law;
  for (const auto& t : finals) {
    law.add(t);
  }
  const auto exact = ewens_law(n);
  std::map<std::string, std::pair<double, double>> rows;
  for (const auto& [type, p] : exact) {
    rows[type_label(type)] = {law.probability(type), to_double(p)};
  }
  write_text(output_dir(c) / "law.csv", law_csv(rows));
  const double tv = tv_distance(law, exact);
  const double limit = tv_threshold(c, exact_probabilities(exact));
  return finish(c, {Verdict{"tv_to_ewens", tv, limit, tv <= limit}}, json{{"N", n}, {"T", T}, {"tv", tv}});
}

int run_weighted(const Config& c) {
  require_replicas(c);
  if (!(c.theta > 0.0)) {
    throw UsageError("--theta must be positive");
  }
  const TorusLattice lattice = lattice_of(c, c.n.front());
  const auto n = static_cast<std::int64_t>(lattice.vertex_count());
  if (n > 12) {
    throw UsageError("weighted-stirring compares to the exact law and needs N <= 12");
  }
  const double T = c.T.value_or(40.0);
  const auto finals = run_replicas(c.replicas, [&](std::int64_t r) {
    Rng rng{c.seed, static_cast<std::uint64_t>(r)};
    CyclePermutation perm = CyclePermutation::uniform(lattice.vertex_count(), rng);
    run_weighted_stirring(lattice, c.theta, perm, T, rng);
    return perm.lengths();
  });
  EmpiricalLaw law;
  for (const auto& t : finals) {
    law.add(t);
  }
  std::map<CycleType, double> weights;
  double z = 0.0;
  for (const auto& [type, p] : ewens_law(n)) {
    weights[type] = to_double(p) * std::pow(c.theta, static_cast<double>(type.size()));
    z += weights[type];
  }
  std::map<CycleType, Rational> target;
  std::map<std::string, std::pair<double, double>> rows;
  for (const auto& [type, w] : weights) {
    target[type] = Rational{w / z};
    rows[type_label(type)] = {law.probability(type), w / z};
  }
  write_text(output_dir(c) / "law.csv", law_csv(rows));
  const double tv = tv_distance(law, target);
  const double limit = tv_threshold(c, exact_probabilities(target));
  return finish(c, {Verdict{"tv_to_weighted_ewens", tv, limit, tv <= limit}},
                json{{"N", n}, {"theta", c.theta}, {"T", T}, {"tv", tv}});
}

int run_split_merge(const Config& c) {
  require_replicas(c);
  const std::int64_t n = c.n.front();
  const double T = c.T.value_or(c.chain == "canonical" ? 50.0 : 20.0);
  if (c.chain == "discrete") {
    if (n < 2 || n > 12) {
      throw UsageError("discrete split-merge compares to the exact law and needs 2 <= N <= 12");
    }
    const auto finals = run_replicas(c.replicas, [&](std::int64_t r) {
      Rng rng{c.seed, static_cast<std::uint64_t>(r)};
      return run_chain(ChainKind::discrete, sample_ewens(n, rng), T, rng).final_state.lengths();
    });
    EmpiricalLaw law;
    for (const auto& t : finals) {
      law.add(t);
    }
    const auto exact = ewens_law(n);
    std::map<std::string, std::pair<double, double>> rows;
    for (const auto& [type, p] : exact) {
      rows[type_label(type)] = {law.probability(type), to_double(p)};
    }
    write_text(output_dir(c) / "law.csv", law_csv(rows));
    const double tv = tv_distance(law, exact);
    const double limit = tv_threshold(c, exact_probabilities(exact));
    return finish(c, {Verdict{"tv_to_ewens", tv, limit, tv <= limit}},
                  json{{"N", n}, {"T", T}, {"tv", tv}});
  }
  if (c.chain != "canonical") {
    throw UsageError("--chain must be discrete or canonical");
  }
  const auto pairs = run_replicas(c.replicas, [&](std::int64_t r) {
    Rng rng{c.seed, static_cast<std::uint64_t>(r)};
    const double chain = run_chain(ChainKind::canonical, OrderedPartition{}, T, rng).final_state[0];
    return std::pair<double, double>{chain, sample_pd1(rng)[0]};
  });
  std::vector<double> a;
  std::vector<double> b;
  for (const auto& [x, y] : pairs) {
    a.push_back(x);
    b.push_back(y);
  }
  const double ks = ks_distance(a, b);
  const double limit = ks_threshold(c);
  return finish(c, {Verdict{"ks_xi1_to_pd1", ks, limit, ks <= limit}}, json{{"T", T}, {"ks", ks}});
}

int run_coupling_experiment(const Config& c) {
  require_replicas(c);
  json per_n = json::array();
  std::vector<double> medians;
  std::vector<double> mismatch;
  std::string csv = "N,median_max_distance,p_tau_before_T,mean_max_distance\n";
  for (int side : c.n) {
    const TorusLattice lattice = lattice_of(c, side);
    const auto n = static_cast<std::int64_t>(lattice.vertex_count());
    const double T = c.T.value_or(default_horizon(n));
    const auto reports = run_replicas(c.replicas, [&](std::int64_t r) {
      Rng rng{c.seed + static_cast<std::uint64_t>(side), static_cast<std::uint64_t>(r)};
      return run_coupling(lattice, T, c.M, rng);
    });
    std::vector<double> maxima;
    double hits = 0.0;
    json runs = json::array();
    for (const CouplingReport& rep : reports) {
      maxima.push_back(rep.max_distance);
      hits += rep.tau ? 1.0 : 0.0;
      runs.push_back(json::parse(rep.to_json()));
    }
    const MeanEstimate mean = mean_and_stderr(maxima);
    std::sort(maxima.begin(), maxima.end());
    const double median = 0.5 * (maxima[(maxima.size() - 1) / 2] + maxima[maxima.size() / 2]);
    const double p_tau = hits / static_cast<double>(c.replicas);
    medians.push_back(median);
    mismatch.push_back(p_tau);
    per_n.push_back({{"N", n},
                     {"n", side},
                     {"T", T},
                     {"M", reports.front().cutoff},
                     {"median_max_distance", median},
                     {"p_tau_before_T", p_tau},
                     {"reports", std::move(runs)}});
    std::ostringstream line;
    line << n << ',' << median << ',' << p_tau << ',' << mean.mean << '\n';
    csv += line.str();
  }
  write_text(output_dir(c) / "coupling.csv", csv);
  std::vector<Verdict> verdicts;
  if (c.n.size() > 1) {
    const auto rises = [](const std::vector<double>& v) {
      double worst = 0.0;
      for (std::size_t i = 1; i < v.size(); ++i) {
        worst = std::max(worst, v[i] - v[i - 1]);
      }
      return worst;
    };
    verdicts.push_back(Verdict{"median_max_distance_nonincreasing", rises(medians), 0.0, rises(medians) <= 0.0});
    verdicts.push_back(Verdict{"p_tau_nonincreasing", rises(mismatch), 0.0, rises(mismatch) <= 0.0});
  }
  return finish(c, verdicts, json{{"runs", std::move(per_n)}});
}

int run_oracle_verify(const Config& c) {
  const TorusLattice lattice = lattice_of(c, c.n.front(), true);
  const auto n = static_cast<int>(lattice.vertex_count());
  if (n > kMaxMomentEnumerationSize) {
    throw UsageError("oracle-verify enumerates S_N and needs N = n^d <= 8");
  }
  OracleSummary first = verify_first_moments(n, true);
  const OracleSummary second = verify_second_moments(n, true);
  first.cases.insert(first.cases.end(), second.cases.begin(), second.cases.end());
  std::int64_t ewens_bad = 0;
  for (const auto& [type, p] : enumerate_cycle_type_law(n)) {
    const Rational closed = ewens_pmf(CycleTypeCounts::from_lengths(type));
    first.cases.push_back(OracleCase{"pi^N(" + type_label(type) + ")", closed, p});
    ewens_bad += closed != p ? 1 : 0;
  }
  std::string csv = "case,closed_form,oracle,equal\n";
  for (const OracleCase& oc : first.cases) {
    csv += '"' + oc.description + "\"," + oc.closed_form.get_str() + ',' + oc.oracle.get_str() + ',' +
           (oc.equal() ? "true" : "false") + '\n';
  }
  write_text(output_dir(c) / "oracle.csv", csv);
  const auto mismatches = static_cast<double>(first.mismatches + second.mismatches + ewens_bad);
  return finish(c, {Verdict{"closed_form_mismatches", mismatches, 0.0, mismatches == 0.0}},
                json{{"N", n}, {"cases", first.cases.size()}, {"mismatches", mismatches}});
}

int run_mass_function(const Config& c) {
  require_replicas(c);
  const TorusLattice lattice = lattice_of(c, c.n.front());
  const double T = c.T.value_or(5.0);
  if (c.grid < 2 || !(T > 0.0)) {
    throw UsageError("mass-function needs --grid >= 2 and --T > 0");
  }
  std::vector<double> grid;
  for (int g = 0; g < c.grid; ++g) {
    grid.push_back(T * g / (c.grid - 1));
  }
  const auto curve = estimate_mass_function(lattice, grid, c.k, c.eps, c.replicas, c.seed);
  std::string csv = "t,m_hat,stderr\n";
  json points = json::array();
  for (const MassPoint& p : curve) {
    std::ostringstream line;
    line << std::setprecision(10) << p.t << ',' << p.m_hat << ',' << p.stderr_ << '\n';
    csv += line.str();
    points.push_back({{"t", p.t}, {"m_hat", p.m_hat}, {"stderr", p.stderr_}});
  }
  write_text(output_dir(c) / "mass_function.csv", csv);
  // Exploratory output; there is no verdict to fail.
  return finish(c, {}, json{{"exploratory", true}, {"curve", std::move(points)}});
}

int run_verify(const Config& c) {
  AcceptanceOptions options;
  options.seed = c.seed;
  options.quick = c.quick;
  options.log = &std::cout;
  const auto results = run_acceptance(options);
  std::vector<Verdict> verdicts;
  for (const CriterionResult& r : results) {
    if (!r.skipped) {
      verdicts.push_back(Verdict{std::to_string(r.id) + " " + r.name, r.seconds, 0.0, r.pass});
    }
  }
  json rows = json::array();
  for (const CriterionResult& r : results) {
    rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"skipped", r.skipped}, {"detail", r.detail}});
  }
  return finish(c, verdicts, json{{"criteria", std::move(rows)}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random stirring, split-merge chains and their coupling"};
  app.set_config("--config", "", "Key-value configuration file; command-line flags override it");
  app.require_subcommand(1);
  Config c;

  auto common = [&c](CLI::App* sub, bool lattice) {
    if (lattice) {
      sub->add_option("--d", c.d, "Torus dimension");
    }
    sub->add_option("--T", c.T, "Time horizon");
    sub->add_option("--replicas", c.replicas, "Independent replicas");
    sub->add_option("--seed", c.seed, "Base seed; replica r uses stream r");
    sub->add_option("--out", c.out, "Output directory");
    sub->add_option("--threshold", c.threshold, "Verdict threshold");
  };

  auto* stationarity = app.add_subcommand("stationarity", "Cycle-type law of stirring from a uniform start");
  common(stationarity, true);
  stationarity->add_option("--n", c.n, "Torus side")->expected(1);

  auto* coupling = app.add_subcommand("coupling", "Coupled stirring and split-merge runs");
  common(coupling, true);
  coupling->add_option("--n", c.n, "Torus side; repeat for a trend")->expected(1, 16);
  coupling->add_option("--M", c.M, "Kernel cutoff (default ceil(sqrt N))");

  auto* oracle = app.add_subcommand("oracle-verify", "Closed forms against enumeration of S_N, N = n^d");
  oracle->add_option("--d", c.d, "Torus dimension");
  oracle->add_option("--n", c.n, "Torus side")->expected(1);
  oracle->add_option("--out", c.out, "Output directory");

  auto* split_merge = app.add_subcommand("split-merge", "Split-merge chain against its stationary law");
  common(split_merge, false);
  split_merge->add_option("--n", c.n, "N for the discrete chain")->expected(1);
  split_merge->add_option("--chain", c.chain, "discrete or canonical");

  auto* mass = app.add_subcommand("mass-function", "Exploratory estimate of the macroscopic mass from the identity");
  common(mass, true);
  mass->add_option("--n", c.n, "Torus side")->expected(1);
  mass->add_option("--eps", c.eps, "Macroscopic threshold");
  mass->add_option("--k", c.k, "Number of largest cycles considered");
  mass->add_option("--grid", c.grid, "Number of time points on [0, T]");

  auto* weighted = app.add_subcommand("weighted-stirring", "Theta-weighted stirring against its stationary law");
  common(weighted, true);
  weighted->add_option("--n", c.n, "Torus side")->expected(1);
  weighted->add_option("--theta", c.theta, "Weight per cycle");

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--seed", c.seed, "Base seed");
  verify->add_option("--out", c.out, "Output directory");
  verify->add_flag("--quick", c.quick, "Exact checks only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*stationarity) {
      c.kind = "stationarity";
      return run_stationarity(c);
    }
    if (*coupling) {
      c.kind = "coupling";
      return run_coupling_experiment(c);
    }
    if (*oracle) {
      c.kind = "oracle-verify";
      return run_oracle_verify(c);
    }
    if (*split_merge) {
      c.kind = "split-merge";
      return run_split_merge(c);
    }
    if (*mass) {
      c.kind = "mass-function";
      return run_mass_function(c);
    }
    if (*weighted) {
      c.kind = "weighted-stirring";
      return run_weighted(c);
    }
    c.kind = "verify";
    return run_verify(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerdict;
  }
}

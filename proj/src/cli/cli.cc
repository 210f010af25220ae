#include "qmoney/cli.h"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <map>

#include "drivers.h"
#include "qmoney/errors.h"

#ifndef QMONEY_FIXTURE_DIR
#define QMONEY_FIXTURE_DIR "fixtures"
#endif

namespace qmoney::cli {

namespace {

struct Output {
  std::string json_path;
  std::string format = "json";
};

void add_output_options(CLI::App* sub, Output& o) {
  sub->add_option("--json", o.json_path, "Write the JSON report to this path");
  sub->add_option("--format", o.format, "Report format on stdout")
      ->check(CLI::IsMember({"json", "text", "csv"}))
      ->capture_default_str();
}

std::string scalar_text(const Json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

void write_text(const Json& doc, std::ostream& out) {
  out << doc["command"].get<std::string>() << ": " << (doc["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
  for (const auto& inv : doc["invariants"]) {
    out << "  [" << (inv["passed"].get<bool>() ? "PASS" : "FAIL") << "] " << inv["name"].get<std::string>()
        << " (" << inv["oracle"].get<std::string>() << ")\n";
  }
  for (const char* section : {"results", "aggregate"}) {
    if (!doc.contains(section)) {
      continue;
    }
    for (const auto& [k, v] : doc[section].items()) {
      if (v.is_primitive()) {
        out << "  " << k << " = " << scalar_text(v) << "\n";
      }
    }
  }
}

std::string csv_cell(const Json& v) {
  std::string s = scalar_text(v);
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string quoted = "\"";
  for (char ch : s) {
    quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  }
  return quoted + "\"";
}

void write_csv(const Json& doc, std::ostream& out) {
  const Json& trials = doc.contains("trials") ? doc["trials"] : Json::array();
  if (trials.empty()) {
    out << "field,value\n";
    for (const auto& [k, v] : doc["results"].items()) {
      out << k << ',' << csv_cell(v) << "\n";
    }
    return;
  }
  std::vector<std::string> keys;
  for (const auto& [k, v] : trials.front().items()) {
    keys.push_back(k);
  }
  for (size_t i = 0; i < keys.size(); ++i) {
    out << (i ? "," : "") << keys[i];
  }
  out << "\n";
  for (const auto& rec : trials) {
    for (size_t i = 0; i < keys.size(); ++i) {
      out << (i ? "," : "") << (rec.contains(keys[i]) ? csv_cell(rec[keys[i]]) : "");
    }
    out << "\n";
  }
}

int emit(const Report& report, const Output& o, std::ostream& out, std::ostream& err) {
  const Json doc = report.json();
  if (!o.json_path.empty()) {
    std::ofstream f(o.json_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << o.json_path << "\n";
      return kExitRuntimeError;
    }
    f << doc.dump(2) << "\n";
    if (!f.flush()) {
      err << "error: failed writing " << o.json_path << "\n";
      return kExitRuntimeError;
    }
    write_text(doc, out);
  } else if (o.format == "text") {
    write_text(doc, out);
  } else if (o.format == "csv") {
    write_csv(doc, out);
  } else {
    out << doc.dump(2) << "\n";
  }
  if (!report.passed()) {
    err << "error: invariant check failed\n";
    return kExitInvariantFailure;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attacks on public-key quantum money schemes at desk scale"};
  app.name("qmoney");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Output output;
  std::string fixture_dir = QMONEY_FIXTURE_DIR;
  app.add_option("--fixture-dir", fixture_dir, "Fixture tree root")->capture_default_str();
  std::function<Report()> driver;

  auto* hs = app.add_subcommand("hidden-subspace", "Jacobian-kernel attack on hidden-subspace money");
  hs->require_subcommand(1);
  HsDemoConfig demo;
  auto* hs_demo_cmd = hs->add_subcommand("demo", "Run the worked example from the fixture tree");
  hs_demo_cmd->add_option("--fixture", demo.fixture, "Fixture name")->capture_default_str();
  add_output_options(hs_demo_cmd, output);
  hs_demo_cmd->callback([&] {
    demo.fixture_dir = fixture_dir;
    driver = [&] { return hs_demo(demo); };
  });

  HsBenchConfig bench;
  auto* hs_bench_cmd = hs->add_subcommand("bench", "Monte-Carlo attack statistics");
  hs_bench_cmd->add_option("--n", bench.n, "Number of variables")->capture_default_str();
  hs_bench_cmd->add_option("--beta", bench.beta, "m / n as an integer or fraction a/b")->capture_default_str();
  hs_bench_cmd->add_option("--d", bench.d, "Polynomial degree")->capture_default_str();
  hs_bench_cmd->add_option("--trials", bench.trials, "Number of instances")->capture_default_str();
  hs_bench_cmd->add_option("--seed", bench.seed, "Root seed")->capture_default_str();
  add_output_options(hs_bench_cmd, output);
  hs_bench_cmd->callback([&] { driver = [&] { return hs_bench(bench); }; });

  auto* zh = app.add_subcommand("zhandry", "Cloning attack on multivariate-hash money");
  zh->require_subcommand(1);
  CloneAttackConfig attack;
  auto* zh_attack = zh->add_subcommand("attack", "Clone a bolt component for serial y");
  zh_attack->add_option("--m", attack.m, "Input bits")->capture_default_str();
  zh_attack->add_option("--n", attack.n, "Output bits")->capture_default_str();
  zh_attack->add_option("--y", attack.y, "Serial component in hexadecimal")->capture_default_str();
  zh_attack->add_option("--trials", attack.trials, "Number of clones")->capture_default_str();
  zh_attack->add_option("--seed", attack.seed, "Root seed")->capture_default_str();
  add_output_options(zh_attack, output);
  zh_attack->callback([&] { driver = [&] { return clone_attack(attack); }; });

  CloneCensusConfig cen;
  auto* zh_census = zh->add_subcommand("census", "Preimage counts of a random key");
  zh_census->add_option("--m", cen.m, "Input bits")->capture_default_str();
  zh_census->add_option("--n", cen.n, "Output bits")->capture_default_str();
  zh_census->add_option("--seed", cen.seed, "Root seed")->capture_default_str();
  add_output_options(zh_census, output);
  zh_census->callback([&] { driver = [&] { return clone_census(cen); }; });

  BrandtConfig bc;
  auto* br = app.add_subcommand("brandt", "Ideal classes, Brandt matrices and theta series");
  br->add_option("--p", bc.p, "Ramified prime")->capture_default_str();
  br->add_option("--nmax", bc.n_max, "Largest n")->capture_default_str();
  add_output_options(br, output);
  br->callback([&] {
    bc.fixture_dir = fixture_dir;
    driver = [&] { return brandt(bc); };
  });

  auto* he = app.add_subcommand("hecke", "Hecke eigenform money and the reduction attack");
  he->require_subcommand(1);
  HeckeEigenConfig ec;
  auto* he_eigen = he->add_subcommand("eigen", "Simultaneous Hecke eigenbasis");
  he_eigen->add_option("--p", ec.p, "Ramified prime")->capture_default_str();
  he_eigen->add_option("--primes", ec.primes, "Primes for the splitting combination")
      ->delimiter(',')
      ->capture_default_str();
  he_eigen->add_option("--nmax", ec.n_max, "Largest n")->capture_default_str();
  he_eigen->add_option("--seed", ec.seed, "Root seed")->capture_default_str();
  add_output_options(he_eigen, output);
  he_eigen->callback([&] { driver = [&] { return hecke_eigen(ec); }; });

  HeckeAttackConfig ac;
  auto* he_attack = he->add_subcommand("attack", "Reconstruct eigenforms from eigenvalues");
  he_attack->add_option("--p", ac.p, "Ramified prime")->capture_default_str();
  he_attack->add_option("--primes", ac.primes, "Primes l_1, l_2, ...")->delimiter(',')->capture_default_str();
  he_attack->add_option("--eps", ac.eps, "Eigenvalue noise bound")->capture_default_str();
  he_attack->add_option("--pivot", ac.pivot, "Pivot class index or 'auto'")->capture_default_str();
  he_attack->add_option("--seed", ac.seed, "Root seed")->capture_default_str();
  add_output_options(he_attack, output);
  he_attack->callback([&] { driver = [&] { return hecke_attack(ac); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    return emit(driver(), output, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitInvariantFailure;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const std::length_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

}  // namespace qmoney::cli

#include "khess/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "khess/energy.hpp"
#include "khess/errors.hpp"
#include "khess/serialize.hpp"
#include "khess/verify.hpp"

namespace khess {

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, path + ": " + e.what());
  }
}

std::vector<SuiteConfig> parse_config(const json& j) {
  std::vector<SuiteConfig> suites;
  const json* list = nullptr;
  if (j.is_array()) {
    list = &j;
  } else if (j.is_object() && j.contains("suites")) {
    if (!j["suites"].is_array())
      field::fail("suites", "expected an array of suite configs");
    list = &j["suites"];
  }
  if (list) {
    for (size_t i = 0; i < list->size(); ++i)
      suites.push_back(suite_config_from_json(
          (*list)[i], "suites[" + std::to_string(i) + "]"));
  } else {
    suites.push_back(suite_config_from_json(j, "config"));
  }
  if (suites.empty()) field::fail("suites", "no suites configured");
  return suites;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string(), path.string() + ": cannot write");
  out << body;
}

struct VerifyArgs {
  std::string config_path;
  std::string out_dir;
  uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 1;
};

int do_verify(const VerifyArgs& a, std::ostream& out) {
  std::vector<SuiteConfig> suites = parse_config(load_json_file(a.config_path));
  if (a.seed_set)
    for (SuiteConfig& cfg : suites) cfg.seed = a.seed;

  std::filesystem::create_directories(a.out_dir);
  json manifest;
  manifest["version"] = kToolVersion;
  manifest["jobs"] = a.jobs;
  if (a.seed_set) manifest["seed"] = a.seed;
  json echo = json::array();
  for (const SuiteConfig& cfg : suites) echo.push_back(suite_config_to_json(cfg));
  manifest["config"] = std::move(echo);

  bool all_pass = true;
  json entries = json::array();
  for (size_t i = 0; i < suites.size(); ++i) {
    const SuiteReport rep = run_suite(suites[i], a.jobs);
    const std::string csv_name =
        "suite_" + std::to_string(i) + "_" + suites[i].suite + ".csv";
    write_file(std::filesystem::path(a.out_dir) / csv_name, report_csv(rep));
    json entry = report_to_json(rep);
    entry["csv"] = csv_name;
    entries.push_back(std::move(entry));
    all_pass = all_pass && rep.passed;
    out << suites[i].suite << ": " << rep.rows.size() << " cases, "
        << rep.violations << " violations, " << rep.skips << " skips, "
        << rep.aborted << " aborted, min margin "
        << format_double(rep.min_margin) << ", "
        << format_double(rep.elapsed_seconds) << "s\n";
  }
  manifest["suites"] = std::move(entries);
  manifest["passed"] = all_pass;
  write_file(std::filesystem::path(a.out_dir) / "manifest.json",
             manifest.dump(2) + "\n");
  out << (all_pass ? "PASS" : "FAIL") << "\n";
  return all_pass ? 0 : 2;
}

struct ComputeArgs {
  std::string functional;
  std::vector<std::string> spec_paths;
  int n = 0;
  int k = 0;
  int m = 0;
  bool m_set = false;
  std::string quadrature;
};

int do_compute(const ComputeArgs& a, std::ostream& out) {
  std::vector<FunctionSpec> specs;
  for (const std::string& path : a.spec_paths)
    specs.push_back(spec_from_json(load_json_file(path), path));
  for (size_t i = 1; i < specs.size(); ++i)
    if (!(specs[i].space == specs[0].space))
      throw ConfigError("--spec", "--spec: the files mix function spaces");
  const Space space = specs[0].space;
  if (space.n != a.n)
    throw ConfigError("--n", "--n: spec files are defined for n=" +
                                 std::to_string(space.n));

  QuadratureSpec qspec;
  if (!a.quadrature.empty()) {
    qspec = parse_quadrature(a.quadrature);
  } else {
    bool radial = true;
    for (const FunctionSpec& u : specs) radial = radial && is_radial(u);
    qspec.kind = radial ? "radial_gauss" : "grid";
  }
  const QuadratureScheme scheme = make_scheme(qspec, space.real_dim());

  auto expect = [&](size_t count, SpaceKind kind, const char* what) {
    if (specs.size() != count)
      throw ConfigError("--spec", std::string("--spec: ") + what + " takes " +
                                      std::to_string(count) + " spec file(s)");
    if (space.kind != kind)
      throw ConfigError("--spec", std::string("--spec: ") + what +
                                      " expects the other function space");
  };

  EnergyValue value;
  const size_t kp1 = static_cast<size_t>(a.k) + 1;
  if (a.functional == "Ik") {
    expect(1, SpaceKind::Complex, "Ik");
    value = energy_Ik(specs[0], a.k, scheme);
  } else if (a.functional == "Jk") {
    expect(1, SpaceKind::Real, "Jk");
    value = energy_Jk(specs[0], a.k, scheme);
  } else if (a.functional == "Fk") {
    expect(kp1, SpaceKind::Complex, "Fk");
    value = mixed_energy_complex(specs, scheme);
  } else if (a.functional == "Gk") {
    expect(kp1, SpaceKind::Real, "Gk");
    value = mixed_energy_real(specs, scheme);
  } else {  // mixed_lower
    if (!a.m_set) throw ConfigError("--m", "--m: required for mixed_lower");
    if (specs.size() != static_cast<size_t>(a.m) + 1)
      throw ConfigError("--spec",
                        "--spec: mixed_lower takes the target plus m files");
    const std::vector<FunctionSpec> lower(specs.begin() + 1, specs.end());
    value = mixed_lower_energy(specs[0], lower, a.k, scheme);
  }
  out << energy_to_json(value).dump() << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"k-Hessian energies, inequalities, and verification suites",
               "khess"};
  app.require_subcommand(1);

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "run randomized suites");
  verify->add_option("--config", va.config_path, "suite configuration JSON")
      ->required();
  verify->add_option("--out", va.out_dir, "output directory")->required();
  CLI::Option* seed_opt =
      verify->add_option("--seed", va.seed, "override every suite seed");
  verify->add_option("--jobs", va.jobs, "worker threads")
      ->check(CLI::PositiveNumber);

  ComputeArgs ca;
  CLI::App* compute = app.add_subcommand("compute", "evaluate one functional");
  compute->add_option("--functional", ca.functional, "energy functional")
      ->required()
      ->check(CLI::IsMember({"Ik", "Fk", "Jk", "Gk", "mixed_lower"}));
  compute->add_option("--spec", ca.spec_paths, "function spec JSON file(s)")
      ->required();
  compute->add_option("--n", ca.n, "space dimension")->required();
  compute->add_option("--k", ca.k, "energy order")->required();
  CLI::Option* m_opt = compute->add_option("--m", ca.m, "lower order");
  compute->add_option("--quadrature", ca.quadrature, "KIND:PARAM");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }

  va.seed_set = seed_opt->count() > 0;
  ca.m_set = m_opt->count() > 0;
  try {
    if (verify->parsed()) return do_verify(va, out);
    return do_compute(ca, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace khess

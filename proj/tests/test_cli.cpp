#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
  const char* env = std::getenv("CHROMSIM_CLI");
  REQUIRE(env != nullptr);
  return env;
}

std::string scenario_dir() {
  const char* env = std::getenv("CHROMSIM_SCENARIOS");
  REQUIRE(env != nullptr);
  return env;
}

int run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// small linear scenario for quick end-to-end runs
fs::path write_quick_scenario(const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path path = dir / "quick_linear.cfg";
  std::ofstream out(path);
  out << "[column]\nlength = 1.0\nvelocity = 1.0\nphase_ratio = 1.5\nplate_count = 270\n"
      << "[isotherm]\na = 1.0\nb = 0.0\n"
      << "[injection]\nfeed = 1.0\nt_inj = 3.0\n"
      << "[grid]\nn_x = 50\nn_t = 700\nt_max = 7.0\n"
      << "[solver]\neta = 0.25\n";
  return path;
}

}  // namespace

TEST_CASE("run produces the declared outputs with exit code 0") {
  const fs::path work = fs::path("cli_work") / "run";
  fs::remove_all(work);
  const fs::path scenario = write_quick_scenario(work);

  const int code = run_cli("run --scenario " + scenario.string() + " --snapshots 2.5 --out-dir " +
                           (work / "out").string());
  CHECK(code == 0);
  CHECK(fs::exists(work / "out" / "chromatogram.csv"));
  CHECK(fs::exists(work / "out" / "mass_report.csv"));
  CHECK(fs::exists(work / "out" / "field_t2.5.csv"));
  CHECK(fs::exists(work / "out" / "manifest.json"));

  const std::string manifest = slurp(work / "out" / "manifest.json");
  CHECK(manifest.find("\"eta\": 0.25") != std::string::npos);
  CHECK(manifest.find("\"mode\": \"mmocaa\"") != std::string::npos);
  CHECK(manifest.find("\"wall_time_s\"") != std::string::npos);

  const std::string chrom = slurp(work / "out" / "chromatogram.csv");
  CHECK(chrom.rfind("time,u1", 0) == 0);
  fs::remove_all(work);
}

TEST_CASE("outputs are byte-stable across reruns") {
  const fs::path work = fs::path("cli_work") / "stable";
  fs::remove_all(work);
  const fs::path scenario = write_quick_scenario(work);

  REQUIRE(run_cli("run --scenario " + scenario.string() + " --out-dir " +
                  (work / "a").string()) == 0);
  REQUIRE(run_cli("run --scenario " + scenario.string() + " --out-dir " +
                  (work / "b").string()) == 0);
  CHECK(slurp(work / "a" / "chromatogram.csv") == slurp(work / "b" / "chromatogram.csv"));
  CHECK(slurp(work / "a" / "mass_report.csv") == slurp(work / "b" / "mass_report.csv"));
  fs::remove_all(work);
}

TEST_CASE("disabling the adjustment grows the final mass defect") {
  const fs::path work = fs::path("cli_work") / "adjust";
  fs::remove_all(work);
  fs::create_directories(work);
  // nonlinear pulse: the plain characteristics step visibly leaks mass here
  const fs::path scenario = work / "quick_langmuir.cfg";
  {
    std::ofstream out(scenario);
    out << "[column]\nlength = 1.0\nvelocity = 1.0\nporosity = 0.5\nplate_count = 250\n"
        << "[isotherm]\na = 1.0\nb = 1.0\n"
        << "[injection]\nfeed = 1.0\nt_inj = 0.2\n"
        << "[grid]\nn_x = 50\nn_t = 300\nt_max = 3.0\n"
        << "[solver]\neta = 0.5\n";
  }

  REQUIRE(run_cli("run --scenario " + scenario.string() + " --out-dir " +
                  (work / "on").string()) == 0);
  REQUIRE(run_cli("run --scenario " + scenario.string() + " --no-mass-adjust --out-dir " +
                  (work / "off").string()) == 0);

  auto final_deficit = [](const fs::path& csv) {
    std::ifstream in(csv);
    std::string line, last;
    std::getline(in, line);  // header
    while (std::getline(in, line))
      if (!line.empty()) last = line;
    const size_t comma = last.rfind(',');
    return std::abs(std::stod(last.substr(comma + 1)));
  };
  const double on = final_deficit(work / "on" / "mass_report.csv");
  const double off = final_deficit(work / "off" / "mass_report.csv");
  CHECK(on < off);
  fs::remove_all(work);
}

TEST_CASE("exit codes distinguish failure families") {
  // unreadable scenario -> 4
  CHECK(run_cli("run --scenario does_not_exist.cfg") == 4);

  // ideal mode on a two-component scenario -> 2
  CHECK(run_cli("run --scenario " + scenario_dir() +
                "/example43_twocomponent.cfg --mode ideal --out-dir cli_work/reject") == 2);

  // CFL violation in strict mode -> 2
  const fs::path work = fs::path("cli_work") / "cfl";
  fs::remove_all(work);
  fs::create_directories(work);
  {
    std::ofstream out(work / "bad.cfg");
    out << "[column]\nlength = 1.0\nvelocity = 1.0\nphase_ratio = 1.5\nplate_count = 270\n"
        << "[isotherm]\na = 1.0\nb = 0.0\n"
        << "[injection]\nfeed = 1.0\nt_inj = 3.0\n"
        << "[grid]\nn_x = 100\nn_t = 400\nt_max = 7.0\n";
  }
  CHECK(run_cli("run --scenario " + (work / "bad.cfg").string()) == 2);

  // inner iteration capped at one sweep on a nonlinear pulse -> 3
  {
    std::ofstream out(work / "capped.cfg");
    out << "[column]\nlength = 1.0\nvelocity = 1.0\nporosity = 0.5\nplate_count = 250\n"
        << "[isotherm]\na = 1.0\nb = 1.0\n"
        << "[injection]\nfeed = 1.0\nt_inj = 0.2\n"
        << "[grid]\nn_x = 30\nn_t = 120\nt_max = 1.0\n"
        << "[solver]\ninner_cap = 1\ninner_tol = 1e-14\n";
  }
  CHECK(run_cli("run --scenario " + (work / "capped.cfg").string() + " --out-dir " +
                (work / "out").string()) == 3);
  fs::remove_all(work);
  fs::remove_all("cli_work");
}

TEST_CASE("study emits a ladder table with observed orders") {
  const fs::path work = fs::path("cli_work") / "study";
  fs::remove_all(work);
  const fs::path scenario = write_quick_scenario(work);

  REQUIRE(run_cli("study --scenario " + scenario.string() +
                  " --ladder 50:700,100:1400 --jobs 2 --out-dir " + (work / "out").string()) == 0);
  const std::string table = slurp(work / "out" / "study.csv");
  CHECK(table.find("n_x,n_t,l1_u1,l1_total,order,wall_time_s") != std::string::npos);
  CHECK(table.find("\n50,700,") != std::string::npos);
  CHECK(table.find("\n100,1400,") != std::string::npos);
  fs::remove_all(work);
}

TEST_CASE("compare overlays the analytic reference") {
  const fs::path work = fs::path("cli_work") / "compare";
  fs::remove_all(work);
  const fs::path scenario = write_quick_scenario(work);

  REQUIRE(run_cli("compare --scenario " + scenario.string() + " --reference analytic --out-dir " +
                  (work / "out").string()) == 0);
  const std::string overlay = slurp(work / "out" / "compare.csv");
  CHECK(overlay.rfind("time,numeric_u1,reference_u1,abs_error_u1", 0) == 0);
  CHECK(slurp(work / "out" / "compare_summary.json").find("analytic") != std::string::npos);
  fs::remove_all(work);
}

#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  static const fs::path dir = [] {
    const auto d = fs::temp_directory_path() / "specdec_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int simulate(const std::string& args) {
  const std::string cmd = std::string("\"") + SIMULATE_PATH + "\" " + args + " > \"" +
                          (workdir() / "stdout.txt").string() + "\" 2> \"" + (workdir() / "stderr.txt").string() +
                          "\"";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  const auto path = workdir() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("a small run writes the canonical files") {
  const auto cfg = write_config("small.cfg", "n_slots = 200\nhistory_slots = 200\nwarmup_slots = 20\nk_values = 3, 4\n");
  const auto out = workdir() / "out";
  CHECK(simulate("--scenario recommendation --config \"" + cfg.string() + "\" --seed 4 --reps 2 --out \"" +
                 out.string() + "\" --format json,csv,svg") == 0);
  CHECK(fs::exists(out / "recommendation_seed4.json"));
  CHECK(fs::exists(out / "recommendation_seed4.csv"));
  CHECK(fs::exists(out / "recommendation_seed4_p_collision.svg"));
  const auto doc = nlohmann::json::parse(slurp(out / "recommendation_seed4.json"));
  CHECK(doc.at("decision").size() == 2 * 2 * 2);
  CHECK(slurp(workdir() / "stdout.txt").find("wrote") != std::string::npos);
}

TEST_CASE("verbose runs add an event log") {
  const auto cfg = write_config("verbose.cfg", "n_slots = 150\nhistory_slots = 150\nwarmup_slots = 10\nk_values = 3\n");
  const auto out = workdir() / "verbose";
  CHECK(simulate("--scenario decision1 --config \"" + cfg.string() + "\" --out \"" + out.string() + "\" --verbose") ==
        0);
  std::ifstream events(out / "decision1_seed1_events.jsonl");
  std::string line;
  REQUIRE(std::getline(events, line));
  CHECK(nlohmann::json::parse(line).contains("event"));
}

TEST_CASE("configuration errors exit with code 2") {
  CHECK(simulate("") == 2);
  CHECK(simulate("--scenario nonsense") == 2);
  CHECK(simulate("--scenario decision1 --format pdf") == 2);
  CHECK(simulate("--scenario decision1 --bogus-flag") == 2);
  const auto unknown = write_config("unknown.cfg", "not_a_key = 1\n");
  CHECK(simulate("--scenario decision1 --config \"" + unknown.string() + "\"") == 2);
  CHECK(slurp(workdir() / "stderr.txt").find("not_a_key") != std::string::npos);
  const auto bad_range = write_config("range.cfg", "gamma = 1.5\n");
  CHECK(simulate("--scenario decision1 --config \"" + bad_range.string() + "\"") == 2);
  const auto conflict = write_config("conflict.cfg", "scenario = fusion\n");
  CHECK(simulate("--scenario decision1 --config \"" + conflict.string() + "\"") == 2);
}

TEST_CASE("I/O errors exit with code 3") {
  CHECK(simulate("--scenario decision1 --config \"" + (workdir() / "missing.cfg").string() + "\"") == 3);
  const auto blocker = write_config("blocker", "x");
  const auto cfg = write_config("tiny.cfg", "n_slots = 100\nhistory_slots = 100\nwarmup_slots = 10\nk_values = 3\n");
  CHECK(simulate("--scenario recommendation --config \"" + cfg.string() + "\" --out \"" + (blocker / "sub").string() +
                 "\"") == 3);
}

TEST_CASE("help exits cleanly") { CHECK(simulate("--help") == 0); }

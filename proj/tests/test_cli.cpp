#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "vltm/impulse.hpp"
#include "vltm/io/nlir.hpp"

using namespace vltm;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  ASSERT_TRUE(os) << path;
  os << text;
}

/// Runs the CLI binary through the shell, capturing exit code and streams.
CliResult run_cli(const std::string& args) {
  static std::atomic<int> counter{0};
  const int id = counter++;
  const std::string out_path = testing::TempDir() + "vltm_cli_out_" + std::to_string(id);
  const std::string err_path = testing::TempDir() + "vltm_cli_err_" + std::to_string(id);
  const std::string cmd =
      std::string(VLTM_CLI_BIN) + " " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return r;
}

std::string fresh_dir(const std::string& name) {
  const std::string dir = testing::TempDir() + "vltm_cli_" + name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// 1 laser x 1 SPAD x 4 bins, 124 bytes on disk.
std::string write_tiny_nlir(const std::string& dir) {
  RelayTopology topo;
  topo.wall_normal = {0.0, 1.0, 0.0};
  topo.laser_points = {{-0.1, 0.0, 0.0}};
  topo.spad_points = {{0.1, 0.0, 0.0}};
  ImpulseResponse h(topo, TimeAxis{85e-12, 4, 0.0});
  h.at(0, 0, 2) = 1.0;
  const std::string path = dir + "/tiny.nlir";
  io::write_nlir(h, path);
  return path;
}

std::string pipeline_scene_json() {
  return R"({
    "relay": {
      "wall_normal": [0, 1, 0],
      "laser_grid": {"center": [0, 0, 0], "extent": [1, 1], "counts": [3, 3]},
      "spad_grid": {"center": [0.011, 0, -0.007], "extent": [1, 1], "counts": [3, 3]}
    },
    "time": {"bin_width": 85e-12, "bin_count": 96, "origin": 0},
    "max_bounces": 2,
    "noise": {"scale": 1e12, "seed": 7},
    "patches": [
      {"center": [0, 0.5, 0], "normal": [0, -1, 0], "area": 0.01, "albedo": 0.8},
      {"center": [0.15, 0.5, -0.15], "normal": [0, -1, 0], "area": 0.01, "albedo": 0.6}
    ]
  })";
}

std::string pipeline_config_json(const std::string& dir) {
  return std::string(R"({
    "impulse": ")") +
         dir + R"(/impulse.nlir",
    "scene": ")" + dir +
         R"(/scene.json",
    "output_dir": ")" +
         dir + R"(",
    "grid": {"origin": [-0.15, 0.5, -0.15], "counts": [3, 1, 3], "pitch": 0.15},
    "epsilon": {"mode": "relative", "value": 0.05},
    "bands": [[0, 0.25], [0.25, "inf"]],
    "sources": "all",
    "threads": 2
  })";
}

void run_pipeline(const std::string& dir) {
  spit(dir + "/scene.json", pipeline_scene_json());
  spit(dir + "/run.json", pipeline_config_json(dir));
  const std::string cfg = " -c " + dir + "/run.json";
  for (const std::string& step :
       {"simulate" + cfg, "direct" + cfg, "mask" + cfg, "indirect-all" + cfg,
        "ltm --masked" + cfg, "bands" + cfg}) {
    const CliResult r = run_cli(step);
    ASSERT_EQ(r.exit_code, 0) << step << "\n" << r.err;
  }
}

}  // namespace

TEST(Cli, InfoOnMinimalNlirFixture) {
  const std::string dir = fresh_dir("info");
  const std::string path = write_tiny_nlir(dir);
  ASSERT_EQ(std::filesystem::file_size(path), 124u);

  const CliResult r = run_cli("info " + path);
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("K_p=1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("K_i=1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("bins=4"), std::string::npos) << r.out;
}

TEST(Cli, DirectOnEmptySceneGivesAllBlackPgm) {
  const std::string dir = fresh_dir("empty");
  spit(dir + "/scene.json", R"({
    "relay": {
      "wall_normal": [0, 1, 0],
      "laser_grid": {"center": [0, 0, 0], "extent": [1, 1], "counts": [2, 2]},
      "spad_grid": {"center": [0, 0, 0], "extent": [1, 1], "counts": [2, 2]}
    },
    "time": {"bin_width": 85e-12, "bin_count": 64, "origin": 0},
    "patches": []
  })");
  spit(dir + "/run.json", R"({
    "impulse": ")" + dir +
                              R"(/empty.nlir",
    "scene": ")" + dir +
                              R"(/scene.json",
    "output_dir": ")" +
                              dir + R"(",
    "grid": {"origin": [-0.1, 0.4, -0.1], "counts": [3, 1, 3], "pitch": 0.1}
  })");

  ASSERT_EQ(run_cli("simulate -c " + dir + "/run.json").exit_code, 0);
  ASSERT_EQ(run_cli("direct -c " + dir + "/run.json").exit_code, 0);

  const std::string pgm = slurp(dir + "/direct.pgm");
  const std::string header = "P5\n3 3\n255\n";
  ASSERT_EQ(pgm.size(), header.size() + 9);
  EXPECT_EQ(pgm.substr(0, header.size()), header);
  for (std::size_t i = header.size(); i < pgm.size(); ++i) EXPECT_EQ(pgm[i], '\0') << i;
  EXPECT_EQ(slurp(dir + "/direct.norm.txt"), "normalization_max = 0\n");
}

TEST(Cli, UnknownFlagAndMissingSubcommandExit2) {
  const CliResult unknown = run_cli("direct --definitely-not-a-flag");
  EXPECT_EQ(unknown.exit_code, 2);
  EXPECT_FALSE(unknown.err.empty());

  const CliResult none = run_cli("");
  EXPECT_EQ(none.exit_code, 2);

  const CliResult badsub = run_cli("transmogrify");
  EXPECT_EQ(badsub.exit_code, 2);
}

TEST(Cli, MalformedConfigExits2NamingTheKey) {
  const std::string dir = fresh_dir("badcfg");
  spit(dir + "/unknown_key.json", R"({"grd": {}})");
  const CliResult unknown = run_cli("direct -c " + dir + "/unknown_key.json");
  EXPECT_EQ(unknown.exit_code, 2);
  EXPECT_NE(unknown.err.find("grd"), std::string::npos) << unknown.err;

  const std::string nlir = write_tiny_nlir(dir);
  spit(dir + "/missing_grid.json",
       R"({"impulse": ")" + nlir + R"(", "output_dir": ")" + dir + R"("})");
  const CliResult missing = run_cli("direct -c " + dir + "/missing_grid.json");
  EXPECT_EQ(missing.exit_code, 2);
  EXPECT_NE(missing.err.find("grid"), std::string::npos) << missing.err;

  spit(dir + "/syntax.json", "{\"impulse\": ");
  EXPECT_EQ(run_cli("direct -c " + dir + "/syntax.json").exit_code, 2);

  EXPECT_EQ(run_cli("direct -c " + dir + "/does_not_exist.json").exit_code, 2);
}

TEST(Cli, CorruptArtifactExits3) {
  const std::string dir = fresh_dir("badfmt");
  const std::string path = write_tiny_nlir(dir);
  std::string bytes = slurp(path);
  bytes[0] = 'X';
  spit(path, bytes);

  EXPECT_EQ(run_cli("info " + path).exit_code, 3);

  spit(dir + "/run.json", R"({
    "impulse": ")" + path +
                              R"(",
    "output_dir": ")" +
                              dir + R"(",
    "grid": {"origin": [-0.1, 0.4, -0.1], "counts": [2, 1, 2], "pitch": 0.1}
  })");
  const CliResult r = run_cli("direct -c " + dir + "/run.json");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.err.find("format error"), std::string::npos) << r.err;
}

TEST(Cli, ColumnValidatesFocusAndGate) {
  const std::string dir = fresh_dir("column");
  const std::string path = write_tiny_nlir(dir);
  spit(dir + "/run.json", R"({
    "impulse": ")" + path +
                              R"(",
    "output_dir": ")" +
                              dir + R"(",
    "grid": {"origin": [-0.1, 0.4, -0.1], "counts": [2, 1, 2], "pitch": 0.1}
  })");

  EXPECT_EQ(run_cli("column -c " + dir + "/run.json --focus 0,0,1").exit_code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir + "/column_0_0_1.ndir"));

  const CliResult out_of_range = run_cli("column -c " + dir + "/run.json --focus 5,0,0");
  EXPECT_EQ(out_of_range.exit_code, 2);
  EXPECT_EQ(run_cli("column -c " + dir + "/run.json --focus 0,0").exit_code, 2);
  EXPECT_EQ(run_cli("column -c " + dir + "/run.json --focus 0,0,1 --gate wat").exit_code, 2);
  EXPECT_EQ(run_cli("column -c " + dir + "/run.json --focus 0,0,1 --gate higher").exit_code, 0);
}

TEST(Cli, FullPipelineIsByteDeterministic) {
  const std::string dir_a = fresh_dir("pipeA");
  const std::string dir_b = fresh_dir("pipeB");
  run_pipeline(dir_a);
  run_pipeline(dir_b);

  const std::vector<std::string> artifacts = {
      "impulse.nlir",  "direct.ndir",   "direct.pgm",   "direct.norm.txt", "mask.nmsk",
      "mask.pgm",      "mask.norm.txt", "indirect.ndir", "indirect.pgm",   "indirect.norm.txt",
      "ltm.csv",       "ltm.nltm",      "band_0.csv",   "band_0.nltm",     "band_1.csv",
      "band_1.nltm"};
  for (const std::string& name : artifacts) {
    const std::string a = slurp(dir_a + "/" + name);
    const std::string b = slurp(dir_b + "/" + name);
    ASSERT_FALSE(a.empty()) << name;
    EXPECT_EQ(a, b) << name;
  }

  const CliResult info = run_cli("info " + dir_a + "/ltm.nltm");
  EXPECT_EQ(info.exit_code, 0);
  EXPECT_NE(info.out.find("kind=masked"), std::string::npos) << info.out;
}

TEST(Cli, BandsIntervalFlagOverridesConfig) {
  const std::string dir = fresh_dir("bands");
  run_pipeline(dir);

  const CliResult three = run_cli("bands -c " + dir + "/run.json --intervals 0:0.2,0.2:0.4,0.4:inf");
  ASSERT_EQ(three.exit_code, 0) << three.err;
  EXPECT_TRUE(std::filesystem::exists(dir + "/band_2.csv"));

  const CliResult bad = run_cli("bands -c " + dir + "/run.json --intervals nope");
  EXPECT_EQ(bad.exit_code, 2);
}

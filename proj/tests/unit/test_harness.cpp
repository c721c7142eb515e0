#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "oracles.hpp"
#include "recon/experiment.hpp"
#include "recon/fixtures.hpp"
#include "recon/image_io.hpp"
#include "recon/metrics.hpp"

using namespace recon;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("recon_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Image quantized(int n, std::mt19937_64& rng) {
  Image a(n, n);
  for (double& v : a.values()) v = static_cast<double>(rng() % 256) / 255.0;
  return a;
}

}  // namespace

TEST(ImageIo, PgmAndPngRoundTrip) {
  std::mt19937_64 rng(71);
  const Image a = quantized(16, rng);
  const fs::path dir = scratch_dir("io");
  for (const char* name : {"a.pgm", "a.png"}) {
    const std::string path = (dir / name).string();
    save_image(a, path);
    const Image b = load_image(path);
    ASSERT_TRUE(b.same_shape(a));
    EXPECT_LT(recon::testing::max_abs_diff(a, b), 1e-15) << name;
  }
  fs::remove_all(dir);
}

TEST(ImageIo, RejectsUnsupportedInput) {
  const fs::path dir = scratch_dir("io_bad");
  EXPECT_THROW(load_image((dir / "missing.pgm").string()), ConfigError);
  EXPECT_THROW(save_image(Image(4, 4), (dir / "a.bmp").string()), ConfigError);
  std::ofstream((dir / "odd.pgm").string(), std::ios::binary) << "P5\n3 4\n255\n" << std::string(12, '\0');
  EXPECT_THROW(load_image((dir / "odd.pgm").string()), ConfigError);
  std::ofstream((dir / "ascii.pgm").string()) << "P2\n2 2\n255\n0 0 0 0\n";
  EXPECT_THROW(load_image((dir / "ascii.pgm").string()), ConfigError);
  fs::remove_all(dir);
}

TEST(Catalog, ShippedCatalogCoversAllTables) {
  const std::vector<CatalogEntry> cat = load_catalog(RECON_CATALOG_PATH);
  std::map<int, int> per_table;
  for (const CatalogEntry& e : cat) ++per_table[e.table];
  EXPECT_EQ(cat.size(), 99u);
  EXPECT_EQ(per_table[1], 20);
  EXPECT_EQ(per_table[2], 19);
  EXPECT_EQ(per_table[3], 21);
  EXPECT_EQ(per_table[4], 27);
  EXPECT_EQ(per_table[5], 12);
  for (const CatalogEntry& e : cat) {
    EXPECT_NO_THROW(e.hybrid.validate());
    if (e.table == 5) EXPECT_EQ(e.pattern, PatternKind::kBox);
  }
}

TEST(Catalog, ParsesFieldsAndReportsErrors) {
  const auto cat = parse_catalog("# comment\n\ntable=1 image=x r=4 L=43 lambda=200 smooth=2 eps=0.1 tv=31.5 hybrid=32\n");
  ASSERT_EQ(cat.size(), 1u);
  EXPECT_EQ(cat[0].image_id, "x");
  EXPECT_DOUBLE_EQ(cat[0].lambda, 200.0);
  EXPECT_EQ(cat[0].hybrid.smoothing, 2);
  EXPECT_DOUBLE_EQ(cat[0].hybrid.epsilon, 0.1);
  EXPECT_DOUBLE_EQ(cat[0].reference.at(Method::kHybrid), 32.0);
  EXPECT_THROW(parse_catalog("table=1 image=x r=4 L=43\n"), ConfigError);
  EXPECT_THROW(parse_catalog("table=1 image=x r=4 L=43 tv=1 tv=2\n"), ConfigError);
  EXPECT_THROW(parse_catalog("table=1 image=x r=four L=43 tv=1\n"), ConfigError);
  EXPECT_THROW(parse_catalog("table=1 image=x r=4 L=43 nonsense=1\n"), ConfigError);
}

TEST(Experiment, FullLowpassIsExact) {
  ExperimentConfig c;
  c.image = shepp_logan(64);
  c.method = Method::kLowpass;
  c.lowpass = 64;
  const ExperimentOutput out = run_experiment(c);
  EXPECT_EQ(out.row.psnr_db, kInfinitePsnr);
  const std::string csv = table_csv({TableRow{1, out.row, std::nullopt, std::nullopt}});
  EXPECT_NE(csv.find(",inf,"), std::string::npos);
}

TEST(Experiment, ErrorsCarryTheConfiguration) {
  ExperimentConfig c;
  c.image = shepp_logan(64);
  c.image_id = "phantom";
  c.method = Method::kTv;
  c.rate = 8;
  c.lowpass = 43;
  try {
    run_experiment(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("[phantom tv rows2 r=8 L=43]"), std::string::npos) << e.what();
  }
}

TEST(Experiment, IsDeterministic) {
  ExperimentConfig c;
  c.image = natural_surrogate(64);
  c.method = Method::kHybrid;
  c.lowpass = 7;
  c.tv.iterations = 40;
  const ExperimentOutput a = run_experiment(c);
  const ExperimentOutput b = run_experiment(c);
  EXPECT_EQ(a.row.psnr_db, b.row.psnr_db);
  EXPECT_EQ(a.row.digest, b.row.digest);
  EXPECT_EQ(a.reconstruction, b.reconstruction);
  c.hybrid.epsilon = 0.1;
  EXPECT_NE(run_experiment(c).row.digest, a.row.digest);
}

TEST(Table, MissingImageFailsBeforeAnyWork) {
  const std::vector<CatalogEntry> cat = load_catalog(RECON_CATALOG_PATH);
  const fs::path dir = scratch_dir("table_missing");
  EXPECT_THROW(reproduce_table(1, cat, dir.string()), ConfigError);
  fs::remove_all(dir);
}

TEST(Table, ParallelMatchesSerial) {
  const auto cat = parse_catalog(
      "table=9 image=p r=4 L=7 zero=1 tv=1 hybrid=1\n"
      "table=9 image=p r=8 L=3 zero=1 lowpass=1\n");
  std::map<std::string, Image> images{{"p", shepp_logan(32)}};
  TableOptions serial;
  serial.threads = 1;
  TableOptions parallel;
  parallel.threads = 3;
  const std::string a = table_csv(reproduce_table(9, cat, images, serial));
  const std::string b = table_csv(reproduce_table(9, cat, images, parallel));
  auto strip_time = [](const std::string& csv) {
    std::string out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) {
      std::vector<std::string> cols;
      std::istringstream ls(line);
      for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
      cols[11].clear();
      for (const auto& c : cols) out += c + ",";
      out += "\n";
    }
    return out;
  };
  EXPECT_EQ(strip_time(a), strip_time(b));
  // the hybrid row carries the comparison with TV
  EXPECT_TRUE(a.find(",pass,") != std::string::npos || a.find(",fail,") != std::string::npos);
}

TEST(Table, ThreadBudgetFromEnvironment) {
  ::setenv("RECON_THREADS", "3", 1);
  EXPECT_EQ(thread_budget(0), 3);
  EXPECT_EQ(thread_budget(2), 2);
  ::setenv("RECON_THREADS", "zero", 1);
  EXPECT_THROW(thread_budget(0), ConfigError);
  ::unsetenv("RECON_THREADS");
  EXPECT_GE(thread_budget(0), 1);
}

#ifdef RECON_TOOL_PATH
namespace {

int run_tool(const std::string& args) {
  const std::string cmd = std::string(RECON_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch_dir("cli");
  EXPECT_EQ(run_tool("run --fixture phantom --method zero --rate 4 --lowpass 43"), 0);
  EXPECT_EQ(run_tool("run --fixture phantom --method zero --rate 8 --lowpass 127"), 2);
  EXPECT_EQ(run_tool("run --fixture nothing"), 2);
  EXPECT_EQ(run_tool("run --bogus-flag"), 2);
  EXPECT_EQ(run_tool("run --image " + (dir / "none.pgm").string()), 2);
  const fs::path csv = dir / "t.csv";
  EXPECT_EQ(run_tool("table --id 1 --images " + dir.string() + " --csv " + csv.string()), 2);
  EXPECT_FALSE(fs::exists(csv));
  fs::remove_all(dir);
}

TEST(Cli, RunAppendsCsv) {
  const fs::path dir = scratch_dir("cli_csv");
  const fs::path csv = dir / "rows.csv";
  ASSERT_EQ(run_tool("run --fixture phantom --method lowpass --lowpass 43 --csv " + csv.string()), 0);
  ASSERT_EQ(run_tool("run --fixture phantom --method zero --lowpass 43 --csv " + csv.string()), 0);
  std::ifstream in(csv);
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 3);
  fs::remove_all(dir);
}
#endif

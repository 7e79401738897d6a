#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("rfa_cli_") + info->name() + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

  // Runs the binary with `args`; stdout and stderr land in files in the temp dir.
  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = env + " '" RFA_BIN "' " + args + " >'" + path("stdout") + "' 2>'" + path("stderr") + "'";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

const char* const kTwoRecords =
    "FN Thomson Reuters Web of Science\nVR 1.0\n"
    "PT J\nTI Helical microtubules of graphitic carbon\nPY 1991\nCR BACON R, 1960, J APPL PHYS\nUT A1\nER\n\n"
    "PT J\nTI Single-shell carbon nanotubes\nPY 1993\nCR IIJIMA S, 1991, NATURE\nUT A2\nER\n\nEF\n";

const char* const kHandCorpus =
    "id\tyear\ttitle\trefs\n"
    "d1\t1991\tCarbon nanotubes\tIIJIMA S, 1991, NATURE\n"
    "d2\t1991\tCarbon\tIIJIMA S, 1991, NATURE; BACON R, 1960, J APPL PHYS\n"
    "d3\t1992\tNanotubes\tBACON R, 1960, J APPL PHYS\n"
    "d4\t1992\tCarbon nanotubes\tBACON R, 1960, J APPL PHYS\n";

}  // namespace

TEST_F(Cli, IngestWritesOneLinePerRecord) {
  write("in.txt", kTwoRecords);
  ASSERT_EQ(run("ingest --format wos --in " + path("in.txt") + " --out " + path("c.tsv")), 0);
  EXPECT_EQ(count_lines(read("c.tsv")), 3u);
  EXPECT_NE(read("stderr").find("skipped: 0 records"), std::string::npos);
}

TEST_F(Cli, IngestReportsSkippedRecords) {
  write("in.txt", std::string(kTwoRecords) + "PT J\nTI no year\nER\nPT J\nPY 1995\nER\n");
  ASSERT_EQ(run("ingest --in " + path("in.txt") + " --out " + path("c.tsv")), 0);
  EXPECT_EQ(count_lines(read("c.tsv")), 3u);
  EXPECT_NE(read("stderr").find("skipped: 2 records"), std::string::npos) << read("stderr");
}

TEST_F(Cli, IngestUnterminatedRecordIsDataError) {
  write("in.txt", "PT J\nTI x\nPY 1991\n");
  EXPECT_EQ(run("ingest --in " + path("in.txt") + " --out " + path("c.tsv")), 1);
  EXPECT_NE(read("stderr").find("byte offset 0"), std::string::npos);
}

TEST_F(Cli, CanonicalRoundTripIsByteIdentical) {
  write("in.txt", kTwoRecords);
  ASSERT_EQ(run("ingest --in " + path("in.txt") + " --out " + path("a.tsv")), 0);
  ASSERT_EQ(run("ingest --format canonical --in " + path("a.tsv") + " --out " + path("b.tsv")), 0);
  EXPECT_EQ(read("a.tsv"), read("b.tsv"));
}

TEST_F(Cli, AnalyzeThreeYearsGivesTwoRows) {
  ASSERT_EQ(run("simulate --years 3 --docs-per-year 300 --seed 7 --out " + path("s.tsv")), 0);
  ASSERT_EQ(run("analyze --in " + path("s.tsv") + " --out " + path("mu.csv")), 0);
  const auto csv = read("mu.csv");
  EXPECT_EQ(count_lines(csv), 3u);
  EXPECT_EQ(csv.rfind("year,n_docs_prev,n_docs_curr,total_pairs,nonzero_cells,", 0), 0u);
  EXPECT_NE(csv.find("\n1991,"), std::string::npos);
  EXPECT_NE(csv.find("\n1992,"), std::string::npos);
  EXPECT_NE(read("stdout").find("2 windows"), std::string::npos);
}

TEST_F(Cli, HandCorpusMatchesClosedForm) {
  write("hand.tsv", kHandCorpus);
  ASSERT_EQ(run("analyze --in " + path("hand.tsv") + " --word-min-df 1 --ref-min-df 1 --out " + path("mu.csv") +
                " --dump-tensor-year 1992 " + path("t.tsv") + " --dump-vocab " + path("v.tsv")),
            0);
  const auto csv = read("mu.csv");
  // log2(7) - 20/7 = -0.049787935...
  EXPECT_NE(csv.find("\n1992,2,2,7,5,"), std::string::npos) << csv;
  EXPECT_NE(csv.find(",0.020244,-0.049788\n"), std::string::npos) << csv;
  EXPECT_EQ(read("t.tsv"),
            "# words=2\trefs=2\tslices=2\ttotal=7\n"
            "w_id\tr_id\tz\tcount\n"
            "0\t0\t0\t1\n0\t0\t1\t1\n0\t1\t0\t2\n1\t0\t1\t2\n1\t1\t0\t1\n");
}

TEST_F(Cli, MissingInputIsUsageError) {
  EXPECT_EQ(run("analyze --in " + path("nope.tsv") + " --out " + path("mu.csv")), 2);
}

TEST_F(Cli, InvalidKappaIsUsageError) {
  EXPECT_EQ(run("simulate --kappa 2.0 --out " + path("s.tsv")), 2);
  EXPECT_FALSE(fs::exists(path("s.tsv")));
}

TEST_F(Cli, ThresholdsRemovingEverythingIsDataError) {
  write("hand.tsv", kHandCorpus);
  EXPECT_EQ(run("analyze --in " + path("hand.tsv") + " --out " + path("mu.csv")), 1);
  EXPECT_NE(read("stderr").find("no terms survive thresholds"), std::string::npos);
}

TEST_F(Cli, SingleYearCorpusIsDataError) {
  write("one.tsv", "id\tyear\ttitle\trefs\nd1\t1991\tCarbon\tA\nd2\t1991\tCarbon\tA\n");
  EXPECT_EQ(run("analyze --in " + path("one.tsv") + " --word-min-df 1 --ref-min-df 1 --out " + path("mu.csv")), 1);
  EXPECT_NE(read("stderr").find("fewer than 2 years"), std::string::npos);
}

TEST_F(Cli, MalformedCanonicalIsDataError) {
  write("bad.tsv", "id\tyear\ttitle\trefs\nd1\tMCMXC\tT\tR\n");
  EXPECT_EQ(run("analyze --in " + path("bad.tsv") + " --out " + path("mu.csv")), 1);
  EXPECT_NE(read("stderr").find("line 2: invalid year 'MCMXC'"), std::string::npos);
}

TEST_F(Cli, SimulateIsDeterministicInTheSeed) {
  ASSERT_EQ(run("simulate --years 3 --docs-per-year 100 --seed 5 --out " + path("a.tsv")), 0);
  ASSERT_EQ(run("simulate --years 3 --docs-per-year 100 --seed 5 --out " + path("b.tsv")), 0);
  ASSERT_EQ(run("simulate --years 3 --docs-per-year 100 --seed 6 --out " + path("c.tsv")), 0);
  EXPECT_EQ(read("a.tsv"), read("b.tsv"));
  EXPECT_NE(read("a.tsv"), read("c.tsv"));
}

TEST_F(Cli, VocabDump) {
  write("hand.tsv", kHandCorpus);
  ASSERT_EQ(run("vocab dump --in " + path("hand.tsv") + " --word-min-df 1 --ref-min-df 1 --out " + path("v.tsv")),
            0);
  EXPECT_EQ(read("v.tsv"),
            "kind\tterm\tid\tdoc_freq\n"
            "word\tcarbon\t0\t3\n"
            "word\tnanotub\t1\t3\n"
            "reference\tBACON R, 1960, J APPL PHYS\t0\t3\n"
            "reference\tIIJIMA S, 1991, NATURE\t1\t2\n");
}

TEST_F(Cli, DefaultSimulationAnalyzesQuickly) {
  const auto start = std::chrono::steady_clock::now();
  ASSERT_EQ(run("simulate --out " + path("s.tsv")), 0);
  ASSERT_EQ(run("analyze --in " + path("s.tsv") + " --out " + path("mu.csv")), 0);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(count_lines(read("mu.csv")), 20u);
  EXPECT_LT(elapsed, std::chrono::seconds(60));
}

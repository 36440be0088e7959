#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("binapprox_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    auto p = dir / "run.cfg";
    std::ofstream(p) << text;
    return p;
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string s;
    std::getline(in, s);
    return s;
}

TEST(Cli, ConvergeWritesReport) {
    auto dir = scratch("converge");
    EXPECT_EQ(run("converge --quiet --config " + std::string(CONFIG_DIR) + "/zero_triangle.cfg --out " +
                  dir.string()),
              0);
    EXPECT_TRUE(fs::exists(dir / "report.csv"));
    EXPECT_TRUE(fs::exists(dir / "plot.svg"));
    EXPECT_EQ(first_line(dir / "plot.csv"), "series,n,error_total,se_total,error_tracking");
}

TEST(Cli, EverySubcommandRuns) {
    auto dir = scratch("all");
    auto cfg = write_config(dir, "n_fine = 1024\nm = 2\np = 8\nn = 64\npaths = 3\nepsilon = 1.0\n"
                                 "drift = tanh:2\nperiods = 50\n");
    const std::string common = " --quiet --config " + cfg.string() + " --out " + dir.string();
    EXPECT_EQ(run("simulate" + common), 0);
    EXPECT_EQ(run("track" + common), 0);
    EXPECT_EQ(run("ode" + common), 0);
    EXPECT_EQ(run("price" + common), 0);
    EXPECT_EQ(run("converge" + common), 0);
    EXPECT_EQ(run("tune" + common + " --paths 20"), 0);
    EXPECT_EQ(first_line(dir / "binomial.csv"), "k,t_k,y,direction");
    EXPECT_EQ(first_line(dir / "solution.csv"), "t,x,x_moll,r,y,u");
    EXPECT_EQ(first_line(dir / "tree.csv"), "k,i,price");
    EXPECT_TRUE(fs::exists(dir / "tune.csv"));
}

TEST(Cli, LogTrackAndAdaptive) {
    auto dir = scratch("log");
    auto cfg = write_config(dir, "process = sine\namplitude = 0.1\nfrequency = 10\nlog_scale = true\n"
                                 "n_fine = 4096\nn = 64\nsigma = const:1.2\nsigma_bound = 2\n");
    const std::string common = " --quiet --config " + cfg.string() + " --out " + dir.string();
    EXPECT_EQ(run("log-track" + common), 0);
    EXPECT_EQ(first_line(dir / "log_track.csv"), "k,t_k,y,zeta,eta");
    EXPECT_EQ(run("adaptive" + common), 0);
    EXPECT_EQ(first_line(dir / "certificate.csv"), "t,eps,ratio,bound,pass");
}

TEST(Cli, ExitCodes) {
    auto dir = scratch("codes");
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("nonsense"), 1);
    EXPECT_EQ(run("converge --config /nonexistent.cfg"), 1);
    auto bad = write_config(dir, "n_fine = 100\nn = 64\n");
    EXPECT_EQ(run("converge --config " + bad.string() + " --out " + dir.string()), 1);
    // Wiener path against a Lipschitz modulus: the certificate fails.
    auto rough = write_config(dir, "n_fine = 8192\nn = 64\nsigma = const:10\nsigma_bound = 10\n");
    EXPECT_EQ(run("adaptive --config " + rough.string() + " --out " + dir.string()), 3);
    auto nonpositive = write_config(dir, "process = constant\nx0 = -1\nn_fine = 64\nn = 8\n");
    EXPECT_EQ(run("log-track --config " + nonpositive.string() + " --out " + dir.string()), 1);
    EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, SameSeedSameBytes) {
    auto a = scratch("det_a"), b = scratch("det_b");
    const std::string cfg = std::string(CONFIG_DIR) + "/wiener_affine.cfg";
    ASSERT_EQ(run("converge --quiet --paths 20 --config " + cfg + " --out " + a.string()), 0);
    ASSERT_EQ(run("converge --quiet --paths 20 --config " + cfg + " --out " + b.string()), 0);
    std::ifstream fa(a / "report.csv"), fb(b / "report.csv");
    std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
    EXPECT_EQ(sa, sb);
    EXPECT_FALSE(sa.empty());
}

}  // namespace

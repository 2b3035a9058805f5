#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "altsssom_cli_test";

int run(const std::string& args) {
    const std::string cmd = std::string(ALTSSSOM_CLI) + " " + args + " >" + (kWork / "stdout").string() + " 2>" +
                            (kWork / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Workspace {
    Workspace() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
        std::ofstream csv(kWork / "tiny.csv");
        csv << "x,y,label\n";
        for (int i = 0; i < 12; ++i) csv << 0.05 * i << "," << (i % 2 ? 0.9 : 0.1) << "," << (i % 2 ? "odd" : "even") << "\n";
        std::ofstream unl(kWork / "unlabeled.csv");
        unl << "x,y,label\n";
        for (int i = 0; i < 8; ++i) unl << 0.1 * i << "," << 0.5 << ",\n";
        std::ofstream wide(kWork / "wide.csv");
        wide << "0.1,0.2,0.3,a\n0.4,0.5,0.6,b\n";
    }
    ~Workspace() { fs::remove_all(kWork); }
};

}  // namespace

TEST_CASE("command line") {
    Workspace ws;
    const std::string data = (kWork / "tiny.csv").string();
    const std::string model = (kWork / "model.json").string();

    SUBCASE("help lists the flags") {
        CHECK(run("sweep --help") == 0);
        const std::string help = slurp(kWork / "stdout");
        for (const char* flag : {"--data", "--labels-column", "--fractions", "--n-configs", "--workers", "--out", "--seed"})
            CHECK(help.find(flag) != std::string::npos);
        CHECK(run("fit --help") == 0);
        CHECK(slurp(kWork / "stdout").find("--params") != std::string::npos);
    }
    SUBCASE("usage errors") {
        CHECK(run("") == 1);
        CHECK(run("fit --data " + data) == 1);
        CHECK(run("fit --data " + data + " --out " + model + " --bogus") == 1);
        CHECK(run("fit --data " + data + " --out " + model + " --beta 1.2") == 1);
        CHECK(slurp(kWork / "stderr").find("beta") != std::string::npos);
        CHECK_FALSE(fs::exists(model));
    }
    SUBCASE("data errors") {
        const std::string missing = (kWork / "nope.arff").string();
        CHECK(run("fit --data " + missing + " --out " + model) != 0);
        CHECK(slurp(kWork / "stderr").find("nope.arff") != std::string::npos);
        std::ofstream(kWork / "broken.csv") << "1,2,a\n3,x,b\n";
        CHECK(run("fit --data " + (kWork / "broken.csv").string() + " --out " + model) == 2);
    }
    SUBCASE("fit, predict, evaluate") {
        const std::string before = slurp(data);
        REQUIRE(run("fit --data " + data + " --out " + model + " --epochs 3 --seed 4") == 0);
        CHECK(fs::exists(model));
        CHECK(slurp(kWork / "stderr").find("nodes:") != std::string::npos);
        const std::string first = slurp(model);
        REQUIRE(run("fit --data " + data + " --out " + model + " --epochs 3 --seed 4") == 0);
        CHECK(slurp(model) == first);
        CHECK(slurp(data) == before);

        const std::string pred = (kWork / "pred.csv").string();
        REQUIRE(run("predict --model " + model + " --data " + data + " --out " + pred) == 0);
        const std::string rows = slurp(pred);
        CHECK(std::count(rows.begin(), rows.end(), '\n') == 13);
        CHECK(rows.rfind("row,cluster,class\n", 0) == 0);

        CHECK(run("evaluate --model " + model + " --data " + data) == 0);
        CHECK(slurp(kWork / "stdout").find("accuracy,") != std::string::npos);

        CHECK(run("predict --model " + model + " --data " + (kWork / "wide.csv").string() + " --out " + pred) == 2);
        CHECK(slurp(kWork / "stderr").find("m=2") != std::string::npos);
    }
    SUBCASE("unlabeled model predicts no class") {
        const std::string unl = (kWork / "unlabeled.csv").string();
        REQUIRE(run("fit --data " + unl + " --out " + model + " --epochs 2") == 0);
        const std::string pred = (kWork / "pred.csv").string();
        REQUIRE(run("predict --model " + model + " --data " + unl + " --out " + pred) == 0);
        std::istringstream lines(slurp(pred));
        std::string line;
        std::getline(lines, line);
        int n = 0;
        while (std::getline(lines, line)) {
            ++n;
            CHECK(line.back() == ',');
        }
        CHECK(n == 8);
    }
    SUBCASE("sweep exports and reruns identically") {
        const std::string out1 = (kWork / "s1").string(), out2 = (kWork / "s2").string();
        const std::string args = "sweep --data " + data + " --n-configs 2 --fractions 1.0 --seed 9 --out ";
        REQUIRE(run(args + out1) == 0);
        REQUIRE(run(args + out2 + " --workers 2") == 0);
        for (const char* f : {"runs.csv", "best_accuracy.csv", "ce_table.csv", "manifest.json"}) {
            CHECK(fs::exists(fs::path(out1) / f));
            CHECK(slurp(fs::path(out1) / f) == slurp(fs::path(out2) / f));
        }
        CHECK(run("sweep --data " + data + " --fractions 2 --out " + out1) == 1);
    }
    SUBCASE("cross-validation") {
        const std::string out = (kWork / "cv").string();
        REQUIRE(run("cv --data " + data + " --fractions 1,0.5 --epochs 2 --out " + out) == 0);
        const std::string runs = slurp(fs::path(out) / "runs.csv");
        CHECK(std::count(runs.begin(), runs.end(), '\n') == 19);
    }
}

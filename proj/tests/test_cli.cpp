#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <fstream>
#include <sstream>

#include "merglift/io.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("merglift_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run(const std::string& cmd) {
    int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    REQUIRE(out.good());
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kBin = MERGLIFT_BIN;

}  // namespace

TEST_CASE("cli: check-domain passes for a disc and writes the report") {
    TempDir tmp;
    write_file(tmp.path / "cfg.txt", "domain 1 disc 0 0 1\n");
    int rc = run(kBin + " --config " + (tmp.path / "cfg.txt").string() + " --out " +
                 (tmp.path / "out").string() + " --resolution 0.02 check-domain");
    CHECK(rc == 0);
    auto j = nlohmann::json::parse(read_file(tmp.path / "out" / "hypotheses.json"));
    REQUIRE(j.size() == 1);
    CHECK(j[0]["complement_connected"] == true);
    CHECK(double(j[0]["path_bound"]) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("cli: check-domain fails with exit 4 for the annulus") {
    TempDir tmp;
    write_file(tmp.path / "cfg.txt", "domain 1 annulus 0 0 0.4 1\n");
    int rc = run(kBin + " --config " + (tmp.path / "cfg.txt").string() + " --out " +
                 (tmp.path / "out").string() + " --resolution 0.02 check-domain");
    CHECK(rc == 4);
}

TEST_CASE("cli: config errors exit with 3") {
    TempDir tmp;
    int rc = run(kBin + " --config " + (tmp.path / "missing.txt").string() + " --out " +
                 (tmp.path / "out").string() + " check-domain");
    CHECK(rc == 3);

    write_file(tmp.path / "bad.txt", "domain 1 disc 0 0 1\nfrobnicate yes\n");
    rc = run(kBin + " --config " + (tmp.path / "bad.txt").string() + " --out " +
             (tmp.path / "out").string() + " check-domain");
    CHECK(rc == 3);

    write_file(tmp.path / "nofun.txt", "domain 1 disc 0 0 1\nn 1\nepsilon 1e-4\n");
    rc = run(kBin + " --config " + (tmp.path / "nofun.txt").string() + " --out " +
             (tmp.path / "out").string() + " lift");
    CHECK(rc == 3);
}

TEST_CASE("cli: counterexample emits the growth table") {
    TempDir tmp;
    int rc = run(kBin + " --out " + (tmp.path / "out").string() +
                 " counterexample --m 1 --m 10 --m 10000");
    CHECK(rc == 0);
    std::string csv = read_file(tmp.path / "out" / "counterexample.csv");
    std::istringstream lines(csv);
    std::string header, l1, l10, l10000;
    std::getline(lines, header);
    std::getline(lines, l1);
    std::getline(lines, l10);
    std::getline(lines, l10000);
    CHECK(header == "m,directional_derivative");
    CHECK(l1.rfind("1,1", 0) == 0);
    CHECK(std::stod(l10.substr(l10.find(',') + 1)) == doctest::Approx(2.354).epsilon(0.001));
    CHECK(std::stod(l10000.substr(l10000.find(',') + 1)) > 8.0);
}

TEST_CASE("cli: lift on a polynomial recovers it and exits 0") {
    TempDir tmp;
    write_file(tmp.path / "cfg.txt",
               "domain 1 disc 0 0 1\ndomain 2 disc 0 0 1\n"
               "function z1^2*z2 - 0.5\nn 1\nepsilon 1e-6\n");
    int rc = run(kBin + " --config " + (tmp.path / "cfg.txt").string() + " --out " +
                 (tmp.path / "outA").string() + " --seed 7 lift");
    CHECK(rc == 0);
    auto poly = merglift::poly_from_json(
        nlohmann::json::parse(read_file(tmp.path / "outA" / "polynomial.json")));
    merglift::CPoly expect;
    expect.add_term({{1, 2}, {2, 1}}, 1.0);
    expect.add_term({}, -0.5);
    merglift::CPoly diff = poly - expect;
    for (const auto& [idx, c] : diff.terms()) CHECK(std::abs(c) < 1e-9);

    auto rep = nlohmann::json::parse(read_file(tmp.path / "outA" / "report.json"));
    CHECK(rep["converged"] == true);
    CHECK(rep["alpha_errors"].size() == 4);
    CHECK(fs::exists(tmp.path / "outA" / "alpha_errors.csv"));

    // Determinism: identical config + seed => byte-identical outputs.
    rc = run(kBin + " --config " + (tmp.path / "cfg.txt").string() + " --out " +
             (tmp.path / "outB").string() + " --seed 7 lift");
    CHECK(rc == 0);
    CHECK(read_file(tmp.path / "outA" / "polynomial.json") ==
          read_file(tmp.path / "outB" / "polynomial.json"));
    CHECK(read_file(tmp.path / "outA" / "report.json") ==
          read_file(tmp.path / "outB" / "report.json"));
}

TEST_CASE("cli: unreachable budget exits 2 and still reports best effort") {
    TempDir tmp;
    write_file(tmp.path / "cfg.txt",
               "domain 1 disc 0 0 0.9\nfunction 1/(1-z1)\nn 0\nepsilon 1e-9\n");
    int rc = run("MERGLIFT_MAX_DEGREE=4 " + kBin + " --config " +
                 (tmp.path / "cfg.txt").string() + " --out " + (tmp.path / "out").string() +
                 " lift");
    CHECK(rc == 2);
    auto rep = nlohmann::json::parse(read_file(tmp.path / "out" / "report.json"));
    CHECK(rep["converged"] == false);
}

TEST_CASE("cli: series spec reduces to finite support before lifting") {
    TempDir tmp;
    write_file(tmp.path / "cfg.txt",
               "domain * disc 0 0 1\n"
               "series_term z{n}^{n} / ({n}*{n})\n"
               "series_bound pseries 1 2\n"
               "series_horizon 3\nseries_epsilon 0.05\n"
               "n 1\nepsilon 1e-4\n");
    int rc = run(kBin + " --config " + (tmp.path / "cfg.txt").string() + " --out " +
                 (tmp.path / "out").string() + " lift");
    CHECK(rc == 0);
    auto poly = merglift::poly_from_json(
        nlohmann::json::parse(read_file(tmp.path / "out" / "polynomial.json")));
    merglift::CPoly expect;
    expect.add_term({{1, 1}}, 1.0);
    expect.add_term({{2, 2}}, 0.25);
    expect.add_term({{3, 3}}, 1.0 / 9.0);
    merglift::CPoly diff = poly - expect;
    for (const auto& [idx, c] : diff.terms()) CHECK(std::abs(c) < 1e-9);
}

TEST_CASE("cli: chordal schedule on a constant writes zero-error table") {
    TempDir tmp;
    write_file(tmp.path / "cfg.txt", "domain 1 disc 0 0 1\nfunction 5\nschedule 3\n");
    int rc = run(kBin + " --config " + (tmp.path / "cfg.txt").string() + " --out " +
                 (tmp.path / "out").string() + " chordal");
    CHECK(rc == 0);
    std::string csv = read_file(tmp.path / "out" / "schedule.csv");
    CHECK(csv.find("n,dilation,degree,chi_sup_error,euclid_sup_error") == 0);
    CHECK(fs::exists(tmp.path / "out" / "chordal_01.json"));
    CHECK(fs::exists(tmp.path / "out" / "chordal_03.json"));
}

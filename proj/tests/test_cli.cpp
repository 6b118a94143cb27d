#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
    json j() const { return json::parse(out); }
};

std::string binary() {
    const char* p = std::getenv("DAGAS_CLI");
    return p ? p : "dagas";
}

Run run(const std::string& args) {
    Run r;
    std::string cmd = binary() + " " + args + " 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
    int status = pclose(f);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("dagas_cli_" + name)).string();
}

} // namespace

TEST_CASE("invariant command", "[cli]") {
    auto r = run("invariant --gas y --width 1 --p 1/5 --q 1/3 --mode exact");
    REQUIRE(r.code == 0);
    auto j = r.j();
    REQUIRE(j["marginal_one"] == "1/3");
    REQUIRE(j["mode"] == "rational");
    REQUIRE(j["stationarity_residual"] == 0.0);

    auto f = run("invariant --gas x --width 2 --p 0.25");
    REQUIRE(f.code == 0);
    REQUIRE(f.j()["mode"] == "complex");

    auto csv = run("invariant --gas x --width 1 --p 1/4 --csv");
    REQUIRE(csv.code == 0);
    REQUIRE(csv.out == "config,weight\n0,4/5\n1,1/5\n");

    auto bi = run("invariant --gas bicolour --width 1 --p 1/40 --q 1/60");
    REQUIRE(bi.code == 0);
    REQUIRE(bi.j()["marginal_one"] == "1/41");
}

TEST_CASE("identity command", "[cli]") {
    auto r = run("identity --which fo-x --width 1 --p 1/3 --max-area 30");
    REQUIRE(r.code == 0);
    auto j = r.j();
    REQUIRE(j["pass"] == true);
    REQUIRE(j["exact"] == "1/4");
    double three31 = 1.0;
    for (int k = 0; k < 31; ++k) three31 /= 3;
    REQUIRE(j["gap"].get<double>() <= 1.5 * three31);
    REQUIRE(j["gap"].get<double>() <= j["tail_bound"].get<double>());

    // the bond-count series as stated misses the width-2 probability
    auto bond = run("identity --which bond --width 2 --p 1/20 --q 1/2 --max-area 8");
    REQUIRE(bond.code == 1);
    REQUIRE(bond.j()["pass"] == false);
    REQUIRE(run("identity --which bond-gas --width 2 --p 1/20 --q 1/2 --max-area 8").code == 0);
}

TEST_CASE("verify command", "[cli]") {
    auto r = run("verify --system factor-y-size6 --solution catalog");
    REQUIRE(r.code == 0);
    auto j = r.j();
    REQUIRE(j["residual"]["residual_max"].get<double>() <= 1e-12);
    REQUIRE(j["solution"]["params"][0][0].get<double>() == 0.2);

    auto exact = run("verify --system factor-x-6 --solution catalog --p 1/4");
    REQUIRE(exact.code == 0);
    REQUIRE(exact.j()["residual"]["exact_zero"] == true);

    auto tri = run("verify --system tri-x --solution catalog --p 3/16 --n 3");
    REQUIRE(tri.code == 0);
    REQUIRE(tri.j()["measure"]["stationary"] == true);

    SECTION("solution files") {
        auto path = temp_path("solution.json");
        {
            std::ofstream f(path);
            f << exact.j()["solution"].dump();
        }
        auto ok = run("verify --system factor-x --solution " + path);
        REQUIRE(ok.code == 0);
        REQUIRE(ok.j()["residual"]["exact_zero"] == true);

        auto bad = exact.j()["solution"];
        bad["entries"][0][0] = "7/5";
        {
            std::ofstream f(path);
            f << bad.dump();
        }
        auto broken = run("verify --solution " + path);
        REQUIRE(broken.code == 1);
        REQUIRE(broken.j()["pass"] == false);

        REQUIRE(run("verify --system factor-y --solution " + path).code == 2);
        {
            std::ofstream f(path);
            f << "{not json";
        }
        REQUIRE(run("verify --solution " + path).code == 2);
        std::filesystem::remove(path);
    }
}

TEST_CASE("growth commands", "[cli]") {
    auto g = run("grow --gas y --factor factor-y-d1 --kappa 3");
    REQUIRE(g.code == 0);
    auto j = g.j();
    REQUIRE(j["sizes"].size() == 4);
    REQUIRE(j["pass"] == true);
    for (auto& d : j["measure_defect"]) CHECK(d["defect"].get<double>() <= 1e-9);

    auto ex = run("grow --factor factor-x-size6 --p 1/4 --kappa 3");
    REQUIRE(ex.code == 0);
    REQUIRE(ex.j()["mode"] == "gaussian");

    auto lazy = run("grow --factor factor-x-size6 --p 1/4 --kappa 40 --entry 3,5");
    REQUIRE(lazy.code == 0);
    REQUIRE(lazy.j()["entry"]["values"].contains("Q1"));

    REQUIRE(run("grow --gas x --factor factor-y-d1 --kappa 1").code == 2);
    REQUIRE(run("grow --factor factor-y-d1 --kappa 9 --cap 64").code == 2);

    auto sp = run("spectra --factor factor-y-d1 --kappa 3");
    REQUIRE(sp.code == 0);
    REQUIRE(sp.j()["report"]["levels"].size() == 4);

    auto d = run("density --factor factor-y-d1 --n 4 --kappa-max 5 --csv");
    REQUIRE(d.code == 0);
    REQUIRE(d.out.rfind("kappa,density,exact,gap\n", 0) == 0);

    auto lim = run("limit --factor factor-y-size6 --size 36");
    REQUIRE(lim.code == 0);
    REQUIRE(lim.j()["limit"]["rewriting_residual"].get<double>() <= 1e-9);
    auto nonstab = run("limit --factor factor-x-reduced --p 1/4 --size 8");
    REQUIRE(nonstab.code == 1);
    REQUIRE(nonstab.j()["stabilizing"] == false);
}

TEST_CASE("enumerate, transfer and solve commands", "[cli]") {
    auto e = run("enumerate --lattice sq --width 2 --sources 0 --max-area 6 --csv");
    REQUIRE(e.code == 0);
    REQUIRE(e.out == "area,count\n0,0\n1,1\n2,2\n3,5\n4,12\n5,29\n6,70\n");
    auto plane = run("enumerate --width plane --sources 0 --max-area 5");
    REQUIRE(plane.code == 0);
    // directed animals of the square lattice: 1, 2, 5, 13, 35
    REQUIRE(plane.j()["gf"]["area_counts"] == json::array({0, 1, 2, 5, 13, 35}));
    auto over = run("enumerate --width 3 --sources 0,1 --max-area 5 --oversource");
    REQUIRE(over.code == 0);
    REQUIRE(over.j()["methods_agree"] == true);

    auto t = run("transfer --gas x --width 2 --p 1/4");
    REQUIRE(t.code == 0);
    REQUIRE(t.j()["matrix"]["entries"][0] == json::array({"9/16", "3/16", "3/16", "1/16"}));
    REQUIRE(run("transfer --gas x --width 2 --p 1/4 --triangular").j()["matrix"]["rows"] == 16);

    const std::string solve = "solve --system finite-split --gas y --size 2 --p 0.2 --q 0.3 --trace-one --starts 10 --seed 7";
    auto s1 = run(solve + " --threads 1");
    auto s2 = run(solve + " --threads 4");
    REQUIRE(s1.code == 0);
    REQUIRE(s1.out == s2.out);
    REQUIRE(s1.j()["result"]["starts"] == 10);
}

TEST_CASE("output files and usage errors", "[cli]") {
    auto path = temp_path("out.json");
    auto r = run("invariant --gas x --width 1 --p 1/4 --out " + path);
    REQUIRE(r.code == 0);
    REQUIRE(r.out.empty());
    std::ifstream f(path);
    REQUIRE(json::parse(f)["marginal_one"] == "1/5");
    std::filesystem::remove(path);

    REQUIRE(run("").code == 2);
    REQUIRE(run("frobnicate").code == 2);
    REQUIRE(run("invariant --gas z --p 1/2").code == 2);
    REQUIRE(run("invariant --gas x --p 1/0").code == 2);
    REQUIRE(run("invariant --gas y --p 1/2").code == 2);
    REQUIRE(run("invariant --gas x --p 1/2 --mode quad").code == 2);
    REQUIRE(run("enumerate --width 2").code == 2);
    REQUIRE(run("enumerate --width 0 --max-area 3").code == 2);
    REQUIRE(run("verify --system factor-y-size6 --solution catalog --p 1/5 --q 1/3").code == 2);
    REQUIRE(run("solve --system no-such-system").code == 2);
    REQUIRE(run("--help").code == 0);
}

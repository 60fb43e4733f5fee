#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_support.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream o, e;
    const int code = cbct::cli::run(args, o, e);
    return {code, o.str(), e.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::filesystem::path tmp(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("cbct_test_" + name);
}

}  // namespace

TEST_CASE("field-info") {
    const auto r = run({"field-info", "--p", "3", "--n", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("q=27") != std::string::npos);
    CHECK(r.out.find("invariants=ok") != std::string::npos);
    const auto j = nlohmann::json::parse(run({"field-info", "--p", "3", "--n", "3", "--format", "json"}).out);
    CHECK(j["q"] == 27);
    CHECK(j["modulus"].size() == 4);

    CHECK(run({"field-info", "--p", "4", "--n", "2"}).code == 2);
    const auto red = run({"field-info", "--p", "3", "--n", "2", "--modulus", "2,0,1"});
    CHECK(red.code == 2);
    CHECK(red.err.find("ReducibleModulus") != std::string::npos);
    CHECK(run({"field-info", "--p", "2", "--n", "30"}).code == 2);
    CHECK(run({"field-info", "--p", "3", "--n", "2", "--modulus", "1,x,1"}).code == 2);
}

TEST_CASE("usage errors exit 2, help exits 0") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"bct", "--p", "3"}).code == 2);
    CHECK(run({"bct", "--p", "3", "--n", "2"}).code == 2);
    CHECK(run({"bct", "--p", "3", "--n", "2", "--d", "4", "--k", "1"}).code == 2);
    CHECK(run({"bct", "--p", "3", "--n", "2", "--k", "1", "--c", "0"}).code == 2);
    CHECK(run({"bct", "--p", "3", "--n", "2", "--k", "1", "--c", "99"}).code == 2);
    CHECK(run({"bct", "--p", "3", "--n", "2", "--k", "1", "--format", "xml"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("bct CSV layout and the F_27 (a, 2a) column") {
    const auto path = tmp("bct27.csv");
    const auto r = run({"bct", "--p", "3", "--n", "3", "--k", "2", "--c", "1", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("uniformity=") != std::string::npos);
    const auto rows = csv(slurp(path));
    REQUIRE(rows.size() == 28);
    CHECK(rows[0][0] == "a\\b");
    CHECK(rows[0][27] == "26");
    for (int a = 0; a < 27; ++a) {
        REQUIRE(rows[a + 1].size() == 28);
        CHECK(rows[a + 1][0] == std::to_string(a));
    }
    std::filesystem::remove(path);
}

TEST_CASE("bct JSON and engines agree") {
    std::string first;
    for (std::string eng : {"brute", "char-direct", "char-gold", "case"}) {
        const auto r = run({"bct", "--p", "5", "--n", "2", "--k", "1", "--c", "7", "--engine", eng, "--format", "json"});
        REQUIRE(r.code == 0);
        auto j = nlohmann::json::parse(r.out);
        CHECK(j["schema"] == "cbct/1");
        CHECK(j["kind"] == "bct");
        CHECK(j["d"] == 6);
        CHECK(j["c_enc"] == 7);
        CHECK(j["engine"] == eng);
        CHECK(j["entries"].size() == 25);
        const auto entries = j["entries"].dump();
        if (first.empty()) first = entries;
        CHECK(entries == first);
    }
}

TEST_CASE("binary uniformities and engine restrictions") {
    const auto r = run({"bct", "--p", "2", "--n", "5", "--d", "3", "--c", "1", "--format", "json"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["uniformity"] == 2);
    CHECK(run({"bct", "--p", "2", "--n", "5", "--d", "3", "--engine", "char-gold"}).code == 2);
    CHECK(run({"bct", "--p", "2", "--n", "5", "--d", "3", "--engine", "char-direct"}).code == 2);
    CHECK(run({"bct", "--p", "3", "--n", "2", "--d", "5", "--engine", "case"}).code == 2);
    CHECK(run({"bct", "--p", "3", "--n", "2", "--d", "5", "--engine", "char-direct"}).code == 0);
    CHECK(run({"bct", "--p", "3", "--n", "2", "--d", "5", "--engine", "warp"}).code == 2);
}

TEST_CASE("ddt") {
    const auto r = run({"ddt", "--p", "3", "--n", "2", "--d", "2", "--c", "1"});
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 10);
    for (std::size_t a = 1; a < rows.size(); ++a) {
        int s = 0;
        for (std::size_t b = 1; b < rows[a].size(); ++b) s += std::stoi(rows[a][b]);
        CHECK(s == 9);
    }
}

TEST_CASE("weil") {
    auto j = nlohmann::json::parse(run({"weil", "--p", "5", "--n", "2", "--k", "1", "--A", "1", "--B", "0"}).out);
    CHECK(j["re"].get<double>() == doctest::Approx(-5.0));
    CHECK(j["branch"] == "co98_1_even_generic");
    auto d = nlohmann::json::parse(
        run({"weil", "--p", "5", "--n", "2", "--k", "1", "--A", "1", "--B", "0", "--engine", "direct"}).out);
    CHECK(d["re"].get<double>() == doctest::Approx(-5.0));
    auto s = nlohmann::json::parse(
        run({"weil", "--p", "3", "--n", "3", "--d", "5", "--alpha", "2", "--beta", "4"}).out);
    CHECK(s["branch"] == "direct");
    CHECK(run({"weil", "--p", "3", "--n", "3", "--d", "5", "--A", "1"}).code == 2);
    CHECK(run({"weil", "--p", "3", "--n", "3", "--k", "1"}).code == 2);
}

TEST_CASE("verify passes on small fields and reports injected faults") {
    CHECK(run({"verify", "--p", "3", "--n", "2", "--k", "1", "--c", "all"}).code == 0);
    CHECK(run({"verify", "--p", "3", "--n", "3", "--k", "1", "--c", "all"}).code == 0);
    CHECK(run({"verify", "--p", "3", "--n", "3", "--k", "2", "--c", "all"}).code == 0);
    const auto bad = run({"verify", "--p", "3", "--n", "2", "--k", "1", "--c", "all", "--inject-fault", "co98_pp_even"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("MISMATCH p=3 n=2") != std::string::npos);
    CHECK(bad.out.find("k=1") != std::string::npos);
    CHECK(bad.out.find("co98_pp_even") != std::string::npos);
    // The hook is cleared afterwards.
    CHECK(run({"verify", "--p", "3", "--n", "2", "--k", "1", "--c", "all"}).code == 0);
    CHECK(run({"verify", "--p", "2", "--n", "3", "--d", "3"}).code == 2);
}

TEST_CASE("sweep") {
    auto rows = csv(run({"sweep", "--p", "3", "--n", "2", "--k", "1", "--c", "all"}).out);
    CHECK(rows.size() == 9);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][0] == std::to_string(i));

    const auto brute = run({"sweep", "--p", "3", "--n", "3", "--k", "2", "--c", "all", "--engine", "brute"});
    const auto gold = run({"sweep", "--p", "3", "--n", "3", "--k", "2", "--c", "all", "--engine", "char-gold"});
    CHECK(brute.code == 0);
    CHECK(brute.out == gold.out);

    rows = csv(run({"sweep", "--p", "5", "--n", "2", "--k", "1", "--c", "unit-norm"}).out);
    REQUIRE(rows.size() == 3);
    // c^{p-1} = 1 and c != +-1 leaves the prime-field elements 2 and 3.
    CHECK(rows[1][0] == "2");
    CHECK(rows[2][0] == "3");
}

TEST_CASE("output files do not depend on the worker count") {
    const auto a = tmp("w1.csv"), b = tmp("w4.csv");
    for (std::string cmd : {"verify", "sweep"}) {
        CHECK(run({cmd, "--p", "5", "--n", "2", "--k", "1", "--c", "all", "--workers", "1", "--out", a.string()}).code ==
              0);
        CHECK(run({cmd, "--p", "5", "--n", "2", "--k", "1", "--c", "all", "--workers", "4", "--out", b.string()}).code ==
              0);
        CHECK(slurp(a) == slurp(b));
        CHECK_FALSE(slurp(a).empty());
    }
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ffnt/cli.hpp"
#include "ffnt/error.hpp"
#include "ffnt/experiments.hpp"

using namespace ffnt;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream o, e;
    int c = run(args, o, e);
    return {c, o.str(), e.str()};
}

}  // namespace

TEST_CASE("list parsing") {
    CHECK(parse_int_list("1..4") == std::vector<int>{1, 2, 3, 4});
    CHECK(parse_int_list("2,5,7") == std::vector<int>{2, 5, 7});
    CHECK(parse_int_list("1..2,6") == std::vector<int>{1, 2, 6});
    CHECK_THROWS_AS(parse_int_list("x"), Error);
    CHECK_THROWS_AS(parse_int_list("5..2"), Error);
    CHECK(parse_X_list("3", 3) == std::vector<int>{1});
    CHECK(parse_X_list("5^10", 5) == std::vector<int>{10});
    CHECK(parse_X_list("3^1..3^3", 3) == std::vector<int>{1, 2, 3});
    CHECK(parse_X_list("10", 3) == std::vector<int>{2});
    CHECK(parse_X_list("1", 3) == std::vector<int>{0});
    CHECK_THROWS_AS(parse_X_list("0", 3), Error);
}

TEST_CASE("subcommands") {
    auto bh = call({"bateman-horn", "--field", "3^1", "--D", "0,1", "--d", "1..8", "--format", "csv", "--threads", "1"});
    CHECK(bh.code == 0);
    Report r = Report::parse(bh.out);
    CHECK(r.experiment == "bateman-horn");
    CHECK(r.rows.size() == 8);
    CHECK(r.rows[0][0] == "1");
    CHECK(r.rows[0][1] == "3");

    auto ch = call({"chowla", "--field", "3", "--X", "3", "--format", "json"});
    CHECK(ch.code == 0);
    CHECK(Report::parse(ch.out).rows[0][3] == "-3");

    auto ss = call({"singular-series", "--D", "0,1", "--n", "8"});
    CHECK(ss.code == 0);
    CHECK(Report::parse(ss.out).rows.size() == 5);

    auto qa = call({"qform-audit", "--D", "0,1", "--mode", "definite", "--max-degA", "3"});
    CHECK(qa.code == 0);

    auto mv = call({"mobius-formula-verify", "--F", "1,1;0,0,1;1", "--r", "0,1,0,0,1", "--n", "6"});
    CHECK(mv.code == 0);

    auto ks = call({"kloosterman-scan", "--F", "0,1;0;1", "--h", "1", "--n", "1", "--d", "2", "--threads", "2"});
    CHECK(ks.code == 0);
    CHECK(Report::parse(ks.out).rows.size() == 8);

    auto ts = call({"trace-sum", "--F", "1,1;0,0,1;1", "--r", "0,1,0,0,1", "--n", "6"});
    CHECK(ts.code == 0);
    CHECK(Report::parse(ts.out).rows[0][5] == "1");
}

TEST_CASE("trace-sum bound audit from a spec file") {
    std::string path = (std::filesystem::temp_directory_path() / "cli_test_spec.json").string();
    {
        std::ofstream o(path);
        o << R"({"locals":[{"pi":"1,0,1","kind":"dirichlet","a":"1","b":"0"},{"pi":"2,1","kind":"dirichlet","a":"1","b":"1"}],"er":null})";
    }
    auto r = call({"trace-sum", "--spec", path, "--mode", "short", "--d", "0..4"});
    CHECK(r.code == 0);
    Report rep = Report::parse(r.out);
    CHECK(rep.rows.size() == 5);
    CHECK(rep.rows[3][1] == CycloSum::integer(3, 0).to_json().dump());
    auto pv = call({"trace-sum", "--spec", path, "--mode", "polya_vinogradov", "--d", "0"});
    CHECK(pv.code == 2);  // composite modulus
    std::remove(path.c_str());
}

TEST_CASE("exit codes and output") {
    CHECK(call({"nonsense"}).code == 2);
    CHECK(call({}).code == 2);
    CHECK(call({"chowla", "--X", "3", "--bogus", "1"}).code == 2);
    CHECK(call({"chowla"}).code == 2);
    CHECK(call({"bateman-horn", "--D", "0,0,2", "--d", "1"}).code == 2);  // reducible
    CHECK(call({"chowla", "--F", "0,1;0;0;1", "--X", "3"}).code == 2);   // inseparable
    CHECK(call({"kloosterman-scan", "--F", "1;2;1", "--n", "1", "--d", "1"}).code == 2);
    CHECK(call({"chowla", "--X", "3", "--format", "xml"}).code == 2);
    CHECK(call({"--help"}).code == 0);

    std::string path = (std::filesystem::temp_directory_path() / "cli_test_out.csv").string();
    auto r = call({"chowla", "--X", "3^1..3^2", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(Report::parse(ss.str()).rows.size() == 2);
    std::remove(path.c_str());
}

TEST_CASE("config file overlay") {
    std::string path = (std::filesystem::temp_directory_path() / "cli_test_config.toml").string();
    {
        std::ofstream o(path);
        o << "[bateman-horn]\nD = \"0,1\"\nd = \"1..3\"\nfield = \"3\"\n";
    }
    auto a = call({"--config", path, "bateman-horn"});
    CHECK(a.code == 0);
    CHECK(Report::parse(a.out).rows.size() == 3);
    auto b = call({"--config", path, "bateman-horn", "--d", "2"});
    CHECK(b.code == 0);
    Report rb = Report::parse(b.out);
    REQUIRE(rb.rows.size() == 1);
    CHECK(rb.rows[0][0] == "2");
    std::remove(path.c_str());
}

TEST_CASE("selftest") {
    auto r = call({"selftest"});
    CHECK(r.code == 0);
    Report rep = Report::parse(r.out);
    CHECK(rep.ok);
    for (const auto& row : rep.rows) CHECK(row[2] == "1");
}

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kmatch/cli.hpp"
#include "kmatch/graph.hpp"

using namespace kmatch;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("kmatch_cli_" + name)).string();
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

TEST_CASE("parse_count")
{
    CHECK(parse_count("12") == 12);
    CHECK(parse_count("1e6") == 1000000);
    CHECK(parse_count("2.5e3") == 2500);
    CHECK(parse_count("18446744073709551615") == 18446744073709551615ULL);
    CHECK_THROWS(parse_count("1.5"));
    CHECK_THROWS(parse_count("-1"));
    CHECK_THROWS(parse_count("abc"));
    CHECK_THROWS(parse_count(""));
    CHECK_THROWS(parse_count("1e30"));
}

TEST_CASE("bounds prints the upper bound with full precision")
{
    const auto r = run({"bounds", "--n", "1e6", "--d", "100", "--k", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("upper: 46051.70185988091") != std::string::npos);
    CHECK(r.out.find("s: ") != std::string::npos);
    CHECK(r.out.find("A: ") != std::string::npos);

    const auto j = run({"bounds", "--n", "1e6", "--d", "100", "--json"});
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc.at("upper").get<double>() == doctest::Approx(46051.7));
    CHECK(doc.contains("A"));
    CHECK(doc.contains("p_d"));

    CHECK(run({"bounds", "--n", "1e6", "--d", "1"}).code == 1);
}

TEST_CASE("oracle events")
{
    const auto dist = run({"oracle", "--n", "3", "--p", "0.5", "--k", "3", "--event", "dist", "--u", "0", "--v", "1"});
    REQUIRE(dist.code == 0);
    const auto doc = nlohmann::json::parse(dist.out);
    CHECK(doc.at("event") == "dist");
    CHECK(doc.at("n") == 3);
    CHECK(doc.at("k") == 3);
    CHECK(doc.at("p").get<double>() == 0.5);
    CHECK(doc.at("value").get<double>() == doctest::Approx(0.375).epsilon(1e-12));

    const auto km = run({"oracle", "--n", "4", "--p", "0.5", "--k", "2", "--event", "kmatching", "--matching", "0-1,3-2"});
    REQUIRE(km.code == 0);
    CHECK(nlohmann::json::parse(km.out).at("value").get<double>() == doctest::Approx(0.015625));

    const auto ex = run({"oracle", "--n", "4", "--p", "0.5", "--k", "2", "--event", "expected", "--m", "2"});
    REQUIRE(ex.code == 0);
    CHECK(nlohmann::json::parse(ex.out).at("value").get<double>() == doctest::Approx(0.046875));

    const auto umk = run({"oracle", "--n", "3", "--p", "0.5", "--k", "2", "--event", "umk"});
    REQUIRE(umk.code == 0);
    CHECK(nlohmann::json::parse(umk.out).at("value").at("1").get<double>() == doctest::Approx(0.875));

    const auto pairs = run({"oracle", "--n", "4", "--event", "pairs", "--m", "1"});
    REQUIRE(pairs.code == 0);
    const auto table = nlohmann::json::parse(pairs.out).at("value");
    CHECK(table.size() == 3);
    for (const auto& row : table) {
        CHECK(std::to_string(row.at("count").get<std::uint64_t>()) == row.at("formula").get<std::string>());
    }

    CHECK(run({"oracle", "--n", "7", "--p", "0.5", "--event", "dist"}).code == 2);
    CHECK(run({"oracle", "--n", "4", "--event", "dist"}).code == 1);
    CHECK(run({"oracle", "--n", "4", "--p", "0.5", "--event", "bogus"}).code == 1);
}

TEST_CASE("greedy on the empty vertex set")
{
    const auto r = run({"greedy", "--n", "0", "--p", "0.5", "--k", "2", "--seed", "7"});
    CHECK(r.code == 0);
    CHECK(r.out.find("size: 0\n") != std::string::npos);
}

TEST_CASE("usage errors exit with 1")
{
    CHECK(run({}).code == 1);
    CHECK(run({"greedy", "--n", "10", "--p", "0.5", "--d", "2", "--seed", "1"}).code == 1);
    CHECK(run({"greedy", "--n", "10", "--p", "0.5"}).code == 1);
    CHECK(run({"greedy", "--n", "10", "--seed", "1"}).code == 1);
    CHECK(run({"greedy", "--n", "ten", "--p", "0.5", "--seed", "1"}).code == 1);
    CHECK(run({"greedy", "--n", "10", "--p", "0.5", "--seed", "1", "--frobnicate", "3"}).code == 1);
    CHECK(run({"nonsense"}).code == 1);
    CHECK(run({"experiment", "--n", "100", "--p", "0.1", "--seed", "1", "--algorithm", "best"}).code == 1);
    const auto missing = run({"greedy", "--input", temp_path("does_not_exist"), "--seed", "1"});
    CHECK(missing.code == 1);
    CHECK_FALSE(missing.err.empty());
}

TEST_CASE("algorithmic failures exit with 2")
{
    CHECK(run({"generator", "--n", "10", "--p", "0", "--s", "1", "--seed", "1"}).code == 2);
    CHECK(run({"exact", "--n", "30", "--p", "1", "--seed", "1"}).code == 2);
}

TEST_CASE("help documents every flag")
{
    const auto top = run({"--help"});
    CHECK(top.code == 0);
    for (const char* sub : {"gen", "greedy", "generator", "exact", "bounds", "oracle", "experiment", "theorem51", "layers"}) {
        CHECK(top.out.find(sub) != std::string::npos);
        const auto h = run({sub, "--help"});
        CHECK(h.code == 0);
        CHECK(h.out.find("--n") != std::string::npos);
    }
    const auto exp = run({"experiment", "--help"});
    for (const char* flag : {"--d", "--p", "--k", "--seed", "--trials", "--algorithm", "--s", "--out", "--format",
                             "--threads", "--timing"}) {
        CHECK(exp.out.find(flag) != std::string::npos);
    }
}

TEST_CASE("gen writes an edge list that the algorithms read back")
{
    const auto path = temp_path("graph.txt");
    const auto g = run({"gen", "--n", "500", "--d", "6", "--seed", "3", "--out", path});
    REQUIRE(g.code == 0);
    std::ifstream in(path);
    const Graph graph = read_edge_list(in);
    CHECK(graph == sample_gnp({500, 6.0 / 500.0, 3}));

    const auto to_stdout = run({"gen", "--n", "500", "--d", "6", "--seed", "3"});
    CHECK(to_stdout.out == slurp(path));

    const auto matching_path = temp_path("matching.txt");
    const auto greedy = run({"greedy", "--input", path, "--k", "2", "--seed", "9", "--out", matching_path});
    REQUIRE(greedy.code == 0);
    CHECK(greedy.out.find("valid: true") != std::string::npos);
    CHECK(greedy.out.find("maximal: true") != std::string::npos);
    CHECK(slurp(matching_path).rfind("2 ", 0) == 0);

    const auto generator = run({"generator", "--input", path, "--k", "2", "--s", "5", "--seed", "9"});
    CHECK(generator.code == 0);
    CHECK(generator.out.find("size: 5\n") != std::string::npos);

    std::filesystem::remove(path);
    std::filesystem::remove(matching_path);
}

TEST_CASE("exact on a small sample")
{
    const auto r = run({"exact", "--n", "8", "--p", "0.4", "--k", "2", "--seed", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("valid: true") != std::string::npos);
}

TEST_CASE("experiment output is reproducible")
{
    const std::vector<std::string> args{"experiment", "--n", "2000", "--d", "10", "--k", "2",
                                        "--trials", "5", "--seed", "11", "--threads", "2"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("trial_index,seed,", 0) == 0);

    const auto path = temp_path("records.json");
    auto with_out = args;
    with_out.insert(with_out.end(), {"--out", path, "--format", "json"});
    const auto c = run(with_out);
    REQUIRE(c.code == 0);
    CHECK(c.out.find("success_rate: 1\n") != std::string::npos);
    const auto doc = nlohmann::json::parse(slurp(path));
    CHECK(doc.at("records").size() == 5);
    std::filesystem::remove(path);
}

TEST_CASE("theorem51 and layers subcommands")
{
    const auto t = run({"theorem51", "--n", "5000", "--d", "10", "--samples", "2", "--seed", "1"});
    CHECK(t.code == 0);
    CHECK(t.out.find("theorem51") != std::string::npos);

    const auto l = run({"layers", "--n", "5000", "--d", "5", "--k", "3", "--samples", "2", "--seed", "1"});
    CHECK(l.code == 0);
    CHECK(l.out.find("layer_ratio_1") != std::string::npos);

    CHECK(run({"layers", "--n", "5000", "--d", "5", "--k", "2", "--seed", "1"}).code == 1);
}

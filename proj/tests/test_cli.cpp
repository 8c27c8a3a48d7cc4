#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "zpg/cli.hpp"
#include "zpg/serialize.hpp"
#include "zpg/spaces.hpp"

using namespace zpg;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("zpg_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

std::string write(const std::string& name, const std::string& text) {
    fs::path p = scratch(name);
    std::ofstream(p) << text;
    return p.string();
}

std::vector<json> lines(const std::string& text) {
    std::vector<json> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(json::parse(line));
    return out;
}

struct EnvGuard {
    explicit EnvGuard(const char* v) { ::setenv("ZPG_PRECISION", v, 1); }
    ~EnvGuard() { ::unsetenv("ZPG_PRECISION"); }
};

}  // namespace

TEST_CASE("classify") {
    auto r = run({"classify", "--desc", write("c1.json", R"({"p":3,"n":1,"residual_char_is_p":true,"a":0,"b":0,"m":0})")});
    REQUIRE(r.code == kExitOk);
    auto j = json::parse(r.out);
    CHECK(j.at("case") == "Case1");
    CHECK(j.at("match") == true);
    CHECK(j.at("splitting") == true);

    auto c7 = run({"classify", "--desc",
                   write("c7.json", R"({"p":3,"n":1,"residual_char_is_p":false,"a":2,"b":1,"m":0,"kappa":1})")});
    REQUIRE(c7.code == kExitOk);
    auto j7 = json::parse(c7.out);
    CHECK(j7.at("case") == "Case7");
    REQUIRE(j7.contains("concrete_check"));
    CHECK(j7.at("concrete_check").at("match") == true);
    CHECK(j7.at("concrete_check").at("iterate_identity") == true);
}

TEST_CASE("classify rejects invalid input with exit 2") {
    auto bad = run({"classify", "--desc", write("bad.json", R"({"p":3,"n":2,"residual_char_is_p":true,"a":1,"b":2,"m":0,"kappa":1})")});
    CHECK(bad.code == kExitInput);
    CHECK(bad.err.find("b ≤ min(a,n)") != std::string::npos);

    auto missing = run({"classify", "--desc", write("nores.json", R"({"p":3,"n":1,"a":0,"b":0,"m":0})")});
    CHECK(missing.code == kExitInput);
    CHECK(missing.err.find("residual_char_is_p") != std::string::npos);
    CHECK(run({"classify", "--desc", write("broken.json", "{\"p\": 3,")}).code == kExitInput);
    CHECK(run({"classify", "--desc", scratch("missing.json").string()}).code == kExitInput);
    CHECK(run({"classify"}).code == kExitInput);
    CHECK(run({"frobnicate"}).code == kExitInput);
    CHECK(run({"--precision", "1", "classify", "--desc", "x"}).code == kExitInput);
}

TEST_CASE("invariants of a presentation file") {
    FormalSpaceParams prm{3, 2, 1, 0, 1, 1, std::nullopt};
    auto path = write("w.json", to_json(make_W(prm)).dump());
    auto r = run({"invariants", "--pres", path});
    REQUIRE(r.code == kExitOk);
    auto rep = report_from_json(json::parse(r.out));
    CHECK(rep.torsion_divisors == std::vector<int>{2});
    CHECK(rep.h0_exponent == 2);
    CHECK(rep.h1_exponent == 0);

    auto pinned = run({"--precision", "12", "invariants", "--pres", path});
    REQUIRE(pinned.code == kExitOk);
    CHECK(json::parse(pinned.out).at("stabilized_at") == json::array({12, 14}));
}

TEST_CASE("ZPG_PRECISION overrides K1") {
    auto path = write("w2.json", to_json(make_W({3, 2, 1, 0, 1, 1, std::nullopt})).dump());
    {
        EnvGuard env("11");
        auto r = run({"invariants", "--pres", path});
        REQUIRE(r.code == kExitOk);
        CHECK(json::parse(r.out).at("stabilized_at") == json::array({11, 13}));
        // the flag wins over the environment
        auto f = run({"--precision", "9", "invariants", "--pres", path});
        CHECK(json::parse(f.out).at("stabilized_at") == json::array({9, 11}));
    }
    {
        EnvGuard env("lots");
        CHECK(run({"invariants", "--pres", path}).code == kExitInput);
    }
}

TEST_CASE("verify") {
    auto all = run({"verify"});
    REQUIRE(all.code == kExitOk);
    auto js = lines(all.out);
    REQUIRE_FALSE(js.empty());
    const auto& summary = js.back().at("summary");
    CHECK(summary.at("failed") == 0);
    CHECK(summary.at("total") == js.size() - 1);
    CHECK(summary.at("by_name").contains("classifier"));

    auto abel = run({"verify", "--only", "abel"});
    REQUIRE(abel.code == kExitOk);
    auto ja = lines(abel.out);
    for (std::size_t i = 0; i + 1 < ja.size(); ++i) CHECK(ja[i].at("name") == "abel");

    auto fault = run({"verify", "--only", "tower", "--inject-fault", "wrong-sm"});
    CHECK(fault.code == kExitMismatch);
    CHECK(fault.err.find("verification failed") != std::string::npos);

    CHECK(run({"verify", "--inject-fault", "other"}).code == kExitInput);
    CHECK(run({"verify", "--only", "nope"}).code != kExitOk);
    CHECK(run({"verify", "--grid", "p=7"}).code == kExitInput);
}

TEST_CASE("sweep") {
    auto out = scratch("sweep.json").string();
    auto r = run({"--jobs", "3", "sweep", "--grid", "p=2,3;n=1..2", "--out", out});
    REQUIRE(r.code == kExitOk);
    CHECK(json::parse(r.out).at("flagged") == 0);
    json rows = read_json_file(out);
    REQUIRE(rows.size() > 20);
    for (const auto& row : rows) {
        CAPTURE(row.dump());
        CHECK(row.at("match") == true);
        if (row.at("b") == 0) CHECK(row.at("splitting") == true);
        if (row.at("m") == row.at("n")) CHECK(row.at("case") == "Case3_2");
    }

    auto csv = scratch("sweep.csv").string();
    REQUIRE(run({"sweep", "--grid", "p=3;n=1;a=1", "--out", csv}).code == kExitOk);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("p,n,d,a,b,m,kappa", 0) == 0);
    std::string row;
    CHECK(static_cast<bool>(std::getline(in, row)));

    CHECK(run({"sweep", "--grid", "p=7", "--out", out}).code == kExitInput);
    CHECK(run({"sweep", "--grid", "n=1", "--out", out}).code == kExitInput);
    CHECK(run({"sweep", "--grid", "p=2;q=1", "--out", out}).code == kExitInput);
}

TEST_CASE("compare") {
    FormalSpaceParams prm{3, 2, 2, 1, 0, 1, std::nullopt};
    auto pw = write("cw.json", to_json(make_W(prm)).dump());
    auto pr = write("cr.json", to_json(rewrite_reduction(prm).pres).dump());
    auto a = run({"invariants", "--pres", pw});
    auto b = run({"invariants", "--pres", pr});
    REQUIRE(a.code == kExitOk);
    REQUIRE(b.code == kExitOk);
    auto ra = write("ra.json", a.out);
    auto rb = write("rb.json", b.out);

    auto same = run({"compare", ra, rb});
    CHECK(same.code == kExitOk);
    CHECK(json::parse(same.out).at("identical") == true);
    CHECK(same.err.find("not complete isomorphism invariants") != std::string::npos);

    auto other = run({"invariants", "--pres", write("co.json", to_json(make_W({3, 2, 0, 0, 0, 1, std::nullopt})).dump())});
    auto rc = write("rc.json", other.out);
    auto diff = run({"compare", ra, rc});
    CHECK(diff.code == kExitMismatch);
    CHECK_FALSE(json::parse(diff.out).at("diff").empty());
}

TEST_CASE("grid parsing") {
    auto g = parse_grid("p=2,3; n=1..2 ;a=0..3");
    CHECK(g.at("p") == std::vector<i64>{2, 3});
    CHECK(g.at("n") == std::vector<i64>{1, 2});
    CHECK(g.at("a").size() == 4);
    CHECK_THROWS(parse_grid("n=1"));
    CHECK_THROWS(parse_grid("p=2;p=3"));
    CHECK_THROWS(parse_grid("p=3..2"));
    CHECK_THROWS(parse_grid("p"));
    CHECK_THROWS(parse_grid("p=x"));
    CHECK_THROWS(sweep_descriptors(parse_grid("p=3;n=4")));
    CHECK_THROWS(sweep_descriptors(parse_grid("p=3;a=3;m=3")));
    for (const auto& d : sweep_descriptors(parse_grid("p=2,3;n=1..2"))) CHECK(descriptor_violations(d).empty());
}

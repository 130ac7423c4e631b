#include "foliage/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

using nlohmann::json;

std::string data(const std::string& name)
{
    return std::string(FOLIAGE_TEST_DATA) + "/" + name;
}

struct Outcome {
    int code;
    json report;
    std::string err;
};

Outcome call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = foliage::cli::run(args, out, err);
    json j;
    if (!out.str().empty() && out.str().front() == '{') j = json::parse(out.str());
    return {code, j, err.str()};
}

std::string scratch(const std::string& name, const std::string& text)
{
    auto p = std::filesystem::temp_directory_path() / ("foliage_test_" + name);
    std::ofstream(p) << text;
    return p.string();
}

} // namespace

TEST_CASE("eigen-ratio on the index matrix")
{
    auto r = call({"eigen-ratio", "--input", data("eigen_ratio_4d.json")});
    REQUIRE(r.code == 0);
    CHECK(r.report["status"] == "ok");
    CHECK(r.report["certificate"] == "exact");
    CHECK(r.report["verdict"]["k"] == json::array({1, -1, -1, 1}));
    CHECK(r.report["verdict"]["kernel_verified"] == true);
    CHECK(r.report["schema"] == "foliage/1");
    CHECK(r.report.contains("timing_ms"));
}

TEST_CASE("order subcommand")
{
    auto r = call({"order", "--input", data("rot4.json"), "--max", "10"});
    REQUIRE(r.code == 0);
    CHECK(r.report["verdict"]["order"] == 4);
    CHECK(r.report["flags"]["max"] == 10);

    auto f = call({"order", "--input", data("rot4.json"), "--factorial", "4"});
    REQUIRE(f.code == 0);
    CHECK(f.report["verdict"]["finite_order_test"]["identity"] == true);
    CHECK(f.report["verdict"]["finite_order_test"]["exponent"] == 24);

    auto g = call({"order", "--input", data("rot4.json"), "--max", "3"});
    REQUIRE(g.code == 0);
    CHECK(g.report["verdict"]["order"].is_null());
}

TEST_CASE("input errors exit with code 2 and name the field")
{
    auto r = call({"order", "--input", data("malformed.json")});
    CHECK(r.code == 2);
    CHECK(r.report["status"] == "error");
    CHECK(r.report["error"]["field"] == "components[0][0].imag");
    CHECK_FALSE(r.err.empty());

    auto unknown = call({"order", "--input", scratch("unknown.json", R"({"kind": "diffeo", "arity": 1, "bogus": 1,
        "components": [[{"exponents": [1], "re": "-1"}]]})")});
    CHECK(unknown.code == 2);
    CHECK(unknown.report["error"]["field"] == "bogus");

    auto kind = call({"darboux", "--input", data("rot4.json")});
    CHECK(kind.code == 2);
    CHECK(kind.report["error"]["field"] == "kind");

    auto fl = call({"darboux", "--input", scratch("float_darboux.json", R"({"kind": "darboux", "backend": "float",
        "arity": 2, "components": [[{"exponents": [1, 0], "re": 1.0}], [{"exponents": [0, 1], "re": 2.0}]]})")});
    CHECK(fl.code == 2);
    CHECK(fl.report["error"]["field"] == "backend");

    auto missing = call({"order", "--input", data("does_not_exist.json")});
    CHECK(missing.code == 2);

    auto constant = call({"order", "--input", scratch("const.json", R"({"kind": "diffeo", "arity": 1,
        "components": [[{"exponents": [0], "re": "1"}, {"exponents": [1], "re": "1"}]]})")});
    CHECK(constant.code == 2);

    auto exact_float = call({"order", "--input", scratch("exact_float.json", R"({"kind": "diffeo", "arity": 1,
        "components": [[{"exponents": [1], "re": 0.5}]]})")});
    CHECK(exact_float.code == 2);

    CHECK(call({"order"}).code == 2);
    CHECK(call({"no-such-command", "--input", "x"}).code == 2);
    CHECK(call({}).code == 2);
}

TEST_CASE("help")
{
    auto r = call({"--help"});
    CHECK(r.code == 0);
    CHECK(call({"order", "--help"}).code == 0);
    CHECK(foliage::cli::subcommands().size() == 14);
}

TEST_CASE("eigenvalue subcommands")
{
    auto res = call({"resonance", "--input", data("resonance.json")});
    REQUIRE(res.code == 0);
    // lambda = (2, 1/2): the resonant monomials of degree <= 6 are (k, k), k = 1..3.
    CHECK(res.report["verdict"]["resonant_count"] == 3);
    CHECK(res.report["verdict"]["lattice_basis"].size() == 1);

    auto lower = call({"resonance", "--input", data("resonance.json"), "--max-degree", "3"});
    REQUIRE(lower.code == 0);
    CHECK(lower.report["verdict"]["degree_bound"] == 3);
    CHECK(lower.report["flags"]["max_degree"] == 3);

    auto star = call({"star", "--input", data("siegel.json")});
    REQUIRE(star.code == 0);
    CHECK(star.report["verdict"]["holds"] == false);

    auto star2 = call({"star", "--input", scratch("star.json", R"({"kind": "eigen", "eigenvalues": ["1", "2", "-3"]})")});
    REQUIRE(star2.code == 0);
    CHECK(star2.report["verdict"]["holds"] == true);
    CHECK(star2.report["verdict"]["index"] == 3);

    auto jordan = call({"invariant-series", "--input", data("jordan.json")});
    REQUIRE(jordan.code == 0);
    CHECK(jordan.report["verdict"]["linear_part"] == "jordan");
    CHECK(jordan.report["verdict"]["dimension"] == 4);

    auto diag = call({"invariant-series", "--input", data("resonance.json")});
    REQUIRE(diag.code == 0);
    CHECK(diag.report["verdict"]["support_equals_resonant"] == true);
}

TEST_CASE("diffeomorphism subcommands")
{
    auto lin = call({"linearize", "--input", data("group_conj.json")});
    REQUIRE(lin.code == 0);
    CHECK(lin.report["status"] == "ok");

    auto inv = call({"invariance", "--input", data("invariance.json")});
    REQUIRE(inv.code == 0);
    CHECK(inv.report["verdict"]["invariant"] == true);

    auto orb = call({"orbits", "--input", data("orbit_rot.json")});
    REQUIRE(orb.code == 0);
    const auto& v = orb.report["verdict"];
    REQUIRE(v["orbits"].size() == 2);
    CHECK(v["orbits"][0]["exact"] == true);
    CHECK(v["orbits"][0]["period"] == 2);
    CHECK(v["orbits"][1]["exact"] == false);
    CHECK(v["orbits"][1]["period"] == 2);
    CHECK(v["density"]["fraction"] == 1.0);
    CHECK(v["density"]["grid_size"] == 30);

    auto out = call({"orbits", "--input", scratch("outside.json", R"({"kind": "orbit", "arity": 1,
        "components": [[{"exponents": [1], "re": "-1"}]], "points": [["2"]]})")});
    CHECK(out.code == 2);
    CHECK(out.report["error"]["field"] == "points[0]");
}

TEST_CASE("field subcommands")
{
    auto fi = call({"first-integral", "--input", data("first_integral.json")});
    REQUIRE(fi.code == 0);
    CHECK(fi.report["verdict"]["is_first_integral"] == true);
    CHECK(fi.report["verdict"].contains("generic_form"));

    auto sym = call({"symmetries", "--input", data("symmetries.json")});
    REQUIRE(sym.code == 0);
    CHECK(sym.report["verdict"]["dimension"] == 1);

    auto bl = call({"blowup", "--input", data("diag123.json")});
    REQUIRE(bl.code == 0);
    CHECK(bl.report["verdict"]["dicritical"] == false);
    CHECK(bl.report["verdict"]["pushforward_identity"] == true);
    for (const char* k : {"2", "3"}) CHECK(bl.report["verdict"]["transitions"][k]["matches_direct_computation"] == true);

    auto bad_chart = call({"blowup", "--input", data("diag123.json"), "--chart", "4"});
    CHECK(bad_chart.code == 2);
    CHECK(bad_chart.report["error"]["field"] == "--chart");

    auto pr = call({"projectivize", "--input", data("diag123.json")});
    REQUIRE(pr.code == 0);
    CHECK(pr.report["verdict"]["weak_first_integral"]["vanishes"] == true);
    CHECK(pr.report["verdict"]["radial_multiple"] == false);

    auto db = call({"darboux", "--input", data("circle.json")});
    REQUIRE(db.code == 0);
    bool circle = false;
    for (const auto& c : db.report["verdict"]["curves"]) {
        CHECK(c["cofactor_verified"] == true);
        if (c["g"].size() == 3) circle = true;
    }
    CHECK(circle);
}

TEST_CASE("holonomy subcommand")
{
    auto path = (std::filesystem::temp_directory_path() / "foliage_test_traj.csv").string();
    auto h = call({"holonomy", "--input", data("holonomy_linear.json"), "--csv", path});
    REQUIRE(h.code == 0);
    const auto& v = h.report["verdict"];
    CHECK(h.report["certificate"] == "numerical-evidence");
    CHECK(v["closed_form_deviation"].get<double>() < 1e-8);
    CHECK(v["periodicity"]["order"] == 6);
    CHECK(v["invariance"]["max_residual"].get<double>() < 1e-8);
    CHECK(v["samples"].size() == 6);
    std::ifstream csv(path);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "point,t,re_g1,im_g1,re_g2,im_g2");

    auto out = (std::filesystem::temp_directory_path() / "foliage_test_report.json").string();
    std::ostringstream o, e;
    REQUIRE(foliage::cli::run({"holonomy", "--input", data("holonomy_linear.json"), "--output", out, "--grid", "2"}, o, e) == 0);
    CHECK(o.str().empty());
    std::ifstream in(out);
    auto j = json::parse(in);
    CHECK(j["verdict"]["samples"].size() == 2);
    CHECK(j["flags"]["grid"] == 2);
}

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lookdown/cli.hpp"

using namespace lookdown;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "lookdown-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config parsing fills defaults and validates") {
    Json doc = Json::parse(R"({"command":"coalescent","family":{"kind":"moran","N":10},"cap":100})");
    RunConfig config = parse_config(doc);
    REQUIRE(config.command == "coalescent");
    REQUIRE(config.model->spec->generations() == 101);
    REQUIRE(config.model->spec->sizes[0] == 10);
    REQUIRE(config.alpha == 0.01);

    Json no_command = Json::parse(R"({"family":{"kind":"moran","N":4},"cap":5})");
    try {
        parse_config(no_command);
        FAIL("expected ValidationError");
    } catch (const Error& e) {
        REQUIRE(e.code() == errc::validation_error);
        REQUIRE(std::string(e.what()).find("command") != std::string::npos);
    }
}

TEST_CASE("pmf strings parse as exact rationals") {
    Json doc = Json::parse(
        R"({"command":"gw-spine","family":{"kind":"gw","pmf":["1/2","0","1/2"]},"cap":3})");
    RunConfig config = parse_config(doc);
    REQUIRE(config.model->offspring->pmf[0] == Rational(1, 2));
    REQUIRE(config.model->offspring->pmf[2] == Rational(1, 2));
}

TEST_CASE("flat model-spec documents are accepted") {
    Json doc = Json::parse(
        R"({"command":"verify-neutrality","family":"explicit","X":[2,3,3],"litters":[[2,1],[2,1,0]]})");
    RunConfig config = parse_config(doc);
    REQUIRE(config.model->spec->sizes == std::vector<int>{2, 3, 3});
}

TEST_CASE("verify-neutrality run records exact equality") {
    fs::path dir = scratch_dir("verify");
    Json doc = Json::parse(
        R"({"command":"verify-neutrality","family":{"kind":"explicit","X":[2,3,3],"litters":[[2,1],[2,1,0]]},"seed":7})");
    doc["out"] = dir.string();
    RunConfig config = parse_config(doc);
    REQUIRE(run(config) == 0);
    Json manifest = Json::parse(slurp(dir / "verify-neutrality.manifest.json"));
    REQUIRE(manifest["results"]["exact_equal"] == true);
    REQUIRE(manifest["config"]["seed"] == 7);
    std::string csv = slurp(dir / "neutrality.csv");
    REQUIRE(csv.rfind("class,forward,lookdown,completely_neutral", 0) == 0);
}

TEST_CASE("identify-base emits the documented columns") {
    fs::path dir = scratch_dir("identify");
    Json doc = Json::parse(
        R"({"command":"identify-base","family":{"kind":"moran","N":4},"cap":40,"reps":200,"n_max":2,"seed":11})");
    doc["out"] = dir.string();
    REQUIRE(run(parse_config(doc)) == 0);
    std::string csv = slurp(dir / "identify_base.csv");
    REQUIRE(csv.rfind("n,t_n,rho_hat,se", 0) == 0);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("fixation on the doubling family reports zero events") {
    fs::path dir = scratch_dir("fixation");
    Json doc = Json::parse(
        R"({"command":"fixation","family":{"kind":"pow2"},"cap":10,"reps":20,"seed":3})");
    doc["out"] = dir.string();
    REQUIRE(run(parse_config(doc)) == 0);
    Json manifest = Json::parse(slurp(dir / "fixation.manifest.json"));
    REQUIRE(manifest["results"]["events"] == 0);
    REQUIRE(manifest["results"]["source_generation"] == 1);
}

TEST_CASE("reruns with one seed are byte-identical, a new seed is not") {
    Json base = Json::parse(
        R"({"command":"identify-base","family":{"kind":"moran","N":4},"cap":30,"reps":150,"n_max":1,"seed":5})");
    fs::path a = scratch_dir("rerun-a"), b = scratch_dir("rerun-b"), c = scratch_dir("rerun-c");
    Json da = base, db = base, dc = base;
    da["out"] = a.string();
    db["out"] = b.string();
    dc["out"] = c.string();
    dc["seed"] = 6;
    REQUIRE(run(parse_config(da)) == 0);
    REQUIRE(run(parse_config(db)) == 0);
    REQUIRE(run(parse_config(dc)) == 0);
    REQUIRE(slurp(a / "identify_base.csv") == slurp(b / "identify_base.csv"));
    REQUIRE(slurp(a / "identify_base.csv") != slurp(c / "identify_base.csv"));
}

TEST_CASE("rank recovery ignores the thread count") {
    Json base = Json::parse(
        R"({"command":"rank-recovery","family":{"kind":"moran","N":4},"cap":120,"reps":60,"n_max":2,"seed":13})");
    fs::path a = scratch_dir("threads-1"), b = scratch_dir("threads-2");
    Json da = base, db = base;
    da["out"] = a.string();
    da["threads"] = 1;
    db["out"] = b.string();
    db["threads"] = 2;
    REQUIRE(run(parse_config(da)) == 0);
    REQUIRE(run(parse_config(db)) == 0);
    REQUIRE(slurp(a / "rank_recovery.csv") == slurp(b / "rank_recovery.csv"));
}

TEST_CASE("sample writes readable genealogies") {
    fs::path dir = scratch_dir("sample");
    Json doc = Json::parse(
        R"({"command":"sample","family":{"kind":"moran","N":5},"cap":6,"reps":2,"sampler":"lookdown","seed":2})");
    doc["out"] = dir.string();
    REQUIRE(run(parse_config(doc)) == 0);
    std::ifstream in(dir / "genealogy_0.txt");
    Genealogy g = read_genealogy(in);
    REQUIRE(g.generations() == 7);
    for (int n = 1; n < 7; ++n) REQUIRE(g.parent_of(n, 0) == 0);
}

TEST_CASE("coalescent command covers analytic families and pair estimates") {
    fs::path dir = scratch_dir("coalescent");
    Json doc = Json::parse(
        R"({"command":"coalescent","family":{"kind":"moran","N":4},"cap":3,"reps":5000,"seed":9,"pair":{"n":0,"m":3}})");
    doc["out"] = dir.string();
    REQUIRE(run(parse_config(doc)) == 0);
    Json manifest = Json::parse(slurp(dir / "coalescent.manifest.json"));
    REQUIRE(manifest["results"]["pair"]["formula"] == "91/216");
    REQUIRE(manifest["results"]["pair"]["within_4se"] == true);
    std::string csv = slurp(dir / "coalescent.csv");
    REQUIRE(csv.rfind("n,s_n,t_n,s_n_trunc,t_n_trunc", 0) == 0);
    REQUIRE(csv.find("1/6") != std::string::npos);
}

TEST_CASE("sbo-check and gw-spine succeed end to end") {
    fs::path dir = scratch_dir("sbo");
    Json doc = Json::parse(R"({"command":"sbo-check","seed":1})");
    doc["out"] = dir.string();
    REQUIRE(run(parse_config(doc)) == 0);

    fs::path dir2 = scratch_dir("gw-spine");
    Json doc2 = Json::parse(
        R"({"command":"gw-spine","family":{"kind":"gw","pmf":["1/2","0","1/2"]},"cap":3,"seed":1})");
    doc2["out"] = dir2.string();
    REQUIRE(run(parse_config(doc2)) == 0);
    Json manifest = Json::parse(slurp(dir2 / "gw-spine.manifest.json"));
    REQUIRE(manifest["results"]["correspondence_exact"] == true);
    REQUIRE(manifest["results"]["regime"] == "fixation");
}

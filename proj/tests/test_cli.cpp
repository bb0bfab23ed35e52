#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::vector<json> records;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "")
{
    std::string cmd = env + " " + POLYEIS_BIN + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    std::array<char, 4096> buf;
    while (fgets(buf.data(), buf.size(), p)) r.out += buf.data();
    r.code = WEXITSTATUS(pclose(p));
    std::size_t start = 0;
    while (start < r.out.size()) {
        auto end = r.out.find('\n', start);
        std::string line = r.out.substr(start, end - start);
        if (!line.empty() && line[0] == '{') r.records.push_back(json::parse(line));
        start = end == std::string::npos ? r.out.size() : end + 1;
    }
    return r;
}

fs::path fresh_dir(const std::string& name)
{
    fs::path d = fs::temp_directory_path() / ("polyeis-cli-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("field and zeta examples")
{
    auto r = run("--no-cache field --D 5");
    REQUIRE(r.code == 0);
    auto& p = r.records.back()["payload"];
    CHECK(p["d_F"] == 5);
    CHECK(p["fundamental_unit"]["sqrt_coords"] == json({"1/2", "1/2"}));
    auto z = run("zeta --D 5 --neg 1 --no-cache");
    REQUIRE(z.code == 0);
    CHECK(z.records.back()["payload"]["value"] == "1/30");
    CHECK(run("zeta --D 2 --neg 1 --no-cache").records.back()["payload"]["value"] == "1/12");
    CHECK(run("zeta --D 3 --neg 1 --no-cache").records.back()["payload"]["value"] == "1/6");
}

TEST_CASE("usage errors")
{
    CHECK(run("--bogus").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("field --D 5 --format xml").code == 2);
    CHECK(run("field --D 4 --no-cache").code == 2);
    CHECK(run("certify --phi 'x:1' --N 2 --no-cache").code == 2);
}

TEST_CASE("record shape")
{
    auto r = run("--no-cache fourier --N 3 --phi '1:1,0 -1:0,1'");
    REQUIRE(r.code == 0);
    auto& rec = r.records.back();
    for (auto key : {"schema_version", "artifact_version", "command", "config", "payload", "wall_time_s", "cache_hit"})
        CHECK(rec.contains(key));
    CHECK(rec["command"] == "fourier");
    CHECK(rec["config"]["N"] == 3);
    CHECK(rec["config"]["bound"] == 10000);
    CHECK(rec["payload"]["double_transform_is_identity"] == true);
    CHECK(rec["payload"]["in_S0"] == true);
    // the transform round-trips through --phi
    fs::path dir = fresh_dir("phi");
    fs::create_directories(dir);
    std::ofstream(dir / "t.txt") << rec["payload"]["transform"].get<std::string>();
    auto r2 = run("--no-cache fourier --N 3 --phi @" + (dir / "t.txt").string());
    REQUIRE(r2.code == 0);
    CHECK(r2.records.back()["payload"]["transform"] == rec["payload"]["input"]);
    fs::remove_all(dir);
}

TEST_CASE("cache")
{
    fs::path dir = fresh_dir("cache");
    std::string flags = "--cache-dir " + dir.string();
    auto a = run(flags + " classgroup --D 5 --N 3");
    auto b = run(flags + " classgroup --D 5 --N 3");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.records.back()["cache_hit"] == false);
    CHECK(b.records.back()["cache_hit"] == true);
    CHECK(a.records.back()["payload"].dump() == b.records.back()["payload"].dump());
    CHECK(a.records.back()["payload"]["ray_class_order"] == 2);

    // corrupt the entry: recompute with a warning record
    int files = 0;
    for (auto& e : fs::directory_iterator(dir)) {
        std::ofstream(e.path(), std::ios::trunc) << "{\"family\":";
        ++files;
    }
    CHECK(files == 1);
    auto c = run(flags + " classgroup --D 5 --N 3");
    REQUIRE(c.code == 0);
    REQUIRE(c.records.size() == 2);
    CHECK(c.records[0].contains("warning"));
    CHECK(c.records[1]["cache_hit"] == false);
    CHECK(c.records[1]["payload"].dump() == a.records.back()["payload"].dump());
    CHECK(run(flags + " classgroup --D 5 --N 3").records.back()["cache_hit"] == true);

    // the environment variable picks the directory
    fs::path env_dir = fresh_dir("env");
    CHECK(run("field --D 2", "POLYEIS_CACHE_DIR=" + env_dir.string()).code == 0);
    CHECK(fs::exists(env_dir));

    // --no-cache writes nothing
    fs::path none = fresh_dir("none");
    CHECK(run("--no-cache --cache-dir " + none.string() + " field --D 5").code == 0);
    CHECK(!fs::exists(none));

    // unwritable cache directory
    CHECK(run("--cache-dir /proc/polyeis-no field --D 5").code == 1);
    fs::remove_all(dir);
    fs::remove_all(env_dir);
}

TEST_CASE("determinism and formats")
{
    for (std::string cmd : {"fourier --N 2", "zeta --D 13 --neg 2", "constant-term --N 3 --bound 2000",
                            "eisenstein --N 2 --bound 500", "classgroup --D 2 --N 4", "field --D 3"}) {
        auto a = run("--no-cache " + cmd), b = run("--no-cache " + cmd);
        REQUIRE(a.code == 0);
        CHECK(a.records.back()["payload"].dump() == b.records.back()["payload"].dump());
    }
    auto csv = run("--no-cache --format csv zeta --D 5");
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("key,value\n", 0) == 0);
    CHECK(csv.out.find("payload.value,1/30") != std::string::npos);
    auto text = run("--no-cache --format text zeta --D 5");
    CHECK(text.out.find("payload.value: 1/30") != std::string::npos);
}

TEST_CASE("certify and constant term")
{
    auto r = run("--no-cache certify --N 2 --bound 100000");
    REQUIRE(r.code == 0);
    auto& p = r.records.back()["payload"];
    CHECK(p["rational"] == "1/8");
    CHECK(p["denominator_factorization"] == json::parse("[[2,3]]"));
    // not in S0
    CHECK(run("--no-cache constant-term --N 2 --phi '1:1,0'").code == 1);
    // 1/8 does not fit a denominator bound of 2: certification fails with exit 1
    auto bad = run("--no-cache certify --N 2 --bound 100000 --max-exp 1");
    CHECK(bad.code == 1);
    CHECK(bad.records.back().contains("error"));
}

TEST_CASE("horospherical report")
{
    auto r = run("--no-cache horospherical --D 5 --N 3");
    REQUIRE(r.code == 0);
    auto& p = r.records.back()["payload"];
    CHECK(p["group_orders"]["SL2"] == 720);
    CHECK(p["kernel_check"]["pass"] == true);
    CHECK(p["round_trip"]["pass"] == true);
    CHECK(p["round_trip"]["samples"].size() == 10);
    auto s = run("--no-cache horospherical --N 13");
    CHECK(s.code == 1);
    CHECK(s.records.back()["error"].get<std::string>().find("budget") != std::string::npos);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

int run(const std::string& args, const std::string& env_prefix = "") {
    std::string cmd = env_prefix + std::string(BALLOP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kRotation = R"({"kind":"disk","a":[0,1],"b":0,"c":0,"d":1})";
const char* kRotation2 = R"({"kind":"disk","a":[0.5403023058681398,0.8414709848078965],"b":0,"c":0,"d":1})";
const char* kInvolution = R"({"kind":"automorphism","a":[[0.5,0]]})";
const char* kHyperbolic = R"({"kind":"disk","a":1,"b":0.5,"c":0.5,"d":1})";
const char* kContraction = R"({"kind":"disk","a":0.5,"b":0,"c":0,"d":1})";

}  // namespace

TEST_CASE("adjoint-check exits cleanly on a valid map") {
    int rc = run(std::string("adjoint-check --space hardy --N 1 --samples 200 --map '") +
                 kHyperbolic + "' --out cli_adjoint.json");
    CHECK(rc == 0);
    auto j = nlohmann::ordered_json::parse(slurp("cli_adjoint.json"));
    CHECK(j["pass"] == true);
    CHECK(j["version"].is_string());
    CHECK(j["config"]["N"] == 1);
    CHECK(j["results"][0]["residual"].get<double>() < 1e-10);
}

TEST_CASE("adjoint-check rejects malformed specs with exit 2") {
    CHECK(run("adjoint-check --space hardy --N 1 --map '{\"kind\":\"disk\",'") == 2);
    CHECK(run("adjoint-check --space hardy --N 1 --map no_such_file.json") == 2);
    CHECK(run("adjoint-check --badflag") == 2);
}

TEST_CASE("limit-scan agreement and hypothesis violations") {
    int rc = run(std::string("limit-scan --space hardy --N 1 --map '") + kHyperbolic +
                 "' --map2 '" + kHyperbolic +
                 "' --omega '[1]' --csv cli_scan.csv --out cli_scan.json");
    CHECK(rc == 0);
    auto j = nlohmann::ordered_json::parse(slurp("cli_scan.json"));
    CHECK(j["agreement"] == true);
    CHECK(std::abs(j["predicted"].get<double>() - 3.0) < 1e-8);
    std::string csv = slurp("cli_scan.csv");
    CHECK(csv.rfind("r,value_re,value_im,abs\n", 0) == 0);

    // a strict contraction has no boundary image on the sphere: exit 3
    int rc3 = run(std::string("limit-scan --space hardy --N 1 --map '") + kContraction +
                  "' --map2 '" + kContraction + "'");
    CHECK(rc3 == 3);
}

TEST_CASE("verdict dispatch, exit codes, selector checks") {
    int rc = run(std::string("verdict --theorem 3.1 --space hardy --N 1 --samples 6 --D 8 --map '") +
                 kRotation + "' --map2 '" + kRotation2 + "' --out cli_v31.json");
    CHECK(rc == 0);
    auto j = nlohmann::ordered_json::parse(slurp("cli_v31.json"));
    CHECK(j["verdict"] == "compact");

    // theorem 4.3 needs the dirichlet space: mismatch is a usage error
    CHECK(run(std::string("verdict --theorem 4.3 --space hardy --N 1 --map '") + kRotation +
              "' --map2 '" + kRotation2 + "'") == 2);

    // two automorphisms under 4.4: usage error
    CHECK(run(std::string("verdict --theorem 4.4 --space dirichlet --N 1 --map '") + kRotation +
              "' --map2 '" + kRotation2 + "'") == 2);

    int rc43 = run(std::string("verdict --theorem 4.3 --space dirichlet --N 1 --map '") +
                   kRotation + "' --map2 '" + kRotation2 + "' --out cli_v43.json");
    CHECK(rc43 == 0);
    auto j43 = nlohmann::ordered_json::parse(slurp("cli_v43.json"));
    CHECK(j43["verdict"] == "compact");

    int rc42 = run(std::string("verdict --theorem 4.2 --space dirichlet --N 1 --map '") +
                   kInvolution + "' --map2 '" + kRotation + "' --out cli_v42.json");
    CHECK(rc42 == 0);
    auto j42 = nlohmann::ordered_json::parse(slurp("cli_v42.json"));
    CHECK(j42["verdict"] == "non-compact");
    CHECK(j42["sup_phi_sigma"].is_number());
}

TEST_CASE("commutator-report and dirichlet-report") {
    int rc = run(std::string("commutator-report --space hardy --N 1 --samples 4 --D 8 --map '") +
                 kInvolution + "' --map2 '" + kRotation +
                 "' --dump cli_dump.csv --out cli_crep.json");
    CHECK(rc == 0);
    auto j = nlohmann::ordered_json::parse(slurp("cli_crep.json"));
    CHECK(j["score"].get<double>() > 5e-2);
    std::string dump = slurp("cli_dump.csv");
    CHECK(dump.rfind("space,N,D\nhardy,1,8\n", 0) == 0);

    int rcd = run(std::string("dirichlet-report --N 1 --D 10 --map '") + kContraction +
                  "' --map2 '" + kHyperbolic + "' --out cli_drep.json");
    CHECK(rcd == 0);
    auto jd = nlohmann::ordered_json::parse(slurp("cli_drep.json"));
    CHECK(jd["two_route_gap"].get<double>() < 1e-10);
    CHECK(jd["zero_commutator"] == false);
}

TEST_CASE("adjoint-check optional identities") {
    int rc = run(std::string("adjoint-check --space hardy --N 1 --samples 100 --D 12 --map '") +
                 kInvolution + "' --lemma34 --lemma36 --out cli_flags.json");
    CHECK(rc == 0);
    auto j = nlohmann::ordered_json::parse(slurp("cli_flags.json"));
    CHECK(j["results"].size() == 3);
    CHECK(j["results"][1]["identity"] == "auxiliary-normalization");
    CHECK(j["results"][2]["identity"] == "adjoint-inverse-form");
    CHECK(j["pass"] == true);
}

TEST_CASE("fixed seeds give byte-identical reports") {
    std::string cmd = std::string("verdict --theorem 3.1 --space hardy --N 1 --samples 6 --D 8 ") +
                      "--seed 7 --map '" + kInvolution + "' --map2 '" + kRotation +
                      "' --out cli_det.json";
    CHECK(run(cmd) == 0);
    std::string first = slurp("cli_det.json");
    CHECK(run(cmd) == 0);
    CHECK(first == slurp("cli_det.json"));
    CHECK(!first.empty());

    // worker threads must not change a single byte
    CHECK(run(cmd, "BALLOP_THREADS=2 ") == 0);
    CHECK(first == slurp("cli_det.json"));
}

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>

#include "framefn/json_io.hpp"

#ifndef FRAMEFN_CLI_PATH
#error "FRAMEFN_CLI_PATH must be defined by the build"
#endif

using namespace framefn;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(FRAMEFN_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string tmp_path(const std::string& name) {
    return std::string("framefn_cli_test_") + name;
}

}  // namespace

TEST_CASE("entangled-dim prints the bound") {
    auto r = run_cli("entangled-dim --dims 3,3");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "4\n");
    CHECK(run_cli("entangled-dim --dims 2,2,2").out == "4\n");
    CHECK(run_cli("entangled-dim --dims 3,3,3").out == "20\n");
}

TEST_CASE("unknown subcommand exits 3 with usage") {
    CHECK(run_cli("no-such-command").exit_code == 3);
}

TEST_CASE("gen-basis output is byte-deterministic and re-validates") {
    auto a = run_cli("gen-basis --kind mixed --dims 2,3 --seed 42");
    auto b = run_cli("gen-basis --kind mixed --dims 2,3 --seed 42");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    std::string path = tmp_path("basis.json");
    std::ofstream(path) << a.out;
    auto chk = run_cli("check-basis --in " + path);
    CHECK(chk.exit_code == 0);
    auto rep = Json::parse(chk.out);
    CHECK(rep.at("pass").get<bool>());
    std::remove(path.c_str());
}

TEST_CASE("decompose round-trips a shuffled qubit-block basis file") {
    std::string path = tmp_path("qb.json");
    auto gen = run_cli("gen-basis --kind qubit-block --dims 2,4 --partition 2,1,1 --seed 5 --out " +
                       path);
    CHECK(gen.exit_code == 0);
    auto dec = run_cli("decompose --in " + path);
    CHECK(dec.exit_code == 0);
    auto j = Json::parse(dec.out);
    CHECK(j.at("partition").get<std::vector<int>>() == std::vector<int>{2, 1, 1});
    CHECK(j.at("blocks").size() == 3);

    // decompose re-reads its own artifact
    std::string dec_path = tmp_path("dec.json");
    std::ofstream(dec_path) << dec.out;
    std::ifstream in(dec_path);
    Json reread;
    in >> reread;
    CHECK(reread == j);
    std::remove(path.c_str());
    std::remove(dec_path.c_str());
}

TEST_CASE("decompose rejects a non-(2,n) basis with exit 1") {
    std::string path = tmp_path("b33.json");
    run_cli("gen-basis --kind product --dims 3,3 --seed 1 --out " + path);
    CHECK(run_cli("decompose --in " + path).exit_code == 1);
    std::remove(path.c_str());
}

TEST_CASE("frame-verify: Born passes, counterexample fails on reversed bases") {
    std::string oracle_path = tmp_path("born.json");
    {
        Mat t = Mat::Identity(9, 9);
        std::ofstream(oracle_path) << born_descriptor(t, Dims({3, 3})).dump();
    }
    auto ok = run_cli("frame-verify --oracle " + oracle_path +
                      " --family product --samples 50 --tol 1e-9");
    CHECK(ok.exit_code == 0);
    CHECK(Json::parse(ok.out).at("pass").get<bool>());

    std::string ce_path = tmp_path("ce.json");
    std::ofstream(ce_path) << counterexample_descriptor(3, 3, 9.0, "modulus", 0).dump();
    auto bad = run_cli("frame-verify --oracle " + ce_path +
                       " --family reversed --samples 50 --tol 1e-9");
    CHECK(bad.exit_code == 1);
    CHECK(Json::parse(bad.out).at("max_deviation").get<double>() > 0.01);

    std::remove(oracle_path.c_str());
    std::remove(ce_path.c_str());
}

TEST_CASE("reconstruct and residual subcommands") {
    std::string oracle_path = tmp_path("born23.json");
    Rng rng(7);
    Mat g = rng.gaussian_mat(6, 6);
    Mat t = 0.5 * (g + g.adjoint());
    std::ofstream(oracle_path) << born_descriptor(t, Dims({2, 3})).dump();

    auto rec = run_cli("reconstruct --oracle " + oracle_path);
    CHECK(rec.exit_code == 0);
    auto j = Json::parse(rec.out);
    Mat back = mat_from_json(j.at("c"));
    CHECK((back - t).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(j.at("asymmetry").get<double>() < 1e-9);

    auto res = run_cli("residual --oracle " + oracle_path + " --samples 300 --seed 2");
    CHECK(res.exit_code == 0);
    CHECK(Json::parse(res.out).at("residual").get<double>() < 1e-9);
    std::remove(oracle_path.c_str());
}

TEST_CASE("counterexample subcommand finds a deviation witness") {
    auto r = run_cli("counterexample --dims 3,3 --w 9 --samples 50");
    CHECK(r.exit_code == 0);
    auto j = Json::parse(r.out);
    CHECK(j.at("max_deviation").get<double>() > 0.01);
    CHECK(j.at("oracle").at("kind") == "counterexample");
}

TEST_CASE("entangled-subspace and find-product") {
    std::string path = tmp_path("vand.json");
    auto es = run_cli("entangled-subspace --kind vandermonde --dims 3,3 --out " + path);
    CHECK(es.exit_code == 0);
    std::ifstream in(path);
    Json j;
    in >> j;
    CHECK(j.at("certificate") == "exact-by-construction");
    CHECK(j.at("subspace").at("columns").size() == 4);

    std::string sub_path = tmp_path("sub.json");
    std::ofstream(sub_path) << j.at("subspace").dump();
    auto fp = run_cli("find-product --in " + sub_path + " --dims 3,3 --restarts 100 --seed 1");
    CHECK(fp.exit_code == 0);
    auto rep = Json::parse(fp.out);
    CHECK(rep.at("verdict") == "numerically_entangled");
    CHECK(rep.at("best_overlap").get<double>() < 0.999);

    std::remove(path.c_str());
    std::remove(sub_path.c_str());
}

TEST_CASE("demo-theorem3 demonstrates a non-Born frame function") {
    auto r = run_cli("demo-theorem3 --samples 100");
    CHECK(r.exit_code == 0);
    auto j = Json::parse(r.out);
    CHECK(j.at("demonstrated").get<bool>());
    CHECK(j.at("fit_residual").get<double>() > 1e-3);
    CHECK(j.at("frame_sums").at("max_deviation").get<double>() < 1e-9);
}

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qam/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "qam");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = qam::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path, std::ios::binary) << text;
    return path.string();
}

}  // namespace

TEST_CASE("store") {
    const auto file = write_temp("qam_cli_s4.txt", "001\n010\n100\n111\n");
    const auto dry = run({"store", "--patterns", file, "--dry-run"});
    CHECK(dry.code == 0);
    CHECK(dry.out == "gates: 37\n");
    const auto full = run({"store", "--patterns", file});
    CHECK(full.code == 0);
    CHECK(full.out.find("gates: 37") != std::string::npos);
    CHECK(full.out.find("001") != std::string::npos);
    const auto json = run({"store", "--patterns", file, "--format", "json"});
    CHECK(json.out.find("\"gate_count\": 37") != std::string::npos);
}

TEST_CASE("distribution and retrieve") {
    const auto file = write_temp("qam_cli_s2.txt", "000\n111\n");
    const auto d = run({"distribution", "--patterns", file, "--input", "100"});
    CHECK(d.code == 0);
    CHECK(d.out.find("\"p_rec\"") != std::string::npos);
    CHECK(d.out.find("0.75") != std::string::npos);
    const auto csv = run({"distribution", "--patterns", file, "--input", "100", "--format", "csv"});
    CHECK(csv.out.find("000,0.75") != std::string::npos);

    const auto r1 = run({"retrieve", "--patterns", file, "--input", "100", "--T", "10", "--seed", "5"});
    const auto r2 = run({"retrieve", "--patterns", file, "--input", "100", "--T", "10", "--seed", "5"});
    CHECK(r1.code == 0);
    CHECK(r1.out == r2.out);
    CHECK(r1.out.find("\"recognized\": true") != std::string::npos);

    const auto corrupt = run({"retrieve", "--patterns", file, "--corrupt", "1", "--target", "1", "--seed", "3"});
    CHECK(corrupt.code == 0);
    const auto amp = run({"retrieve", "--patterns", file, "--input", "000", "--mode", "amplify", "--T", "1"});
    CHECK(amp.code == 0);
}

TEST_CASE("input errors exit with status 2") {
    const auto dup = write_temp("qam_cli_dup.txt", "01\n01\n");
    const auto r = run({"store", "--patterns", dup});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK(run({"store"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    const auto file = write_temp("qam_cli_s2b.txt", "000\n111\n");
    CHECK(run({"distribution", "--patterns", file, "--input", "10"}).code == 2);
    CHECK(run({"retrieve", "--patterns", file, "--input", "000", "--mode", "sideways"}).code == 2);
    CHECK(run({"thermo", "--method", "exact"}).code == 2);
}

TEST_CASE("numeric failures exit with status 3") {
    CHECK(run({"tune", "--nu", "0.99999", "--n", "20000"}).code == 3);
}

TEST_CASE("thermo, tune, phase and classical") {
    const auto t = run({"thermo", "--b-grid", "0.01:100000:8"});
    CHECK(t.code == 0);
    CHECK(t.out.rfind("b,d_over_n,n,Z_ratio,F,U,S,S_rescaled,D_eff\n", 0) == 0);
    CHECK(t.err.find("crossover b:") != std::string::npos);

    const auto tu = run({"tune"});
    CHECK(tu.code == 0);
    CHECK(tu.out.find("T_repeat:") != std::string::npos);

    const auto ph = run({"phase", "--alpha-grid", "0.05,0.1,0.2", "--jt-grid", "0.5,1,2"});
    CHECK(ph.code == 0);
    CHECK(ph.out.rfind("alpha,Jt,m_retrieval,r_retrieval,m_from_zero,r_from_zero,phase\n", 0) == 0);
    CHECK(ph.err.find("max retrieval alpha at Jt=1:") != std::string::npos);

    const auto cl = run({"classical", "--neurons", "100", "--trials", "3", "--seed", "2"});
    CHECK(cl.code == 0);
    CHECK(cl.out.rfind("alpha,p,trials,mean_overlap,std_overlap\n", 0) == 0);
}

TEST_CASE("output file") {
    const auto path = (std::filesystem::temp_directory_path() / "qam_cli_out.csv").string();
    const auto r = run({"classical", "--neurons", "50", "--trials", "2", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "alpha,p,trials,mean_overlap,std_overlap");
}

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "kaonlab/cli.hpp"
#include "kaonlab/csv.hpp"

using namespace kaonlab;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::dispatch(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("kaonlab_test_" + name);
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("no arguments prints usage and exits 2") {
    const RunResult r = run({});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("unknown subcommand exits 2") {
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--bogus-flag"}).code == 2);
}

TEST_CASE("--help exits 0") {
    const RunResult r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("probabilities") != std::string::npos);
}

TEST_CASE("probabilities emits a consistent CSV grid") {
    const RunResult r = run({"probabilities", "--steps", "3", "--t-to", "1.0"});
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 1 + 9);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t_l,t_r,P_YY,P_NN,P_YN,P_NY,E");
    std::string line;
    while (std::getline(in, line)) {
        double tl, tr, yy, nn, yn, ny, e;
        char comma;
        std::istringstream row(line);
        row >> tl >> comma >> tr >> comma >> yy >> comma >> nn >> comma >> yn >> comma >>
            ny >> comma >> e;
        CHECK(std::abs(yy + nn + yn + ny - 1.0) < 1e-9);
        CHECK(std::abs(e - (yy + nn - yn - ny)) < 1e-12);
    }
}

TEST_CASE("chsh-scan emits 26 rows with the crossing near x = 2") {
    const RunResult r = run({"chsh-scan", "--model", "approx", "--x-from", "0.5", "--x-to",
                             "3.0", "--steps", "26"});
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 1 + 26);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,s_max,t_a,t_b,t_a_prime,t_b_prime");
    std::string line;
    double first_violating_x = -1.0;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double x = std::stod(line.substr(0, c1));
        const double s = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        if (x <= 2.0) CHECK(s <= 2.0 + 1e-6);
        if (s > 2.0 + 1e-6 && first_violating_x < 0.0) first_violating_x = x;
    }
    CHECK(first_violating_x == doctest::Approx(2.2).epsilon(1e-12));  // first grid x past 2.107
}

TEST_CASE("cp-bounds reports the delta verdicts as JSON") {
    const RunResult r = run({"cp-bounds"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "cp-bounds");
    CHECK(j["params"]["eps_abs"] == 2.23e-3);
    CHECK(j["delta"].get<double>() == doctest::Approx(3.15e-3).epsilon(2e-3));
    CHECK(j["wigner"]["violated"] == true);
    CHECK(j["lrt_constraints"]["p_le_q_holds"] == false);
    CHECK(j["lrt_constraints"]["p_ge_q_holds"] == true);
}

TEST_CASE("config file feeds parameters and flags override it") {
    const fs::path cfg = temp_file("params.conf");
    {
        std::ofstream f(cfg);
        f << "# test configuration\n";
        f << "delta_m_tau_s = 0.50\n";
        f << "eps_abs = 1.0e-3\n";
        f << "system_label = custom\n";
    }
    const RunResult file_only = run({"cp-bounds", "--config", cfg.string()});
    CHECK(file_only.code == 0);
    auto j = nlohmann::json::parse(file_only.out);
    CHECK(j["params"]["delta_m_tau_s"] == 0.5);
    CHECK(j["params"]["eps_abs"] == 1.0e-3);

    const RunResult with_flag =
        run({"cp-bounds", "--config", cfg.string(), "--eps-abs", "2.0e-3"});
    auto j2 = nlohmann::json::parse(with_flag.out);
    CHECK(j2["params"]["eps_abs"] == 2.0e-3);
    fs::remove(cfg);
}

TEST_CASE("unknown config keys are rejected") {
    const fs::path cfg = temp_file("bad.conf");
    {
        std::ofstream f(cfg);
        f << "delta_m = 0.47\n";  // misnamed key
    }
    const RunResult r = run({"cp-bounds", "--config", cfg.string()});
    CHECK(r.code == 4);
    CHECK(r.err.find("unknown key") != std::string::npos);
    fs::remove(cfg);
}

TEST_CASE("decoherence commands refuse a nonzero eps") {
    const RunResult r = run({"asym-curve", "--lambda", "0.25", "--eps-abs", "2.23e-3"});
    CHECK(r.code == 4);
    CHECK(r.err.find("CP conservation") != std::string::npos);
    CHECK(run({"asym-curve", "--lambda", "0.25"}).code == 0);
    CHECK(run({"asym-curve", "--lambda", "0.25", "--eps-abs", "0"}).code == 0);
}

TEST_CASE("asym-curve emits the damped asymmetry") {
    const RunResult r = run({"asym-curve", "--lambda", "0.25", "--t-first", "1.0", "--steps",
                             "5", "--dt-to", "2.0"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "dt,asym_qm,asym_lambda");
    std::string first;
    std::getline(in, first);
    // dt = 0: A_QM = 1, A_lambda = e^{-0.25}
    const auto c1 = first.find(',');
    const auto c2 = first.find(',', c1 + 1);
    CHECK(std::stod(first.substr(c1 + 1, c2 - c1 - 1)) == doctest::Approx(1.0));
    CHECK(std::stod(first.substr(c2 + 1)) == doctest::Approx(std::exp(-0.25)).epsilon(1e-9));
}

TEST_CASE("synth then fit round-trips through files") {
    const fs::path csv = temp_file("synth.csv");
    const RunResult s = run({"synth", "--lambda", "0.25", "--seed", "42", "--noise", "0.02",
                             "--out", csv.string()});
    CHECK(s.code == 0);
    const RunResult f = run({"fit", "--input", csv.string(), "--model", "lambda"});
    CHECK(f.code == 0);
    const auto j = nlohmann::json::parse(f.out);
    CHECK(j["model"] == "lambda");
    CHECK(j["rows"] == 20);
    CHECK(j["best_fit"].get<double>() == doctest::Approx(0.25).epsilon(0.10));
    CHECK(j["ndf"] == 19);
    CHECK(j["ci_lo"].get<double>() <= j["best_fit"].get<double>());
    CHECK(j["ci_hi"].get<double>() >= j["best_fit"].get<double>());
    fs::remove(csv);
}

TEST_CASE("identical synth invocations produce identical bytes") {
    const fs::path a = temp_file("synth_a.csv");
    const fs::path b = temp_file("synth_b.csv");
    for (const auto& path : {a, b})
        CHECK(run({"synth", "--lambda", "0.4", "--seed", "7", "--noise", "0.05", "--out",
                   path.string()})
                  .code == 0);
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    const std::string ca((std::istreambuf_iterator<char>(fa)), {});
    const std::string cb((std::istreambuf_iterator<char>(fb)), {});
    CHECK(ca == cb);
    CHECK(!ca.empty());
    fs::remove(a);
    fs::remove(b);
}

TEST_CASE("fit on a missing file exits 3") {
    const RunResult r = run({"fit", "--input", "/nonexistent/nope.csv"});
    CHECK(r.code == 3);
}

TEST_CASE("measures emits the entanglement stack") {
    const RunResult r =
        run({"measures", "--lambda", "0.25", "--t-from", "0", "--t-to", "2", "--steps", "5"});
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,entropy,one_minus_E,C,f,zeta");
    std::string first;
    std::getline(in, first);
    // t = 0: entropy 0, 1-E = 0, C = 1, f = 1, zeta = 0
    double t, s, ome, c, f, z;
    char comma;
    std::istringstream row(first);
    row >> t >> comma >> s >> comma >> ome >> comma >> c >> comma >> f >> comma >> z;
    CHECK(std::abs(s) < 1e-9);
    CHECK(std::abs(ome) < 1e-9);
    CHECK(c == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(z) < 1e-12);
}

TEST_CASE("ingest_csv validates schema and rows") {
    {
        std::istringstream in("t_l,t_r,asym,sigma\n1.0,0.5,0.8,0.02\n2.0,1.0,0.6,0.02\n");
        const AsymmetryDataset d = ingest_csv(in, "test");
        CHECK(d.rows.size() == 2);
        CHECK(d.rows[0].t_l == 1.0);
        CHECK(d.rows[1].sigma == 0.02);
    }
    {
        std::istringstream in("tl,t_r,asym,sigma\n1.0,0.5,0.8,0.02\n");
        CHECK_THROWS_WITH_AS(ingest_csv(in, "test"),
                             doctest::Contains("missing or misnamed column 't_l'"), CsvError);
    }
    {
        std::istringstream in("t_l,t_r,asym,sigma\n1.0,0.5,0.8,0.02\n2.0,1.0,0.6,0\n");
        try {
            ingest_csv(in, "test");
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            CHECK(e.line() == 3);
            CHECK(std::string(e.what()).find("sigma") != std::string::npos);
        }
    }
    {
        std::istringstream in("t_l,t_r,asym,sigma\n1.0,abc,0.8,0.02\n");
        try {
            ingest_csv(in, "test");
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            CHECK(e.line() == 2);
        }
    }
    {
        std::istringstream in("t_l,t_r,asym,sigma\n");
        CHECK_THROWS_AS(ingest_csv(in, "test"), CsvError);
    }
}

TEST_CASE("20-row synthetic file ingests cleanly") {
    const fs::path csv = temp_file("ingest20.csv");
    CHECK(run({"synth", "--lambda", "0.1", "--seed", "3", "--noise", "0.01", "--out",
               csv.string()})
              .code == 0);
    const AsymmetryDataset d = ingest_csv_file(csv.string());
    CHECK(d.rows.size() == 20);
    for (const auto& row : d.rows) {
        CHECK(row.sigma > 0.0);
        CHECK(row.t_l >= 0.0);
        CHECK(row.t_r >= 0.0);
    }
    fs::remove(csv);
}

TEST_CASE("chsh-scan rejects a bad model name") {
    CHECK(run({"chsh-scan", "--model", "exotic"}).code == 2);
}

}  // TEST_SUITE

#include "doctest.h"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct CliResult {
    int status = -1;
    std::string out;
};

std::string shell_quote(const std::string& s) {
    std::string q = "'";
    for (const char c : s) {
        if (c == '\'')
            q += "'\\''";
        else
            q += c;
    }
    q += "'";
    return q;
}

CliResult run_cli(const std::vector<std::string>& args) {
    std::string cmd = shell_quote(KEMPNER_CLI_PATH);
    for (const auto& a : args) cmd += " " + shell_quote(a);
    cmd += " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

nlohmann::json parse_json(const CliResult& r) {
    REQUIRE(r.status == 0);
    return nlohmann::json::parse(r.out);
}

} // namespace

TEST_CASE("encode emits the documented JSON byte for byte") {
    const auto r = run_cli({"encode", "--sequence", "constant:10", "--n", "409"});
    CHECK(r.status == 0);
    CHECK(r.out == "{\"digits\":[9,0,4],\"m\":3}\n");
}

TEST_CASE("decode inverts encode") {
    const auto r = run_cli({"decode", "--sequence", "constant:10", "--digits", "9,0,4"});
    CHECK(r.status == 0);
    CHECK(r.out == "{\"n\":\"409\",\"m\":3}\n");
    // values beyond 64 bits stay exact as strings
    const auto big = run_cli({"encode", "--sequence", "constant:10", "--n",
                              "999999999999999999999999999999"});
    const auto j = parse_json(big);
    CHECK(j["m"] == 30);
}

TEST_CASE("count rows carry exact values as strings") {
    const auto r = run_cli({"count", "--sequence", "constant:10", "--forbidden", "uniform:{9}",
                            "--lambda", "0/1", "--m", "1..3"});
    const auto j = parse_json(r);
    REQUIRE(j["rows"].size() == 3);
    CHECK(j["rows"][0]["members_in_Im"] == "8");
    CHECK(j["rows"][1]["members_in_Im"] == "72");
    CHECK(j["rows"][2]["members_in_Im"] == "648");
    CHECK(j["rows"][2]["g_m"] == "1000");
    CHECK(j["rows"][2]["members_in_Jm"] == "729");
    const std::string tail = j["rows"][1]["tail_probability"];
    CHECK(tail.substr(0, 4) == "8.09"); // 81/100, rounded down
}

TEST_CASE("prob prints the exact rational and a decimal") {
    const auto r = run_cli({"prob", "--sequence", "constant:10", "--forbidden", "uniform:{9}",
                            "--lambda", "0/1", "--m", "2"});
    const auto j = parse_json(r);
    CHECK(j["numerator"] == "81");
    CHECK(j["denominator"] == "100");
    CHECK(j["threshold"] == 0);
    const std::string dec = j["decimal"];
    CHECK(dec.substr(0, 4) == "8.09"); // 0.81 printed from the down-rounded endpoint
}

TEST_CASE("bound rows compare exact counts to the analytic level bound") {
    const auto r = run_cli({"bound", "--sequence", "constant:10", "--forbidden", "uniform:{9}",
                            "--lambda", "0/1", "--m", "2"});
    const auto j = parse_json(r);
    REQUIRE(j["rows"].size() == 1);
    CHECK(j["rows"][0]["members_in_Im"] == "72");
    CHECK(j["rows"][0]["level_bound"].get<double>() == doctest::Approx(90.48374180359595));
    CHECK(j["rows"][0]["ratio"].get<double>() < 1.0);
}

TEST_CASE("abscissa value and window") {
    const auto r = run_cli({"abscissa", "--d", "10", "--lambda", "0/1"});
    const auto j = parse_json(r);
    CHECK(j["abscissa"].get<double>() == doctest::Approx(0.9782852759048374).epsilon(1e-12));
    CHECK(j["window_high"].get<double>() == 1.0);
    CHECK(j["lambda"] == "0/1");
}

TEST_CASE("criterion converges with witness") {
    const auto r = run_cli({"criterion", "--sequence", "constant:2", "--forbidden", "uniform:{1}",
                            "--index", "all", "--d", "2", "--delta", "1/2", "--k-min", "16",
                            "--k-max", "1048576"});
    const auto j = parse_json(r);
    CHECK(j["verdict"] == "converges");
    CHECK(j["delta"] == "1/2");
    CHECK(j["k_threshold"] == 16);
    const std::string w = j["witness"];
    CHECK(w.find("I(1048576) = 1048577 >= ") != std::string::npos);
}

TEST_CASE("criterion diverges with witness") {
    const auto r = run_cli({"criterion", "--sequence", "constant:10", "--forbidden", "uniform:{9}",
                            "--index", "finite:0,1,2", "--d", "10", "--delta", "1/2", "--k-min",
                            "100", "--k-max", "1000000"});
    const auto j = parse_json(r);
    CHECK(j["verdict"] == "diverges");
    CHECK(j["k_threshold"] == 1000000);
    const std::string w = j["witness"];
    CHECK(w.find("I(1000000) = 3 <= ") != std::string::npos);
}

TEST_CASE("criterion accepts exact decimal deltas") {
    const auto r = run_cli({"criterion", "--sequence", "constant:10", "--forbidden", "uniform:{9}",
                            "--index", "finite:0,1,2", "--d", "10", "--delta", "0.5", "--k-min",
                            "100", "--k-max", "1000000"});
    const auto j = parse_json(r);
    CHECK(j["delta"] == "1/2");
    CHECK(j["verdict"] == "diverges");
}

TEST_CASE("sum emits an enclosure with decimal endpoint strings") {
    const auto r = run_cli({"sum", "--sequence", "constant:10", "--forbidden", "uniform:{9}",
                            "--lambda", "0/1", "--sigma", "1.0", "--levels", "3", "--tail-depth",
                            "300"});
    const auto j = parse_json(r);
    CHECK(j["M"] == 3);
    CHECK(j["M_prime"] == 303);
    CHECK(j["precision_bits"] == 128);
    const double lower = std::stod(j["lower"].get<std::string>());
    const double upper = std::stod(j["upper"].get<std::string>());
    CHECK(lower < upper);
    CHECK(lower > 5.4);  // partial sum through 3 digit levels
    CHECK(upper < 100.0); // counted tail keeps the bound finite
    CHECK(j["width"].get<double>() == doctest::Approx(upper - lower).epsilon(1e-6));
}

TEST_CASE("sum over several levels prints a table") {
    const auto r = run_cli({"sum", "--sequence", "constant:10", "--forbidden", "uniform:{9}",
                            "--lambda", "0/1", "--sigma", "1.0", "--levels", "1..3"});
    const auto j = parse_json(r);
    REQUIRE(j["rows"].size() == 3);
    CHECK(j["rows"][0]["M"] == 1);
    CHECK(j["rows"][2]["M"] == 3);
    CHECK(j["rows"][0]["width"].get<double>() > j["rows"][2]["width"].get<double>());
}

TEST_CASE("mc output is reproducible for a fixed seed") {
    const std::vector<std::string> args = {"mc", "--sequence", "constant:10", "--forbidden",
                                           "uniform:{9}", "--lambda", "1/4", "--m", "10",
                                           "--samples", "20000", "--seed", "42"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    const auto j = parse_json(a);
    CHECK(j["samples"] == 20000);
    CHECK(j["seed"] == 42);
    CHECK(j["successes"].get<std::uint64_t>() <= 20000);
}

TEST_CASE("csv and table formats") {
    const auto csv = run_cli({"count", "--sequence", "constant:10", "--forbidden", "uniform:{9}",
                              "--lambda", "0/1", "--m", "2", "--format", "csv"});
    CHECK(csv.status == 0);
    CHECK(csv.out.substr(0, csv.out.find('\n')) ==
          "m,g_m,Im_size,members_in_Im,members_in_Jm,tail_probability");
    CHECK(csv.out.find("2,100,90,72,81,") != std::string::npos);

    const auto tbl = run_cli({"abscissa", "--d", "10", "--lambda", "0/1", "--format", "table"});
    CHECK(tbl.status == 0);
    CHECK(tbl.out.find("abscissa") != std::string::npos);

    // cells containing commas are quoted
    const auto enc = run_cli({"encode", "--sequence", "constant:10", "--n", "409", "--format",
                              "csv"});
    CHECK(enc.out.find("\"[9,0,4]\"") != std::string::npos);
}

TEST_CASE("config file mirrors flags and explicit flags win") {
    const std::string path = "/tmp/kempner_cli_config_test.json";
    {
        std::ofstream f(path);
        f << R"({"sequence":"constant:10","n":"409"})";
    }
    const auto r = run_cli({"encode", "--config", path});
    CHECK(r.status == 0);
    CHECK(r.out == "{\"digits\":[9,0,4],\"m\":3}\n");

    const auto with_override = run_cli({"encode", "--config", path, "--n", "5"});
    CHECK(with_override.status == 0);
    CHECK(with_override.out == "{\"digits\":[5],\"m\":1}\n");
    std::remove(path.c_str());
}

TEST_CASE("exit codes distinguish failure classes") {
    CHECK(run_cli({"frobnicate"}).status == 2);
    CHECK(run_cli({"encode", "--sequence", "constant:10"}).status == 2); // missing --n
    CHECK(run_cli({"encode", "--sequence", "nonsense:10", "--n", "4"}).status == 2);
    CHECK(run_cli({"count", "--sequence", "constant:10", "--forbidden", "uniform:{9}", "--lambda",
                   "0.5", "--m", "2"})
              .status == 2); // decimals rejected for lambda
    CHECK(run_cli({"sum", "--sequence", "constant:10", "--forbidden", "uniform:{9}", "--lambda",
                   "1/10", "--sigma", "1.0", "--levels", "2"})
              .status == 3); // regime: lambda = 1/d
    CHECK(run_cli({"sum", "--sequence", "constant:10", "--forbidden", "uniform:{9}", "--lambda",
                   "0/1", "--sigma", "0.5", "--levels", "2"})
              .status == 3); // regime: ratio >= 1
    CHECK(run_cli({"sum", "--sequence", "constant:10", "--forbidden", "uniform:{9}", "--lambda",
                   "0/1", "--sigma", "1.0", "--levels", "9", "--budget", "1000000"})
              .status == 4); // enumeration budget
    CHECK(run_cli({"--help"}).status == 0);
    CHECK(run_cli({"encode", "--help"}).status == 0);
}

TEST_CASE("identical invocations give byte-identical output") {
    const std::vector<std::string> args = {"sum",      "--sequence", "constant:10",
                                           "--forbidden", "uniform:{9}", "--lambda", "0/1",
                                           "--sigma",  "1.0",        "--levels", "2"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
}

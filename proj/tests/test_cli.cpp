#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "hdspc/cli.hpp"
#include "hdspc/distributions.hpp"
#include "hdspc/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "hdspc");
    std::ostringstream out, err;
    const int code = hdspc::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("hdspc_cli_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string put(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    hdspc::write_file(p.string(), text);
    return p.string();
}

std::string gaussian_csv(int m, int p, unsigned seed, int outlier = -1) {
    std::srand(seed);
    std::ostringstream s;
    for (int j = 0; j < p; ++j) s << (j ? "," : "") << "x" << j + 1;
    s << "\n";
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < p; ++j) {
            // sum of uniforms, roughly normal and reproducible
            double v = -6.0;
            for (int k = 0; k < 12; ++k) v += std::rand() / (RAND_MAX + 1.0);
            if (i == outlier) v += 6.0;
            s << (j ? "," : "") << hdspc::format_number(v);
        }
        s << "\n";
    }
    return s.str();
}

json without_manifest(json j) {
    j.erase("manifest");
    return j;
}

}  // namespace

TEST_CASE("estimate classical on a hand dataset") {
    const std::string in = put("hand.csv", "a,b\n0,0\n1,1\n2,2\n");
    const std::string out = (scratch() / "hand.json").string();
    const Run r = run({"estimate", in, "--method", "classical", "-o", out});
    REQUIRE(r.code == 0);
    const json j = json::parse(hdspc::read_file(out));
    CHECK(j["mu"] == json::array({1.0, 1.0}));
    CHECK(j["d"] == json::array({1.0, 1.0}));
    CHECK(j["tr2"].get<double>() == doctest::Approx(4.0 - 4.0 / 3.0));
    CHECK(j["tr3"].get<double>() == doctest::Approx(8.0 - 8.0 + 16.0 / 9.0));
    CHECK(j["c"].get<double>() == doctest::Approx(1.0 + 4.0 / (3.0 * std::sqrt(8.0 / 3.0))));
    CHECK(j["columns"] == json::array({"a", "b"}));
    CHECK(j["manifest"]["command"] == "estimate");
    CHECK(j["manifest"]["input_digest"].get<std::string>().size() == 16);
}

TEST_CASE("estimate reports input and numeric failures by exit code") {
    const Run constant = run({"estimate", put("const.csv", "a,b,c\n1,5,2\n2,5,3\n4,5,1\n3,5,0\n")});
    CHECK(constant.code == 2);
    CHECK(constant.err.find("DegenerateVariance") != std::string::npos);
    CHECK(constant.err.find("column 2") != std::string::npos);

    CHECK(run({"estimate", put("nan.csv", "a,b\n1,2\nnan,3\n4,5\n")}).code == 2);
    CHECK(run({"estimate", put("blank.csv", "a,b\n1,2\n,3\n4,5\n")}).code == 2);
    CHECK(run({"estimate", (scratch() / "missing.csv").string()}).code == 2);
    CHECK(run({"estimate", put("ok.csv", "1,2\n2,1\n3,5\n"), "--method", "median"}).code == 2);
    CHECK(run({"estimate", "--bogus"}).code == 2);

    const std::string data = put("chart_in.csv", "a,b\n1,2\n3,4\n");
    const std::string params = put("neg.json", R"({"mu":[0,0],"d":[1,1],"tr2":-1,"tr3":0})");
    const Run numeric = run({"chart", data, params});
    CHECK(numeric.code == 3);
    CHECK(numeric.err.find("NonpositiveTraceEstimate") != std::string::npos);
}

TEST_CASE("estimate rmdp output layout and determinism") {
    const std::string in = put("g.csv", gaussian_csv(40, 12, 3, 6));
    const std::string a = (scratch() / "a.json").string();
    const std::string b = (scratch() / "b.json").string();
    REQUIRE(run({"estimate", in, "--alpha", "0.05", "--seed", "9", "-o", a}).code == 0);
    REQUIRE(run({"estimate", in, "--alpha", "0.05", "--seed", "9", "-o", b}).code == 0);
    const json ja = json::parse(hdspc::read_file(a));
    const json jb = json::parse(hdspc::read_file(b));
    CHECK(without_manifest(ja) == without_manifest(jb));
    CHECK(ja["index_base"] == 1);
    CHECK(ja["weights"].size() == 40);
    CHECK(ja["mdp"]["h"] == 21);
    CHECK(ja["mdp"]["subset"].size() == 21);
    CHECK(ja["mu"].size() == 12);
    CHECK(ja["manifest"]["seed"] == 9);
    // the planted row (7th data row) is flagged, reported 1-based
    const auto flagged = ja["flagged"].get<std::vector<int>>();
    CHECK(std::find(flagged.begin(), flagged.end(), 7) != flagged.end());
    for (int f : flagged) CHECK(ja["weights"][static_cast<std::size_t>(f - 1)] == 0);

    ::setenv("HDSPC_SEED", "31", 1);
    const Run env = run({"estimate", in});
    ::unsetenv("HDSPC_SEED");
    REQUIRE(env.code == 0);
    CHECK(json::parse(env.out)["manifest"]["seed"] == 31);
}

TEST_CASE("chart from estimates") {
    const std::string in = put("g2.csv", gaussian_csv(30, 10, 4, 2));
    const std::string est = (scratch() / "est2.json").string();
    REQUIRE(run({"estimate", in, "-o", est}).code == 0);
    const std::string out = (scratch() / "chart.csv").string();
    REQUIRE(run({"chart", in, est, "-o", out}).code == 0);
    CHECK(fs::exists(out + ".manifest.json"));
    const hdspc::CsvTable t = hdspc::read_csv(out);
    CHECK(t.columns == std::vector<std::string>{"index", "M2", "U", "Z", "threshold", "flag"});
    CHECK(t.values.rows() == 30);
    for (Eigen::Index i = 0; i < 30; ++i) {
        CHECK(t.values(i, 0) == double(i + 1));
        CHECK(t.values(i, 5) == (t.values(i, 3) > t.values(i, 4) ? 1.0 : 0.0));
    }
    CHECK(t.values(0, 4) == doctest::Approx(hdspc::upper_quantile(0.05)));
    REQUIRE(run({"chart", in, est, "--alpha", "0.01", "-o", out}).code == 0);
    CHECK(hdspc::read_csv(out).values(0, 4) == doctest::Approx(hdspc::upper_quantile(0.01)));

    CHECK(run({"chart", put("wide.csv", "a,b,c\n1,2,3\n"), est}).code == 2);
    CHECK(run({"chart", in, put("broken.json", "{\"mu\": [1,")}).code == 2);
}

TEST_CASE("transform-ecdf") {
    const std::string ref = put("ref.csv", "v,w\n1,10\n2,30\n3,20\n4,50\n5,40\n");
    const Run same = run({"transform-ecdf", ref, ref});
    REQUIRE(same.code == 0);
    const hdspc::CsvTable t = hdspc::parse_csv(same.out);
    CHECK(t.columns == std::vector<std::string>{"v", "w"});
    for (int k = 0; k < 5; ++k) {
        CHECK(t.values(k, 0) == doctest::Approx(hdspc::normal_quantile((k + 1) / 6.0)).epsilon(1e-14));
    }
    CHECK(t.values(1, 1) == doctest::Approx(hdspc::normal_quantile(3.0 / 6.0)).scale(1.0));

    const Run edges = run({"transform-ecdf", put("edge.csv", "v,w\n-100,0\n2.5,45\n100,1000\n"), ref});
    REQUIRE(edges.code == 0);
    const hdspc::CsvTable e = hdspc::parse_csv(edges.out);
    CHECK(e.values(0, 0) == doctest::Approx(hdspc::normal_quantile(1.0 / 6.0)));
    CHECK(e.values(0, 1) == doctest::Approx(hdspc::normal_quantile(1.0 / 6.0)));
    CHECK(e.values(2, 0) == doctest::Approx(hdspc::normal_quantile(5.0 / 6.0)));
    CHECK(e.values(0, 0) < e.values(1, 0));
    CHECK(e.values(1, 0) < e.values(2, 0));

    const Run bad = run({"transform-ecdf", ref, put("flatref.csv", "v,w\n1,3\n1,4\n")});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("reference column 1") != std::string::npos);
}

TEST_CASE("simulate writes reproducible series") {
    const std::string d1 = (scratch() / "fa1").string();
    const std::string d2 = (scratch() / "fa2").string();
    const std::vector<std::string> common{"simulate", "falsealarm", "--p", "5,8", "--m", "30",
                                          "--reps", "100", "--starts", "20", "--compare", "--seed", "4"};
    auto with_dir = [&](const std::string& d, const std::string& threads) {
        std::vector<std::string> a = common;
        a.insert(a.end(), {"--out-dir", d, "--threads", threads});
        return run(a);
    };
    REQUIRE(with_dir(d1, "1").code == 0);
    REQUIRE(with_dir(d2, "3").code == 0);
    const std::string s1 = hdspc::read_file(d1 + "/series.csv");
    CHECK(s1 == hdspc::read_file(d2 + "/series.csv"));
    CHECK(s1.rfind("series,x,y,mc_se\n", 0) == 0);
    const json rep = json::parse(hdspc::read_file(d1 + "/report.json"));
    CHECK(rep["kind"] == "falsealarm");
    CHECK(rep["results"].size() == 4);
    CHECK(rep["manifest"]["seed"] == 4);
    CHECK(rep["manifest"]["config"]["reps"] == 100);

    const std::string dir = (scratch() / "misc").string();
    CHECK(run({"simulate", "power", "--p", "6", "--m", "30", "--reps", "20", "--starts", "20",
               "--delta", "0,2", "--out-dir", dir}).code == 0);
    const std::string series = hdspc::read_file(dir + "/series.csv");
    CHECK(std::count(series.begin(), series.end(), '\n') == 3);
    CHECK(run({"simulate", "cdf", "--p", "10", "--draws", "500", "--out-dir", dir}).code == 0);
    CHECK(run({"simulate", "traceratio", "--p", "6", "--m", "30", "--reps", "10", "--starts", "20",
               "--out-dir", dir}).code == 0);
    CHECK(run({"simulate", "sensitivity", "--p", "5", "--m", "30", "--a-grid", "0.2", "--reps", "100",
               "--starts", "10", "--out-dir", dir}).code == 0);
    CHECK(run({"simulate", "calibrate-k", "--points", "10", "--draws", "200", "--m-max", "40",
               "--p-max", "20", "--out-dir", dir}).code == 0);
    const json k = json::parse(hdspc::read_file(dir + "/report.json"));
    CHECK(k["results"][0].contains("slope"));
    CHECK(run({"simulate", "falsealarm", "--reps", "10", "--m", "30", "--p", "5", "--out-dir", dir}).code == 2);
    CHECK(run({"simulate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("installed tool exit codes") {
    const char* tool = std::getenv("HDSPC_TOOL");
    if (tool == nullptr) return;
    const std::string in = put("proc.csv", "a,b\n1,1\n2,1\n3,1\n");
    const std::string cmd = std::string(tool) + " estimate " + in + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 2);
    const std::string ok = std::string(tool) + " estimate " + put("proc_ok.csv", gaussian_csv(12, 4, 5)) +
                           " > /dev/null 2>&1";
    const int good = std::system(ok.c_str());
    CHECK(WEXITSTATUS(good) == 0);
}

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "romeo/cli.hpp"

using namespace romeo;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(iterations = 10

[[provider]]
id = "op1"

[[user]]
provider = "op1"

[[relying_party]]
id = "rp1"

[[service]]
relying_party = "rp1"
id = "web"
schedule = [[0, 0.8]]
)";

const char* kSmall = R"(iterations = 40
seed = 11
p_active = 0.4
feedback_noise = 0.1

[[provider]]
id = "a"

[[provider]]
id = "b"
behavior = "negative_rater"

[[provider]]
id = "c"

[[user]]
count = 6
provider = "a"

[[user]]
count = 6
provider = "b"

[[user]]
count = 6
provider = "c"

[[relying_party]]
id = "rp"

[[service]]
relying_party = "rp"
id = "web"
schedule = [[0, 0.8], [20, 0.3]]
)";

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run_main(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("romeo-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    std::string file(const std::string& name, const std::string& content) const {
        cli::write_file(path_ / name, content);
        return (path_ / name).string();
    }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) { return cli::read_file(p); }

} // namespace

TEST_CASE("validate accepts the minimal document", "[cli]") {
    TempDir dir;
    auto r = invoke({"validate", "--scenario", dir.file("min.toml", kMinimal)});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.rfind("ok:", 0) == 0);
    CHECK(r.err.empty());
}

TEST_CASE("validate reports every error and exits 1", "[cli]") {
    TempDir dir;
    std::string doc = "p_active = 2\nseed = -1\n" + std::string(kMinimal);
    auto r = invoke({"validate", "--scenario", dir.file("bad.toml", doc)});
    CHECK(r.code == cli::kInvalid);
    CHECK(r.err.find("p_active") != std::string::npos);
    CHECK(r.err.find("seed") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("usage errors exit 2", "[cli]") {
    TempDir dir;
    auto path = dir.file("min.toml", kMinimal);
    auto unknown = invoke({"run", "--scenario", path, "--out", dir.path().string(), "--frobnicate"});
    CHECK(unknown.code == cli::kUsage);
    CHECK(unknown.err.find("--frobnicate") != std::string::npos);
    CHECK(unknown.err.find("Usage") != std::string::npos);

    CHECK(invoke({}).code == cli::kUsage);
    CHECK(invoke({"explode"}).code == cli::kUsage);
    CHECK(invoke({"run", "--scenario", path}).code == cli::kUsage);
    CHECK(invoke({"run", "--scenario", path, "--out", dir.path().string(), "--format", "xml"}).code ==
          cli::kUsage);
    CHECK(invoke({"validate", "--scenario", (dir.path() / "missing.toml").string()}).code == cli::kUsage);
    CHECK(invoke({"compare", "--scenario", path, "--out", dir.path().string(), "--engines", "magic"}).code ==
          cli::kUsage);
}

TEST_CASE("run twice gives byte-identical files", "[cli][determinism]") {
    TempDir dir;
    auto path = dir.file("small.toml", kSmall);
    auto a = dir.path() / "a";
    auto b = dir.path() / "b";
    REQUIRE(invoke({"run", "--scenario", path, "--seed", "5", "--out", a.string()}).code == cli::kOk);
    REQUIRE(invoke({"run", "--scenario", path, "--seed", "5", "--out", b.string()}).code == cli::kOk);
    for (const char* name : {"results.csv", "accuracy.csv", "satisfaction.csv", "result.json", "summary.csv"}) {
        INFO(name);
        REQUIRE(fs::exists(a / name));
        CHECK(slurp(a / name) == slurp(b / name));
    }
    // One row per iteration plus the header.
    auto csv = slurp(a / "results.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 41);
}

TEST_CASE("run defaults to the scenario seed", "[cli]") {
    TempDir dir;
    auto path = dir.file("small.toml", kSmall);
    REQUIRE(invoke({"run", "--scenario", path, "--out", (dir.path() / "d").string()}).code == cli::kOk);
    REQUIRE(invoke({"run", "--scenario", path, "--seed", "11", "--out", (dir.path() / "e").string()}).code ==
            cli::kOk);
    CHECK(slurp(dir.path() / "d" / "result.json") == slurp(dir.path() / "e" / "result.json"));
}

TEST_CASE("format selects the emitted files", "[cli]") {
    TempDir dir;
    auto path = dir.file("small.toml", kSmall);
    auto csv = dir.path() / "csv";
    auto json = dir.path() / "json";
    REQUIRE(invoke({"run", "--scenario", path, "--out", csv.string(), "--format", "csv"}).code == cli::kOk);
    REQUIRE(invoke({"run", "--scenario", path, "--out", json.string(), "--format", "json"}).code == cli::kOk);
    CHECK(fs::exists(csv / "results.csv"));
    CHECK_FALSE(fs::exists(csv / "result.json"));
    CHECK(fs::exists(json / "result.json"));
    CHECK_FALSE(fs::exists(json / "results.csv"));
}

TEST_CASE("--plot adds charts without touching CSV or JSON", "[cli][plot]") {
    TempDir dir;
    auto path = dir.file("small.toml", kSmall);
    auto plain = dir.path() / "plain";
    auto plotted = dir.path() / "plotted";
    REQUIRE(invoke({"run", "--scenario", path, "--out", plain.string()}).code == cli::kOk);
    REQUIRE(invoke({"run", "--scenario", path, "--out", plotted.string(), "--plot"}).code == cli::kOk);
    for (const char* name : {"results.csv", "accuracy.csv", "satisfaction.csv", "result.json"}) {
        CHECK(slurp(plain / name) == slurp(plotted / name));
    }
    for (const char* name : {"results.svg", "accuracy.svg", "satisfaction.svg"}) {
        CHECK(fs::exists(plotted / name));
        CHECK_FALSE(fs::exists(plain / name));
    }
}

TEST_CASE("--seeds writes per-seed outputs and a mean row", "[cli][seeds]") {
    TempDir dir;
    auto path = dir.file("small.toml", kSmall);
    auto batch = dir.path() / "batch";
    auto r = invoke({"run", "--scenario", path, "--seed", "3", "--seeds", "4", "--out", batch.string()});
    REQUIRE(r.code == cli::kOk);
    for (int s = 3; s < 7; ++s) CHECK(fs::exists(batch / ("seed-" + std::to_string(s)) / "result.json"));
    auto summary = slurp(batch / "summary.csv");
    CHECK(summary.rfind("seed,mae,mean_satisfaction,mean_interaction_rate\n3,", 0) == 0);
    CHECK(summary.find("\nmean,") != std::string::npos);
    CHECK(r.out == summary);

    // A batch run matches the same seed run alone.
    auto single = dir.path() / "single";
    REQUIRE(invoke({"run", "--scenario", path, "--seed", "5", "--out", single.string()}).code == cli::kOk);
    CHECK(slurp(single / "result.json") == slurp(batch / "seed-5" / "result.json"));
}

TEST_CASE("batches are independent of the thread budget", "[cli][seeds]") {
    TempDir dir;
    auto path = dir.file("small.toml", kSmall);
    ::setenv("ROMEO_SIM_THREADS", "1", 1);
    CHECK(cli::thread_budget() == 1);
    REQUIRE(invoke({"run", "--scenario", path, "--seeds", "3", "--out", (dir.path() / "one").string()}).code ==
            cli::kOk);
    ::setenv("ROMEO_SIM_THREADS", "3", 1);
    CHECK(cli::thread_budget() == 3);
    REQUIRE(invoke({"run", "--scenario", path, "--seeds", "3", "--out", (dir.path() / "three").string()}).code ==
            cli::kOk);
    ::setenv("ROMEO_SIM_THREADS", "zero", 1);
    CHECK(cli::thread_budget() >= 1);
    ::unsetenv("ROMEO_SIM_THREADS");
    CHECK(slurp(dir.path() / "one" / "summary.csv") == slurp(dir.path() / "three" / "summary.csv"));
    CHECK(slurp(dir.path() / "one" / "seed-12" / "result.json") ==
          slurp(dir.path() / "three" / "seed-12" / "result.json"));
}

TEST_CASE("compare runs one scenario per engine", "[cli][compare]") {
    TempDir dir;
    auto path = dir.file("small.toml", kSmall);
    auto out = dir.path() / "cmp";
    auto r = invoke({"compare", "--scenario", path, "--seed", "2", "--out", out.string(), "--engines",
                  "weighted_mean,time_decay_weighted_mean:0.8"});
    REQUIRE(r.code == cli::kOk);
    CHECK(fs::exists(out / "weighted_mean" / "result.json"));
    CHECK(fs::exists(out / "time_decay_weighted_mean-0.8" / "result.json"));
    auto table = slurp(out / "compare.csv");
    CHECK(table.rfind("engine,mae,mean_satisfaction,mean_interaction_rate\nweighted_mean,", 0) == 0);
    CHECK(table.find("\ntime_decay_weighted_mean:0.8,") != std::string::npos);

    // The weighted-mean leg equals a plain run of the same scenario.
    auto plain = dir.path() / "plain";
    REQUIRE(invoke({"run", "--scenario", path, "--seed", "2", "--out", plain.string()}).code == cli::kOk);
    CHECK(slurp(plain / "result.json") == slurp(out / "weighted_mean" / "result.json"));
}

TEST_CASE("engine specs", "[cli][compare]") {
    EngineConfig base;
    CHECK(cli::engine_from_spec("weighted_mean", base).kind == EngineKind::WeightedMean);
    auto decayed = cli::engine_from_spec("time_decay_weighted_mean:0.7", base);
    CHECK(decayed.kind == EngineKind::TimeDecayWeightedMean);
    CHECK(decayed.decay == 0.7);
    CHECK(cli::engine_from_spec("time_decay_weighted_mean", base).decay == base.decay);
    CHECK_THROWS_AS(cli::engine_from_spec("time_decay_weighted_mean:0", base), UsageError);
    CHECK_THROWS_AS(cli::engine_from_spec("time_decay_weighted_mean:x", base), UsageError);
    CHECK_THROWS_AS(cli::engine_from_spec("weighted_mean:0.5", base), UsageError);
}

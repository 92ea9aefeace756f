#include <catch2/catch_amalgamated.hpp>

#include <regex>
#include <sstream>

#include <json.hpp>

#include "romeo/report.hpp"
#include "romeo/run.hpp"
#include "support.hpp"

using namespace romeo;

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.push_back(cells);
    }
    return rows;
}

std::optional<double> cell(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
}

std::optional<double> round6(std::optional<double> v) {
    if (!v) return v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return std::stod(buf);
}

int count(const std::string& text, const std::string& needle) {
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

std::vector<std::string> polylines(const std::string& svg) {
    std::vector<std::string> out;
    std::regex re("<polyline[^>]*points=\"([^\"]*)\"");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
        out.push_back((*it)[1]);
    }
    return out;
}

SimulationResult sample_result(std::uint64_t seed) {
    auto s = test::world_scenario(3, 10, 0.7, 60);
    s.p_active = 0.2;
    s.providers[2].behavior = provider::NegativeRater{};
    s.feedback_noise = 0.1;
    return run(s, seed);
}

} // namespace

TEST_CASE("CSV of an empty series is the header line", "[report][csv]") {
    CHECK(emit_csv(std::vector<ResultsPoint>{}) == "iteration,real_qos,mean_normal_reputation\n");
    CHECK(emit_csv(std::vector<AccuracyPoint>{}) == "iteration,active,interactions,fraction\n");
    CHECK(emit_csv(std::vector<SatisfactionPoint>{}) ==
          "iteration,mean_satisfaction,mean_satisfaction_normal_users\n");
}

TEST_CASE("CSV renders absent values as empty fields", "[report][csv]") {
    auto text = emit_csv(std::vector<ResultsPoint>{{0, 0.8, std::nullopt}});
    CHECK(text == "iteration,real_qos,mean_normal_reputation\n0,0.800000,\n");
    CHECK(emit_csv(std::vector<AccuracyPoint>{{3, 4, 1, 0.25}}) ==
          "iteration,active,interactions,fraction\n3,4,1,0.250000\n");
}

TEST_CASE("CSV round-trips at 6-digit precision", "[report][csv]") {
    auto r = sample_result(5);
    auto results = read_csv(emit_csv(r.results));
    REQUIRE(results.size() == r.results.size() + 1);
    for (std::size_t i = 0; i < r.results.size(); ++i) {
        const auto& row = results[i + 1];
        REQUIRE(row.size() == 3);
        CHECK(std::stoull(row[0]) == r.results[i].t);
        CHECK(cell(row[1]) == round6(r.results[i].real_qos));
        CHECK(cell(row[2]) == round6(r.results[i].mean_normal_reputation));
    }
    auto accuracy = read_csv(emit_csv(r.accuracy));
    REQUIRE(accuracy.size() == r.accuracy.size() + 1);
    for (std::size_t i = 0; i < r.accuracy.size(); ++i) {
        const auto& row = accuracy[i + 1];
        CHECK(std::stoull(row[1]) == r.accuracy[i].active);
        CHECK(std::stoull(row[2]) == r.accuracy[i].interactions);
        CHECK(cell(row[3]) == round6(r.accuracy[i].fraction));
    }
    auto satisfaction = read_csv(emit_csv(r.satisfaction));
    REQUIRE(satisfaction.size() == r.satisfaction.size() + 1);
    for (std::size_t i = 0; i < r.satisfaction.size(); ++i) {
        CHECK(cell(satisfaction[i + 1][1]) == round6(r.satisfaction[i].mean));
        CHECK(cell(satisfaction[i + 1][2]) == round6(r.satisfaction[i].mean_normal_users));
    }
}

TEST_CASE("JSON is canonical and complete", "[report][json]") {
    auto a = sample_result(5);
    auto text = emit_json(a);
    CHECK(text == emit_json(sample_result(5)));

    auto j = nlohmann::json::parse(text);
    CHECK(j["fingerprint"] == a.fingerprint);
    CHECK(j["seed"] == 5);
    CHECK(j["iterations"] == 60);
    CHECK(j["results"].size() == 60);
    CHECK(j["accuracy"].size() == 60);
    CHECK(j["satisfaction"].size() == 60);
    CHECK(j["summary"].contains("mae"));
    CHECK(j["results"][0].contains("mean_normal_reputation"));

    auto other = emit_json(sample_result(6));
    CHECK(nlohmann::json::parse(other)["fingerprint"] != j["fingerprint"]);
    CHECK(other != text);
}

TEST_CASE("JSON writes absent values as null", "[report][json]") {
    SimulationResult r;
    r.results = {{0, 0.8, std::nullopt}};
    r.accuracy = {{0, 0, 0, std::nullopt}};
    r.satisfaction = {{0, std::nullopt, std::nullopt}};
    auto j = nlohmann::json::parse(emit_json(r));
    CHECK(j["summary"]["mae"].is_null());
    CHECK(j["results"][0]["mean_normal_reputation"].is_null());
    CHECK(j["accuracy"][0]["fraction"].is_null());
    CHECK(j["satisfaction"][0]["mean_satisfaction"].is_null());
}

TEST_CASE("plot of a constant series is one horizontal line", "[report][svg]") {
    std::vector<AccuracyPoint> series;
    for (Iteration t = 0; t < 20; ++t) series.push_back({t, 2, 1, 0.5});
    auto svg = render_plot(series);
    auto lines = polylines(svg);
    REQUIRE(lines.size() == 1);
    std::regex point("[0-9.]+,([0-9.]+)");
    std::set<std::string> ys;
    for (auto it = std::sregex_iterator(lines[0].begin(), lines[0].end(), point);
         it != std::sregex_iterator(); ++it) {
        ys.insert((*it)[1]);
    }
    // Plot area spans y = 40..350; 0.5 sits at its middle.
    CHECK(ys == std::set<std::string>{"195.00"});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("plot gaps split polylines", "[report][svg]") {
    std::vector<AccuracyPoint> series{{0, 1, 1, 1.0}, {1, 1, 0, 0.0}, {2, 0, 0, std::nullopt},
                                      {3, 1, 1, 1.0}, {4, 1, 1, 1.0}};
    CHECK(polylines(render_plot(series)).size() == 2);
}

TEST_CASE("results plot has one polyline per column with CSV legend labels", "[report][svg]") {
    std::vector<ResultsPoint> series{{0, 0.9, 0.5}, {1, 0.9, 0.7}, {2, 0.3, 0.6}};
    auto svg = render_plot(series);
    CHECK(polylines(svg).size() == 2);
    CHECK(count(svg, "data-series=\"real_qos\"") == 1);
    CHECK(count(svg, "data-series=\"mean_normal_reputation\"") == 1);
    CHECK(count(svg, ">real_qos</text>") == 1);
    CHECK(count(svg, ">mean_normal_reputation</text>") == 1);

    std::vector<SatisfactionPoint> sat{{0, 0.9, 0.8}, {1, 0.7, std::nullopt}};
    auto sat_svg = render_plot(sat);
    CHECK(count(sat_svg, ">mean_satisfaction</text>") == 1);
    CHECK(count(sat_svg, ">mean_satisfaction_normal_users</text>") == 1);
}

TEST_CASE("plotting an empty series is a usage error", "[report][svg]") {
    CHECK_THROWS_AS(render_plot(std::vector<ResultsPoint>{}), UsageError);
}

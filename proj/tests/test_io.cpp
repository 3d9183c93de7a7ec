#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "fermigibbs/io.hpp"

using namespace fg;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& text) {
    try {
        io::parse_config(text, "cfg.json");
    } catch (const io::ConfigError& e) {
        return e.what();
    }
    return {};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fermigibbs_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("defaults") {
    const auto cfg = io::parse_config("{}");
    CHECK(cfg.model.type == "single_mode");
    CHECK(cfg.beta == 1.0);
    CHECK(cfg.seed == 7);
    CHECK(io::model_mode_count(cfg.model) == 1);
}

TEST_CASE("config errors name the field or the position") {
    CHECK(error_of(R"({"beta": -1})").find("beta") != std::string::npos);
    CHECK(error_of(R"({"beta": "x"})").find("beta") != std::string::npos);
    CHECK(error_of(R"({"model": {"type": "torus"}})").find("model.type") != std::string::npos);
    CHECK(error_of(R"({"bogus": 1})").find("bogus") != std::string::npos);
    CHECK(error_of(R"({"U_grid": []})").find("U_grid") != std::string::npos);
    CHECK(error_of(R"({"tolerances": {"kms": 0}})").find("tolerances.kms") != std::string::npos);
    const std::string parse = error_of("{\n  \"beta\": 1,\n  oops\n}");
    CHECK(parse.find("cfg.json:3:") != std::string::npos);
}

TEST_CASE("capacity is enforced before building") {
    CHECK_THROWS_AS(io::parse_config(R"({"model": {"type": "hubbard", "dims": [4]}})"), CapacityError);
    CHECK_THROWS_AS(io::parse_config(R"({"model": {"type": "chain", "n_modes": 3}, "max_modes": 2})"),
                    CapacityError);
}

TEST_CASE("custom and quadratic models") {
    const auto cfg = io::parse_config(R"({"model": {"type": "custom", "n_modes": 2, "U": 0.2, "terms": [
        {"word": [0, 1], "im": 0.5}, {"word": [0, 1, 2, 3], "re": 0.2}]}, "beta": 1})");
    const Model m = io::build_model(cfg.model);
    CHECK(m.n_modes() == 2);
    CHECK(m.v.terms.terms().size() == 1);
    const Model m2 = io::build_model_with_U(cfg.model, 0.4);
    CHECK(std::abs(m2.v.terms.terms().begin()->second - cd(0.4)) <= 1e-15);

    const auto q = io::parse_config(R"({"model": {"type": "quadratic", "h_imag": [[0, 0.5], [-0.5, 0]]}})");
    const Model mq = io::build_model(q.model);
    CHECK((mq.dense_H() - single_mode_model(0.5).dense_H()).norm() <= 1e-14);
}

TEST_CASE("config hash is stable and sensitive") {
    const auto a = io::parse_config(R"({"beta": 1.0})");
    const auto b = io::parse_config(R"({"beta":1})");
    const auto c = io::parse_config(R"({"beta": 2})");
    CHECK(io::config_hash(a) == io::config_hash(b));
    CHECK(io::config_hash(a) != io::config_hash(c));
    CHECK(io::config_hash(a).size() == 16);
}

TEST_CASE("validate on the default config passes and writes a report") {
    auto cfg = io::parse_config("{}");
    cfg.out_dir = scratch("validate").string();
    const auto rep = io::run("validate", cfg);
    for (const auto& c : rep.checks) CHECK_MESSAGE(c.passed, c.name << " = " << c.value);
    CHECK(rep.all_passed());
    CHECK(fs::exists(fs::path(cfg.out_dir) / "report.json"));
    const auto j = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "report.json"));
    CHECK(j.at("all_passed").get<bool>());
    CHECK(j.at("provenance").at("config_hash").get<std::string>() == io::config_hash(cfg));
    std::set<std::string> names;
    for (const auto& c : rep.checks) CHECK(names.insert(c.name).second);
}

TEST_CASE("reports are byte-identical across runs") {
    auto cfg = io::parse_config(R"({"model": {"type": "hubbard", "dims": [1], "U": 0.2, "mu": 0.1},
                                    "U_grid": [0, 0.1, 0.2]})");
    cfg.out_dir = scratch("det1").string();
    io::run("sweep", cfg);
    const std::string first = slurp(fs::path(cfg.out_dir) / "report.json");
    const std::string first_csv = slurp(fs::path(cfg.out_dir) / "sweep.csv");
    cfg.out_dir = scratch("det2").string();
    io::run("sweep", cfg);
    CHECK(first == slurp(fs::path(cfg.out_dir) / "report.json"));
    CHECK(first_csv == slurp(fs::path(cfg.out_dir) / "sweep.csv"));
}

TEST_CASE("one-point sweep has one row and no fit") {
    auto cfg = io::parse_config(R"({"model": {"type": "hubbard", "dims": [1]}, "U_grid": [0.1]})");
    cfg.out_dir = scratch("one").string();
    const auto rep = io::run("sweep", cfg);
    CHECK(rep.payload.at("points").size() == 1);
    CHECK(rep.payload.at("fit").is_null());
    const std::string csv = slurp(fs::path(cfg.out_dir) / "sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("every subcommand runs") {
    auto cfg = io::parse_config(R"({"model": {"type": "chain", "n_modes": 2, "mu": 0.3}, "U_grid": [0, 0.1]})");
    for (const auto& sub : io::subcommands()) {
        cfg.out_dir = scratch("sub_" + sub).string();
        const auto rep = io::run(sub, cfg);
        CHECK_MESSAGE(rep.all_passed(), sub);
    }
    CHECK_THROWS(io::run("nonsense", cfg));
}

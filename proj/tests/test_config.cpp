#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "obsim/config.hpp"

using namespace obsim;

namespace {

std::string minimal_sweep_config(const std::string& coupling_fields) {
    return R"({
      "physical": { "gamma31": 0.5, "gamma32": 0.5, "n_atoms": 1000, )" +
           coupling_fields + R"(, "omega_c": 0.3, "epsilon": 5.0, "delta_p": 0.1 },
      "experiment": {
        "type": "sweep",
        "sweep": { "parameter": "epsilon_sq", "start": 5.0, "stop": 205.0, "points": 201 }
      },
      "output": { "dir": "out", "stem": "fig2a" }
    })";
}

}  // namespace

TEST_CASE("cooperativity resolves to the coupling strength") {
    const ExperimentConfig config =
        parse_config(minimal_sweep_config("\"cooperativity\": 8.0"));
    CHECK(config.physical.g == doctest::Approx(0.126491106406735).epsilon(1e-12));
    REQUIRE(config.cooperativity_input.has_value());
    CHECK(*config.cooperativity_input == 8.0);
    CHECK(config.experiment == ExperimentType::sweep);
    const auto& sw = std::get<SweepExperiment>(config.payload);
    CHECK(sw.spec.points == 201);
    CHECK(sw.spec.mode == SweepMode::newton);  // default
}

TEST_CASE("exactly one of g and cooperativity") {
    CHECK_THROWS_AS(parse_config(minimal_sweep_config("\"g\": 0.1, \"cooperativity\": 8.0")),
                    ConfigError);
    try {
        parse_config(minimal_sweep_config("\"ignored\": 0"));
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("physical") != std::string::npos);
    }
}

TEST_CASE("dephasing defaults to zero when omitted") {
    const ExperimentConfig config = parse_config(minimal_sweep_config("\"g\": 0.1"));
    CHECK(config.physical.deph2 == 0.0);
    CHECK(config.physical.deph3 == 0.0);
    CHECK(config.physical.delta1 == 0.0);
    CHECK(config.physical.delta2 == 0.0);
}

TEST_CASE("strict mode rejects unknown keys with the key path") {
    std::string text = minimal_sweep_config("\"g\": 0.1");
    text.replace(text.find("\"omega_c\""), 9, "\"omega_x\"");
    try {
        parse_config(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("physical.omega_x") != std::string::npos);
    }
    CHECK_NOTHROW(parse_config(text, /*strict=*/false));
}

TEST_CASE("kappa is not configurable") {
    std::string text = minimal_sweep_config("\"g\": 0.1, \"kappa\": 2.0");
    CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("sweep points below two are rejected") {
    std::string text = minimal_sweep_config("\"g\": 0.1");
    text.replace(text.find("\"points\": 201"), 13, "\"points\": 1");
    try {
        parse_config(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("points") != std::string::npos);
    }
}

TEST_CASE("numerics overrides apply") {
    std::string text = minimal_sweep_config("\"g\": 0.1");
    text.insert(text.rfind('}') - 1, R"(, "numerics": { "rtol": 1e-8, "steady_t_max": 500.0 } )");
    const ExperimentConfig config = parse_config(text);
    CHECK(config.numerics.rtol == 1e-8);
    CHECK(config.numerics.steady_t_max == 500.0);
    CHECK(config.numerics.atol == Numerics{}.atol);
}

TEST_CASE("detect block parses schedules relative to the physical base") {
    const std::string text = R"({
      "physical": { "gamma31": 0.5, "gamma32": 0.5, "n_atoms": 1000,
                    "cooperativity": 2.7, "omega_c": 0.2, "epsilon": 5.0, "delta_p": 0.039 },
      "experiment": {
        "type": "detect",
        "sweep": { "parameter": "delta_p", "start": 0.0, "stop": 0.08, "points": 161 },
        "schedule": { "target": "delta_p", "amplitude_rel": 0.025, "center": 300.0, "fwhm": 0.2 },
        "branch": "upper"
      }
    })";
    const ExperimentConfig config = parse_config(text);
    const auto& de = std::get<DetectExperiment>(config.payload);
    CHECK(de.schedule.base == 0.039);
    CHECK(de.schedule.amplitude == doctest::Approx(0.025 * 0.039).epsilon(1e-15));
    CHECK(de.schedule.sigma_convention == SigmaConvention::primary);
    CHECK(de.branch == Branch::upper);

    std::string both = text;
    both.replace(both.find("\"amplitude_rel\": 0.025"), 22,
                 "\"amplitude_rel\": 0.025, \"amplitude\": 0.1");
    CHECK_THROWS_AS(parse_config(both), ConfigError);
}

TEST_CASE("resolved config round-trips exactly") {
    const char* texts[] = {
        R"({"physical": {"gamma31": 0.5, "gamma32": 0.5, "n_atoms": 1000, "cooperativity": 6.0,
                         "omega_c": 0.3, "epsilon": 5.0, "delta_p": 0.1},
            "experiment": {"type": "sweep",
                           "sweep": {"parameter": "epsilon_sq", "start": 5, "stop": 205, "points": 51}},
            "numerics": {"rtol": 2.5e-9}, "jobs": 2})",
        R"({"physical": {"gamma31": 0.5, "gamma32": 0.5, "n_atoms": 1000, "g": 0.1,
                         "omega_c": 0.3, "epsilon": 5.0},
            "experiment": {"type": "grid",
                           "sweep": {"parameter": "omega_c", "start": 0.02, "stop": 0.5, "points": 31},
                           "axis1": {"parameter": "epsilon", "start": 4, "stop": 8, "points": 3},
                           "axis2": {"parameter": "delta_p", "start": 0.05, "stop": 0.15, "points": 2}}})",
        R"({"physical": {"gamma31": 1.0, "gamma32": 0.0, "n_atoms": 1000, "cooperativity": 5.0,
                         "epsilon": 20.0},
            "experiment": {"type": "threshold",
                           "sweep": {"parameter": "epsilon_sq", "start": 200, "stop": 1300, "points": 111},
                           "c_values": [2.0, 4.5, 6.0]}})",
        R"({"physical": {"gamma31": 0.5, "gamma32": 0.5, "n_atoms": 1000, "g": 0.07,
                         "omega_c": 0.2, "epsilon": 5.0, "delta_p": 0.039},
            "experiment": {"type": "evolve",
                           "evolve": {"t_end": 50.0, "sample_dt": 0.5, "initial": "steady",
                                      "schedules": [{"target": "delta_p", "amplitude": 0.001,
                                                     "center": 25.0, "fwhm": 2.0,
                                                     "sigma_convention": "standard"}]}}})",
        R"({"physical": {"gamma31": 0.5, "gamma32": 0.5, "n_atoms": 0, "g": 0.0, "epsilon": 2.0},
            "experiment": {"type": "steady"}})",
    };
    for (const char* text : texts) {
        const ExperimentConfig config = parse_config(text);
        const std::string resolved = resolved_config_json(config);
        const ExperimentConfig reparsed = parse_config(resolved);
        CHECK(resolved_config_json(reparsed) == resolved);
    }
}

TEST_CASE("invalid enum values carry their key path") {
    std::string text = minimal_sweep_config("\"g\": 0.1");
    text.replace(text.find("\"epsilon_sq\""), 12, "\"epsilon\"");
    try {
        parse_config(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("parameter") != std::string::npos);
    }
}

TEST_CASE("malformed JSON is a config error") {
    CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
    CHECK_THROWS_AS(parse_config("[]"), ConfigError);
}

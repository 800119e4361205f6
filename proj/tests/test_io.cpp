#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/io.hpp"
#include "core/scenario.hpp"

using namespace fdi;

namespace {

// temp path helper; tests clean up after themselves
std::string tmp_path(const std::string& name) {
    return std::string("/tmp/lpvfdi_test_") + name;
}

struct FileGuard {
    std::string path;
    explicit FileGuard(std::string p) : path(std::move(p)) {}
    ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config parsing") {
    const std::string text =
        "# leading comment\n"
        "[model]\n"
        "m = 1500\n"
        "label = two words   # trailing comment\n"
        "\n"
        "[filter]\n"
        "poles = -0.95, -0.95, -0.95\n"
        "cache = on\n";
    Config cfg = Config::parse(text, "unit");

    CHECK(cfg.has("model", "m"));
    CHECK_FALSE(cfg.has("model", "poles"));
    CHECK(cfg.get_double("model", "m") == 1500.0);
    CHECK(cfg.get_string("model", "label") == "two words");
    CHECK(cfg.get_bool("filter", "cache", false));
    CHECK(cfg.get_int("model", "m") == 1500);
    CHECK(cfg.get_double("model", "absent", 2.5) == 2.5);
    CHECK(cfg.line_of("filter", "poles") == 7);

    std::vector<double> poles = cfg.get_double_list("filter", "poles");
    REQUIRE(poles.size() == 3);
    CHECK(poles[0] == -0.95);

    SUBCASE("origin lands in error messages") {
        try {
            cfg.get_double("model", "label");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("unit:4") != std::string::npos);
        }
    }

    SUBCASE("missing required key") {
        CHECK_THROWS_AS(cfg.get_string("model", "nope"), ConfigError);
    }

    SUBCASE("boolean words") {
        Config b = Config::parse(
            "[s]\na = on\nb = off\nc = true\nd = false\ne = 1\nf = 0\ng = yes\nh = no\n");
        CHECK(b.get_bool("s", "a", false));
        CHECK_FALSE(b.get_bool("s", "b", true));
        CHECK(b.get_bool("s", "c", false));
        CHECK_FALSE(b.get_bool("s", "d", true));
        CHECK(b.get_bool("s", "e", false));
        CHECK_FALSE(b.get_bool("s", "f", true));
        CHECK(b.get_bool("s", "g", false));
        CHECK_FALSE(b.get_bool("s", "h", true));
        Config bad = Config::parse("[s]\na = maybe\n");
        CHECK_THROWS_AS(bad.get_bool("s", "a", true), ConfigError);
    }
}

TEST_CASE("config rejections carry line numbers") {
    auto message_of = [](const std::string& text) {
        try {
            Config::parse(text, "bad");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };

    CHECK(message_of("[model]\nm = 1\nm = 2\n").find("bad:3") != std::string::npos);
    CHECK(message_of("key = 1\n").find("outside any [section]") != std::string::npos);
    CHECK(message_of("[model\n").find("unterminated") != std::string::npos);
    CHECK(message_of("[model]\njust some words\n").find("expected key = value") !=
          std::string::npos);
    CHECK(message_of("[]\n").find("empty section") != std::string::npos);
    CHECK(message_of("[s]\n = 3\n").find("empty key") != std::string::npos);
}

TEST_CASE("config round-trips through serialize") {
    const std::string text = "[b]\nz = 1\na = 2\n[a]\nk = hello there\n";
    Config cfg = Config::parse(text);
    std::string out = cfg.serialize();

    // insertion order survives, values identical
    Config again = Config::parse(out);
    CHECK(again.get_int("b", "z") == 1);
    CHECK(again.get_int("b", "a") == 2);
    CHECK(again.get_string("a", "k") == "hello there");
    CHECK(out.find("[b]") < out.find("[a]"));
    CHECK(again.serialize() == out);

    SUBCASE("set adds and overwrites") {
        cfg.set("a", "k", "replaced");
        cfg.set("c", "fresh", "3");
        CHECK(cfg.get_string("a", "k") == "replaced");
        CHECK(cfg.get_int("c", "fresh") == 3);
    }
}

TEST_CASE("unknown key listing") {
    Config cfg = Config::parse("[model]\nm = 1\nbogus = 2\n[manifest]\nanything = 3\n");
    std::vector<std::string> unknown = cfg.unknown_keys({"model.m"}, {"manifest"});
    REQUIRE(unknown.size() == 1);
    CHECK(unknown[0].find("model.bogus") != std::string::npos);
    CHECK(unknown[0].find("line 3") != std::string::npos);
}

TEST_CASE("double formatting") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-0.5) == "-0.5");
    // both 17-digit spellings parse to the same double; %.17g picks this one
    CHECK(format_double(1.7453292519943295e-3) == "0.0017453292519943296");

    SUBCASE("17 digits round-trip exactly") {
        for (double v : {std::numbers::pi, 1.0 / 3.0, 6.02e23, -1.6e-19, 0.0, 19.0,
                         5e-324, 1.7976931348623157e308}) {
            double back = std::strtod(format_double(v).c_str(), nullptr);
            CHECK(back == v);
        }
    }
}

TEST_CASE("csv serialization") {
    CsvTable t;
    t.header = {"k", "x"};
    t.rows = {{0.0, 0.1}, {1.0, -2.5}};

    SUBCASE("layout") {
        std::string s = csv_serialize(t);
        CHECK(s == "k,x\n0,0.10000000000000001\n1,-2.5\n");
        CHECK(s.find('\r') == std::string::npos);
    }

    SUBCASE("width mismatch is rejected") {
        t.rows.push_back({1.0});
        CHECK_THROWS_AS(csv_serialize(t), IoError);
    }

    SUBCASE("write and read back bitwise") {
        FileGuard g(tmp_path("roundtrip.csv"));
        csv_write(g.path, t);
        CsvTable back = csv_read(g.path);
        REQUIRE(back.header == t.header);
        REQUIRE(back.rows.size() == t.rows.size());
        for (size_t i = 0; i < t.rows.size(); ++i)
            for (size_t j = 0; j < t.rows[i].size(); ++j)
                CHECK(back.rows[i][j] == t.rows[i][j]);
    }

    SUBCASE("carriage returns are tolerated on read") {
        FileGuard g(tmp_path("crlf.csv"));
        write_file(g.path, "k,x\r\n0,1\r\n");
        CsvTable back = csv_read(g.path);
        REQUIRE(back.rows.size() == 1);
        CHECK(back.rows[0][1] == 1.0);
    }

    SUBCASE("non-numeric cell is rejected") {
        FileGuard g(tmp_path("badcell.csv"));
        write_file(g.path, "k,x\n0,fish\n");
        CHECK_THROWS_AS(csv_read(g.path), IoError);
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS(csv_read(tmp_path("nonexistent.csv")), IoError);
    }
}

TEST_CASE("dropping the last column") {
    CHECK(csv_drop_last_column("a,b,c\n1,2,3\n") == "a,b\n1,2\n");
    CHECK(csv_drop_last_column("only\nx\n") == "only\nx\n");  // nothing to drop
    CHECK(csv_drop_last_column("") == "");
}

TEST_CASE("fnv-1a fingerprint") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    // embedded zero bytes count
    std::string z("\0\0", 2);
    CHECK(fnv1a64(z) != fnv1a64(std::string("\0", 1)));
}

TEST_CASE("raw file round-trip keeps binary bytes") {
    FileGuard g(tmp_path("blob.bin"));
    std::string payload("ab\0cd\n\r\x7f", 8);
    write_file(g.path, payload);
    CHECK(read_file(g.path) == payload);
    CHECK_THROWS_AS(read_file(tmp_path("missing.bin")), IoError);
}

TEST_CASE("scenario configuration mapping") {
    SUBCASE("empty config gives the documented defaults") {
        ScenarioConfig sc = scenario_from_config(Config::parse(""));
        CHECK(sc.n_samples == 500);
        CHECK(sc.v0 == 19.0);
        CHECK(sc.v_amp == 5.0);
        CHECK(sc.v_omega == doctest::Approx(0.1 * std::numbers::pi).epsilon(1e-15));
        CHECK(sc.fault_magnitude ==
              doctest::Approx(0.1 * std::numbers::pi / 180.0).epsilon(1e-15));
        CHECK(sc.fault_start == 150);
        CHECK(sc.poles == std::vector<double>{-0.95, -0.95, -0.95});
        CHECK(sc.gamma == 1e13);
        CHECK_FALSE(sc.rank_tol_factor.has_value());
        CHECK(sc.resolved_d_n() == 3);
        CHECK(sc.cache);
        CHECK(sc.noise_enabled);
        CHECK(sc.seed == 1);
        CHECK(sc.sigma_yawrate == 8e-4);
        CHECK(sc.sigma_lat == 5e-2);
        CHECK(sc.sigma_head == 3e-3);
    }

    SUBCASE("full round-trip is bitwise") {
        ScenarioConfig sc;
        sc.gamma = 3.7e9;
        sc.poles = {-0.9, 0.2, -0.4};
        sc.seed = 77;
        sc.rank_tol_factor = 1.5e-10;
        sc.fault_magnitude = std::numbers::pi * 1e-4;

        Config cfg = scenario_to_config(sc);
        ScenarioConfig back = scenario_from_config(Config::parse(cfg.serialize()));
        CHECK(back.gamma == sc.gamma);
        CHECK(back.poles == sc.poles);
        CHECK(back.seed == sc.seed);
        REQUIRE(back.rank_tol_factor.has_value());
        CHECK(*back.rank_tol_factor == *sc.rank_tol_factor);
        CHECK(back.fault_magnitude == sc.fault_magnitude);
        CHECK(back.v_omega == sc.v_omega);
        CHECK(back.params.C_f == sc.params.C_f);
    }

    SUBCASE("unknown keys are fatal, manifest section is not") {
        Config cfg = Config::parse("[filter]\ngamma = 1e8\nbogus = 1\n");
        try {
            scenario_from_config(cfg);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("filter.bogus") != std::string::npos);
        }

        Config ok = Config::parse("[manifest]\ncommand = simulate\nseed = 1\n");
        CHECK_NOTHROW(scenario_from_config(ok));
    }

    SUBCASE("value validation") {
        CHECK_THROWS_AS(scenario_from_config(Config::parse("[filter]\ngamma = 0\n")),
                        ConfigError);
        CHECK_THROWS_AS(
            scenario_from_config(Config::parse("[model]\nv_min = 30\nv_max = 20\n")),
            ConfigError);
        CHECK_THROWS_AS(
            scenario_from_config(Config::parse("[model]\nmatrix_signs = upside_down\n")),
            ConfigError);
        CHECK_THROWS_AS(
            scenario_from_config(Config::parse("[model]\nfault_channel = output\n")),
            ConfigError);
        CHECK_THROWS_AS(
            scenario_from_config(Config::parse("[filter]\nrank_tol_factor = -1\n")),
            ConfigError);
        CHECK_THROWS_AS(scenario_from_config(Config::parse("[noise]\nseed = -4\n")),
                        ConfigError);

        Config auto_tol = Config::parse("[filter]\nrank_tol_factor = auto\n");
        CHECK_FALSE(scenario_from_config(auto_tol).rank_tol_factor.has_value());
    }
}

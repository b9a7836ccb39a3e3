#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "biewos/runner.hpp"
#include "oracles.hpp"

using namespace biewos;

namespace {

const char* kTable1Mini = R"(
# minimal Table-1 style run
[scene]
kind = half_space
charge_height = 1.0
charge_scale = 1.0
[method]
name = biewos_point
x = 0.5 0
a = 0.2 0.5
n_g1 = 8
n_g2 = 20
n_path = 200
reference = analytic
[wos]
seed = 7
eps_shell = 1e-5
trunc_radius = 1e5
)";

} // namespace

TEST_CASE("config parsing: sections, lists, comments, diagnostics") {
    const RawConfig cfg = parse_config_text(kTable1Mini, "mini");
    CHECK(cfg.get_str("scene", "kind") == "half_space");
    CHECK(cfg.get_list("method", "a") == std::vector<Real>{0.2, 0.5});
    CHECK(cfg.get_int("wos", "seed", 0) == 7);
    CHECK(cfg.get_real("wos", "trunc_radius", 0) == doctest::Approx(1e5));
    CHECK_THROWS_AS(cfg.get_str("method", "nope"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("key = 1\n", "bad"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[s]\nkey 1\n", "bad"), ConfigError);

    RawConfig o = cfg;
    apply_override(o, "method.a=0.3");
    CHECK(o.get_list("method", "a") == std::vector<Real>{0.3});
    CHECK_THROWS_AS(apply_override(o, "garbage"), ConfigError);
}

TEST_CASE("run biewos_point: sweep rows, bookkeeping, determinism") {
    const RawConfig cfg = parse_config_text(kTable1Mini, "mini");
    const RunRecord r1 = run(cfg);
    REQUIRE(r1.rows.size() == 2);
    CHECK(r1.columns.size() == 13);
    // paths = n_g1^2 * n_path exactly
    CHECK(r1.rows[0][12] == 8.0 * 8.0 * 200.0);
    CHECK(r1.paths_total == 2 * 8.0 * 8.0 * 200.0);
    // totals land near the analytic value at this budget
    for (const auto& row : r1.rows) CHECK(std::abs(row[8] / 0.71554 - 1.0) < 0.05);

    const RunRecord r2 = run(cfg);
    CHECK(r1.csv_text == r2.csv_text); // byte-identical body

    RunOverrides ov;
    ov.workers = 4;
    const RunRecord r4 = run(cfg, ov);
    CHECK(r1.csv_text == r4.csv_text); // workers never change results

    ov.workers = 1;
    ov.seed = 8;
    const RunRecord rs = run(cfg, ov);
    CHECK(r1.csv_text != rs.csv_text);
}

TEST_CASE("empty sweep list produces a header-only CSV") {
    RawConfig cfg = parse_config_text(kTable1Mini, "mini");
    apply_override(cfg, "method.a=");
    const RunRecord r = run(cfg);
    CHECK(r.rows.empty());
    std::istringstream is(r.csv_text);
    std::string line;
    int data_lines = 0, header_lines = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header_lines == 0)
            ++header_lines;
        else
            ++data_lines;
    }
    CHECK(header_lines == 1);
    CHECK(data_lines == 0);
}

TEST_CASE("compare: identical, tolerant, failing, schema mismatch") {
    const RawConfig cfg = parse_config_text(kTable1Mini, "mini");
    const RunRecord rec = run(cfg);
    const std::string a = "/tmp/biewos_test_a.csv";
    const std::string b = "/tmp/biewos_test_b.csv";
    {
        std::ofstream(a) << rec.csv_text;
        std::ofstream(b) << rec.csv_text;
    }
    std::ostringstream rep;
    CHECK(compare_csv(a, b, 0.0, rep) == 0);

    // perturb one value beyond tolerance
    std::string body = rec.csv_text;
    const size_t pos = body.rfind("\n0.5,");
    REQUIRE(pos != std::string::npos);
    body.replace(pos + 1, 3, "9.9");
    std::ofstream(b, std::ios::trunc) << body;
    CHECK(compare_csv(a, b, 1e-6, rep) == 1);

    std::ofstream(b, std::ios::trunc) << "# x\ncol_a,col_b\n1,2\n";
    CHECK_THROWS_AS(compare_csv(a, b, 0.0, rep), ConfigError);
}

TEST_CASE("run last_passage and reference_bem methods end to end") {
    const char* lp_cfg = R"(
[scene]
kind = four_plates
potentials = 0 1 0 0
[method]
name = last_passage
x = -0.2273 0.2273
a = 0.2
n_path = 20000
reference = 2.607
[wos]
seed = 3
)";
    const RunRecord lp = run(parse_config_text(lp_cfg, "lp"));
    REQUIRE(lp.rows.size() == 1);
    CHECK(std::abs(lp.rows[0][3] / 2.607 - 1.0) < 0.06);

    const char* bem_cfg = R"(
[scene]
kind = thin_disk
b = 1.0
potential = 1.0
[method]
name = reference_bem
n = 8
query = -0.5 0 0
reference = analytic
[wos]
seed = 0
)";
    const RunRecord bem = run(parse_config_text(bem_cfg, "bem"));
    REQUIRE(bem.rows.size() == 1);
    CHECK(std::abs(bem.rows[0][4] / 0.735105 - 1.0) < 0.03);
    CHECK(std::abs(bem.rows[0][5] / 8.0 - 1.0) < 0.03);
}

TEST_CASE("run field_eval method") {
    const char* fe_cfg = R"(
[scene]
kind = sphere
R = 3.0
side = exterior
charge = 1.0
[method]
name = field_eval
n_panels = 2000
targets = 4 0 0 ; 0 0 -5
[wos]
seed = 0
)";
    const RunRecord fe = run(parse_config_text(fe_cfg, "fe"));
    REQUIRE(fe.rows.size() == 2);
    CHECK(std::abs(fe.rows[0][4] - 1.0 / (16 * kPi)) < 0.01 / (16 * kPi));
    CHECK(std::abs(fe.rows[1][4] - 1.0 / (20 * kPi)) < 0.01 / (20 * kPi));
}

TEST_CASE("unknown method and scene produce config diagnostics") {
    RawConfig cfg = parse_config_text(kTable1Mini, "mini");
    apply_override(cfg, "method.name=warp_drive");
    CHECK_THROWS_AS(run(cfg), ConfigError);
    RawConfig cfg2 = parse_config_text(kTable1Mini, "mini");
    apply_override(cfg2, "scene.kind=klein_bottle");
    CHECK_THROWS_AS(run(cfg2), ConfigError);
}

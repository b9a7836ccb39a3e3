#include "biewos/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "biewos/field_eval.hpp"
#include "biewos/last_passage.hpp"
#include "biewos/patch_solver.hpp"
#include "biewos/point_solver.hpp"
#include "biewos/reference_bem.hpp"

namespace biewos {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

Real seconds_since(Clock::time_point t0) {
    return std::chrono::duration<Real>(Clock::now() - t0).count();
}

std::string fmt_real(Real v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

Vec3 vec_from(const std::vector<Real>& v, const char* what) {
    if (v.size() == 2) return {v[0], v[1], 0.0};
    if (v.size() == 3) return {v[0], v[1], v[2]};
    throw ConfigError(std::string(what) + ": expected 2 or 3 coordinates");
}

WosConfig wos_from_config(const RawConfig& cfg, const RunOverrides& ov) {
    WosConfig w;
    w.eps_shell = cfg.get_real("wos", "eps_shell", 1e-5);
    w.trunc_radius = cfg.get_real("wos", "trunc_radius", 1e5);
    w.max_steps = static_cast<int>(cfg.get_int("wos", "max_steps", 10000));
    w.seed = static_cast<std::uint64_t>(cfg.get_int("wos", "seed", 0));
    w.workers = static_cast<int>(cfg.get_int("wos", "workers", 1));
    if (ov.seed) w.seed = *ov.seed;
    if (ov.workers) w.workers = *ov.workers;
    return w;
}

// analytic one-sided charge density for scenes where it is known
std::optional<Real> analytic_point_reference(const RawConfig& cfg, const Scene& scene,
                                             const Vec3& x) {
    if (scene.kind == SceneKind::HalfSpace) {
        const Real h = cfg.get_real("scene", "charge_height", 1.0);
        const Real scale = cfg.get_real("scene", "charge_scale", 1.0);
        const Real rho2 = x.x() * x.x() + x.y() * x.y();
        return scale * h / std::pow(rho2 + h * h, 1.5);
    }
    if (scene.kind == SceneKind::ThinDisk) {
        const Real b = scene.disk_radius;
        const Real v = scene.feature_potential[0];
        const Real rho = std::hypot(x.x(), x.y());
        if (rho >= b) return std::nullopt;
        return 8.0 * b * v / (4.0 * kPi * b * std::sqrt(b * b - rho * rho));
    }
    return std::nullopt;
}

std::optional<Real> reference_from_config(const RawConfig& cfg, const Scene& scene,
                                          const Vec3& x) {
    const std::string mode = cfg.get_str("method", "reference", "none");
    if (mode == "none") return std::nullopt;
    if (mode == "analytic") {
        auto r = analytic_point_reference(cfg, scene, x);
        if (!r) cfg.fail("method", "reference", "no analytic reference for this scene");
        return r;
    }
    char* end = nullptr;
    const Real v = std::strtod(mode.c_str(), &end);
    if (end == mode.c_str() || *end != '\0')
        cfg.fail("method", "reference", "expected 'analytic', 'none' or a number");
    return v;
}

Real err_pct(Real value, std::optional<Real> ref) {
    if (!ref || *ref == 0) return std::numeric_limits<Real>::quiet_NaN();
    return (value / *ref - 1.0) * 100.0;
}

Real ref_or_nan(std::optional<Real> ref) {
    return ref ? *ref : std::numeric_limits<Real>::quiet_NaN();
}

std::vector<std::vector<Real>> cartesian(const std::vector<std::vector<Real>>& lists) {
    std::vector<std::vector<Real>> rows{{}};
    for (const auto& lst : lists) {
        std::vector<std::vector<Real>> next;
        for (const auto& base : rows)
            for (Real v : lst) {
                auto r = base;
                r.push_back(v);
                next.push_back(std::move(r));
            }
        rows = std::move(next);
        if (rows.empty()) break;
    }
    if (!lists.empty() && lists.front().empty()) return {};
    for (const auto& lst : lists)
        if (lst.empty()) return {};
    return rows;
}

void run_biewos_point(const RawConfig& cfg, const RunOverrides& ov, const Scene& scene,
                      RunRecord& rec, std::vector<Real>& row_seconds) {
    const Vec3 x = vec_from(cfg.get_list("method", "x"), "method.x");
    const Vec3 axis = vec_from(cfg.get_list("method", "axis", {0, 0, 1}), "method.axis");
    const auto sweeps = cartesian({cfg.get_list("method", "a"),
                                   cfg.get_list("method", "delta_frac", {1e-4}),
                                   cfg.get_list("method", "n_g1", {20}),
                                   cfg.get_list("method", "n_g2", {20}),
                                   cfg.get_list("method", "n_path", {1000})});
    const WosConfig base = wos_from_config(cfg, ov);
    const auto ref = reference_from_config(cfg, scene, x);

    rec.schema = "biewos_point/v1";
    rec.columns = {"a",  "delta_frac", "n_g1", "n_g2",    "n_path", "seed", "sigma1",
                   "sigma2", "total",  "se",   "ref", "err_pct", "paths"};
    std::uint64_t row_idx = 0;
    for (const auto& sw : sweeps) {
        const auto t0 = Clock::now();
        const Real a = sw[0], delta_frac = sw[1];
        const int n_g1 = static_cast<int>(sw[2]), n_g2 = static_cast<int>(sw[3]);
        WosConfig w = base;
        w.n_paths = static_cast<std::int64_t>(sw[4]);
        w.seed = base.seed + row_idx;
        const HemisphereFrame frame(x, a, axis.normalized());
        const PointNeumannResult r = solve_point(scene, frame, n_g1, n_g2, delta_frac * a, w);
        const Real paths = static_cast<Real>(n_g1) * n_g1 * static_cast<Real>(w.n_paths);
        rec.rows.push_back({a, delta_frac, static_cast<Real>(n_g1), static_cast<Real>(n_g2),
                            static_cast<Real>(w.n_paths), static_cast<Real>(w.seed), r.sigma1,
                            r.sigma2, r.total, r.std_error, ref_or_nan(ref),
                            err_pct(r.total, ref), paths});
        rec.paths_total += paths;
        row_seconds.push_back(seconds_since(t0));
        ++row_idx;
    }
}

void run_last_passage(const RawConfig& cfg, const RunOverrides& ov, const Scene& scene,
                      RunRecord& rec, std::vector<Real>& row_seconds) {
    const Vec3 x = vec_from(cfg.get_list("method", "x"), "method.x");
    const Vec3 axis = vec_from(cfg.get_list("method", "axis", {0, 0, 1}), "method.axis");
    const bool allow_general = cfg.get_bool("method", "allow_general_data", false);
    const auto sweeps =
        cartesian({cfg.get_list("method", "a"), cfg.get_list("method", "n_path", {400000})});
    const WosConfig base = wos_from_config(cfg, ov);
    const auto ref = reference_from_config(cfg, scene, x);

    rec.schema = "last_passage/v1";
    rec.columns = {"a", "n_path", "seed", "sigma_lp", "se", "n_inf", "ref", "err_pct", "paths"};
    std::uint64_t row_idx = 0;
    for (const auto& sw : sweeps) {
        const auto t0 = Clock::now();
        const Real a = sw[0];
        const std::int64_t n_path = static_cast<std::int64_t>(sw[1]);
        WosConfig w = base;
        w.seed = base.seed + row_idx;
        const HemisphereFrame frame(x, a, axis.normalized());
        const LastPassageResult r = estimate_lp(scene, frame, n_path, w, allow_general);
        rec.rows.push_back({a, static_cast<Real>(n_path), static_cast<Real>(w.seed), r.sigma_lp,
                            r.std_error, static_cast<Real>(r.n_infinity), ref_or_nan(ref),
                            err_pct(r.sigma_lp, ref), static_cast<Real>(n_path)});
        rec.paths_total += static_cast<Real>(n_path);
        row_seconds.push_back(seconds_since(t0));
        ++row_idx;
    }
}

void run_biewos_patch(const RawConfig& cfg, const RunOverrides& ov, const Scene& scene,
                      RunRecord& rec, std::vector<Real>& row_seconds) {
    if (scene.kind != SceneKind::Sphere)
        throw ConfigError("biewos_patch expects a sphere scene");
    const Real R = scene.sphere_radius;
    const Vec3 center = vec_from(cfg.get_list("method", "center", {0, 0, R}), "method.center");
    const Real a = cfg.get_real("method", "a", 1.0);
    const int bands = static_cast<int>(cfg.get_int("method", "bands", 16));
    const int azimuth = static_cast<int>(cfg.get_int("method", "azimuth", 36));
    const int n_theta = static_cast<int>(cfg.get_int("method", "grid_ntheta", 64));
    const int n_phi = static_cast<int>(cfg.get_int("method", "grid_nphi", 128));
    const std::string kind_s = cfg.get_str("method", "kind", "second");
    const BieKind kind = kind_s == "first" ? BieKind::FirstKind : BieKind::SecondKind;
    WosConfig w = wos_from_config(cfg, ov);
    w.n_paths = cfg.get_int("method", "n_path", 10000);

    std::optional<Real> ref;
    const std::string mode = cfg.get_str("method", "reference", "none");
    if (mode == "analytic") {
        if (!scene.piecewise_const)
            cfg.fail("method", "reference", "analytic patch reference needs constant data");
        ref = -scene.feature_potential[0] / R;
    } else if (mode != "none") {
        ref = cfg.get_real("method", "reference");
    }

    const auto t0 = Clock::now();
    const PatchSetup setup = make_sphere_patch_setup(scene, center, a, bands, azimuth, n_theta, n_phi);
    if (!ov.mesh_dump_path.empty()) {
        std::ofstream os(ov.mesh_dump_path);
        dump_mesh(setup.mesh, os);
    }
    const NeumannField f = solve_patch(scene, setup, kind, w);

    rec.schema = "biewos_patch/v1";
    rec.columns = {"panel", "r", "dudn", "est_err", "ref", "err_pct"};
    for (int i = 0; i < f.dudn.size(); ++i) {
        rec.rows.push_back({static_cast<Real>(i), f.r[i], f.dudn[i], f.est_error[i],
                            ref_or_nan(ref), err_pct(f.dudn[i], ref)});
    }
    rec.paths_total = static_cast<Real>(n_theta) * n_phi * static_cast<Real>(w.n_paths);
    row_seconds.push_back(seconds_since(t0));
}

void run_reference_bem(const RawConfig& cfg, const Scene& scene, RunRecord& rec,
                       std::vector<Real>& row_seconds) {
    const Vec3 q = vec_from(cfg.get_list("method", "query"), "method.query");
    const auto ns = cfg.get_list("method", "n", {17});
    const auto ref = reference_from_config(cfg, scene, q);

    rec.schema = "reference_bem/v1";
    rec.columns = {"n", "qx", "qy", "qz", "sigma_side", "total_charge", "ref", "err_pct"};
    for (Real nf : ns) {
        const auto t0 = Clock::now();
        const BemSolution sol = solve_charge_density(scene, static_cast<int>(nf));
        const Real s = sol.sigma_side_at(q);
        rec.rows.push_back({nf, q.x(), q.y(), q.z(), s, sol.total_charge(), ref_or_nan(ref),
                            err_pct(s, ref)});
        row_seconds.push_back(seconds_since(t0));
    }
}

void run_field_eval(const RawConfig& cfg, const Scene& scene, RunRecord& rec,
                    std::vector<Real>& row_seconds) {
    if (scene.kind != SceneKind::Sphere || !scene.piecewise_const)
        throw ConfigError("field_eval demo expects a constant-potential sphere scene");
    const Real R = scene.sphere_radius;
    const Real V = scene.feature_potential[0];
    const auto& target_tokens = cfg.tokens("method", "targets");
    std::vector<Vec3> targets;
    {
        std::vector<Real> cur;
        auto flush = [&] {
            if (cur.empty()) return;
            targets.push_back(vec_from(cur, "method.targets"));
            cur.clear();
        };
        for (const std::string& t : target_tokens) {
            if (t == ";") {
                flush();
                continue;
            }
            cur.push_back(std::strtod(t.c_str(), nullptr));
            if (cur.size() == 3) flush();
        }
        flush();
    }
    const auto ns = cfg.get_list("method", "n_panels", {2000});

    rec.schema = "field_eval/v1";
    rec.columns = {"n_panels", "tx", "ty", "tz", "u", "ref", "err_pct"};
    for (Real nf : ns) {
        const auto t0 = Clock::now();
        // lat-long panelization with exact cell areas and exact data
        const int nlat = std::max(4, static_cast<int>(std::sqrt(nf / 2.0)));
        const int nlon = 2 * nlat;
        BoundaryData data;
        for (int i = 0; i < nlat; ++i) {
            const Real th0 = kPi * i / nlat, th1 = kPi * (i + 1) / nlat;
            const Real thc = 0.5 * (th0 + th1);
            const Real band = (std::cos(th0) - std::cos(th1)) * 2.0 * kPi / nlon * R * R;
            for (int j = 0; j < nlon; ++j) {
                const Real ph = 2.0 * kPi * (j + 0.5) / nlon;
                const UnitVec3 n(std::sin(thc) * std::cos(ph), std::sin(thc) * std::sin(ph),
                                 std::cos(thc));
                data.panels.push_back({R * n, n, band, V, -V / R});
            }
        }
        for (const Vec3& t : targets) {
            const Real u = evaluate(data, t);
            std::optional<Real> ref;
            if (scene.side == DomainSide::Exterior)
                ref = t.norm() > R ? V * R / t.norm() : Real(0);
            rec.rows.push_back({static_cast<Real>(data.panels.size()), t.x(), t.y(), t.z(), u,
                                ref_or_nan(ref), err_pct(u, ref)});
        }
        row_seconds.push_back(seconds_since(t0));
    }
}

} // namespace

Scene scene_from_config(const RawConfig& cfg) {
    const std::string kind = cfg.get_str("scene", "kind");
    if (kind == "half_space") {
        const Real h = cfg.get_real("scene", "charge_height", 1.0);
        const Real scale = cfg.get_real("scene", "charge_scale", 1.0);
        const Real plane = cfg.get_real("scene", "plane_z", 0.0);
        const Vec3 src(0, 0, plane - h);
        return Scene::half_space(plane,
                                 [scale, src](const Vec3& y) { return scale / (y - src).norm(); });
    }
    if (kind == "four_plates") {
        const auto v = cfg.get_list("scene", "potentials", {1, 0, 0, 0});
        if (v.size() != 4) cfg.fail("scene", "potentials", "expected four values");
        return Scene::four_plates({v[0], v[1], v[2], v[3]});
    }
    if (kind == "four_plates_sine") {
        const Real m = cfg.get_real("scene", "m", 1.0);
        const Real n = cfg.get_real("scene", "n", 1.0);
        std::vector<Plate> plates = {{0, 1, 0, 1, 0}, {-1, 0, 0, 1, 0}, {-1, 0, -1, 0, 0},
                                     {0, 1, -1, 0, 0}};
        return Scene::plate_set(plates, [m, n](const Vec3& y) {
            return std::sin(m * y.x()) * std::sin(n * y.y());
        });
    }
    if (kind == "thin_disk") {
        return Scene::thin_disk(cfg.get_real("scene", "b", 1.0),
                                cfg.get_real("scene", "potential", 1.0));
    }
    if (kind == "sphere") {
        const Real R = cfg.get_real("scene", "R", 1.0);
        const std::string side_s = cfg.get_str("scene", "side", "exterior");
        const DomainSide side =
            side_s == "interior" ? DomainSide::Interior : DomainSide::Exterior;
        if (cfg.has("scene", "charge")) {
            const Real q = cfg.get_real("scene", "charge");
            return Scene::sphere(R, side, q / (4.0 * kPi * R));
        }
        return Scene::sphere(R, side, cfg.get_real("scene", "potential", 1.0));
    }
    cfg.fail("scene", "kind", "unknown scene kind '" + kind + "'");
}

RunRecord run(const RawConfig& cfg, const RunOverrides& ov) {
    const auto t_all = Clock::now();
    const Scene scene = scene_from_config(cfg);
    RunRecord rec;
    rec.method = cfg.get_str("method", "name");
    std::vector<Real> row_seconds;

    if (rec.method == "biewos_point")
        run_biewos_point(cfg, ov, scene, rec, row_seconds);
    else if (rec.method == "last_passage")
        run_last_passage(cfg, ov, scene, rec, row_seconds);
    else if (rec.method == "biewos_patch")
        run_biewos_patch(cfg, ov, scene, rec, row_seconds);
    else if (rec.method == "reference_bem")
        run_reference_bem(cfg, scene, rec, row_seconds);
    else if (rec.method == "field_eval")
        run_field_eval(cfg, scene, rec, row_seconds);
    else
        cfg.fail("method", "name", "unknown method '" + rec.method + "'");

    rec.wall_seconds = seconds_since(t_all);

    // deterministic CSV body
    std::ostringstream csv;
    csv << "# biewos-csv schema=" << rec.schema << "\n";
    csv << "# config: " << cfg.echo() << "\n";
    for (size_t c = 0; c < rec.columns.size(); ++c) csv << (c ? "," : "") << rec.columns[c];
    csv << "\n";
    for (const auto& row : rec.rows) {
        for (size_t c = 0; c < row.size(); ++c) csv << (c ? "," : "") << fmt_real(row[c]);
        csv << "\n";
    }
    rec.csv_text = csv.str();

    json j;
    j["version"] = kVersion;
    j["method"] = rec.method;
    j["schema"] = rec.schema;
    j["config"] = cfg.echo();
    j["columns"] = rec.columns;
    j["rows"] = rec.rows;
    j["paths_total"] = rec.paths_total;
    j["wall_seconds"] = rec.wall_seconds;
    j["row_seconds"] = row_seconds;
    rec.json_text = j.dump(2) + "\n";
    return rec;
}

void write_outputs(const RunRecord& rec, const RawConfig& cfg) {
    if (cfg.has("output", "csv")) {
        const std::string path = cfg.get_str("output", "csv");
        std::ofstream os(path, std::ios::binary);
        if (!os) throw ConfigError("cannot write CSV output: " + path);
        os << rec.csv_text;
    }
    if (cfg.has("output", "json")) {
        const std::string path = cfg.get_str("output", "json");
        std::ofstream os(path, std::ios::binary);
        if (!os) throw ConfigError("cannot write JSON output: " + path);
        os << rec.json_text;
    }
}

namespace {

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file: " + path);
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> cells;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else
                cur.push_back(c);
        }
        cells.push_back(cur);
        if (!have_header) {
            t.columns = cells;
            have_header = true;
        } else
            t.rows.push_back(cells);
    }
    return t;
}

} // namespace

int compare_csv(const std::string& file_a, const std::string& file_b, Real tol,
                std::ostream& report) {
    const CsvTable a = read_csv(file_a);
    const CsvTable b = read_csv(file_b);
    if (a.columns != b.columns)
        throw ConfigError("CSV schema mismatch between " + file_a + " and " + file_b);
    if (a.rows.size() != b.rows.size()) {
        report << "row count mismatch: " << a.rows.size() << " vs " << b.rows.size() << "\n";
        return 1;
    }
    int failures = 0;
    for (size_t r = 0; r < a.rows.size(); ++r) {
        if (a.rows[r].size() != b.rows[r].size()) {
            report << "row " << r << ": cell count mismatch\n";
            ++failures;
            continue;
        }
        for (size_t c = 0; c < a.rows[r].size(); ++c) {
            const Real va = std::strtod(a.rows[r][c].c_str(), nullptr);
            const Real vb = std::strtod(b.rows[r][c].c_str(), nullptr);
            if (std::isnan(va) && std::isnan(vb)) continue;
            const Real denom = std::max({std::abs(va), std::abs(vb)});
            const Real diff = std::abs(va - vb);
            if (diff > tol * denom) {
                report << "row " << r << " col " << a.columns[c] << ": " << a.rows[r][c] << " vs "
                       << b.rows[r][c] << " (rel " << (denom > 0 ? diff / denom : 0.0) << " > tol "
                       << tol << ")\n";
                ++failures;
            }
        }
    }
    if (failures == 0) report << "compare: PASS (" << a.rows.size() << " rows, tol " << tol << ")\n";
    else report << "compare: FAIL (" << failures << " cells out of tolerance)\n";
    return failures == 0 ? 0 : 1;
}

} // namespace biewos

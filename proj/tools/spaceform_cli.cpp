// Batch front-end: classify a group spec, verify a standard map numerically,
// reproduce the catalog tables, or dump plot data.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spaceform/catalog.hpp"
#include "spaceform/foliation.hpp"
#include "spaceform/numerics.hpp"
#include "spaceform/specfile.hpp"

namespace sf = spaceform;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCondition = 2;
constexpr int kExitTolerance = 3;

struct BudgetFlags {
    int word_length = 8;
    double radius = 6.0;
    int max_elements = 20000;
    sf::EnumerationBudget budget() const { return {word_length, radius, max_elements}; }
    void attach(CLI::App* app) {
        app->add_option("--budget-word-length", word_length, "enumeration word-length budget");
        app->add_option("--budget-radius", radius, "Euclidean enumeration ball radius");
        app->add_option("--budget-max-elements", max_elements, "enumeration element cap");
    }
};

ordered_json orbifold_json(const std::optional<sf::Orbifold2>& o) {
    if (!o) return nullptr;
    ordered_json j;
    j["surface"] = sf::surface_name(o->underlying);
    j["cones"] = o->cone_orders;
    if (o->has_reflector) j["reflector"] = true;
    return j;
}

ordered_json report_json(const sf::VerificationReport& rep) {
    using O = sf::VerificationReport::Outcome;
    bool a_ev = rep.outcome != O::FailsFreeness && rep.outcome != O::FailsDiscreteness;
    bool b1_ev = a_ev && rep.outcome != O::FailsA;
    bool b2_ev = b1_ev && rep.outcome != O::FailsB1;

    ordered_json v;
    v["free"] = rep.free_action.holds;
    v["discrete"] = rep.discreteness.holds;
    v["a"] = a_ev ? ordered_json(rep.condition_a.holds) : ordered_json(nullptr);
    v["b1"] = b1_ev ? ordered_json(rep.condition_b1.holds) : ordered_json(nullptr);
    v["b2"] = b2_ev ? ordered_json(rep.condition_b2.holds) : ordered_json(nullptr);

    std::string witness;
    for (const auto* c :
         {&rep.free_action, &rep.discreteness, &rep.condition_a, &rep.condition_b1, &rep.condition_b2})
        if (!c->holds && !c->witness.empty() && witness.empty()) witness = c->witness;

    ordered_json j;
    j["verdicts"] = std::move(v);
    j["witness"] = witness;
    j["leaf_group"] = rep.leaf_description;
    j["orbifold"] = orbifold_json(rep.orbifold);
    j["outcome"] = rep.outcome_text();
    ordered_json res;
    res["homomorphism"] = rep.homomorphism_residual;
    res["equivariance"] = rep.equivariance_residual;
    j["residuals"] = std::move(res);
    if (!rep.note.empty()) j["note"] = rep.note;
    return j;
}

void print_report_text(std::ostream& os, const sf::VerificationReport& rep) {
    auto line = [&](const std::string& name, const sf::ConditionReport& c, bool evaluated) {
        os << "  " << name << ": ";
        if (!evaluated)
            os << "skipped\n";
        else if (c.holds)
            os << "ok\n";
        else
            os << "FAIL  [" << c.witness << "]\n";
    };
    using O = sf::VerificationReport::Outcome;
    bool a_ev = rep.outcome != O::FailsFreeness && rep.outcome != O::FailsDiscreteness;
    bool b1_ev = a_ev && rep.outcome != O::FailsA;
    bool b2_ev = b1_ev && rep.outcome != O::FailsB1;

    os << "group: " << (rep.label.empty() ? "(unnamed)" : rep.label) << "\n";
    os << "budget: " << rep.budget.describe() << ", seed " << rep.seed << "\n";
    line("free action        ", rep.free_action, true);
    line("discrete           ", rep.discreteness, true);
    line("(a) foliation      ", rep.condition_a, a_ev);
    if (b1_ev) os << "  leaf group: " << rep.leaf_description << "\n";
    line("(b1) no reflections", rep.condition_b1, b1_ev);
    line("(b2) discontinuous ", rep.condition_b2, b2_ev);
    if (rep.orbifold) os << "  leaf orbifold L = " << rep.orbifold->name() << "\n";
    os << "  residuals: homomorphism " << rep.homomorphism_residual << ", equivariance "
       << rep.equivariance_residual << "\n";
    if (!rep.note.empty()) os << "  note: " << rep.note << "\n";
    os << "outcome: " << rep.outcome_text() << "\n";
}

sf::ChartedMap map_by_name(const std::string& name) {
    if (name == "pi1") return sf::vertical_projection_map();
    if (name == "hopf") return sf::hopf_map();
    if (name == "pi4") return sf::halfspace_projection_map();
    if (name.rfind("screw:", 0) == 0) {
        int q = std::stoi(name.substr(6));
        return sf::screw_quotient_map(q);
    }
    throw CLI::ValidationError("map", "unknown map name: " + name +
                                          " (expected pi1, hopf, pi4 or screw:q)");
}

double guarded_harmonicity(const sf::ChartedMap& map, const sf::HarmonicTestFn& fn,
                           const sf::Vec4d& x, double h) {
    // Richardson combination without the critical-set guard (plot use).
    int chart = map.preferred_chart(x);
    double s_h = 0, s_h2 = 0;
    double lap_h = sf::raw_laplacian(map, fn, x, h, &s_h, chart);
    double lap_h2 = sf::raw_laplacian(map, fn, x, h / 2, &s_h2, chart);
    return std::abs((4 * lap_h2 - lap_h) / 3.0) / std::max(s_h2, 1e-8);
}

struct VerifySummary {
    int samples = 0;
    double lambda_min = 0, lambda_max = 0, lambda_mean = 0;
    double max_conf_defect = 0;
    double max_harm_residual = 0;
    double max_geodesy = 0;
    double conf_order = 0, harm_order = 0;
    double decay_exponent = 0;
    bool has_decay = false;
    // Step sizes behind each residual column.
    double h_gradient = 1e-5, h_laplacian = 1e-3, h_geodesy = 1e-2;
};

VerifySummary run_verify(const sf::ChartedMap& map, int samples, std::uint64_t seed) {
    VerifySummary out;
    std::mt19937_64 rng(seed);
    auto fns = sf::builtin_test_functions();
    double lam_sum = 0, lam_min = 1e300, lam_max = 0;
    for (int i = 0; i < samples; ++i) {
        sf::Vec4d x = sf::sample_domain_point(map, rng);
        int guard = 0;
        while (!sf::sample_ok_for(map, fns[2], x, 1e-3) && guard++ < 256)
            x = sf::sample_domain_point(map, rng);

        auto dil = sf::horizontal_conformality(map, x);
        lam_sum += dil.lambda;
        lam_min = std::min(lam_min, dil.lambda);
        lam_max = std::max(lam_max, dil.lambda);
        out.max_conf_defect = std::max(out.max_conf_defect, dil.defect);
        for (const auto& fn : fns)
            out.max_harm_residual =
                std::max(out.max_harm_residual, sf::harmonicity_residual(map, fn, x));
        out.max_geodesy = std::max(out.max_geodesy, sf::fiber_geodesic_defect(map, x));
    }
    out.samples = samples;
    out.lambda_min = lam_min;
    out.lambda_max = lam_max;
    out.lambda_mean = lam_sum / samples;

    // Convergence order of the raw stencils, median over a handful of points.
    std::vector<double> conf_orders, harm_orders;
    sf::HarmonicTestFn logfn = fns[2];
    for (int i = 0; i < 5; ++i) {
        sf::Vec4d x = sf::sample_domain_point(map, rng);
        int guard = 0;
        while (!sf::sample_ok_for(map, logfn, x, 2e-2) && guard++ < 256)
            x = sf::sample_domain_point(map, rng);
        double c1 = sf::horizontal_conformality(map, x, 1e-3).defect;
        double c2 = sf::horizontal_conformality(map, x, 5e-4).defect;
        if (c1 > 1e-12)
            conf_orders.push_back(std::log2(std::max(c1, 1e-300) / std::max(c2, 1e-300)));
        else
            conf_orders.push_back(2.0);  // identically conformal at stencil resolution
        int chart = map.preferred_chart(x);
        double l1 = std::abs(sf::raw_laplacian(map, logfn, x, 1e-2, nullptr, chart));
        double l2 = std::abs(sf::raw_laplacian(map, logfn, x, 5e-3, nullptr, chart));
        if (l1 > 1e-11)
            harm_orders.push_back(std::log2(l1 / std::max(l2, 1e-300)));
        else
            harm_orders.push_back(2.0);
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    out.conf_order = median(conf_orders);
    out.harm_order = median(harm_orders);

    if (map.kind == sf::ChartedMap::Kind::ScrewQuotient && map.power >= 2) {
        out.decay_exponent = sf::dilation_decay_exponent(map.power, {0.1, 0.05, 0.025});
        out.has_decay = true;
    }
    return out;
}

int cmd_classify(const std::string& path, const BudgetFlags& budget, std::uint64_t seed,
                 const std::string& format, const std::string& json_out) {
    sf::GroupSpec spec;
    try {
        spec = sf::load_group_spec(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    sf::VerificationReport rep = sf::run_pipeline(spec, budget.budget(), seed);

    ordered_json j = report_json(rep);
    j["seed"] = seed;
    if (format == "json")
        std::cout << j.dump(2) << "\n";
    else
        print_report_text(std::cout, rep);
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out) {
            std::cerr << "error: cannot write " << json_out << "\n";
            return kExitUsage;
        }
        out << j.dump(2) << "\n";
    }
    return rep.classified() ? kExitOk : kExitCondition;
}

int cmd_verify(const std::string& map_name, int samples, std::uint64_t seed, double tol_conf,
               double tol_harm, double tol_geo, const std::string& format) {
    sf::ChartedMap map = map_by_name(map_name);
    VerifySummary s = run_verify(map, samples, seed);

    bool ok = s.max_conf_defect <= tol_conf && s.max_harm_residual <= tol_harm &&
              s.max_geodesy <= tol_geo && s.conf_order >= 1.8 && s.harm_order >= 1.8;
    if (s.has_decay) ok = ok && std::abs(s.decay_exponent - (map.power - 1)) <= 1e-2;

    if (format == "json") {
        ordered_json j;
        j["map"] = map.name();
        j["seed"] = seed;
        j["samples"] = s.samples;
        j["lambda"] = {{"min", s.lambda_min}, {"mean", s.lambda_mean}, {"max", s.lambda_max}};
        j["max_conformality_defect"] = s.max_conf_defect;
        j["max_harmonicity_residual"] = s.max_harm_residual;
        j["max_geodesy_defect"] = s.max_geodesy;
        j["conformality_order"] = s.conf_order;
        j["harmonicity_order"] = s.harm_order;
        if (s.has_decay) j["dilation_decay_exponent"] = s.decay_exponent;
        ordered_json steps;
        steps["gradient"] = s.h_gradient;
        steps["laplacian"] = s.h_laplacian;
        steps["geodesy"] = s.h_geodesy;
        j["step_sizes"] = std::move(steps);
        j["pass"] = ok;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "map " << map.name() << ", " << s.samples << " samples, seed " << seed << "\n";
        std::cout << "  lambda        min " << s.lambda_min << "  mean " << s.lambda_mean << "  max "
                  << s.lambda_max << "\n";
        std::cout << "  conformality  max defect " << s.max_conf_defect << " (tol " << tol_conf
                  << "), order " << s.conf_order << "\n";
        std::cout << "  harmonicity   max residual " << s.max_harm_residual << " (tol " << tol_harm
                  << "), order " << s.harm_order << "\n";
        std::cout << "  fiber geodesy max defect " << s.max_geodesy << " (tol " << tol_geo << ")\n";
        if (s.has_decay)
            std::cout << "  dilation decay exponent " << s.decay_exponent << " (expected "
                      << map.power - 1 << ")\n";
        std::cout << "  steps: gradient " << s.h_gradient << ", laplacian " << s.h_laplacian
                  << ", geodesy " << s.h_geodesy << "\n";
        std::cout << (ok ? "PASS" : "FAIL") << "\n";
    }
    return ok ? kExitOk : kExitTolerance;
}

int cmd_catalog(const std::string& filter, const BudgetFlags& budget, std::uint64_t seed,
                const std::string& out_dir, const std::string& format) {
    sf::CatalogOptions opts;
    opts.euclidean_budget = budget.budget();
    opts.filter = filter;
    opts.seed = seed;
    auto t0 = std::chrono::steady_clock::now();
    sf::CatalogReport report = sf::run_catalog(opts);
    auto t1 = std::chrono::steady_clock::now();
    double total_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    std::ostringstream text;
    for (const auto& c : report.cases) {
        text << (c.match ? "[ok]   " : "[FAIL] ") << c.id << "  " << c.family << "\n";
        if (!c.expected_reject.empty()) {
            text << "       expected reject (" << c.expected_reject << "), got "
                 << (c.pipeline.failing_condition().empty() ? "accept"
                                                            : c.pipeline.failing_condition())
                 << ": " << c.pipeline.outcome_text() << "\n";
        } else {
            text << "       L = "
                 << (c.pipeline.orbifold ? c.pipeline.orbifold->name() : c.pipeline.outcome_text())
                 << ", expected " << (c.expected ? c.expected->name() : "(none)") << "\n";
        }
        if (!c.note.empty()) text << "       note: " << c.note << "\n";
    }
    text << report.matched << " matched, " << report.mismatched << " mismatched, total "
         << total_ms << " ms\n";

    ordered_json j;
    j["seed"] = report.seed;
    ordered_json b;
    b["max_word_length"] = report.euclidean_budget.max_word_length;
    b["ball_radius"] = report.euclidean_budget.ball_radius;
    b["max_elements"] = report.euclidean_budget.max_elements;
    j["budget"] = std::move(b);
    j["filter"] = filter;
    ordered_json cases = ordered_json::array();
    for (const auto& c : report.cases) {
        ordered_json cj = report_json(c.pipeline);
        cj["case"] = c.id;
        cj["family"] = c.family;
        cj["expected"] = orbifold_json(c.expected);
        cj["expected_reject"] = c.expected_reject.empty() ? ordered_json(nullptr)
                                                          : ordered_json(c.expected_reject);
        cj["match"] = c.match;
        if (!c.note.empty()) cj["note"] = c.note;
        cases.push_back(std::move(cj));
    }
    j["cases"] = std::move(cases);
    j["matched"] = report.matched;
    j["mismatched"] = report.mismatched;

    if (format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text.str();

    std::ofstream jf(out_dir + "/report.json");
    std::ofstream tf(out_dir + "/report.txt");
    if (!jf || !tf) {
        std::cerr << "error: cannot write reports under " << out_dir << "\n";
        return kExitUsage;
    }
    jf << j.dump(2) << "\n";
    tf << text.str();
    return report.all_ok ? kExitOk : kExitCondition;
}

int cmd_plotdata(const std::string& map_name, const std::string& grid, double extent, double z,
                 int samples, bool zline, double x1, double x2, std::uint64_t seed,
                 const std::string& out_path) {
    sf::ChartedMap map = map_by_name(map_name);
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitUsage;
    }
    out.precision(12);
    out << "x1,x2,x3,lambda,conf_defect,harm_residual\n";

    sf::HarmonicTestFn fn{sf::HarmonicTestFn::Kind::RealPower, 2, {}};
    auto emit = [&](const sf::Vec4d& x, const sf::Vec3d& coords) {
        auto dil = sf::horizontal_conformality(map, x);
        double harm = guarded_harmonicity(map, fn, x, 1e-3);
        out << coords[0] << "," << coords[1] << "," << coords[2] << "," << dil.lambda << ","
            << dil.defect << "," << harm << "\n";
    };

    if (map.domain() == sf::ChartedMap::Domain::Sphere3) {
        std::mt19937_64 rng(seed);
        for (int i = 0; i < samples; ++i) {
            sf::Vec4d x = sf::sample_domain_point(map, rng);
            sf::Vec3d leaf = sf::hopf_leaf_projection(sf::Quaternion::from_vec(x));
            emit(x, leaf);
        }
        return kExitOk;
    }
    if (zline) {
        for (int i = 0; i < samples; ++i) {
            double x3 = 0.5 + 2.5 * i / std::max(1, samples - 1);
            sf::Vec4d x{x1, x2, x3, 0};
            emit(x, sf::Vec3d{x1, x2, x3});
        }
        return kExitOk;
    }
    int nx = 10, ny = 10;
    if (auto pos = grid.find('x'); pos != std::string::npos) {
        nx = std::stoi(grid.substr(0, pos));
        ny = std::stoi(grid.substr(pos + 1));
    }
    double z0 = z;
    if (map.domain() == sf::ChartedMap::Domain::HalfSpace3 && z0 <= 0) z0 = 1.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            double u = nx == 1 ? 0.0 : -extent + 2 * extent * i / (nx - 1);
            double v = ny == 1 ? 0.0 : -extent + 2 * extent * j / (ny - 1);
            sf::Vec4d x{u, v, z0, 0};
            emit(x, sf::Vec3d{u, v, z0});
        }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete isometry groups of flat and round 3-space: foliation quotients, "
                 "leaf orbifolds and harmonic-morphism verification"};
    app.require_subcommand(1);

    // classify
    auto* classify = app.add_subcommand("classify", "run the pipeline on a group spec file");
    std::string classify_path, classify_format = "text", classify_json_out;
    std::uint64_t classify_seed = 1;
    BudgetFlags classify_budget;
    classify->add_option("file", classify_path, "group spec JSON file")->required();
    classify_budget.attach(classify);
    classify->add_option("--seed", classify_seed, "sampling seed");
    classify->add_option("--format", classify_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
    classify->add_option("--json-out", classify_json_out, "also write the JSON report here");

    // verify
    auto* verify = app.add_subcommand("verify", "numerically verify a standard map");
    std::string verify_map, verify_format = "text";
    int verify_samples = 100;
    std::uint64_t verify_seed = 1;
    double tol_conf = 1e-5, tol_harm = 1e-4, tol_geo = 1e-6;
    verify->add_option("map", verify_map, "pi1 | hopf | pi4 | screw:q")->required();
    verify->add_option("--samples", verify_samples, "number of seeded sample points");
    verify->add_option("--seed", verify_seed, "sampling seed");
    verify->add_option("--tol-conformality", tol_conf, "conformality defect tolerance");
    verify->add_option("--tol-harmonicity", tol_harm, "harmonicity residual tolerance");
    verify->add_option("--tol-geodesy", tol_geo, "fiber geodesy tolerance");
    verify->add_option("--format", verify_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    // catalog
    auto* catalog = app.add_subcommand("catalog", "reproduce the classification tables");
    std::string catalog_filter = "*", catalog_out = ".", catalog_format = "text";
    std::uint64_t catalog_seed = 1;
    BudgetFlags catalog_budget;
    catalog->add_option("--filter", catalog_filter, "case id glob, e.g. \"4.1-*\"");
    catalog_budget.attach(catalog);
    catalog->add_option("--seed", catalog_seed, "sampling seed");
    catalog->add_option("--out-dir", catalog_out, "directory for report.txt / report.json");
    catalog->add_option("--format", catalog_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    // plotdata
    auto* plot = app.add_subcommand("plotdata", "write (point, lambda, residual) CSV data");
    std::string plot_map, plot_grid = "10x10", plot_out = "plot.csv";
    double plot_extent = 1.0, plot_z = 0.25, plot_x1 = 0.0, plot_x2 = 0.0;
    int plot_samples = 50;
    bool plot_zline = false;
    std::uint64_t plot_seed = 1;
    plot->add_option("map", plot_map, "pi1 | hopf | pi4 | screw:q")->required();
    plot->add_option("--grid", plot_grid, "NxM grid in the x1,x2 plane");
    plot->add_option("--extent", plot_extent, "half-width of the grid");
    plot->add_option("--z", plot_z, "grid height x3");
    plot->add_option("--samples", plot_samples, "sample count (sphere or --zline)");
    plot->add_flag("--zline", plot_zline, "sample a vertical line instead of a grid");
    plot->add_option("--x1", plot_x1, "vertical line x1");
    plot->add_option("--x2", plot_x2, "vertical line x2");
    plot->add_option("--seed", plot_seed, "sampling seed");
    plot->add_option("--out", plot_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(classify))
            return cmd_classify(classify_path, classify_budget, classify_seed, classify_format,
                                classify_json_out);
        if (app.got_subcommand(verify))
            return cmd_verify(verify_map, verify_samples, verify_seed, tol_conf, tol_harm, tol_geo,
                              verify_format);
        if (app.got_subcommand(catalog))
            return cmd_catalog(catalog_filter, catalog_budget, catalog_seed, catalog_out,
                               catalog_format);
        if (app.got_subcommand(plot))
            return cmd_plotdata(plot_map, plot_grid, plot_extent, plot_z, plot_samples, plot_zline,
                                plot_x1, plot_x2, plot_seed, plot_out);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

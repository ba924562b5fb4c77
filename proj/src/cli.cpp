#include "symmarkov/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "symmarkov/discretize.hpp"
#include "symmarkov/energy.hpp"
#include "symmarkov/equivalence.hpp"
#include "symmarkov/green.hpp"
#include "symmarkov/json_io.hpp"
#include "symmarkov/measure.hpp"
#include "symmarkov/operators.hpp"
#include "symmarkov/pathspace.hpp"
#include "symmarkov/rng.hpp"

namespace symmarkov::cli {

namespace {

namespace fs = std::filesystem;
using io::json;

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

void emit(const json& doc, const std::string& report_path) {
    if (report_path.empty())
        std::cout << doc.dump(2) << "\n";
    else
        io::save_json(report_path, doc);
}

void write_manifest_for(const std::string& command, const std::vector<std::string>& args,
                        const std::vector<std::string>& inputs, const std::string& out_dir) {
    if (out_dir.empty()) return;
    fs::create_directories(out_dir);
    io::save_json((fs::path(out_dir) / "manifest.json").string(),
                  io::make_manifest(command, args, inputs));
}

struct NetworkInput {
    FiniteSymmetricMeasure measure;
    std::string path;
};

NetworkInput load_network(const std::string& path, bool force) {
    return {io::network_from_json(io::load_json(path), force), path};
}

json clause_to_json(const markov::ClauseResult& c) {
    return {{"clause", c.id}, {"description", c.description}, {"residual", c.residual},
            {"pass", c.pass}};
}

json battery_to_json(const markov::ReversibilityReport& report) {
    json clauses = json::array();
    for (const auto& c : report.clauses) clauses.push_back(clause_to_json(c));
    return {{"clauses", std::move(clauses)}, {"depth", report.depth},
            {"tolerance", report.tolerance}, {"all_pass", report.all_pass},
            {"max_residual", report.max_residual}};
}

int cmd_validate(const std::string& input, bool force) {
    NetworkInput net = load_network(input, force);
    auto irr = analyze_irreducibility(net.measure);
    json doc = {{"states", net.measure.size()},
                {"pairs", net.measure.triplets().size()},
                {"total_mass", net.measure.total_mass()},
                {"symmetric", net.measure.symmetric()},
                {"irreducible", irr.irreducible},
                {"digest", net.measure.digest()}};
    if (!irr.irreducible) doc["closed_witness"] = irr.witness;
    std::cout << doc.dump(2) << "\n";
    return 0;
}

int cmd_check(const std::string& input, int depth, double tol, bool force,
              const std::string& report_path, const std::vector<std::string>& raw_args) {
    NetworkInput net = load_network(input, force);
    markov::MarkovSystem sys{net.measure};
    markov::ReversibilityReport battery = markov::reversibility_battery(sys, depth, tol);
    Eigen::VectorXd spectrum = markov::spectrum_P(sys);
    bool spectrum_ok = spectrum.minCoeff() >= -1.0 - 1e-10 && spectrum.maxCoeff() <= 1.0 + 1e-10;

    json doc = battery_to_json(battery);
    doc["input"] = input;
    doc["spectrum_range"] = {spectrum.minCoeff(), spectrum.maxCoeff()};
    doc["spectrum_contained"] = spectrum_ok;
    emit(doc, report_path);
    if (!report_path.empty())
        write_manifest_for("check", raw_args, {input}, fs::path(report_path).parent_path().string());
    return battery.all_pass && spectrum_ok ? 0 : 2;
}

int cmd_spectrum(const std::string& input, const std::string& out, const std::string& format) {
    NetworkInput net = load_network(input, false);
    markov::MarkovSystem sys{net.measure};
    Eigen::VectorXd values = markov::spectrum_P(sys);
    if (format == "csv") {
        std::ostringstream csv;
        csv << "index,eigenvalue\n";
        for (long i = 0; i < values.size(); ++i) csv << i << "," << fmt_double(values[i]) << "\n";
        if (out.empty())
            std::cout << csv.str();
        else
            io::save_text(out, csv.str());
    } else {
        json doc = {{"eigenvalues", std::vector<double>(values.data(), values.data() + values.size())}};
        emit(doc, out);
    }
    return 0;
}

int cmd_energy(const std::string& input, const std::string& indicator_path, double tol,
               const std::string& report_path) {
    NetworkInput net = load_network(input, false);
    StateSet A = io::states_from_json(io::load_json(indicator_path));
    energy::EnergyForm form(net.measure);
    energy::IndicatorEnergyReport rep = energy::indicator_energy(form, A);
    bool pass = rep.residual <= tol && rep.bound_holds;
    json doc = {{"crossing_mass", rep.crossing_mass},
                {"energy_norm_sq", rep.energy_norm_sq},
                {"nu_bound", rep.nu_bound},
                {"residual", rep.residual},
                {"bound_holds", rep.bound_holds},
                {"pass", pass}};
    emit(doc, report_path);
    return pass ? 0 : 2;
}

int cmd_harmonic(const std::string& input, const std::string& boundary_path,
                 const std::string& out, const std::string& report_path) {
    NetworkInput net = load_network(input, false);
    io::BoundaryData boundary = io::boundary_from_json(io::load_json(boundary_path));
    markov::MarkovSystem sys{net.measure};
    Eigen::VectorXd h = energy::harmonic_solve(sys, boundary.states, boundary.values);

    std::ostringstream csv;
    csv << "state,value\n";
    for (long i = 0; i < h.size(); ++i) csv << i << "," << fmt_double(h[i]) << "\n";
    if (out.empty())
        std::cout << csv.str();
    else
        io::save_text(out, csv.str());

    Eigen::VectorXd ph = sys.apply_P(h);
    double interior_residual = 0.0;
    std::vector<char> is_boundary(static_cast<std::size_t>(sys.size()), 0);
    for (int s : boundary.states) is_boundary[s] = 1;
    for (int i = 0; i < sys.size(); ++i)
        if (!is_boundary[i]) interior_residual = std::max(interior_residual, std::abs(ph[i] - h[i]));
    double lo = boundary.values.size() ? boundary.values.minCoeff() : 0.0;
    double hi = boundary.values.size() ? boundary.values.maxCoeff() : 0.0;
    bool max_principle = h.minCoeff() >= lo - 1e-12 && h.maxCoeff() <= hi + 1e-12;
    json doc = {{"interior_residual", interior_residual},
                {"max_principle", max_principle},
                {"min", h.minCoeff()},
                {"max", h.maxCoeff()}};
    if (!report_path.empty()) io::save_json(report_path, doc);
    return 0;
}

int cmd_equiv(const std::string& input, const std::string& q_path, const std::string& r_path,
              double tol, std::uint64_t seed, const std::string& report_path) {
    NetworkInput net = load_network(input, false);
    markov::MarkovSystem sys{net.measure};
    const int n = sys.size();

    equivalence::EquivalenceData eq = [&]() {
        if (!q_path.empty()) {
            io::FactorData f = io::factor_from_json(io::load_json(q_path));
            if (!f.q) throw Error("factor file must contain \"q\" for product form");
            return equivalence::EquivalenceData::product(*f.q);
        }
        io::FactorData f = io::factor_from_json(io::load_json(r_path));
        if (!f.r) throw Error("factor file must contain \"r\" for the general form");
        Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n, n);
        for (const Triplet& t : *f.r) {
            table(t.i, t.j) = t.w;
            table(t.j, t.i) = t.w;
        }
        return equivalence::EquivalenceData::general(table);
    }();

    double p_residual = 0.0, ratio_residual = 0.0, reciprocal_residual = 0.0;
    double interchange_residual = 0.0, laplacian_residual = 0.0;
    rng::Stream probes(seed, 0xeb);
    FiniteSymmetricMeasure transformed = equivalence::transform_measure(net.measure, eq);
    markov::MarkovSystem sys_prime{transformed};
    equivalence::EquivalenceData inv = eq.inverse();
    for (int trial = 0; trial < 8; ++trial) {
        Eigen::VectorXd f(n);
        for (int i = 0; i < n; ++i) f[i] = probes.next_range(-1.0, 1.0);
        auto dual = equivalence::markov_prime_via_formula(sys, eq, f);
        p_residual = std::max(p_residual, dual.residual);
        ratio_residual = std::max(ratio_residual, dual.ratio_residual);
        reciprocal_residual = std::max(reciprocal_residual, dual.reciprocal_residual);
        auto back = equivalence::markov_prime_via_formula(sys_prime, inv, f);
        interchange_residual =
            std::max(interchange_residual,
                     (back.via_formula - sys.apply_P(f)).cwiseAbs().maxCoeff() /
                         (1.0 + f.cwiseAbs().maxCoeff()));
        if (eq.is_product()) {
            auto lap = equivalence::laplacian_prime_identity(sys, eq, f);
            laplacian_residual = std::max(laplacian_residual, lap.full_identity_residual);
        }
    }
    // nu' P' = nu'
    Eigen::VectorXd nu_prime = sys_prime.nu();
    double invariance_residual =
        (sys_prime.push_measure(nu_prime) - nu_prime).cwiseAbs().maxCoeff() /
        (1.0 + nu_prime.maxCoeff());

    bool pass = p_residual <= tol && ratio_residual <= tol && reciprocal_residual <= tol &&
                interchange_residual <= tol && invariance_residual <= tol &&
                (!eq.is_product() || laplacian_residual <= tol);
    json doc = {{"markov_prime_residual", p_residual},
                {"ratio_identity_residual", ratio_residual},
                {"reciprocal_identity_residual", reciprocal_residual},
                {"interchange_residual", interchange_residual},
                {"invariance_residual", invariance_residual},
                {"tolerance", tol},
                {"pass", pass}};
    if (eq.is_product()) doc["laplacian_prime_residual"] = laplacian_residual;
    emit(doc, report_path);
    return pass ? 0 : 2;
}

int cmd_simulate(const std::string& input, const std::string& start_path, int horizon, long count,
                 std::uint64_t seed, const std::string& out,
                 const std::vector<std::string>& raw_args) {
    NetworkInput net = load_network(input, false);
    markov::MarkovSystem sys{net.measure};
    StateSet A = io::states_from_json(io::load_json(start_path));
    paths::PathEnsemble ens =
        paths::sample_paths(sys, paths::StartLaw::nu_restricted(A), horizon, count, seed);
    std::ostringstream csv;
    csv << "path_id,step,state\n";
    for (long p = 0; p < ens.count(); ++p)
        for (int k = 0; k <= horizon; ++k) csv << p << "," << k << "," << ens.paths(p, k) << "\n";
    if (out.empty()) {
        std::cout << csv.str();
    } else {
        io::save_text(out, csv.str());
        write_manifest_for("simulate", raw_args, {input, start_path},
                           fs::path(out).parent_path().string());
    }
    return 0;
}

int cmd_green(const std::string& input, const std::string& domain_path,
              const std::string& target_path, const std::string& method, double tol,
              const std::string& out, const std::string& report_path) {
    NetworkInput net = load_network(input, false);
    markov::MarkovSystem sys{net.measure};
    StateSet D = io::states_from_json(io::load_json(domain_path));
    StateSet A = io::states_from_json(io::load_json(target_path));
    green::KilledSystem ks = green::kill(sys, D);

    green::GreenFunction g;
    json doc;
    doc["spectral_radius"] = ks.spectral_radius();
    if (method == "series") {
        green::SeriesResult series = green::green_series(ks, A, tol);
        g = series.green;
        doc["terms_used"] = series.terms_used;
        doc["tail_bound"] = series.tail_bound;
    } else {
        g = green::green_solve(ks, A);
    }
    std::ostringstream csv;
    csv << "state,value\n";
    for (int a = 0; a < ks.window_size(); ++a)
        csv << ks.parent_state(a) << "," << fmt_double(g.values[a]) << "\n";
    if (out.empty())
        std::cout << csv.str();
    else
        io::save_text(out, csv.str());
    if (!report_path.empty()) io::save_json(report_path, doc);
    return 0;
}

int cmd_discretize(const std::string& kernel_text, int levels, const std::string& out_dir,
                   const std::vector<std::string>& raw_args) {
    if (levels < 1) throw Error("--levels must be >= 1");
    kernels::KernelSpec spec = io::kernel_from_text_or_json(kernel_text);
    kernels::SymmetryResult sym = kernels::check_symmetry(spec, 256);
    if (!sym.symmetric)
        throw Error("kernel is not symmetric: k(" + std::to_string(sym.x) + "," +
                    std::to_string(sym.y) + ") = " + std::to_string(sym.k_xy) +
                    " vs mirrored " + std::to_string(sym.k_yx));

    dyadic::DiscretizationLadder ladder(spec, levels);
    fs::create_directories(out_dir);
    json certificates;
    certificates["schema"] = io::kSchemaVersion;
    json per_level = json::array();
    for (int n = 1; n <= levels; ++n) {
        dyadic::DiscretizedNetwork net = ladder.network(n);
        io::save_json((fs::path(out_dir) / ("level_" + std::to_string(n) + ".json")).string(),
                      io::network_to_json(net.measure));
        dyadic::Connectivity conn = dyadic::check_connected(net);

        // Mass conservation against the next finer level, when present.
        double refinement_residual = 0.0;
        if (n < levels) {
            const Eigen::MatrixXd& child = ladder.weights(n + 1);
            const Eigen::MatrixXd& here = ladder.weights(n);
            for (int i = 0; i < here.rows(); ++i)
                for (int k = 0; k < here.cols(); ++k) {
                    double sum = child(2 * i, 2 * k) + child(2 * i, 2 * k + 1) +
                                 child(2 * i + 1, 2 * k) + child(2 * i + 1, 2 * k + 1);
                    refinement_residual = std::max(
                        refinement_residual, std::abs(here(i, k) - sum) / (1.0 + std::abs(sum)));
                }
        }
        per_level.push_back({{"level", n},
                             {"cells", net.measure.size()},
                             {"connected", conn.connected()},
                             {"components", conn.component_count()},
                             {"refinement_residual", refinement_residual}});
    }
    certificates["levels"] = std::move(per_level);

    // Monotone sequences and the normalized limit at deterministic probes.
    json probes = json::array();
    const double probe_points[2] = {1.0 / 3.0, 2.0 / 3.0};
    bool monotone_ok = true;
    for (double x : probe_points) {
        json entry;
        entry["x"] = x;
        try {
            std::vector<double> raw = dyadic::vertex_mass_sequence(ladder, x, levels, false);
            std::vector<double> normalized = dyadic::vertex_mass_sequence(ladder, x, levels, true);
            entry["raw"] = raw;
            entry["normalized"] = normalized;
            entry["c_limit"] = kernels::fiber_mass(spec, x, {{0.0, 1.0}});
        } catch (const MonotonicityViolation& e) {
            monotone_ok = false;
            entry["monotonicity_violation_level"] = e.level;
        }
        probes.push_back(std::move(entry));
    }
    try {
        certificates["conductance_probe"] =
            dyadic::conductance_sequence(ladder, probe_points[0], probe_points[1], levels);
    } catch (const MonotonicityViolation& e) {
        monotone_ok = false;
        certificates["conductance_probe_violation_level"] = e.level;
    }
    certificates["vertex_probes"] = std::move(probes);
    certificates["monotone"] = monotone_ok;

    bool all_connected = true;
    for (const json& entry : certificates["levels"]) all_connected = all_connected && entry["connected"].get<bool>();
    certificates["all_connected"] = all_connected;

    io::save_json((fs::path(out_dir) / "certificates.json").string(), certificates);
    write_manifest_for("discretize", raw_args, {}, out_dir);
    return monotone_ok ? 0 : 2;
}

int cmd_report(const std::string& input, int depth, double tol, std::uint64_t seed,
               const std::string& out_dir, const std::vector<std::string>& raw_args) {
    NetworkInput net = load_network(input, false);
    markov::MarkovSystem sys{net.measure};
    json doc;
    doc["schema"] = io::kSchemaVersion;
    doc["input"] = input;
    doc["digest"] = net.measure.digest();
    doc["battery"] = battery_to_json(markov::reversibility_battery(sys, depth, tol));

    Eigen::VectorXd spectrum = markov::spectrum_P(sys);
    doc["spectrum"] = {{"min", spectrum.minCoeff()},
                       {"max", spectrum.maxCoeff()},
                       {"contained", spectrum.minCoeff() >= -1.0 - 1e-10 &&
                                         spectrum.maxCoeff() <= 1.0 + 1e-10}};

    markov::MuPDensity density = mu_P_density(sys);
    doc["mu_P_density_residual"] = density.residual;

    energy::EnergyForm form(net.measure);
    rng::Stream probes(seed, 0x4e);
    double drop_residual = 0.0, dirichlet_residual = 0.0, diagram = 0.0;
    for (int trial = 0; trial < 16; ++trial) {
        Eigen::VectorXd f(sys.size());
        for (int i = 0; i < sys.size(); ++i) f[i] = probes.next_range(-1.0, 1.0);
        double energy_sq = form.norm_sq(f);
        double pair_norm = markov::l2_rho_sq(sys, energy::drop(net.measure, f));
        drop_residual = std::max(drop_residual, std::abs(energy_sq - pair_norm) / (1.0 + energy_sq));
        double via_delta = markov::inner_mu(sys, f, sys.apply_Delta(f));
        dirichlet_residual =
            std::max(dirichlet_residual, std::abs(energy_sq - via_delta) / (1.0 + energy_sq));
        diagram = std::max(diagram, energy::diagram_residual(sys, f) / (1.0 + f.norm()));
    }
    doc["energy"] = {{"drop_isometry_residual", drop_residual},
                     {"dirichlet_identity_residual", dirichlet_residual},
                     {"diagram_residual", diagram}};

    bool pass = doc["battery"]["all_pass"].get<bool>() &&
                doc["spectrum"]["contained"].get<bool>() && density.residual <= tol &&
                drop_residual <= 1e-10 && dirichlet_residual <= 1e-10 && diagram <= 1e-10;
    doc["pass"] = pass;

    if (out_dir.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        fs::create_directories(out_dir);
        io::save_json((fs::path(out_dir) / "report.json").string(), doc);
        write_manifest_for("report", raw_args, {input}, out_dir);
    }
    return pass ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"operator calculus of symmetric measures on finite networks"};
    app.require_subcommand(1);

    std::string input, kernel_text, domain_path, target_path, q_path, r_path, start_path,
        boundary_path, indicator_path, out, report_path, method = "solve", format = "json";
    int depth = 6, levels = 3, horizon = 16;
    long path_count = 1000;
    std::uint64_t seed = 0;
    double tol = 1e-12;
    bool force = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--tol", tol, "residual tolerance");
        cmd->add_option("--seed", seed, "seed for any randomized probes");
    };

    CLI::App* validate = app.add_subcommand("validate", "ingest and validate a network");
    validate->add_option("--input", input)->required();
    validate->add_flag("--force", force, "accept asymmetric weight matrices");

    CLI::App* check = app.add_subcommand("check", "reversibility battery (seven clauses)");
    check->add_option("--input", input)->required();
    check->add_option("--depth", depth, "kernel power depth");
    check->add_option("--report", report_path);
    check->add_flag("--force", force);
    add_common(check);

    CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of P on L2(nu)");
    spectrum->add_option("--input", input)->required();
    spectrum->add_option("--out", out);
    spectrum->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    CLI::App* energy_cmd = app.add_subcommand("energy", "indicator energy identity");
    energy_cmd->add_option("--input", input)->required();
    energy_cmd->add_option("--indicator", indicator_path)->required();
    energy_cmd->add_option("--report", report_path);
    add_common(energy_cmd);

    CLI::App* harmonic = app.add_subcommand("harmonic", "Dirichlet problem solve");
    harmonic->add_option("--input", input)->required();
    harmonic->add_option("--boundary", boundary_path)->required();
    harmonic->add_option("--out", out);
    harmonic->add_option("--report", report_path);

    CLI::App* equiv = app.add_subcommand("equiv", "equivalent-measure transform checks");
    equiv->add_option("--input", input)->required();
    equiv->add_option("--q", q_path);
    equiv->add_option("--r", r_path);
    equiv->add_option("--report", report_path);
    add_common(equiv);

    CLI::App* simulate = app.add_subcommand("simulate", "seeded path sampling");
    simulate->add_option("--input", input)->required();
    simulate->add_option("--start", start_path)->required();
    simulate->add_option("--horizon", horizon)->required();
    simulate->add_option("--paths", path_count)->required();
    simulate->add_option("--seed", seed);
    simulate->add_option("--out", out);

    CLI::App* green_cmd = app.add_subcommand("green", "Green's function on a killed window");
    green_cmd->add_option("--input", input)->required();
    green_cmd->add_option("--domain", domain_path)->required();
    green_cmd->add_option("--target", target_path)->required();
    green_cmd->add_option("--method", method)->check(CLI::IsMember({"solve", "series"}));
    green_cmd->add_option("--out", out);
    green_cmd->add_option("--report", report_path);
    add_common(green_cmd);

    CLI::App* discretize = app.add_subcommand("discretize", "dyadic kernel discretization");
    discretize->add_option("--kernel", kernel_text)->required();
    discretize->add_option("--levels", levels)->required();
    discretize->add_option("--out", out)->required();

    CLI::App* report_cmd = app.add_subcommand("report", "combined machine-readable report");
    report_cmd->add_option("--input", input)->required();
    report_cmd->add_option("--depth", depth);
    report_cmd->add_option("--out", out);
    add_common(report_cmd);

    std::vector<const char*> argv;
    argv.push_back("symmarkov");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (!(tol > 0.0)) {
        std::cerr << "--tol must be positive\n";
        return 1;
    }
    try {
        if (validate->parsed()) return cmd_validate(input, force);
        if (check->parsed()) return cmd_check(input, depth, tol, force, report_path, args);
        if (spectrum->parsed()) return cmd_spectrum(input, out, format);
        if (energy_cmd->parsed()) return cmd_energy(input, indicator_path, tol, report_path);
        if (harmonic->parsed()) return cmd_harmonic(input, boundary_path, out, report_path);
        if (equiv->parsed()) {
            if (q_path.empty() == r_path.empty()) {
                std::cerr << "equiv needs exactly one of --q or --r\n";
                return 1;
            }
            return cmd_equiv(input, q_path, r_path, tol, seed, report_path);
        }
        if (simulate->parsed())
            return cmd_simulate(input, start_path, horizon, path_count, seed, out, args);
        if (green_cmd->parsed())
            return cmd_green(input, domain_path, target_path, method, tol, out, report_path);
        if (discretize->parsed()) return cmd_discretize(kernel_text, levels, out, args);
        if (report_cmd->parsed()) return cmd_report(input, depth, tol, seed, out, args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace symmarkov::cli

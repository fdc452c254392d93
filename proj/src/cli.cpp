#include "helicity/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "helicity/config.hpp"
#include "helicity/error.hpp"
#include "helicity/mhd.hpp"

namespace helicity::cli {

using nlohmann::json;

namespace {

struct Output {
    std::string body;     // file contents
    std::string summary;  // one stdout line
    std::string default_name;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string g17(double v) { return fmt("%.17g", v); }

Output json_output(const std::string& command, const ExperimentConfig& cfg, json result, std::string summary) {
    json doc = {{"command", command}, {"config", cfg.resolved}, {"result", std::move(result)}};
    return {doc.dump(2) + "\n", std::move(summary), command + ".json"};
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

const Domain& need_domain(const ExperimentConfig& c) {
    require(c.domain.has_value(), "this command needs a \"domain\"");
    return *c.domain;
}

const AnalyticField& need_field(const ExperimentConfig& c) {
    require(c.field.has_value(), "this command needs a \"field\"");
    return *c.field;
}

BSOptions bs_options(const OptionReader& o) {
    BSOptions b;
    b.regularization = o.number("regularization", 0.0);
    require(b.regularization >= 0, "options: \"regularization\" must be non-negative");
    const int chunk = o.integer("chunk_size", static_cast<int>(kernels::kDefaultBlock));
    require(chunk > 0, "options: \"chunk_size\" must be positive");
    b.chunk_size = static_cast<std::size_t>(chunk);
    const std::string be = o.text("backend", "openmp");
    require(be == "openmp" || be == "serial", "options: \"backend\" must be \"openmp\" or \"serial\"");
    b.backend = be == "serial" ? kernels::Backend::Serial : kernels::Backend::OpenMP;
    return b;
}

GridPtr grid_of(const ExperimentConfig& c) { return build_grid(*c.domain, c.grid.h, c.grid.padding); }

HKOptions hk_options(const OptionReader& o) {
    HKOptions h;
    h.loop_segments = o.integer("loop_segments", h.loop_segments);
    h.gauss_nodes = o.integer("gauss_nodes", h.gauss_nodes);
    h.section_nr = o.integer("section_nr", h.section_nr);
    h.section_nphi = o.integer("section_nphi", h.section_nphi);
    require(h.loop_segments >= 16, "options: \"loop_segments\" must be at least 16");
    require(h.gauss_nodes >= 1, "options: \"gauss_nodes\" must be at least 1");
    require(h.section_nr >= 8 && h.section_nphi >= 8, "options: section resolution must be at least 8");
    return h;
}

#define BS_KEYS "regularization", "chunk_size", "backend"

Output cmd_writhe(const ExperimentConfig& c) {
    OptionReader o(c.options);
    o.only({"curve", "backend"});
    const PolylineCurve curve = parse_curve(o.child("curve"));
    require(curve.closed && curve.vertices.size() >= 16, "options.curve: writhe needs a closed curve with 16+ vertices");
    const BSOptions b = bs_options(o);
    const double w = writhe(curve, b.backend);
    return json_output("writhe", c, {{"writhe", w}, {"segments", curve.segment_count()}}, "writhe = " + fmt("%.6f", w));
}

Output cmd_link(const ExperimentConfig& c) {
    OptionReader o(c.options);
    o.only({"curve", "curve2", "backend"});
    const PolylineCurve a = parse_curve(o.child("curve"));
    const PolylineCurve b = parse_curve(o.child("curve2"));
    const BSOptions bo = bs_options(o);
    const double l = linking_number(a, b, bo.backend);
    return json_output("link", c, {{"link", l}}, "link = " + fmt("%.3f", l));
}

Output cmd_bs(const ExperimentConfig& c) {
    OptionReader o(c.options);
    o.only({BS_KEYS});
    const Domain& d = need_domain(c);
    const AnalyticField& f = need_field(c);
    const BSOptions bo = bs_options(o);
    (void)d;
    const SampledField v = sample(grid_of(c), f);
    const CurlInverseReport r = verify_curl_inverse(v, bo);
    json res = {{"residual", r.residual},
                {"evaluated_cells", r.evaluated_cells},
                {"h", r.h},
                {"n_cells", v.size()},
                {"solenoidal_residual", solenoidal_residual(v)}};
    return json_output("bs", c, res, "curl inverse residual = " + fmt("%.6g", r.residual));
}

Output cmd_helicity(const ExperimentConfig& c) {
    OptionReader o(c.options);
    o.only({"method", BS_KEYS});
    need_domain(c);
    const AnalyticField& f = need_field(c);
    const std::string method = o.text("method", "bs");
    require(method == "bs" || method == "physical" || method == "double_integral",
            "options: \"method\" must be \"bs\", \"physical\" or \"double_integral\"");
    const BSOptions bo = bs_options(o);
    const GridPtr g = grid_of(c);
    HelicityReport r;
    if (method == "bs")
        r = helicity_bs(sample(g, f), bo);
    else if (method == "physical")
        r = helicity_physical(f, g);
    else
        r = helicity_double_integral(sample(g, f), bo.backend);
    json res = {{"value", r.value}, {"method", to_string(r.method)}, {"h", r.h}, {"n_cells", r.n_cells}};
    if (!r.curl_path.empty()) res["curl_path"] = r.curl_path;
    return json_output("helicity", c, res, "helicity = " + fmt("%.6g", r.value));
}

Output cmd_delta_h(const ExperimentConfig& c) {
    OptionReader o(c.options);
    o.only({"boundary_nu", "boundary_nv", "gate", "loop_segments", "gauss_nodes", "section_nr", "section_nphi",
            BS_KEYS});
    const Domain& d = need_domain(c);
    const AnalyticField& omega = need_field(c);
    const AnalyticField extra = c.field2.value_or(AnalyticField::zero());
    const int nu = o.integer("boundary_nu", 64), nv = o.integer("boundary_nv", 64);
    require(nu >= 8 && nv >= 8, "options: boundary resolution must be at least 8");
    const double gate = o.number("gate", 5e-2);
    const HKOptions hko = hk_options(o);
    const BSOptions bo = bs_options(o);

    const GridPtr g = grid_of(c);
    const SampledField w = sample(g, omega);
    const SampledField bs = bs_field(w, bo);
    const SampledField ex = sample(g, extra);
    const SampledField u = axpby(1.0, bs, 1.0, ex);
    const FieldRule bs_r = bs_rule(w, bo);
    const FieldRule u_rule = combine({1.0, 1.0}, {bs_r, rule_of(extra)});

    const double vol = delta_h_volume(u, w, bo).value;
    const double surf = delta_h_surface(u_rule, w, boundary_samples(d, nu, nv), bo).value;

    const HKBasis basis = build_hk_basis(d.tori(), hko);
    double fc = 0.0;
    json kappa = json::array(), phi = json::array();
    if (basis.size() > 0) {
        const SampledField rem = axpby(1.0, u, -1.0, bs);
        const FieldRule rem_rule = combine({1.0, -1.0}, {u_rule, bs_r});
        const CurlFreeDecomposition dec = decompose_curlfree(rem, rem_rule, basis, gate);
        const FieldRule om_rule = rule_of(omega);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const double p = flux(om_rule, basis.sections[i]);
            fc += p * dec.kappa[i];
            kappa.push_back(dec.kappa[i]);
            phi.push_back(p);
        }
    }
    const double hbs = l2_inner(w, bs);
    json res = {{"volume", vol}, {"surface", surf}, {"flux_circulation", fc}, {"kappa", kappa},
                {"phi", phi},    {"H_bs", hbs}};
    return json_output("delta-h", c, res,
                       "delta_h volume = " + fmt("%.6g", vol) + ", surface = " + fmt("%.6g", surf) +
                           ", flux-circulation = " + fmt("%.6g", fc));
}

Output cmd_hodge(const ExperimentConfig& c) {
    OptionReader o(c.options);
    o.only({"gate", "gram", "loop_segments", "gauss_nodes", "section_nr", "section_nphi"});
    const Domain& d = need_domain(c);
    const AnalyticField& f = need_field(c);
    const double gate = o.number("gate", 5e-2);
    const bool want_gram = o.integer("gram", 1) != 0;
    const HKOptions hko = hk_options(o);
    require(!d.tori().empty(), "hodge needs a domain with at least one torus");

    const HKBasis basis = build_hk_basis(d.tori(), hko);
    const GridPtr g = grid_of(c);
    const SampledField v = sample(g, f);
    const FieldRule r = rule_of(f);
    const CurlFreeDecomposition dec = decompose_curlfree(v, r, basis, gate);
    const HKCoordinates hk = hk_coordinates(r, basis);
    json res = {{"kappa", dec.kappa},
                {"phi", hk.phi},
                {"remainder_circulations", dec.remainder_circulations},
                {"curl_residual", dec.curl_residual},
                {"basis_fluxes", basis.fluxes}};
    if (want_gram) res["gram"] = gram_check(basis, g);
    std::string s = "kappa =";
    for (double k : dec.kappa) s += " " + fmt("%.6g", k);
    return json_output("hodge", c, res, s);
}

Output cmd_conserve(const ExperimentConfig& c) {
    OptionReader o(c.options);
    o.only({"boundary_nu", "boundary_nv", "section_nr", "section_nphi", "fd_fraction", "curl_step_fraction",
            BS_KEYS});
    const Domain& d = need_domain(c);
    const AnalyticField& f = need_field(c);
    require(c.flow.has_value(), "conserve needs a \"flow\"");
    require(!c.times.empty(), "conserve needs \"times\"");
    SweepOptions so;
    so.bs = bs_options(o);
    so.boundary_nu = o.integer("boundary_nu", so.boundary_nu);
    so.boundary_nv = o.integer("boundary_nv", so.boundary_nv);
    so.section_nr = o.integer("section_nr", so.section_nr);
    so.section_nphi = o.integer("section_nphi", so.section_nphi);
    so.fd_fraction = o.number("fd_fraction", so.fd_fraction);
    so.curl_step_fraction = o.number("curl_step_fraction", so.curl_step_fraction);
    require(so.curl_step_fraction > 0 && so.curl_step_fraction <= 1,
            "options: \"curl_step_fraction\" must lie in (0, 1]");
    require(so.boundary_nu >= 8 && so.boundary_nv >= 8 && so.section_nr >= 8 && so.section_nphi >= 8,
            "options: sample resolutions must be at least 8");
    require(so.fd_fraction > 0, "options: \"fd_fraction\" must be positive");

    const SweepResult sw = conservation_sweep(*c.flow, f, d, grid_of(c), c.times, so);
    std::ostringstream csv;
    csv << "t,H_bs,E,dEdt_formula,dEdt_fd";
    const std::size_t nphi = d.tori().size();
    for (std::size_t i = 0; i < nphi; ++i) csv << ",phi_" << (i + 1);
    csv << '\n';
    double hmin = sw.rows.front().H_bs, hmax = hmin;
    for (const auto& r : sw.rows) {
        csv << g17(r.t) << ',' << g17(r.H_bs) << ',' << g17(r.E) << ',' << g17(r.dEdt_formula) << ','
            << g17(r.dEdt_fd);
        for (double p : r.phi) csv << ',' << g17(p);
        csv << '\n';
        hmin = std::min(hmin, r.H_bs);
        hmax = std::max(hmax, r.H_bs);
    }
    const double h0 = sw.rows.front().H_bs;
    const double drift = h0 != 0.0 ? (hmax - hmin) / std::abs(h0) : hmax - hmin;
    return {csv.str(),
            "conserve: " + std::to_string(sw.rows.size()) + " rows, H_bs drift = " + fmt("%.3g", drift) +
                ", max|J-1| = " + fmt("%.3g", sw.max_abs_J_minus_1),
            "conserve.csv"};
}

Output cmd_mhd_rate(const ExperimentConfig& c) {
    OptionReader o(c.options);
    o.only({"kappa", "dt", "loop_segments", "gauss_nodes", "section_nr", "section_nphi", BS_KEYS});
    const Domain& d = need_domain(c);
    const AnalyticField& b = need_field(c);
    require(c.flow.has_value(), "mhd-rate needs a \"flow\"");
    require(!d.tori().empty(), "mhd-rate needs a domain with at least one torus");
    const std::vector<double> kappa = o.numbers("kappa", std::vector<double>(d.tori().size(), 0.0));
    require(kappa.size() == d.tori().size(), "options: \"kappa\" needs one entry per torus");
    const double dt = o.number("dt", 0.1);
    require(dt > 0, "options: \"dt\" must be positive");
    const HKOptions hko = hk_options(o);
    const BSOptions bo = bs_options(o);

    const HKBasis basis = build_hk_basis(d.tori(), hko);
    const MagneticState st = potential_state(b, grid_of(c), &basis, bo);
    const HmRateCheck r = hm_rate_fd_check(st, *c.flow, GaugeChoice::harmonic(kappa), dt);
    json res = {{"rate_formula", r.rate_formula}, {"rate_fd", r.rate_fd}, {"dt", r.dt}, {"drift", r.drift},
                {"H_M", r.hm}};
    return json_output("mhd-rate", c, res,
                       "rate_formula = " + fmt("%.6g", r.rate_formula) + ", rate_fd = " + fmt("%.6g", r.rate_fd));
}

Output cmd_spheromak(const ExperimentConfig& c) {
    OptionReader o(c.options);
    o.only({"amplitude", BS_KEYS});
    const Domain& d = need_domain(c);
    require(d.kind() == DomainKind::Ball, "spheromak-check needs a ball domain");
    const double b0 = o.number("amplitude", 1.0);
    const BSOptions bo = bs_options(o);
    const Ball ball = std::get<Ball>(d.components().front());

    const Spheromak s = make_spheromak(ball, b0);
    const SampledField f = sample(grid_of(c), s.field);
    const SampledField cf = curl(f);
    const SampledField xf = s.xi * restrict_to(f, cf.grid);
    const double curl_res = l2_norm(axpby(1.0, cf, -1.0, xf)) / l2_norm(xf);
    const double e = field_energy(f);
    const double h = helicity_bs(f, bo).value;
    const double ratio = h / (e / s.xi);
    json res = {{"xi", s.xi}, {"curl_residual", curl_res}, {"H_bs", h}, {"E", e}, {"ratio", ratio}};
    return json_output("spheromak-check", c, res,
                       "xi = " + fmt("%.6f", s.xi) + ", curl residual = " + fmt("%.4g", curl_res) +
                           ", H_bs/(E/xi) = " + fmt("%.4f", ratio));
}

const std::map<std::string, std::function<Output(const ExperimentConfig&)>>& commands() {
    static const std::map<std::string, std::function<Output(const ExperimentConfig&)>> m{
        {"writhe", cmd_writhe},   {"link", cmd_link},        {"bs", cmd_bs},
        {"helicity", cmd_helicity}, {"delta-h", cmd_delta_h}, {"hodge", cmd_hodge},
        {"conserve", cmd_conserve}, {"mhd-rate", cmd_mhd_rate}, {"spheromak-check", cmd_spheromak},
    };
    return m;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Helicity laboratory: Biot-Savart and physical helicities, transport sweeps, MHD rates"};
    app.require_subcommand(1);
    std::string config_path, out_path;
    int threads = 0;
    double h_override = 0.0;
    for (const auto& [name, fn] : commands()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->set_help_flag("--help", "print this help message and exit");
        sub->add_option("--config", config_path, "JSON experiment config")->required();
        sub->add_option("--out", out_path, "output file (JSON, or CSV for conserve)");
        sub->add_option("--threads", threads, "worker threads (default: hardware parallelism)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--h", h_override, "grid spacing override")->check(CLI::PositiveNumber);
    }
    if (argc > 1 && argv[1][0] != '-' && !commands().count(argv[1])) {
        err << "error: unknown subcommand \"" << argv[1] << "\"\n" << app.help();
        return kExitConfig;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitConfig;
    }
    if (threads > 0) omp_set_num_threads(threads);

    const CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    try {
        const ExperimentConfig cfg =
            load_config(config_path, h_override > 0 ? std::optional<double>(h_override) : std::nullopt);
        const Output o = commands().at(name)(cfg);
        const std::string path = out_path.empty() ? o.default_name : out_path;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ConfigError("cannot write output file \"" + path + "\"");
        f << o.body;
        f.close();
        if (!f) throw ConfigError("failed writing output file \"" + path + "\"");
        out << o.summary << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.is_numerical_gate() ? kExitGate : kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace helicity::cli

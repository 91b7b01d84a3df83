// Command-line front end: sampling runs, spectra extraction, analytic
// density curves, goodness-of-fit tests and convergence-bound tables.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "hitrun/analysis.hpp"
#include "hitrun/bodies.hpp"
#include "hitrun/io.hpp"
#include "hitrun/sampler.hpp"

using nlohmann::json;

namespace {

struct BodyFlags {
    std::string body;
    int dim = 2;
    int n = 4;
    int k = 2;
};

void add_body_flags(CLI::App* cmd, BodyFlags& f) {
    cmd->add_option("--body", f.body, "ball|cube|square|simplex|quantum|ppt")->required();
    cmd->add_option("--dim", f.dim, "ambient dimension (ball/cube)");
    cmd->add_option("--n", f.n, "N (simplex vertices / matrix size)");
    cmd->add_option("--k", f.k, "local dimension K (ppt)");
}

json body_descriptor(const BodyFlags& f) {
    if (f.body == "ball") return {{"kind", "ball"}, {"d", f.dim}};
    if (f.body == "cube") return {{"kind", "cube"}, {"d", f.dim}};
    if (f.body == "square") return {{"kind", "cube"}, {"d", 2}};
    if (f.body == "simplex") return {{"kind", "simplex"}, {"n", f.n}};
    if (f.body == "quantum") return {{"kind", "quantum"}, {"n", f.n}};
    if (f.body == "ppt") return {{"kind", "ppt"}, {"k", f.k}};
    throw std::invalid_argument("unknown body '" + f.body + "'");
}

std::string join_args(int argc, char** argv) {
    std::ostringstream os;
    for (int i = 0; i < argc; ++i) os << (i ? " " : "") << argv[i];
    return os.str();
}

std::vector<hitrun::DensityMatrix> coords_to_states(const hitrun::TracelessBasis& basis,
                                                    const std::vector<hitrun::Rvec>& pts) {
    std::vector<hitrun::DensityMatrix> states;
    states.reserve(pts.size());
    for (const auto& p : pts) states.emplace_back(basis.coords_to_matrix(p));
    return states;
}

int run_sample(const std::string& cmdline, const BodyFlags& bf, long steps,
               long burnin, long thin, std::uint64_t seed, int chains,
               const std::string& out, long checkpoint_every) {
    const json desc = body_descriptor(bf);
    const auto body = hitrun::make_body(desc);

    hitrun::ChainConfig cfg;
    cfg.steps = steps;
    cfg.burn_in = burnin >= 0 ? burnin : hitrun::default_burn_in(body->dim());
    cfg.thin = thin;
    cfg.seed = seed;
    cfg.validate();

    std::vector<hitrun::Rvec> samples;
    if (chains > 1) {
        samples = hitrun::run_chains_parallel(*body, cfg, chains);
    } else if (checkpoint_every > 0) {
        hitrun::Chain chain(*body, cfg);
        while (!chain.done()) {
            if (chain.advance()) samples.push_back(chain.position());
            if (chain.step_index() % checkpoint_every == 0)
                hitrun::io::write_json(out + ".checkpoint.json", chain.checkpoint());
        }
    } else {
        samples = hitrun::run_chain(*body, cfg);
    }

    const std::string kind = desc.at("kind").get<std::string>();
    if (kind == "quantum" || kind == "ppt") {
        const auto& basis = (kind == "quantum")
            ? static_cast<const hitrun::QuantumBody&>(*body).basis()
            : static_cast<const hitrun::PptBody&>(*body).basis();
        hitrun::io::write_states_csv(out, coords_to_states(basis, samples));
    } else {
        hitrun::io::write_points_csv(out, samples);
    }

    json cj = {{"steps", cfg.steps}, {"burn_in", cfg.burn_in}, {"thin", cfg.thin},
               {"seed", cfg.seed}, {"chains", chains}};
    hitrun::io::write_json(out + ".manifest.json",
                           hitrun::io::make_manifest(cmdline, desc, cj, {out}));
    std::cout << "wrote " << samples.size() << " samples to " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniform sampling of convex bodies and PPT quantum states"};
    app.require_subcommand(1);
    const std::string cmdline = join_args(argc, argv);

    // --- sample ---
    auto* sample = app.add_subcommand("sample", "run a hit-and-run sampling campaign");
    BodyFlags sbf;
    long steps = 0, burnin = -1, thin = 1, checkpoint_every = 0;
    std::uint64_t seed = 0;
    int chains = 1;
    std::string out;
    add_body_flags(sample, sbf);
    sample->add_option("--steps", steps)->required();
    sample->add_option("--burnin", burnin, "default: 10*d");
    sample->add_option("--thin", thin);
    sample->add_option("--seed", seed);
    sample->add_option("--chains", chains);
    sample->add_option("--out", out)->required();
    sample->add_option("--checkpoint-every", checkpoint_every);

    // --- spectra ---
    auto* spectra = app.add_subcommand("spectra", "eigenvalues of sampled states");
    std::string sp_in, sp_out, sp_transpose = "none", sp_rescale = "none";
    int sp_k = 0;
    spectra->add_option("--in", sp_in)->required();
    spectra->add_option("--out", sp_out)->required();
    spectra->add_option("--transpose", sp_transpose, "none|partial");
    spectra->add_option("--rescale", sp_rescale, "none|byN");
    spectra->add_option("--k", sp_k, "local dimension (required for --transpose partial)");

    // --- ginibre ---
    auto* ginibre = app.add_subcommand("ginibre", "Hilbert-Schmidt random states");
    int g_n = 4, g_k = 0;
    long g_samples = 0;
    std::uint64_t g_seed = 0;
    std::string g_out, g_filter = "all";
    ginibre->add_option("--n", g_n)->required();
    ginibre->add_option("--samples", g_samples)->required();
    ginibre->add_option("--seed", g_seed);
    ginibre->add_option("--out", g_out)->required();
    ginibre->add_option("--filter", g_filter, "all|ppt|npt");
    ginibre->add_option("--k", g_k, "local dimension (required for filtering)");

    // --- density ---
    auto* density = app.add_subcommand("density", "analytic level-density curves");
    std::string d_law, d_grid = "0:4:401", d_out, d_coeffs;
    double d_z = 0.0;
    int d_n = 4;
    long d_samples = 100000;
    std::uint64_t d_seed = 0;
    density->add_option("--law", d_law, "mp|ssc|g|hz|pn")->required();
    density->add_option("--z", d_z, "hard-wall position (hz)");
    density->add_option("--n", d_n, "matrix size (pn)");
    density->add_option("--samples", d_samples, "Monte Carlo draws (pn)");
    density->add_option("--seed", d_seed);
    density->add_option("--coeffs", d_coeffs, "JSON coefficient table a_2..a_2N (pn)");
    density->add_option("--grid", d_grid, "min:max:count");
    density->add_option("--out", d_out)->required();

    // --- test ---
    auto* test = app.add_subcommand("test", "goodness-of-fit tests");
    std::string t_test, t_in, t_in2, t_domain = "square", t_out;
    double t_bin_side = 0.05, t_confidence = 0.999;
    test->add_option("--test", t_test, "chi2-uniform|ks")->required();
    test->add_option("--in", t_in)->required();
    test->add_option("--in2", t_in2, "second sample (ks)");
    test->add_option("--domain", t_domain, "square|disk (chi2)");
    test->add_option("--bin-side", t_bin_side);
    test->add_option("--confidence", t_confidence);
    test->add_option("--out", t_out, "report JSON (default: stdout)");

    // --- theta ---
    auto* theta = app.add_subcommand("theta", "convergence-rate bound");
    double th_r = 0.0, th_R = 0.0, th_eps = 0.0;
    long th_steps = 0;
    long th_d = 0;
    BodyFlags tbf;
    theta->add_option("--r", th_r, "inradius");
    theta->add_option("--R", th_R, "outradius");
    theta->add_option("--d", th_d, "dimension");
    theta->add_option("--n-steps", th_steps, "evaluate the TV bound after n steps");
    theta->add_option("--eps", th_eps, "target TV distance (prints required steps)");
    theta->add_option("--body", tbf.body, "derive r,R,d from a body");
    theta->add_option("--dim", tbf.dim);
    theta->add_option("--n", tbf.n);
    theta->add_option("--k", tbf.k);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sample)
            return run_sample(cmdline, sbf, steps, burnin, thin, seed, chains, out,
                              checkpoint_every);

        if (*spectra) {
            const auto states = hitrun::io::read_states_csv(sp_in);
            const auto transform = sp_transpose == "partial"
                ? hitrun::Transform::partial_transpose : hitrun::Transform::identity;
            if (sp_transpose != "partial" && sp_transpose != "none")
                throw std::invalid_argument("--transpose must be none or partial");
            const auto rescale = sp_rescale == "byN"
                ? hitrun::Rescale::by_n : hitrun::Rescale::none;
            std::optional<hitrun::BipartiteShape> shape;
            if (transform == hitrun::Transform::partial_transpose) {
                if (sp_k < 2) throw std::invalid_argument("--k required for --transpose partial");
                shape.emplace(sp_k);
            }
            const auto ss = hitrun::spectral_statistics(states, rescale, transform, shape);
            std::vector<std::tuple<long, int, double>> rows;
            rows.reserve(ss.values.size());
            for (std::size_t i = 0; i < ss.values.size(); ++i)
                rows.emplace_back(static_cast<long>(i) / ss.dim,
                                  static_cast<int>(i) % ss.dim, ss.values[i]);
            hitrun::io::write_spectra_csv(sp_out, rows);
            std::cout << "wrote " << rows.size() << " eigenvalues to " << sp_out << "\n";
            return 0;
        }

        if (*ginibre) {
            if (g_filter != "all" && g_filter != "ppt" && g_filter != "npt")
                throw std::invalid_argument("--filter must be all, ppt or npt");
            std::optional<hitrun::BipartiteShape> shape;
            if (g_filter != "all") {
                if (g_k < 2) throw std::invalid_argument("--k required for filtering");
                shape.emplace(g_k);
                if (shape->n != g_n) throw std::invalid_argument("--n must equal k*k");
            }
            hitrun::Rng rng(g_seed);
            std::vector<hitrun::DensityMatrix> kept;
            long accepted = 0;
            for (long s = 0; s < g_samples; ++s) {
                auto rho = hitrun::wishart_state(hitrun::ginibre_sample(g_n, rng));
                bool keep = true;
                if (shape) {
                    const auto pt = hitrun::partial_transpose(rho.mat(), *shape);
                    const bool is_ppt =
                        hitrun::eigenvalues_hermitian(pt)(0) >= -hitrun::kPsdTol;
                    keep = (g_filter == "ppt") == is_ppt;
                }
                if (keep) {
                    ++accepted;
                    kept.push_back(std::move(rho));
                }
            }
            hitrun::io::write_states_csv(g_out, kept);
            json cj = {{"n", g_n}, {"samples", g_samples}, {"seed", g_seed},
                       {"filter", g_filter}, {"accepted", accepted}};
            hitrun::io::write_json(g_out + ".manifest.json",
                                   hitrun::io::make_manifest(cmdline, {{"kind", "ginibre"}, {"n", g_n}},
                                                             cj, {g_out}));
            std::cout << "accepted " << accepted << "/" << g_samples
                      << " (fraction " << static_cast<double>(accepted) / g_samples
                      << ")\n";
            return 0;
        }

        if (*density) {
            double lo, hi;
            long count;
            {
                char c1, c2;
                std::istringstream is(d_grid);
                if (!(is >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' ||
                    count < 2 || !(hi > lo))
                    throw std::invalid_argument("--grid must be min:max:count");
            }
            std::function<double(double)> f;
            if (d_law == "mp") f = hitrun::mp_density;
            else if (d_law == "ssc") f = hitrun::ssc_density;
            else if (d_law == "g") f = hitrun::ppt_density;
            else if (d_law == "hz") f = [&](double y) { return hitrun::dm_wall_density(y, d_z); };
            else if (d_law == "pn") {
                if (!d_coeffs.empty()) {
                    const auto table = hitrun::io::read_json(d_coeffs).get<std::vector<double>>();
                    f = hitrun::FiniteNDensity::from_coefficients(d_n, table);
                } else {
                    f = hitrun::FiniteNDensity::monte_carlo(d_n, d_samples, d_seed);
                }
            } else throw std::invalid_argument("unknown law '" + d_law + "'");
            std::vector<std::pair<double, double>> rows;
            rows.reserve(count);
            for (long i = 0; i < count; ++i) {
                const double x = lo + (hi - lo) * i / (count - 1);
                rows.emplace_back(x, f(x));
            }
            hitrun::io::write_curve_csv(d_out, rows);
            std::cout << "wrote " << rows.size() << " rows to " << d_out << "\n";
            return 0;
        }

        if (*test) {
            json report;
            if (t_test == "chi2-uniform") {
                const auto pts = hitrun::io::read_points_csv(t_in);
                std::vector<Eigen::Vector2d> p2;
                p2.reserve(pts.size());
                for (const auto& p : pts) {
                    if (p.size() != 2)
                        throw std::invalid_argument("chi2-uniform expects 2-D points");
                    p2.emplace_back(p(0), p(1));
                }
                const auto domain = t_domain == "disk"
                    ? hitrun::UniformDomain::unit_disk : hitrun::UniformDomain::unit_square;
                const auto r = hitrun::chi2_uniformity_test(p2, t_bin_side, t_confidence, domain);
                report = {{"test", "chi2-uniform"}, {"statistic", r.statistic},
                          {"dof", r.dof}, {"p_value", r.p_value}, {"reject", r.reject},
                          {"bin_side", t_bin_side}, {"confidence", t_confidence},
                          {"domain", t_domain}};
            } else if (t_test == "ks") {
                if (t_in2.empty()) throw std::invalid_argument("ks needs --in2");
                const auto r = hitrun::ks_two_sample(hitrun::io::read_spectra_values(t_in),
                                                     hitrun::io::read_spectra_values(t_in2));
                report = {{"test", "ks"}, {"statistic", r.statistic}, {"p_value", r.p_value}};
            } else {
                throw std::invalid_argument("unknown test '" + t_test + "'");
            }
            if (t_out.empty()) std::cout << report.dump(2) << "\n";
            else hitrun::io::write_json(t_out, report);
            return 0;
        }

        if (*theta) {
            double r = th_r, R = th_R;
            long d = th_d;
            if (!tbf.body.empty()) {
                const auto body = hitrun::make_body(body_descriptor(tbf));
                const auto br = body->radii();
                r = br.inradius;
                R = br.outradius;
                d = body->dim();
            }
            const long double th = hitrun::theta_bound(r, R, d);
            json out_j = {{"r", r}, {"R", R}, {"d", d},
                          {"theta", static_cast<double>(th)}};
            out_j["tv_bound"] = hitrun::tv_bound(th, th_steps);
            if (th_eps > 0.0) out_j["steps_for_eps"] = hitrun::steps_for_tv(th, th_eps);
            std::cout << out_j.dump(2) << "\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

// Command-line front end: batch runs, CSV/binary outputs, acceptance suite.
// Every run writes its resolved configuration next to its outputs so a run
// directory is self-describing and reproducible byte for byte.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "tilab/evolution.hpp"
#include "tilab/grenier.hpp"
#include "tilab/instability.hpp"
#include "tilab/io.hpp"
#include "tilab/kp_spectrum.hpp"
#include "tilab/nls_spectrum.hpp"
#include "tilab/solitons.hpp"
#include "tilab/verify.hpp"

using namespace tilab;
using nlohmann::json;

namespace {

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y%m%dT%H%M%S");
    return os.str();
}

struct RunDir {
    std::string root;
    explicit RunDir(const std::string& out, const std::string& command) {
        root = out.empty() ? io::join_path("runs", timestamp() + "-" + command) : out;
        io::ensure_dir(root);
        io::ensure_dir(io::join_path(root, "tables"));
        io::ensure_dir(io::join_path(root, "fields"));
    }
    std::string table(const std::string& leaf) const {
        return io::join_path(io::join_path(root, "tables"), leaf);
    }
    std::string field(const std::string& leaf) const {
        return io::join_path(io::join_path(root, "fields"), leaf);
    }
    void write_config(const std::string& resolved) const {
        std::ofstream os(io::join_path(root, "config.ini"));
        os << resolved;
    }
    void write_report(const json& j) const {
        std::ofstream os(io::join_path(root, "report.json"));
        os << j.dump(2) << "\n";
    }
    void write_error(const std::string& name, const std::string& message) const {
        json j;
        j["error"] = name;
        j["message"] = message;
        std::ofstream os(io::join_path(root, "error.json"));
        os << j.dump(2) << "\n";
    }
};

Equation parse_equation(const std::string& s) {
    if (s == "kp") return Equation::KpMoving;
    if (s == "kp-lab") return Equation::KpLab;
    if (s == "nls") return Equation::Nls;
    throw ConfigError("equation must be kp, kp-lab or nls (got '" + s + "')");
}

Scheme parse_scheme(const std::string& s) {
    if (s == "exponential-rk4") return Scheme::ExponentialRk4;
    if (s == "strang-split") return Scheme::StrangSplit;
    throw ConfigError("scheme must be exponential-rk4 or strang-split (got '" + s + "')");
}

Field seed_soliton_plus_mode(const Grid2D& g, Equation eq, double delta, double* sigma0,
                             long* k0, double* cs) {
    const bool nls = eq == Equation::Nls;
    Field Q = soliton_field(g, SolitonSpec(nls ? Family::Nls : Family::Kdv, 1.0));
    Field pert(g, nls ? FieldKind::Complex : FieldKind::Real);
    if (!nls) {
        UnstableModeKP mode = most_unstable(g.L, g.xline());
        *sigma0 = mode.sigma_discrete;
        *k0 = mode.point.k;
        for (std::size_t i = 0; i < g.Nx; ++i)
            for (std::size_t j = 0; j < g.Ny; ++j) {
                const cplx ph = std::polar(1.0, static_cast<double>(mode.point.k) * g.y(j) / g.L);
                pert.values[i * g.Ny + j] = 2.0 * (mode.V.values[i] * ph).real();
            }
    } else {
        UnstableModeNLS mode = most_unstable_nls(g.L, g.xline());
        *sigma0 = mode.sigma.real();
        *k0 = mode.k;
        for (std::size_t i = 0; i < g.Nx; ++i) {
            const cplx v = mode.V1.values[i] + cplx(0.0, 1.0) * mode.V2.values[i];
            for (std::size_t j = 0; j < g.Ny; ++j)
                pert.values[i * g.Ny + j] =
                    2.0 * std::cos(static_cast<double>(mode.k) * g.y(j) / g.L) * v;
        }
    }
    *cs = norm_l2(pert);
    return add(Q, scale(pert, delta));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tilab: transverse-instability laboratory for KP-I and cubic NLS solitary waves"};
    app.set_config("--config", "", "ini-style key = value configuration file");
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand
    app.option_defaults()->always_capture_default();

    std::string out_dir;
    bool emit_config = false;
    int verbosity = 1;
    app.add_option("--out", out_dir, "output directory (default runs/<timestamp>-<command>)");
    app.add_flag("--emit-config", emit_config, "print the resolved configuration and exit")
        ->configurable(false);
    app.add_option("-v,--verbosity", verbosity, "0 quiet, 1 normal");

    // ---- spectrum ----
    auto* sp = app.add_subcommand("spectrum", "KP-I transverse dispersion table for a given L");
    sp->fallthrough();
    double sp_L = 0.0;
    std::size_t sp_nx = 1024;
    double sp_X = 40.0;
    bool sp_profile = false;
    sp->add_option("--L", sp_L, "transverse period parameter")->required();
    sp->add_option("--Nx", sp_nx, "x samples for the mode profile");
    sp->add_option("--X", sp_X, "x half box");
    sp->add_flag("--profile", sp_profile, "emit the most unstable mode profile");
    bool sp_resolvent = false;
    double sp_gamma_margin = 0.1;
    sp->add_flag("--resolvent-sweep", sp_resolvent,
                 "emit resolvent ratios over a tau sweep at gamma0 = sigma0 + margin");
    sp->add_option("--gamma-margin", sp_gamma_margin, "gamma0 - sigma0 for the sweep");

    // ---- nls-spectrum ----
    auto* np = app.add_subcommand("nls-spectrum", "NLS transverse eigenvalue scan for a given L");
    np->fallthrough();
    double np_L = 0.0;
    std::size_t np_nx = 256;
    double np_X = 40.0;
    bool np_bif = false, np_cutoff = false;
    np->add_option("--L", np_L, "transverse period parameter")->required();
    np->add_option("--Nx", np_nx, "x samples");
    np->add_option("--X", np_X, "x half box");
    np->add_flag("--bifurcation", np_bif, "also run the small-eps bifurcation fit");
    np->add_flag("--measure-cutoff", np_cutoff, "also bisect the eps cutoff / report L0");

    // ---- evolve ----
    auto* ev = app.add_subcommand("evolve", "evolve soliton + delta * mode and record diagnostics");
    ev->fallthrough();
    std::string ev_eq = "kp", ev_scheme;
    double ev_L = 4.0, ev_delta = 1e-4, ev_tend = 10.0, ev_dt = 0.0;
    std::size_t ev_nx = 512, ev_ny = 32, ev_stride = 25, ev_snapshots = 0;
    double ev_X = 40.0;
    ev->add_option("--equation", ev_eq, "kp, kp-lab or nls");
    ev->add_option("--L", ev_L, "transverse period parameter");
    ev->add_option("--delta", ev_delta, "seed amplitude");
    ev->add_option("--t-end", ev_tend, "final time");
    ev->add_option("--dt", ev_dt, "time step (0 = per-equation default)");
    ev->add_option("--Nx", ev_nx, "x samples");
    ev->add_option("--Ny", ev_ny, "y samples");
    ev->add_option("--X", ev_X, "x half box");
    ev->add_option("--scheme", ev_scheme, "exponential-rk4 or strang-split");
    ev->add_option("--stride", ev_stride, "sampling stride in steps");
    ev->add_option("--snapshots", ev_snapshots, "number of field snapshots to write");

    // ---- expand ----
    auto* ex = app.add_subcommand("expand", "build the high-order approximate solution");
    ex->fallthrough();
    std::string ex_eq = "kp";
    double ex_L = 4.0, ex_delta = 1e-3, ex_tend = 15.0, ex_dt = 0.02;
    int ex_M = 3;
    std::size_t ex_nx = 256;
    double ex_X = 40.0;
    ex->add_option("--equation", ex_eq, "kp or nls");
    ex->add_option("--L", ex_L, "transverse period parameter");
    ex->add_option("--M", ex_M, "expansion order");
    ex->add_option("--delta", ex_delta, "amplitude for the residual report");
    ex->add_option("--t-end", ex_tend, "time horizon");
    ex->add_option("--dt", ex_dt, "iterate time step");
    ex->add_option("--Nx", ex_nx, "x samples");
    ex->add_option("--X", ex_X, "x half box");

    // ---- instability ----
    auto* in = app.add_subcommand("instability", "single escape-time experiment");
    in->fallthrough();
    std::string in_eq = "kp";
    double in_L = 4.0, in_delta = 1e-4, in_eta = 0.0, in_tmax = 90.0, in_dt = 0.0, in_X = 40.0;
    int in_M = 0;
    std::size_t in_nx = 512, in_ny = 32, in_stride = 25;
    bool in_rem = false;
    in->add_option("--equation", in_eq, "kp or nls");
    in->add_option("--L", in_L, "transverse period parameter");
    in->add_option("--delta", in_delta, "seed amplitude");
    in->add_option("--M", in_M, "expansion order for remainder tracking");
    in->add_option("--eta", in_eta, "escape threshold (0 = 5% of |Q|)");
    in->add_option("--t-max", in_tmax, "time budget");
    in->add_option("--dt", in_dt, "time step (0 = default)");
    in->add_option("--Nx", in_nx, "x samples");
    in->add_option("--Ny", in_ny, "y samples");
    in->add_option("--X", in_X, "x half box");
    in->add_option("--stride", in_stride, "sampling stride in steps");
    in->add_flag("--track-remainder", in_rem, "compare against the assembled u_ap");

    // ---- sweep ----
    auto* sw = app.add_subcommand("sweep", "delta sweep with escape-time scaling fit");
    sw->fallthrough();
    std::string sw_eq = "kp";
    double sw_L = 4.0, sw_eta = 0.0, sw_tmax = 90.0, sw_dt = 0.0, sw_X = 40.0;
    std::size_t sw_nx = 512, sw_ny = 32, sw_stride = 25;
    std::string sw_deltas_str = "1e-3,3e-4,1e-4,3e-5,1e-5";
    sw->add_option("--equation", sw_eq, "kp or nls");
    sw->add_option("--L", sw_L, "transverse period parameter");
    sw->add_option("--deltas", sw_deltas_str, "comma-separated seed amplitudes");
    sw->add_option("--eta", sw_eta, "escape threshold (0 = 5% of |Q|)");
    sw->add_option("--t-max", sw_tmax, "time budget per run");
    sw->add_option("--dt", sw_dt, "time step (0 = default)");
    sw->add_option("--Nx", sw_nx, "x samples");
    sw->add_option("--Ny", sw_ny, "y samples");
    sw->add_option("--X", sw_X, "x half box");
    sw->add_option("--stride", sw_stride, "sampling stride in steps");

    // ---- verify ----
    auto* vf = app.add_subcommand("verify", "run the acceptance suite");
    vf->fallthrough();
    bool vf_quick = false;
    vf->add_flag("--quick", vf_quick, "fast algebra/spectra tier only");

    CLI11_PARSE(app, argc, argv);
    const std::string resolved = app.config_to_str(true, true);
    if (emit_config) {
        std::cout << resolved;
        return 0;
    }

    auto default_dt = [](Equation eq, double requested) {
        if (requested > 0.0) return requested;
        return eq == Equation::Nls ? 1e-3 : 0.0075;
    };

    try {
        if (*vf) {
            auto results = run_acceptance(vf_quick, std::cout);
            return all_passed(results) ? 0 : 1;
        }

        if (*sp) {
            RunDir dir(out_dir, "spectrum");
            dir.write_config(resolved);
            auto modes = admissible_modes(sp_L);
            if (modes.empty()) {
                dir.write_error("NoUnstableMode",
                                "no unstable transverse mode below L = 4/sqrt(3)");
                std::cerr << "error: NoUnstableMode (L=" << sp_L << " <= 4/sqrt(3))\n";
                return 3;
            }
            io::CsvTable t;
            t.name = "kp-dispersion";
            t.columns = {"k", "mu", "sigma", "eta", "lambda"};
            if (verbosity > 0) std::cout << "k    mu            sigma         eta\n";
            for (const auto& m : modes) {
                t.rows.push_back({static_cast<double>(m.k), m.mu, m.sigma, m.eta, m.lambda});
                if (verbosity > 0)
                    std::cout << m.k << "    " << std::setprecision(10) << m.mu << "  " << m.sigma
                              << "  " << m.eta << "\n";
            }
            io::write_csv(dir.table("dispersion.csv"), t);
            json rep;
            const DispersionPoint best = most_unstable_point(sp_L);
            rep["L"] = sp_L;
            rep["k0"] = best.k;
            rep["sigma0"] = best.sigma;
            rep["mu0"] = best.mu;
            if (sp_profile) {
                UnstableModeKP mode = most_unstable(sp_L, Grid1D(sp_nx, sp_X));
                rep["sigma0_discrete"] = mode.sigma_discrete;
                rep["eigen_residual"] = mode.residual;
                io::CsvTable pt;
                pt.name = "kp-mode-profile";
                pt.columns = {"x", "V"};
                for (std::size_t i = 0; i < sp_nx; ++i)
                    pt.rows.push_back({mode.V.grid.x(i), mode.V.values[i].real()});
                io::write_csv(dir.table("mode_profile.csv"), pt);
            }
            if (sp_resolvent) {
                const Grid1D g(sp_nx, sp_X);
                const double j = static_cast<double>(best.k) / sp_L;
                const double gamma0 = best.sigma + sp_gamma_margin;
                Profile1D H = Profile1D::sample(g, best.k, [](double x) {
                    return cplx(std::exp(-x * x / 36.0) * (1.0 + 0.3 * std::sin(0.7 * x)),
                                0.2 * std::exp(-x * x / 50.0) * std::cos(0.4 * x));
                });
                io::CsvTable rt;
                rt.name = "resolvent-sweep";
                rt.columns = {"tau", "ratio_s0", "ratio_s1", "identity_residual"};
                for (double tau : {0.0, 1.0, 3.0, 10.0, 30.0, 100.0}) {
                    ResolventSolution r = resolvent_solve(j, gamma0, tau, H);
                    rt.rows.push_back({tau, r.ratio_s0, r.ratio_s1, r.identity_residual});
                }
                io::write_csv(dir.table("resolvent_sweep.csv"), rt);
            }
            dir.write_report(rep);
            return 0;
        }

        if (*np) {
            RunDir dir(out_dir, "nls-spectrum");
            dir.write_config(resolved);
            const Grid1D g(np_nx, np_X);
            json rep;
            rep["L"] = np_L;
            io::CsvTable t;
            t.name = "nls-sigma";
            t.columns = {"k", "eps", "sigma"};
            try {
                UnstableModeNLS best = most_unstable_nls(np_L, g);
                rep["k0"] = best.k;
                rep["sigma0"] = best.sigma.real();
                const double cutoff = measure_epsilon_cutoff(g);
                for (long k = 1; static_cast<double>(k) / np_L <= cutoff; ++k) {
                    auto s = sigma_of_epsilon(static_cast<double>(k) / np_L, g);
                    if (s)
                        t.rows.push_back(
                            {static_cast<double>(k), static_cast<double>(k) / np_L, *s});
                }
                io::write_csv(dir.table("sigma_of_k.csv"), t);
                if (verbosity > 0)
                    std::cout << "k0 = " << best.k << ", sigma0 = " << std::setprecision(10)
                              << best.sigma.real() << "\n";
            } catch (const NoUnstableMode& e) {
                dir.write_error("NoUnstableMode", e.what());
                std::cerr << "error: " << e.what() << "\n";
                return 3;
            }
            if (np_cutoff) {
                rep["eps_cutoff"] = measure_epsilon_cutoff(g);
                rep["L0_measured"] = measure_L0(g);
            }
            if (np_bif) {
                BifurcationReport b = bifurcation_check(g);
                rep["theta"] = b.theta;
                rep["omega1_unstable"] = b.omega1_unstable;
                rep["omega1_stable_imag"] = b.omega1_stable_imag;
            }
            dir.write_report(rep);
            return 0;
        }

        if (*ev) {
            RunDir dir(out_dir, "evolve");
            dir.write_config(resolved);
            const Equation eq = parse_equation(ev_eq);
            Grid2D g(ev_nx, ev_ny, ev_X, ev_L);
            double sigma0 = 0.0, cs = 0.0;
            long k0 = 0;
            Field u0 = seed_soliton_plus_mode(g, eq, ev_delta, &sigma0, &k0, &cs);
            IntegratorConfig cfg;
            cfg.dt = default_dt(eq, ev_dt);
            cfg.t_end = ev_tend;
            cfg.sample_stride = ev_stride;
            if (!ev_scheme.empty())
                cfg.scheme = parse_scheme(ev_scheme);
            else if (eq == Equation::Nls)
                cfg.scheme = Scheme::StrangSplit;
            if (eq == Equation::Nls && cfg.scheme == Scheme::StrangSplit) cfg.dealias = false;

            io::CsvTable t;
            t.name = "diagnostics";
            t.columns = {"t", "l2", "mass", "hamiltonian", "distance"};
            const bool nls = eq == Equation::Nls;
            std::size_t snap = 0;
            const std::size_t nsamples =
                static_cast<std::size_t>(ev_tend / (cfg.dt * ev_stride)) + 1;
            const std::size_t snap_every =
                ev_snapshots > 0 ? std::max<std::size_t>(1, nsamples / ev_snapshots) : 0;
            std::size_t sample_idx = 0;
            EvolveCallbacks cb;
            cb.on_sample = [&](double tt, const Field& u) {
                const double dist =
                    nls ? orbital_distance_nls(u).distance : orbital_distance_kp(u).distance;
                t.rows.push_back({tt, norm_l2(u), nls ? nls_mass(u) : kp_mass(u),
                                  nls ? nls_hamiltonian(u) : 0.0, dist});
                if (snap_every && sample_idx % snap_every == 0) {
                    std::ostringstream leaf;
                    leaf << "snap_" << std::setw(5) << std::setfill('0') << snap++ << ".bin";
                    io::write_field(dir.field(leaf.str()), u);
                }
                ++sample_idx;
                return false;
            };
            Trajectory tr = evolve(u0, eq, cfg, cb);
            io::write_csv(dir.table("diagnostics.csv"), t);
            io::write_field(dir.field("final.bin"), tr.final_field);
            io::write_slice_csv(dir.table("final_slice_y0.csv"), tr.final_field, 0);
            json rep;
            rep["equation"] = ev_eq;
            rep["sigma0"] = sigma0;
            rep["k0"] = k0;
            rep["c_s"] = cs;
            rep["t_final"] = tr.t_final;
            dir.write_report(rep);
            if (verbosity > 0) std::cout << "evolved to t = " << tr.t_final << "\n";
            return 0;
        }

        if (*ex) {
            RunDir dir(out_dir, "expand");
            dir.write_config(resolved);
            const Equation eq = parse_equation(ex_eq);
            const Grid1D g(ex_nx, ex_X);
            GrenierExpansion e = build_expansion(eq, ex_L, ex_M, ex_delta, g, ex_tend, ex_dt);
            io::CsvTable t;
            t.name = "iterate-norms";
            t.columns = {"t", "order", "mode", "l2"};
            for (std::size_t i = 0; i < e.times.size(); i += 5)
                for (const Iterate& it : e.iterates)
                    for (long m : it.modes) {
                        double s = 0.0;
                        for (const cplx& v : it.at(m, i)) s += std::norm(v);
                        t.rows.push_back({e.times[i], static_cast<double>(it.order),
                                          static_cast<double>(m), std::sqrt(s * g.dx())});
                    }
            io::write_csv(dir.table("iterate_norms.csv"), t);

            io::CsvTable r;
            r.name = "residual";
            r.columns = {"t", "F_l2"};
            for (std::size_t i = 0; i < e.times.size(); i += 25)
                r.rows.push_back({e.times[i], residual_l2(e, i)});
            io::write_csv(dir.table("residual.csv"), r);

            json rep;
            rep["equation"] = ex_eq;
            rep["sigma0"] = e.sigma0;
            rep["k0"] = e.k0;
            rep["M"] = e.M;
            rep["delta"] = e.delta;
            dir.write_report(rep);
            if (verbosity > 0)
                std::cout << "expansion built: k0 = " << e.k0 << ", sigma0 = " << e.sigma0 << "\n";
            return 0;
        }

        if (*in) {
            RunDir dir(out_dir, "instability");
            dir.write_config(resolved);
            ExperimentSpec spec;
            spec.equation = parse_equation(in_eq);
            spec.L = in_L;
            spec.delta = in_delta;
            spec.M = in_M;
            spec.eta_threshold = in_eta;
            spec.t_max = in_tmax;
            spec.Nx = in_nx;
            spec.Ny = in_ny;
            spec.X = in_X;
            spec.integrator.dt = default_dt(spec.equation, in_dt);
            spec.integrator.sample_stride = in_stride;
            if (spec.equation == Equation::Nls) {
                spec.integrator.scheme = Scheme::StrangSplit;
                spec.integrator.dealias = false;
            }
            spec.track_remainder = in_rem;
            EscapeReport rep = run_experiment(spec);

            io::CsvTable t;
            t.name = "distance-series";
            t.columns = {"t", "distance", "pi_norm"};
            for (std::size_t i = 0; i < rep.t.size(); ++i)
                t.rows.push_back({rep.t[i], rep.distance[i], rep.pi_norm[i]});
            io::write_csv(dir.table("distance.csv"), t);
            if (!rep.remainder_t.empty()) {
                io::CsvTable w;
                w.name = "remainder-series";
                w.columns = {"t", "w_l2"};
                for (std::size_t i = 0; i < rep.remainder_t.size(); ++i)
                    w.rows.push_back({rep.remainder_t[i], rep.remainder_norm[i]});
                io::write_csv(dir.table("remainder.csv"), w);
            }
            json j;
            j["escaped"] = rep.escaped;
            j["escape_not_reached"] = !rep.escaped;
            j["T_measured"] = rep.T_measured;
            j["sigma0"] = rep.sigma0;
            j["k0"] = rep.k0;
            j["c_s"] = rep.c_s;
            j["eta"] = rep.eta;
            j["delta"] = rep.delta;
            dir.write_report(j);
            if (verbosity > 0)
                std::cout << (rep.escaped ? "escaped at T = " : "no escape by t_max; t = ")
                          << rep.T_measured << "\n";
            return 0;
        }

        if (*sw) {
            RunDir dir(out_dir, "sweep");
            dir.write_config(resolved);
            ExperimentSpec spec;
            spec.equation = parse_equation(sw_eq);
            spec.L = sw_L;
            spec.eta_threshold = sw_eta;
            spec.t_max = sw_tmax;
            spec.Nx = sw_nx;
            spec.Ny = sw_ny;
            spec.X = sw_X;
            spec.integrator.dt = default_dt(spec.equation, sw_dt);
            spec.integrator.sample_stride = sw_stride;
            if (spec.equation == Equation::Nls) {
                spec.integrator.scheme = Scheme::StrangSplit;
                spec.integrator.dealias = false;
            }
            std::vector<double> sw_deltas;
            {
                std::stringstream ss(sw_deltas_str);
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty()) sw_deltas.push_back(std::stod(item));
                if (sw_deltas.size() < 2) throw ConfigError("deltas: need at least two values");
            }
            ScalingFit fit = scaling_fit(spec, sw_deltas);

            io::CsvTable t;
            t.name = "escape-times";
            t.columns = {"delta", "ln_inv_delta", "T_measured", "T_predicted"};
            for (std::size_t i = 0; i < fit.deltas.size(); ++i)
                t.rows.push_back({fit.deltas[i], std::log(1.0 / fit.deltas[i]),
                                  fit.reports[i].T_measured, fit.reports[i].T_predicted});
            io::write_csv(dir.table("escape_times.csv"), t);
            io::CsvTable p1;
            p1.name = "T-vs-logdelta";
            p1.columns = {"ln_inv_delta", "T"};
            for (std::size_t i = 0; i < fit.deltas.size(); ++i)
                p1.rows.push_back({std::log(1.0 / fit.deltas[i]), fit.reports[i].T_measured});
            io::write_csv(dir.table("T_vs_logdelta.csv"), p1);
            for (std::size_t i = 0; i < fit.reports.size(); ++i) {
                io::CsvTable ds;
                ds.name = "distance-series";
                ds.columns = {"t", "distance"};
                for (std::size_t p = 0; p < fit.reports[i].t.size(); ++p)
                    ds.rows.push_back({fit.reports[i].t[p], fit.reports[i].distance[p]});
                std::ostringstream leaf;
                leaf << "distance_" << i << ".csv";
                io::write_csv(dir.table(leaf.str()), ds);
            }
            json j;
            j["slope"] = fit.slope;
            j["intercept"] = fit.intercept;
            j["r2"] = fit.r2;
            j["sigma0"] = fit.sigma0;
            j["kappa"] = fit.kappa;
            j["inv_sigma0"] = 1.0 / fit.sigma0;
            dir.write_report(j);
            if (verbosity > 0)
                std::cout << "slope = " << fit.slope << " (1/sigma0 = " << 1.0 / fit.sigma0
                          << "), r2 = " << fit.r2 << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error [" << e.name() << "]: " << e.what() << "\n";
        if (!out_dir.empty()) RunDir(out_dir, "error").write_error(e.name(), e.what());
        return 3;
    }
    return 0;
}

// pinstop CLI: closed forms, bounds, PDE solves, simulation and the urn lab,
// with JSON/CSV outputs suitable for regression diffing.

#include "pinstop/belief.hpp"
#include "pinstop/bounds.hpp"
#include "pinstop/classical_bridge.hpp"
#include "pinstop/closed_form_a0.hpp"
#include "pinstop/core_math.hpp"
#include "pinstop/errors.hpp"
#include "pinstop/mc_engine.hpp"
#include "pinstop/rng.hpp"
#include "pinstop/urn.hpp"
#include "pinstop/vi_solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <mutex>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using json = nlohmann::json;
namespace ps = pinstop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitValidation = 2;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ps::ConfigError("cannot open output file: " + path);
    return f;
}

void write_surface_csv(const ps::ValueSurface& s, const std::string& path) {
    auto f = open_out(path);
    f << "t,x,w,v,obstacle,contact\n";
    for (std::size_t k = 0; k < s.times.size(); ++k)
        for (std::size_t i = 0; i < s.xs.size(); ++i)
            f << fmt(s.times[k]) << ',' << fmt(s.xs[i]) << ','
              << fmt(s.at_w(static_cast<int>(k), static_cast<int>(i))) << ','
              << fmt(s.at_v(static_cast<int>(k), static_cast<int>(i))) << ','
              << fmt(s.at_g(static_cast<int>(k), static_cast<int>(i))) << ','
              << (s.at_contact(static_cast<int>(k), static_cast<int>(i)) ? 1 : 0)
              << '\n';
}

void write_boundary_csv(const ps::StoppingRegion& r, double a, const std::string& path) {
    auto f = open_out(path);
    f << "t,lower_x,upper_x,label\n";
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        for (std::size_t q = 0; q < r.intervals[k].size(); ++q) {
            const auto& iv = r.intervals[k][q];
            f << fmt(r.times[k]) << ',' << fmt(iv.lo) << ',' << fmt(iv.hi)
              << ",interval" << q << '\n';
        }
        const double b = ps::boundary_b(std::min(r.times[k], 1.0), a);
        f << fmt(r.times[k]) << ',' << fmt(b) << ',' << fmt(b) << ",reference\n";
    }
}

ps::GridSpec grid_from_json(const json& j, double a) {
    ps::GridSpec g = ps::default_grid(a);
    if (j.contains("x_min")) g.x_min = j["x_min"].get<double>();
    if (j.contains("x_max")) g.x_max = j["x_max"].get<double>();
    if (j.contains("nx")) g.nx = j["nx"].get<int>();
    if (j.contains("nt")) g.nt = j["nt"].get<int>();
    if (j.contains("t_cutoff")) g.t_cutoff = j["t_cutoff"].get<double>();
    return g;
}

// Piecewise-linear boundary loaded from a two-column CSV (t, x), header optional.
std::function<double(double)> load_boundary_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ps::ConfigError("cannot open boundary file: " + path);
    auto ts = std::make_shared<std::vector<double>>();
    auto xs = std::make_shared<std::vector<double>>();
    std::string line;
    while (std::getline(f, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double t, x;
        if (ss >> t >> x) {
            ts->push_back(t);
            xs->push_back(x);
        }
    }
    if (ts->size() < 2) throw ps::ConfigError("boundary file needs >= 2 numeric rows");
    return [ts, xs](double t) {
        if (t <= ts->front()) return xs->front();
        if (t >= ts->back()) return xs->back();
        auto it = std::upper_bound(ts->begin(), ts->end(), t);
        const std::size_t i = static_cast<std::size_t>(it - ts->begin());
        const double w = (t - (*ts)[i - 1]) / ((*ts)[i] - (*ts)[i - 1]);
        return (1.0 - w) * (*xs)[i - 1] + w * (*xs)[i];
    };
}

void figure1(const std::string& dir) {
    auto f = open_out(dir + "/fig1.csv");
    f << "x,v_p10,v_p50,v_p90,v1,identity\n";
    for (int i = -200; i <= 200; ++i) {
        const double x = i * 0.01;
        f << fmt(x) << ',' << fmt(ps::value_a0(0.0, x, 0.1).value) << ','
          << fmt(ps::value_a0(0.0, x, 0.5).value) << ','
          << fmt(ps::value_a0(0.0, x, 0.9).value) << ','
          << fmt(ps::value_known_pinning({0.0, x}, 0.0)) << ',' << fmt(x) << '\n';
    }
}

void figure2(const std::string& dir) {
    for (double a : {-1.0, 1.0}) {
        std::ostringstream name;
        name << dir << "/fig2_a" << (a < 0 ? "m1" : "p1") << ".csv";
        auto f = open_out(name.str());
        f << "t,x,H\n";
        const ps::ModelParams p{a, 0.5};
        for (double t : {0.0, 0.2, 0.4, 0.6, 0.8})
            for (int i = -300; i <= 300; ++i) {
                const double x = a + i * 0.01;
                f << fmt(t) << ',' << fmt(x) << ',' << fmt(ps::indicator_H(t, x, p))
                  << '\n';
            }
    }
}

void figure3(const std::string& dir) {
    const std::vector<double> as = {-2.0, -1.0, -0.5, 0.2, 0.5, 1.0};
    std::vector<std::thread> pool;
    const int nthreads = ps::worker_threads();
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::string first_error;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= as.size()) return;
            try {
                const double a = as[i];
                const ps::ModelParams p{a, 0.5};
                const auto surf = ps::solve(p, ps::default_grid(a));
                const auto region = ps::extract_region(surf);
                std::ostringstream name;
                name << dir << "/fig3_a" << (a < 0 ? "m" : "p") << std::fabs(a) << ".csv";
                write_boundary_csv(region, a, name.str());
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(err_mutex);
                if (first_error.empty()) first_error = e.what();
            }
        }
    };
    for (int w = 0; w < std::min<int>(nthreads, static_cast<int>(as.size())); ++w)
        pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (!first_error.empty()) throw ps::NonConvergence(first_error);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pinstop: optimal stopping of a maybe-pinned Brownian path"};
    app.require_subcommand(1);

    // value
    double v_a = 0.0, v_pi = 0.5, v_t = 0.0, v_x = 0.0;
    auto* cmd_value = app.add_subcommand("value", "closed-form value at a point (a = 0)");
    cmd_value->add_option("--a", v_a, "pin level (must be 0; no closed form otherwise)");
    cmd_value->add_option("--pi", v_pi)->required();
    cmd_value->add_option("--t", v_t)->required();
    cmd_value->add_option("--x", v_x)->required();

    // alpha
    auto* cmd_alpha = app.add_subcommand("alpha", "the boundary constant");

    // bounds
    double b_a = 0.0, b_pi = 0.5, b_t = 0.0, b_x = 0.0;
    std::int64_t b_paths = 200000;
    int b_steps = 4000;
    std::uint64_t b_seed = 1;
    auto* cmd_bounds = app.add_subcommand("bounds", "value bounds at a point");
    cmd_bounds->add_option("--a", b_a)->required();
    cmd_bounds->add_option("--pi", b_pi)->required();
    cmd_bounds->add_option("--t", b_t)->required();
    cmd_bounds->add_option("--x", b_x)->required();
    cmd_bounds->add_option("--paths", b_paths, "antithetic pair count");
    cmd_bounds->add_option("--steps", b_steps);
    cmd_bounds->add_option("--seed", b_seed);

    // solve / boundary share grid flags
    double s_a = 0.0, s_pi = 0.5, s_eps = 1e-4, s_omega = 1.5, s_tol = 1e-9;
    int s_nx = 0, s_nt = 0;
    std::string s_out, s_config;
    auto add_solver_flags = [&](CLI::App* c) {
        c->add_option("--a", s_a);
        c->add_option("--pi", s_pi);
        c->add_option("--nx", s_nx, "space nodes (0 = default)");
        c->add_option("--nt", s_nt, "time steps (0 = default)");
        c->add_option("--eps", s_eps, "terminal cutoff 1 - eps");
        c->add_option("--omega", s_omega, "PSOR relaxation");
        c->add_option("--tol", s_tol, "PSOR tolerance");
        c->add_option("--out", s_out, "output CSV path")->required();
        c->add_option("--config", s_config, "JSON config mirroring GridSpec/ModelParams");
    };
    auto* cmd_solve = app.add_subcommand("solve", "finite-difference value surface");
    add_solver_flags(cmd_solve);
    auto* cmd_boundary = app.add_subcommand("boundary", "extracted stopping boundaries");
    add_solver_flags(cmd_boundary);

    // hplot
    double h_a = 1.0, h_pi = 0.5;
    std::string h_out = "hplot.csv", h_tlist = "0,0.2,0.4,0.6,0.8";
    auto* cmd_hplot = app.add_subcommand("hplot", "H(t, x) slices");
    cmd_hplot->add_option("--a", h_a)->required();
    cmd_hplot->add_option("--pi", h_pi)->required();
    cmd_hplot->add_option("--tlist", h_tlist, "comma-separated slice times");
    cmd_hplot->add_option("--out", h_out);

    // simulate
    double m_a = 0.0, m_pi = 0.5, m_t0 = 0.0, m_x0 = 0.0;
    std::string m_policy = "tau-b", m_bfile;
    std::int64_t m_paths = 200000;
    int m_steps = 2000;
    std::uint64_t m_seed = 0;
    bool m_no_antithetic = false;
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo policy evaluation");
    cmd_sim->add_option("--a", m_a)->required();
    cmd_sim->add_option("--pi", m_pi)->required();
    cmd_sim->add_option("--policy", m_policy, "tau-b | never | now | boundary-file");
    cmd_sim->add_option("--boundary-file", m_bfile, "CSV (t, x) for --policy boundary-file");
    cmd_sim->add_option("--paths", m_paths)->required();
    cmd_sim->add_option("--steps", m_steps);
    cmd_sim->add_option("--seed", m_seed)->required();
    cmd_sim->add_option("--t0", m_t0);
    cmd_sim->add_option("--x0", m_x0);
    cmd_sim->add_flag("--no-antithetic", m_no_antithetic);

    // urn
    long long u_m = 1, u_p = 1;
    double u_prior = 0.5;
    std::string u_table;
    auto* cmd_urn = app.add_subcommand("urn", "uncertain-replacement urn DP");
    cmd_urn->add_option("--m", u_m)->required();
    cmd_urn->add_option("--p", u_p)->required();
    cmd_urn->add_option("--prior", u_prior)->required();
    cmd_urn->add_option("--table", u_table, "write full state table CSV");

    // urn-scaling
    double us_prior = 0.5;
    std::string us_plist = "25,100,400";
    auto* cmd_us = app.add_subcommand("urn-scaling", "scaled urn values vs the continuum");
    cmd_us->add_option("--prior", us_prior)->required();
    cmd_us->add_option("--plist", us_plist);

    // figures
    int f_which = 0;
    std::string f_dir = ".";
    auto* cmd_fig = app.add_subcommand("figures", "regenerate figure data CSVs");
    cmd_fig->add_option("--which", f_which, "1 | 2 | 3")->required();
    cmd_fig->add_option("--out-dir", f_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    auto parse_list = [](const std::string& s) {
        std::vector<double> out;
        std::istringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
        return out;
    };

    try {
        if (*cmd_alpha) {
            json out{{"alpha", ps::solve_alpha().value}};
            std::cout << out.dump() << '\n';
        } else if (*cmd_value) {
            if (v_a != 0.0)
                throw ps::ConfigError("value: only a = 0 has a closed form; use solve");
            const auto v = ps::value_a0(v_t, v_x, v_pi);
            json out{{"value", v.value},
                     {"posterior", ps::posterior(v_t, v_x, {0.0, v_pi}).value},
                     {"stop_now", ps::policy_a0(v_t, v_x)}};
            std::cout << out.dump() << '\n';
        } else if (*cmd_bounds) {
            ps::MCConfig mc{b_paths, b_steps, b_seed, true};
            const auto b = ps::lower_bound(b_t, b_x, {b_a, b_pi}, mc);
            json out{{"lower", b.lower}, {"stderr", b.lower_stderr}, {"upper", b.upper},
                     {"seed", b_seed}};
            std::cout << out.dump() << '\n';
        } else if (*cmd_solve || *cmd_boundary) {
            ps::ModelParams p{s_a, s_pi};
            ps::GridSpec g = ps::default_grid(s_a);
            if (!s_config.empty()) {
                std::ifstream cf(s_config);
                if (!cf) throw ps::ConfigError("cannot open config: " + s_config);
                json j = json::parse(cf);
                if (j.contains("a")) p.a = j["a"].get<double>();
                if (j.contains("pi")) p.pi = j["pi"].get<double>();
                g = grid_from_json(j, p.a);
            }
            if (s_nx > 0) g.nx = s_nx;
            if (s_nt > 0) g.nt = s_nt;
            g.t_cutoff = 1.0 - s_eps;
            const auto surf = ps::solve(p, g, s_tol, s_omega);
            if (*cmd_solve) {
                write_surface_csv(surf, s_out);
            } else {
                write_boundary_csv(ps::extract_region(surf), p.a, s_out);
            }
            json out{{"written", s_out}, {"a", p.a}, {"pi", p.pi}, {"nx", g.nx},
                     {"nt", g.nt}};
            std::cout << out.dump() << '\n';
        } else if (*cmd_hplot) {
            const ps::ModelParams p{h_a, h_pi};
            auto f = open_out(h_out);
            f << "t,x,H\n";
            for (double t : parse_list(h_tlist))
                for (int i = -300; i <= 300; ++i) {
                    const double x = h_a + i * 0.01;
                    f << fmt(t) << ',' << fmt(x) << ','
                      << fmt(ps::indicator_H(t, x, p)) << '\n';
                }
            json out{{"written", h_out}};
            std::cout << out.dump() << '\n';
        } else if (*cmd_sim) {
            ps::PolicyRule rule;
            if (m_policy == "tau-b") {
                rule = ps::make_policy_tau_b(m_a);
            } else if (m_policy == "never") {
                rule = ps::make_policy_never_stop();
            } else if (m_policy == "now") {
                rule = ps::make_policy_stop_now();
            } else if (m_policy == "boundary-file") {
                if (m_bfile.empty())
                    throw ps::ConfigError("simulate: --boundary-file required");
                rule = ps::make_policy_from_boundary(load_boundary_file(m_bfile),
                                                     "boundary-file");
            } else {
                throw ps::ConfigError("simulate: unknown policy " + m_policy);
            }
            ps::MCConfig mc{m_paths, m_steps, m_seed, !m_no_antithetic};
            const auto r = ps::evaluate_policy(rule, {m_a, m_pi}, {m_t0, m_x0}, mc);
            json out{{"mean", r.mean}, {"stderr", r.stderr_}, {"n", r.n},
                     {"seed", m_seed}, {"policy", rule.name}};
            std::cout << out.dump() << '\n';
        } else if (*cmd_urn) {
            const auto t = ps::uncertain_urn_solve({u_m, u_p, u_prior});
            if (!u_table.empty()) {
                auto f = open_out(u_table);
                f << "n,j,k,posterior,value,decision\n";
                for (int n = 0; n <= t.horizon; ++n)
                    for (int j = 0; j <= n; ++j) {
                        const int k = n - j;
                        f << n << ',' << j << ',' << k << ','
                          << fmt(t.posterior(j, k)) << ',' << fmt(t.value(j, k))
                          << ',' << (t.stops(j, k) ? "stop" : "draw") << '\n';
                    }
            }
            json out{{"m", u_m}, {"p", u_p}, {"prior", u_prior},
                     {"value", t.value(0, 0)},
                     {"classical_value", ps::shepp_value(u_m, u_p)}};
            if (!u_table.empty()) out["table"] = u_table;
            std::cout << out.dump() << '\n';
        } else if (*cmd_us) {
            std::vector<long long> ps_list;
            for (double v : parse_list(us_plist))
                ps_list.push_back(static_cast<long long>(v));
            const auto rep = ps::scaling_check(ps_list, us_prior);
            json rows = json::array();
            for (const auto& r : rep.rows)
                rows.push_back({{"p", r.p}, {"scaled_value", r.scaled_value},
                                {"target", r.target}, {"gap", r.gap}});
            json out{{"prior", us_prior}, {"rows", rows},
                     {"decreasing", rep.decreasing}};
            std::cout << out.dump() << '\n';
        } else if (*cmd_fig) {
            std::filesystem::create_directories(f_dir);
            if (f_which == 1) figure1(f_dir);
            else if (f_which == 2) figure2(f_dir);
            else if (f_which == 3) figure3(f_dir);
            else throw ps::ConfigError("figures: --which must be 1, 2 or 3");
            json out{{"which", f_which}, {"out_dir", f_dir}};
            std::cout << out.dump() << '\n';
        }
    } catch (const ps::DomainError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ps::ConfigError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

#ifndef TROP_CLI_HPP
#define TROP_CLI_HPP

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trop/chars.hpp"
#include "trop/chip.hpp"
#include "trop/io.hpp"
#include "trop/verify.hpp"

namespace trop::cli {

inline RatVec parse_coord_list(const std::string& text, std::size_t expected) {
    RatVec out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        std::size_t a = item.find_first_not_of(" \t");
        std::size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos) throw validation_error("empty coordinate in \"" + text + "\"");
        out.push_back(parse_rat(item.substr(a, b - a + 1)));
    }
    if (out.size() != expected)
        throw validation_error("expected " + std::to_string(expected) + " coordinates, got " +
                               std::to_string(out.size()));
    return out;
}

/// "<vertex-id>" or "<edge-id>@<offset>".
inline Point parse_point_arg(const MetricGraph& g, const std::string& text) {
    std::size_t at = text.rfind('@');
    if (at != std::string::npos) {
        std::string eid = text.substr(0, at);
        if (g.has_edge_id(eid))
            return g.point_on_edge(g.edge_index(eid), parse_rat(text.substr(at + 1)));
    }
    if (g.has_vertex_id(text)) return g.point_at_vertex(g.vertex_index(text));
    throw validation_error("unknown point \"" + text + "\" (use a vertex id or edge@offset)");
}

struct Options {
    std::string format = "json";
    bool timing = false;
};

inline void emit(std::ostream& out, const Options& opt, Json j, const std::string& text_form,
                 double elapsed_ms) {
    if (opt.format == "text") {
        out << text_form;
        out << "elapsed: " << elapsed_ms << " ms\n";
        return;
    }
    if (opt.timing) j["elapsed_ms"] = elapsed_ms;
    out << j.dump(2) << "\n";
}

inline std::string gamma_label(const std::vector<uint8_t>& bits) {
    std::string s;
    for (uint8_t b : bits) s += char('0' + b);
    return s.empty() ? "0" : s;
}

inline Json divisor_text_free(const MetricGraph& g, const Divisor& d) {
    return divisor_to_json(g, d);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact divisor theory on tropical curves"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--format", opt.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_flag("--timing", opt.timing, "include elapsed_ms in JSON output");

    std::string curve_path, divisor_path, d1_path, d2_path, coord_text, base_text, out_path,
        dot_dir;
    uint64_t seed = 0;

    auto add_curve = [&](CLI::App* cmd) {
        cmd->add_option("--curve", curve_path, "curve file (JSON)")->required();
    };

    CLI::App* info = app.add_subcommand("info", "curve summary");
    add_curve(info);
    CLI::App* gram = app.add_subcommand("gram", "cycle basis and Gram matrix");
    add_curve(gram);
    CLI::App* aj = app.add_subcommand("abel-jacobi", "Abel-Jacobi image of a divisor");
    add_curve(aj);
    aj->add_option("--divisor", divisor_path, "divisor file (JSON)")->required();
    CLI::App* le = app.add_subcommand("lin-equiv", "decide linear equivalence");
    add_curve(le);
    le->add_option("--d1", d1_path, "first divisor file")->required();
    le->add_option("--d2", d2_path, "second divisor file")->required();
    CLI::App* te = app.add_subcommand("theta-eval", "evaluate the theta function");
    add_curve(te);
    te->add_option("--x", coord_text, "comma-separated rational coordinates")->required();
    CLI::App* ka = app.add_subcommand("kappa", "Riemann constant");
    add_curve(ka);
    CLI::App* pb = app.add_subcommand("pullback", "theta pullback divisor D_lambda");
    add_curve(pb);
    pb->add_option("--shift", coord_text, "comma-separated rational coordinates")->required();
    CLI::App* tc = app.add_subcommand("theta-chars", "all 2^g theta characteristics");
    add_curve(tc);
    tc->add_option("--dot", dot_dir, "also write one oriented DOT file per gamma");
    CLI::App* rd = app.add_subcommand("reduce", "q-reduced form via Dhar burning");
    add_curve(rd);
    rd->add_option("--divisor", divisor_path, "divisor file (JSON)")->required();
    rd->add_option("--base", base_text, "base point (vertex id or edge@offset)");
    CLI::App* vf = app.add_subcommand("verify", "run the full invariant suite");
    add_curve(vf);
    vf->add_option("--seed", seed, "seed for randomized checks");
    CLI::App* xd = app.add_subcommand("export-dot", "DOT rendering of the curve");
    add_curve(xd);
    xd->add_option("--out", out_path, "output file (default stdout)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    try {
        MetricGraph g = load_curve_file(curve_path);

        if (info->parsed()) {
            Json j;
            j["command"] = "info";
            j["curve"] = g.name();
            j["vertices"] = g.num_vertices();
            j["edges"] = g.num_edges();
            j["genus"] = g.genus();
            j["canonical_divisor"] = divisor_to_json(g, g.canonical_divisor());
            j["basepoint"] = point_to_json(g, g.basepoint());
            std::ostringstream text;
            text << "curve " << g.name() << ": " << g.num_vertices() << " vertices, "
                 << g.num_edges() << " edges, genus " << g.genus() << "\n";
            emit(out, opt, j, text.str(), elapsed());
            return 0;
        }

        GramForm form = gram_matrix(g);

        if (gram->parsed()) {
            Json j;
            j["command"] = "gram";
            j["curve"] = g.name();
            Json basis = Json::array();
            for (const Cycle& c : form.basis) {
                Json cyc = Json::array();
                for (std::size_t e = 0; e < g.num_edges(); ++e)
                    if (c[e] != 0) {
                        Json term;
                        term["edge"] = g.edge(int32_t(e)).id;
                        term["coeff"] = c[e];
                        cyc.push_back(std::move(term));
                    }
                basis.push_back(std::move(cyc));
            }
            j["basis"] = std::move(basis);
            j["gram"] = mat_to_json(form.gram);
            std::ostringstream text;
            text << "genus " << g.genus() << " Gram matrix:\n";
            for (std::size_t i = 0; i < form.rank(); ++i) {
                text << " ";
                for (std::size_t k = 0; k < form.rank(); ++k)
                    text << " " << rat_str(form.gram(i, k));
                text << "\n";
            }
            emit(out, opt, j, text.str(), elapsed());
            return 0;
        }

        if (aj->parsed()) {
            Divisor d = load_divisor_file(g, divisor_path);
            JacPoint x = abel_jacobi(g, form, d);
            Json j;
            j["command"] = "abel-jacobi";
            j["curve"] = g.name();
            j["degree"] = d.degree();
            j["coords"] = rat_vec_to_json(x);
            j["canonical"] = rat_vec_to_json(jac_canonical(form, x));
            std::ostringstream text;
            text << "mu(D) = " << rat_vec_to_json(jac_canonical(form, x)).dump() << "\n";
            emit(out, opt, j, text.str(), elapsed());
            return 0;
        }

        if (le->parsed()) {
            Divisor d1 = load_divisor_file(g, d1_path);
            Divisor d2 = load_divisor_file(g, d2_path);
            bool deg_match = d1.degree() == d2.degree();
            JacPoint delta = jac_canonical(form, abel_jacobi(g, form, d1 - d2));
            bool equiv = deg_match && jac_equal(form, delta, jac_zero(form));
            Json j;
            j["command"] = "lin-equiv";
            j["curve"] = g.name();
            j["equivalent"] = equiv;
            j["degree_match"] = deg_match;
            j["jac_delta"] = rat_vec_to_json(delta);
            std::ostringstream text;
            text << (equiv ? "linearly equivalent" : "not equivalent") << "\n";
            emit(out, opt, j, text.str(), elapsed());
            return 0;
        }

        if (te->parsed()) {
            RatVec x = parse_coord_list(coord_text, form.rank());
            ThetaValue tv = theta_eval(form, x);
            Json j;
            j["command"] = "theta-eval";
            j["curve"] = g.name();
            j["value"] = rat_str(tv.value);
            Json am = Json::array();
            for (const auto& n : tv.argmax) am.push_back(n);
            j["argmax"] = std::move(am);
            j["on_divisor"] = tv.on_divisor();
            std::ostringstream text;
            text << "theta = " << rat_str(tv.value) << ", " << tv.argmax.size()
                 << " maximizer(s)" << (tv.on_divisor() ? " (on the theta divisor)" : "")
                 << "\n";
            emit(out, opt, j, text.str(), elapsed());
            return 0;
        }

        if (ka->parsed()) {
            KappaClass kap = compute_kappa(g, form);
            JacPoint muk = abel_jacobi(g, form, g.canonical_divisor());
            bool ok = jac_equal(form, kap.k0 + kap.k0, muk);
            Json j;
            j["command"] = "kappa";
            j["curve"] = g.name();
            j["kappa"] = rat_vec_to_json(kap.kappa);
            j["k0"] = rat_vec_to_json(kap.k0);
            j["check_2k0_eq_muK"] = ok;
            std::ostringstream text;
            text << "kappa = " << rat_vec_to_json(kap.kappa).dump()
                 << ", K0 = " << rat_vec_to_json(kap.k0).dump() << "\n";
            emit(out, opt, j, text.str(), elapsed());
            return ok ? 0 : 1;
        }

        if (pb->parsed()) {
            RatVec shift = parse_coord_list(coord_text, form.rank());
            Divisor d = pullback_divisor(g, form, shift);
            Json j;
            j["command"] = "pullback";
            j["curve"] = g.name();
            j["degree"] = d.degree();
            j["divisor"] = divisor_to_json(g, d);
            std::ostringstream text;
            text << "D_lambda of degree " << d.degree() << ": "
                 << divisor_to_json(g, d).dump() << "\n";
            emit(out, opt, j, text.str(), elapsed());
            return 0;
        }

        if (tc->parsed()) {
            auto chars = theta_characteristics(g, form);
            Json arr = Json::array();
            std::size_t neff = 0;
            for (const auto& rec : chars) {
                Json r;
                r["gamma"] = gamma_label(rec.bits);
                r["divisor"] = divisor_to_json(g, rec.k_minus);
                r["class"] = rat_vec_to_json(rec.cls);
                r["half_gamma"] = rat_vec_to_json(rec.half_gamma);
                r["effective"] = rec.effective;
                arr.push_back(std::move(r));
                if (!rec.effective) ++neff;
            }
            Json j;
            j["command"] = "theta-chars";
            j["curve"] = g.name();
            j["genus"] = g.genus();
            j["characteristics"] = std::move(arr);
            j["non_effective"] = neff;
            if (!dot_dir.empty()) {
                std::filesystem::create_directories(dot_dir);
                for (const auto& rec : chars) {
                    bool zero = true;
                    for (uint8_t b : rec.bits) zero = zero && b == 0;
                    FlowOrientation fo =
                        zero ? orient_distance_flow(g, {g.basepoint()})
                             : orient_gamma_flow(
                                   g, gamma_support(g, form.basis, rec.bits));
                    std::string title = g.name() + " gamma=" + gamma_label(rec.bits);
                    std::ofstream f(std::filesystem::path(dot_dir) /
                                    ("gamma-" + gamma_label(rec.bits) + ".dot"));
                    f << orientation_to_dot(fo, title);
                }
            }
            std::ostringstream text;
            text << chars.size() << " theta characteristics, " << neff
                 << " non-effective\n";
            for (const auto& rec : chars)
                text << "  gamma=" << gamma_label(rec.bits) << " class "
                     << rat_vec_to_json(rec.cls).dump()
                     << (rec.effective ? " effective" : " NON-EFFECTIVE") << "\n";
            emit(out, opt, j, text.str(), elapsed());
            return 0;
        }

        if (rd->parsed()) {
            Divisor d = load_divisor_file(g, divisor_path);
            Point base = base_text.empty() ? g.basepoint() : parse_point_arg(g, base_text);
            UnitModel m = to_unit_model(g, d, base);
            std::vector<long long> chips = unit_divisor(g, m, d);
            int32_t bidx = m.locate(g, base);
            std::vector<long long> reduced = dhar_reduce(m, chips, bidx);
            Divisor rdiv;
            for (std::size_t v = 0; v < reduced.size(); ++v)
                rdiv.add(m.vertex_origin[v], reduced[v]);
            bool effective = d.degree() >= 0 && reduced[std::size_t(bidx)] >= 0;
            Json j;
            j["command"] = "reduce";
            j["curve"] = g.name();
            j["base"] = point_to_json(g, base);
            j["scale"] = m.scale.get_str();
            j["reduced"] = divisor_to_json(g, rdiv);
            j["effective"] = effective;
            std::ostringstream text;
            text << "reduced divisor " << divisor_to_json(g, rdiv).dump() << "\n"
                 << "class " << (effective ? "effective" : "not effective") << "\n";
            emit(out, opt, j, text.str(), elapsed());
            return 0;
        }

        if (vf->parsed()) {
            VerifyReport rep = run_verify(g, seed);
            Json j;
            j["command"] = "verify";
            j["curve"] = rep.curve;
            j["seed"] = rep.seed;
            j["genus"] = rep.genus;
            j["characteristics"] = rep.characteristics;
            j["non_effective"] = rep.non_effective;
            j["oracle_checked"] = rep.oracle_checked;
            Json checks = Json::array();
            for (const auto& c : rep.checks) {
                Json cj;
                cj["name"] = c.name;
                cj["pass"] = c.pass;
                cj["detail"] = c.detail;
                checks.push_back(std::move(cj));
            }
            j["checks"] = std::move(checks);
            j["all_pass"] = rep.all_pass;
            std::ostringstream text;
            text << "verify " << rep.curve << " (seed " << rep.seed << ")\n";
            for (const auto& c : rep.checks)
                text << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.name
                     << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
            text << (rep.all_pass ? "all checks passed" : "CHECKS FAILED") << "\n";
            emit(out, opt, j, text.str(), elapsed());
            return rep.all_pass ? 0 : 1;
        }

        if (xd->parsed()) {
            std::string dot = curve_to_dot(g);
            if (out_path.empty()) {
                out << dot;
            } else {
                std::ofstream f(out_path);
                f << dot;
            }
            return 0;
        }
    } catch (const validation_error& e) {
        Json j;
        j["error"] = e.what();
        err << j.dump(2) << "\n";
        return 1;
    } catch (const resource_limit_error& e) {
        Json j;
        j["error"] = e.what();
        err << j.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        Json j;
        j["error"] = e.what();
        err << j.dump(2) << "\n";
        return 1;
    }
    return 2;
}

} // namespace trop::cli

#endif

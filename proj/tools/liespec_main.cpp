// Command-line front end: JSON operator families in, spectra / homology /
// theorem reports out. Exit codes: 0 ok, 1 bad input or I/O, 2 NotClosed,
// 3 NotSolvable, 4 IncompleteCandidates, 5 NotACharacter, 6 NotCommuting,
// 7 theorem verification failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "liespec/liespec.hpp"

namespace {

using namespace liespec;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitNotClosed = 2;
constexpr int kExitNotSolvable = 3;
constexpr int kExitIncomplete = 4;
constexpr int kExitNotACharacter = 5;
constexpr int kExitNotCommuting = 6;
constexpr int kExitTheoremFail = 7;

struct CommonFlags {
    double tol = 1e-9;
    std::string backend;  // "", "float", "exact"
    bool table = false;
    std::string output_path;
};

void emit(const json& doc, const CommonFlags& flags, const std::string& table_text) {
    if (flags.table) {
        if (flags.output_path.empty()) {
            std::cout << table_text;
        } else {
            std::ofstream out(flags.output_path);
            if (!out) throw Error("cannot write to '" + flags.output_path + "'");
            out << table_text;
        }
        return;
    }
    std::string text = doc.dump(2) + "\n";
    if (flags.output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(flags.output_path);
        if (!out) throw Error("cannot write to '" + flags.output_path + "'");
        out << text;
    }
}

Complexd parse_float_scalar(const std::string& token) {
    // accepts "1.5", "-2e-3", "1.5+0.3i", "0.5i"
    GaussianRational probe;  // reuse the rational grammar shape checks only for 'i' handling
    (void)probe;
    std::string s = token;
    auto is_imag_tail = [](const std::string& str) {
        return !str.empty() && (str.back() == 'i' || str.back() == 'I');
    };
    if (is_imag_tail(s)) {
        // split at the last +/- that is not an exponent sign
        std::size_t split = std::string::npos;
        for (std::size_t k = s.size() - 1; k > 0; --k) {
            char ch = s[k];
            if ((ch == '+' || ch == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
                split = k;
                break;
            }
        }
        std::string re_part = split == std::string::npos ? "0" : s.substr(0, split);
        std::string im_part =
            split == std::string::npos ? s.substr(0, s.size() - 1) : s.substr(split, s.size() - split - 1);
        if (im_part.empty() || im_part == "+" || im_part == "-") im_part += "1";
        char* end = nullptr;
        double re = std::strtod(re_part.c_str(), &end);
        if (end == re_part.c_str()) throw ParseError("bad coordinate '" + token + "'");
        double im = std::strtod(im_part.c_str(), &end);
        if (end == im_part.c_str()) throw ParseError("bad coordinate '" + token + "'");
        return {re, im};
    }
    char* end = nullptr;
    double re = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ParseError("bad coordinate '" + token + "'");
    return {re, 0.0};
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

template <ScalarBackend S>
std::vector<S> parse_character_coords(const std::string& text, std::size_t n) {
    auto tokens = split_commas(text);
    if (tokens.size() != n)
        throw ParseError("expected " + std::to_string(n) + " character coordinates, got " +
                         std::to_string(tokens.size()));
    std::vector<S> coords;
    coords.reserve(n);
    for (auto& t : tokens) {
        std::string trimmed;
        for (char ch : t)
            if (ch != ' ') trimmed += ch;
        if constexpr (scalar_traits<S>::is_exact)
            coords.push_back(parse_gaussian_rational(trimmed));
        else
            coords.push_back(parse_float_scalar(trimmed));
    }
    return coords;
}

OperatorFamily<Complexd> to_float_family(const OperatorFamily<GaussianRational>& fam) {
    OperatorFamily<Complexd> out;
    out.dim_E = fam.dim_E;
    out.names = fam.names;
    out.ops = to_float_ops(fam.ops);
    return out;
}

/// Applies the --backend override; "exact" on float input is rejected.
ParsedInput apply_backend(ParsedInput input, const std::string& backend) {
    if (backend.empty()) return input;
    if (backend == "float") {
        if (std::holds_alternative<ExactInput>(input))
            return FloatInput{to_float_family(std::get<ExactInput>(input).family)};
        return input;
    }
    if (backend == "exact") {
        if (std::holds_alternative<FloatInput>(input))
            throw ParseError("--backend exact requires an exact-mode input document");
        return input;
    }
    throw ParseError("--backend must be 'float' or 'exact'");
}

template <ScalarBackend S>
json tolerances_json(const RankPolicy& policy, const SpectrumOptions& opts) {
    json out;
    out["rank_rel_tol"] = policy.rel_tol;
    out["dedup_tol"] = opts.dedup_tol;
    out["eigenspace_tol"] = opts.eigenspace_tol;
    out["backend"] = scalar_traits<S>::is_exact ? "exact" : "float";
    return out;
}

template <ScalarBackend S>
std::string describe_point(const std::vector<S>& coords) {
    std::string out = "(";
    char buf[64];
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) out += ", ";
        if constexpr (scalar_traits<S>::is_exact) {
            out += format_scalar(coords[i]);
        } else {
            std::snprintf(buf, sizeof(buf), "%.9g%+.9gi", coords[i].real(), coords[i].imag());
            out += buf;
        }
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

template <ScalarBackend S>
int cmd_spectrum(const OperatorFamily<S>& family, const CommonFlags& flags, bool candidates_only,
                 const std::string& input_path) {
    RankPolicy policy{flags.tol};
    SpectrumOptions opts;
    LieAlgebraRep<S> rep =
        with_calibrated_bracket_sign(build_rep(family, +1, policy), policy);

    json doc;
    doc["command"] = candidates_only ? "spectrum --candidates-only" : "spectrum";
    doc["input"] = input_path;
    doc["algebra"] = algebra_summary(rep, policy);
    std::string table;

    if (candidates_only) {
        CandidateSet<S> cands = candidate_characters(rep, policy, opts);
        json items = json::array();
        table += "candidate characters (" + std::to_string(cands.items.size()) + ")\n";
        for (const auto& c : cands.items) {
            json item;
            item["coords"] = coords_to_json(c.coords);
            item["provenance"] = c.provenance;
            items.push_back(std::move(item));
            table += "  " + describe_point(c.coords) + "   [" + c.provenance + "]\n";
        }
        doc["result"] = json{{"candidates", std::move(items)}};
        doc["warnings"] = cands.warnings;
    } else {
        SpectrumResult<S> sp = joint_spectrum(rep, policy, opts);
        json points = json::array();
        table += "Sp(L,E): " + std::to_string(sp.entries.size()) + " point(s)\n";
        for (const auto& e : sp.entries) {
            json p;
            p["coords"] = coords_to_json(e.point.coords);
            p["betti"] = betti_to_json(e.betti);
            p["provenance"] = e.provenance;
            if (e.ill_conditioned) p["ill_conditioned"] = true;
            points.push_back(std::move(p));
            table += "  f = " + describe_point(e.point.coords) + "   betti = [";
            for (std::size_t i = 0; i < e.betti.beta.size(); ++i)
                table += (i ? " " : "") + std::to_string(e.betti.beta[i]);
            table += "]\n";
        }
        doc["result"] = json{{"points", std::move(points)}};
        doc["warnings"] = sp.warnings;
    }
    doc["tolerances"] = tolerances_json<S>(policy, opts);
    emit(doc, flags, table);
    return kExitOk;
}

template <ScalarBackend S>
int cmd_check(const OperatorFamily<S>& family, const CommonFlags& flags,
              const std::string& coord_text, const std::string& input_path, bool homology_view) {
    RankPolicy policy{flags.tol};
    SpectrumOptions opts;
    LieAlgebraRep<S> rep =
        with_calibrated_bracket_sign(build_rep(family, +1, policy), policy);
    std::vector<S> coords = parse_character_coords<S>(coord_text, rep.n());

    json doc;
    doc["command"] = homology_view ? "homology" : "check";
    doc["input"] = input_path;
    doc["algebra"] = algebra_summary(rep, policy);
    std::string table;

    if (homology_view) {
        double defect = character_defect(rep, coords);
        if (defect > character_tolerance(rep, coords))
            throw NotACharacter("homology: f(L^2) != 0 (defect " + std::to_string(defect) + ")");
        ChainComplexInstance<S> inst = build_complex(rep, coords, policy);
        std::vector<std::string> warnings;
        BettiVector b = betti(inst, policy, &warnings);
        json degrees = json::array();
        table += "degree  dim C_p  rank d_p  betti_p\n";
        for (std::size_t p = 0; p <= rep.n(); ++p) {
            json row;
            row["p"] = p;
            row["dim"] = inst.chain_dim(p);
            std::size_t rank_dp = p >= 1 ? rank(inst.d(p), policy) : 0;
            row["rank_d"] = rank_dp;
            row["betti"] = b.beta[p];
            degrees.push_back(std::move(row));
            table += "  " + std::to_string(p) + "       " + std::to_string(inst.chain_dim(p)) +
                     "        " + std::to_string(rank_dp) + "         " +
                     std::to_string(b.beta[p]) + "\n";
        }
        doc["result"] = json{{"character", coords_to_json(coords)},
                             {"degrees", std::move(degrees)},
                             {"betti", betti_to_json(b)},
                             {"chain_defect", round12(inst.chain_defect)},
                             {"in_spectrum", b.any_nonzero()}};
        doc["warnings"] = warnings;
    } else {
        SpectralVerdict verdict = check_character(rep, coords, policy);
        doc["result"] = json{{"character", coords_to_json(coords)},
                             {"in_spectrum", verdict.in_spectrum},
                             {"betti", betti_to_json(verdict.betti)}};
        if (verdict.ill_conditioned) doc["warnings"] = json::array({"rank decision near threshold"});
        table += "f = " + describe_point(coords) + "\n";
        table += std::string("in_spectrum: ") + (verdict.in_spectrum ? "true" : "false") + "\n";
    }
    doc["tolerances"] = tolerances_json<S>(policy, SpectrumOptions{});
    emit(doc, flags, table);
    return kExitOk;
}

template <ScalarBackend S>
int cmd_taylor(const OperatorFamily<S>& family, const CommonFlags& flags,
               const std::string& input_path) {
    RankPolicy policy{flags.tol};
    SpectrumOptions opts;
    SpectrumResult<S> sp = taylor_spectrum(family, policy, opts);

    json doc;
    doc["command"] = "taylor";
    doc["input"] = input_path;
    json points = json::array();
    std::string table = "Taylor spectrum: " + std::to_string(sp.entries.size()) + " point(s)\n";
    for (const auto& e : sp.entries) {
        json p;
        p["coords"] = coords_to_json(e.point.coords);
        p["betti"] = betti_to_json(e.betti);
        points.push_back(std::move(p));
        table += "  lambda = " + describe_point(e.point.coords) + "\n";
    }
    doc["result"] = json{{"points", std::move(points)}};
    doc["warnings"] = sp.warnings;
    doc["tolerances"] = tolerances_json<S>(policy, opts);
    emit(doc, flags, table);
    return kExitOk;
}

json report_to_json(const TheoremReport& r) {
    json out;
    out["theorem"] = r.theorem_id;
    out["instance"] = r.instance;
    out["pass"] = r.pass;
    out["applicable"] = r.applicable;
    out["witnesses"] = r.witnesses;
    out["tolerances"] = r.tolerances;
    return out;
}

template <ScalarBackend S>
std::vector<TheoremReport> verify_on_rep(const LieAlgebraRep<S>& rep, const RankPolicy& policy,
                                         const SpectrumOptions& opts,
                                         const std::vector<std::string>& properties) {
    auto wanted = [&](const std::string& name) {
        if (properties.empty()) return true;
        for (const auto& p : properties)
            if (p == name) return true;
        return false;
    };
    std::vector<TheoremReport> reports;
    const bool nilpotent = is_nilpotent(rep, policy);
    if (wanted("nonempty")) reports.push_back(verify_nonempty(rep, policy, opts));
    if (wanted("projection")) {
        SubalgebraSpec<S> derived = derived_subalgebra(rep, policy);
        reports.push_back(verify_projection(rep, derived, policy, opts));
        for (const auto& ideal : codim1_ideals(rep, policy))
            reports.push_back(verify_projection(rep, ideal, policy, opts));
    }
    if (wanted("derived_vanishing")) reports.push_back(verify_derived_vanishing(rep, policy, opts));
    if (wanted("derived_point_spectra"))
        reports.push_back(verify_derived_point_spectra(rep, policy, opts));
    if (wanted("nilpotent_bound")) {
        if (nilpotent)
            reports.push_back(verify_nilpotent_bound(rep, policy, opts));
        else if (!properties.empty())
            reports.push_back(nilpotent_bound_diagnostic(rep, policy, opts));
    }
    if (wanted("nilpotent_point_spectra") && (nilpotent || !properties.empty()))
        reports.push_back(verify_nilpotent_point_spectra(rep, policy, opts));
    if (!properties.empty() && wanted("counterexample_nonideal"))
        reports.push_back(verify_counterexample_nonideal(policy, opts));
    return reports;
}

int finish_verify(std::vector<TheoremReport> reports, const CommonFlags& flags,
                  const std::string& source) {
    json doc;
    doc["command"] = "verify";
    doc["input"] = source;
    json items = json::array();
    std::size_t passed = 0, failed = 0, na = 0;
    std::string table;
    for (const auto& r : reports) {
        items.push_back(report_to_json(r));
        std::string status = !r.applicable ? "N/A " : (r.pass ? "PASS" : "FAIL");
        if (!r.applicable)
            ++na;
        else if (r.pass)
            ++passed;
        else
            ++failed;
        table += status + "  " + r.theorem_id + "  [" + r.instance + "]\n";
        if ((!r.pass || !r.applicable))
            for (const auto& w : r.witnesses) table += "      " + w + "\n";
    }
    doc["result"] = json{{"reports", std::move(items)},
                         {"passed", passed},
                         {"failed", failed},
                         {"not_applicable", na}};
    table += std::to_string(passed) + " passed, " + std::to_string(failed) + " failed, " +
             std::to_string(na) + " not applicable\n";
    emit(doc, flags, table);
    return failed == 0 ? kExitOk : kExitTheoremFail;
}

int cmd_random(std::uint64_t seed, std::size_t m, std::size_t n, bool nilpotent, double scale,
               const CommonFlags& flags) {
    InstanceSpec spec;
    spec.seed = seed;
    spec.m = m;
    spec.n_target = n;
    spec.nilpotent_only = nilpotent;
    spec.entry_scale = scale;
    LieAlgebraRep<Complexd> rep = random_solvable_rep(spec, RankPolicy{flags.tol});
    json doc = family_to_input_document(rep.family);
    std::string text = doc.dump(2) + "\n";
    if (flags.output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(flags.output_path);
        if (!out) throw Error("cannot write to '" + flags.output_path + "'");
        out << text;
    }
    return kExitOk;
}

int map_error_to_exit(const Error& e) {
    if (dynamic_cast<const NotClosed*>(&e)) return kExitNotClosed;
    if (dynamic_cast<const NotSolvable*>(&e)) return kExitNotSolvable;
    if (dynamic_cast<const IncompleteCandidates*>(&e)) return kExitIncomplete;
    if (dynamic_cast<const NotACharacter*>(&e)) return kExitNotACharacter;
    if (dynamic_cast<const NotCommuting*>(&e)) return kExitNotCommuting;
    return kExitBadInput;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint spectra of solvable Lie algebras of matrices"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string input_path;
    std::string coord_text;
    bool candidates_only = false;

    auto add_common = [&](CLI::App* cmd, bool with_input = true) {
        if (with_input) cmd->add_option("input", input_path, "input JSON document")->required();
        cmd->add_option("--tol", flags.tol, "relative rank tolerance (default 1e-9)");
        cmd->add_option("--backend", flags.backend, "force 'float' or 'exact' computation");
        cmd->add_flag_callback("--table", [&flags] { flags.table = true; },
                               "human-readable table output");
        cmd->add_flag_callback("--json", [&flags] { flags.table = false; },
                               "JSON output (default)");
        cmd->add_option("-o,--output", flags.output_path, "write output to a file");
    };

    auto* spectrum_cmd = app.add_subcommand("spectrum", "joint spectrum Sp(L,E)");
    add_common(spectrum_cmd);
    spectrum_cmd->add_flag("--candidates-only", candidates_only,
                           "emit the candidate characters without the homology filter");

    auto* check_cmd = app.add_subcommand("check", "membership test for one character");
    add_common(check_cmd);
    check_cmd->add_option("-f,--character", coord_text, "character coordinates, comma separated")
        ->required();

    auto* homology_cmd =
        app.add_subcommand("homology", "per-degree chain diagnostics for one character");
    add_common(homology_cmd);
    homology_cmd->add_option("-f,--character", coord_text, "character coordinates, comma separated")
        ->required();

    auto* taylor_cmd = app.add_subcommand("taylor", "Taylor spectrum of a commuting family");
    add_common(taylor_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "verify the theorems on an input or a batch");
    std::uint64_t random_count = 0;
    std::vector<std::string> properties;
    std::uint64_t seed = 42;
    std::size_t gen_m = 3, gen_n = 2;
    bool gen_nilpotent = false;
    double gen_scale = 1.0;
    verify_cmd->add_option("input", input_path, "input JSON document");
    verify_cmd->add_option("--random", random_count, "verify on N seeded random instances");
    verify_cmd->add_option("--properties", properties,
                           "subset of: nonempty projection derived_vanishing "
                           "derived_point_spectra nilpotent_bound nilpotent_point_spectra "
                           "counterexample_nonideal");
    verify_cmd->add_option("--tol", flags.tol, "relative rank tolerance");
    verify_cmd->add_option("--backend", flags.backend, "force 'float' or 'exact'");
    verify_cmd->add_option("--m", gen_m, "random mode: dim E ceiling (default 5)");
    verify_cmd->add_option("--n", gen_n, "random mode: dim L ceiling (default 4)");
    verify_cmd->add_flag("--nilpotent", gen_nilpotent, "random mode: strictly upper instances");
    verify_cmd->add_flag_callback("--table", [&flags] { flags.table = true; }, "table output");
    verify_cmd->add_flag_callback("--json", [&flags] { flags.table = false; }, "JSON output");
    verify_cmd->add_option("-o,--output", flags.output_path, "write output to a file");

    auto* random_cmd = app.add_subcommand("random", "emit a seeded random instance document");
    random_cmd->add_option("--seed", seed, "generator seed (default 42)");
    random_cmd->add_option("--m", gen_m, "dim E (default 3)");
    random_cmd->add_option("--n", gen_n, "dim L (default 2)");
    random_cmd->add_flag("--nilpotent", gen_nilpotent, "strictly upper-triangular instance");
    random_cmd->add_option("--scale", gen_scale, "entry scale (default 1.0)");
    random_cmd->add_option("-o,--output", flags.output_path, "write the document to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitBadInput : kExitOk;
    }

    try {
        if (random_cmd->parsed())
            return cmd_random(seed, gen_m, gen_n, gen_nilpotent, gen_scale, flags);

        if (verify_cmd->parsed() && random_count > 0) {
            RankPolicy policy{flags.tol};
            std::size_t m_max = gen_m >= 2 ? gen_m : 5;
            std::size_t n_max = gen_n >= 1 ? gen_n : 4;
            if (verify_cmd->count("--m") == 0) m_max = 5;
            if (verify_cmd->count("--n") == 0) n_max = 4;
            std::vector<InstanceSpec> specs;
            for (std::uint64_t s = 1; s <= random_count; ++s) {
                InstanceSpec is;
                is.seed = s;
                is.m = 2 + (s % std::max<std::size_t>(m_max - 1, 1));
                is.n_target = 1 + (s % n_max);
                is.nilpotent_only = gen_nilpotent;
                std::size_t cap = is.nilpotent_only ? is.m * (is.m - 1) / 2 : is.m * (is.m + 1) / 2;
                if (is.n_target > cap) is.n_target = cap;
                specs.push_back(is);
            }
            return finish_verify(run_suite(specs, policy, SpectrumOptions{}), flags,
                                 "--random " + std::to_string(random_count));
        }

        if (input_path.empty()) throw ParseError("an input document (or --random N) is required");
        ParsedInput input = apply_backend(load_input_document(input_path), flags.backend);

        return std::visit(
            [&](const auto& typed) -> int {
                using S = typename std::decay_t<decltype(typed.family.ops[0])>::value_type;
                if (spectrum_cmd->parsed())
                    return cmd_spectrum<S>(typed.family, flags, candidates_only, input_path);
                if (check_cmd->parsed())
                    return cmd_check<S>(typed.family, flags, coord_text, input_path, false);
                if (homology_cmd->parsed())
                    return cmd_check<S>(typed.family, flags, coord_text, input_path, true);
                if (taylor_cmd->parsed())
                    return cmd_taylor<S>(typed.family, flags, input_path);
                if (verify_cmd->parsed()) {
                    RankPolicy policy{flags.tol};
                    SpectrumOptions opts;
                    auto rep = with_calibrated_bracket_sign(
                        build_rep(typed.family, +1, policy), policy);
                    auto reports = verify_on_rep(rep, policy, opts, properties);
                    for (auto& r : reports) r.instance = input_path;
                    return finish_verify(std::move(reports), flags, input_path);
                }
                throw Error("no command dispatched");
            },
            input);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return map_error_to_exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
}

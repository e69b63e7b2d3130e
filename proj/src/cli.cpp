#include "cea/cli.hpp"

#include "cea/document.hpp"
#include "cea/quantum.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <ostream>
#include <sstream>
#include <thread>

namespace cea {

using json = nlohmann::ordered_json;

json Report::to_json() const {
    json j;
    j["report_version"] = kReportVersion;
    j["command"] = command;
    j["verdict"] = verdict ? json(*verdict) : json(nullptr);
    j["witness"] = witness;
    j["residuals"] = residuals.is_null() ? json::object() : residuals;
    j["details"] = details.is_null() ? json::object() : details;
    if (!error.empty()) j["error"] = error;
    j["exit_code"] = exit_code;
    return j;
}

std::string Report::to_text() const {
    std::ostringstream os;
    os << "command: " << command << "\n";
    os << "verdict: " << (verdict ? (*verdict ? "true" : "false") : "n/a") << "\n";
    if (!error.empty()) os << "error: " << error << "\n";
    auto section = [&](const char* name, const json& j) {
        if (j.is_null() || j.empty()) return;
        os << name << ":\n";
        if (j.is_object()) {
            for (const auto& [k, v] : j.items()) os << "  " << k << ": " << v.dump() << "\n";
        } else {
            os << "  " << j.dump() << "\n";
        }
    };
    section("witness", witness);
    section("residuals", residuals);
    section("details", details);
    os << "exit: " << exit_code << "\n";
    return os.str();
}

namespace {

struct Args {
    std::vector<std::string> words;

    const std::string& at(std::size_t i, const char* usage) const {
        if (i >= words.size()) throw InputError(std::string("usage: ") + usage);
        return words[i];
    }
    std::vector<std::string> rest(std::size_t from) const {
        if (from >= words.size()) return {};
        return {words.begin() + static_cast<std::ptrdiff_t>(from), words.end()};
    }
};

void set_verdict(Report& r, bool v) {
    r.verdict = v;
    r.exit_code = v ? 0 : 1;
}

void set_failure(Report& r, const std::string& reason) {
    r.verdict = false;
    r.exit_code = 1;
    r.details["reason"] = reason;
}

json encode(const Rational& q) { return to_json(q); }
json encode(double x) { return x; }
json encode(const RationalVector& v) { return to_json(v); }
json encode(const RealVector& v) { return to_json(v); }
json encode(const HermitianMatrix& m) { return to_json(m); }

template <class S>
json encode(const DenseMatrix<S>& m) {
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(encode(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

template <BaseAlgebra A>
json encode_effects(const std::vector<Effect<A>>& effects) {
    json out = json::array();
    for (const auto& e : effects) out.push_back(encode(e.value()));
    return out;
}

template <BaseAlgebra A>
json encode_observable(const Observable<A>& obs) {
    json out = json::object();
    for (std::size_t i = 0; i < obs.size(); ++i) out[obs.outcomes()[i]] = encode(obs.effects()[i].value());
    return out;
}

json encode_partitions(const std::vector<std::string>& names, const std::vector<Partition>& ps) {
    json out = json::object();
    for (std::size_t i = 0; i < ps.size(); ++i) out[names[i]] = ps[i].to_string();
    return out;
}

const Content<QuantumAlgebra>& require_quantum(const Document& doc) {
    if (const auto* q = std::get_if<Content<QuantumAlgebra>>(&doc)) return *q;
    throw InputError("this command needs a quantum base");
}

// ---------------------------------------------------------------------------

void run_check(const Args& a, const RunOptions& opt, Report& r) {
    const char* usage = "check effect|sharp|strong <doc> <name>";
    const std::string& action = a.at(0, usage);
    const Document doc = load_document(a.at(1, usage), opt.tol);
    const std::string& name = a.at(2, usage);
    std::visit(
        [&](const auto& d) {
            using A = std::decay_t<decltype(d.base)>;
            const auto& p = d.point(name);
            r.details["value"] = encode(p);
            if constexpr (std::same_as<A, QuantumAlgebra>) r.details["spectrum"] = encode(spectrum_of(p));
            if (action == "effect") {
                set_verdict(r, is_effect(d.base, p));
            } else if (action == "sharp") {
                set_verdict(r, is_sharp(d.effect(name)));
            } else if (action == "strong") {
                set_verdict(r, is_strong_effect(d.effect(name)));
            } else {
                throw InputError(std::string("usage: ") + usage);
            }
        },
        doc);
}

template <BaseAlgebra A>
json describe(const Subalgebra<A>& f) {
    json j;
    j["dim"] = f.dim();
    j["generators"] = encode_effects(f.generators());
    j["unit_coefficients"] = encode(std::vector<typename A::Scalar>(f.unit_coefficients()));
    return j;
}

void run_csea(const Args& a, const RunOptions& opt, Report& r) {
    const char* usage = "csea build|contains|meet|join|separated <doc> <F> [<F2>|<effect>]";
    const std::string& action = a.at(0, usage);
    const Document doc = load_document(a.at(1, usage), opt.tol);
    std::visit(
        [&](const auto& d) {
            using A = std::decay_t<decltype(d.base)>;
            auto build = [&](const std::string& name) {
                return Subalgebra<A>::from_generators(d.base, d.generators(name));
            };
            try {
                if (action == "build") {
                    const auto f = build(a.at(2, usage));
                    r.details = describe(f);
                    set_verdict(r, true);
                } else if (action == "contains") {
                    const auto f = build(a.at(2, usage));
                    const auto& p = d.point(a.at(3, usage));
                    const bool in = contains(f, p);
                    if (in) r.witness["coefficients"] = encode(*f.span_coordinates(p));
                    r.details["is_effect"] = is_effect(d.base, p);
                    r.details["in_span"] = f.in_span(p);
                    set_verdict(r, in);
                } else if (action == "meet" || action == "join") {
                    const auto f1 = build(a.at(2, usage));
                    const auto f2 = build(a.at(3, usage));
                    const auto g = action == "meet" ? meet(f1, f2) : join(f1, f2);
                    r.details = describe(g);
                    r.details["dim_first"] = f1.dim();
                    r.details["dim_second"] = f2.dim();
                    set_verdict(r, true);
                } else if (action == "separated") {
                    const auto f1 = build(a.at(2, usage));
                    const auto f2 = build(a.at(3, usage));
                    const auto m = meet(f1, f2);
                    r.details["meet_dim"] = m.dim();
                    r.details["join_dim"] = join(f1, f2).dim();
                    set_verdict(r, m.dim() == 1);
                } else {
                    throw InputError(std::string("usage: ") + usage);
                }
            } catch (const InputError&) {
                throw;
            } catch (const Error& e) {
                set_failure(r, e.what());
            }
        },
        doc);
}

void run_obs(const Args& a, const RunOptions& opt, Report& r) {
    const char* usage = "obs validate|dist|apply|postprocess|coexist|iso <doc> ...";
    const std::string& action = a.at(0, usage);
    const Document doc = load_document(a.at(1, usage), opt.tol);
    std::visit(
        [&](const auto& d) {
            using A = std::decay_t<decltype(d.base)>;
            using S = typename A::Scalar;
            auto validated = [&](const std::string& name) {
                const auto raw = d.observable(name);
                return validate_observable(d.base, raw.effects(), raw.outcomes());
            };
            auto strong_span = [&](const std::string& name) { return StrongSpan<A>::make(d.base, d.generators(name)); };
            try {
                if (action == "validate") {
                    const auto raw = d.observable(a.at(2, usage));
                    typename A::Point total = d.base.zero();
                    for (const auto& e : raw.effects()) total = A::add(total, e.value());
                    const auto diff = A::sub(total, d.base.unit());
                    if constexpr (std::same_as<A, QuantumAlgebra>)
                        r.residuals["sum_minus_unit"] = diff.matrix().max_abs();
                    else
                        r.details["sum_minus_unit"] = encode(diff);
                    validate_observable(d.base, raw.effects(), raw.outcomes());
                    set_verdict(r, true);
                } else if (action == "dist") {
                    const auto obs = validated(a.at(2, usage));
                    const auto s = d.state(a.at(3, usage));
                    json dist = json::object();
                    for (const auto& [label, p] : distribution(obs, s)) dist[label] = encode(p);
                    r.details["distribution"] = dist;
                    set_verdict(r, true);
                } else if (action == "apply") {
                    const Channel<S> nu(d.channel(a.at(2, usage)), {}, d.base.tolerance());
                    const auto obs = validated(a.at(3, usage));
                    r.details["result"] = encode_observable(apply_channel(nu, obs));
                    set_verdict(r, true);
                } else if (action == "postprocess") {
                    const auto oa = validated(a.at(2, usage));
                    const auto ob = validated(a.at(3, usage));
                    const auto res = find_postprocessing(oa, ob);
                    if (res.channel) {
                        r.witness["channel"] = encode(res.channel->matrix());
                        const auto back = apply_channel(*res.channel, oa);
                        double worst = 0.0;
                        bool exact = true;
                        for (std::size_t y = 0; y < ob.size(); ++y) {
                            if constexpr (std::same_as<A, QuantumAlgebra>)
                                worst = std::max(worst, max_abs_diff(back.effects()[y].value().matrix(),
                                                                     ob.effects()[y].value().matrix()));
                            else
                                exact = exact && back.effects()[y].value() == ob.effects()[y].value();
                        }
                        if constexpr (std::same_as<A, QuantumAlgebra>)
                            r.residuals["reconstruction"] = worst;
                        else
                            r.details["exact_reconstruction"] = exact;
                        set_verdict(r, true);
                    } else {
                        if (res.bad_input) r.witness["input"] = oa.outcomes()[*res.bad_input];
                        if (res.bad_output) r.witness["output"] = ob.outcomes()[*res.bad_output];
                        if (res.bad_value) r.witness["coefficient"] = encode(*res.bad_value);
                        set_failure(r, res.reason);
                    }
                } else if (action == "coexist") {
                    const auto s = strong_span(a.at(2, usage));
                    const auto w = coexistence_witness(s, d.effect(a.at(3, usage)), d.effect(a.at(4, usage)));
                    r.witness["first_only"] = encode(w.first_only.value());
                    r.witness["second_only"] = encode(w.second_only.value());
                    r.witness["joint"] = encode(w.joint.value());
                    r.witness["remainder"] = encode(w.remainder().value());
                    set_verdict(r, true);
                } else if (action == "iso") {
                    const auto iso = classical_iso(strong_span(a.at(2, usage)));
                    const auto e = d.effect(a.at(3, usage));
                    const auto lambda = iso.forward(e);
                    if (!lambda) {
                        set_failure(r, "effect is not a member of the strong span");
                        return;
                    }
                    r.witness["coordinates"] = encode(std::vector<S>(*lambda));
                    const auto back = iso.inverse(*lambda);
                    if constexpr (std::same_as<A, QuantumAlgebra>)
                        r.residuals["round_trip"] = max_abs_diff(back.value().matrix(), e.value().matrix());
                    else
                        r.details["exact_round_trip"] = back.value() == e.value();
                    set_verdict(r, true);
                } else {
                    throw InputError(std::string("usage: ") + usage);
                }
            } catch (const InputError&) {
                throw;
            } catch (const Error& e) {
                set_failure(r, e.what());
            }
        },
        doc);
}

void run_ic(const Args& a, const RunOptions& opt, Report& r) {
    const char* usage = "ic decide|complementary|strong-complementary <doc> [vars...] | ic sweep <n>";
    const std::string& action = a.at(0, usage);
    if (action == "sweep") {
        std::size_t n = 0;
        try {
            n = std::stoul(a.at(1, usage));
        } catch (const std::logic_error&) {
            throw InputError("sweep size must be a positive integer");
        }
        if (n == 0 || n > 8) throw InputError("sweep size must be between 1 and 8");
        const auto rep = sweep(n, opt.workers);
        r.details["max_n"] = rep.max_n;
        r.details["single_checked"] = rep.single_checked;
        r.details["single_violations"] = rep.single_violations;
        r.details["pairs_checked"] = rep.pairs_checked;
        r.details["strongly_complementary_not_ic"] = rep.strong_not_ic;
        r.details["ic_not_complementary"] = rep.ic_not_complementary;
        r.details["bad_witnesses"] = rep.bad_witnesses;
        r.details["complementary_not_ic"] = rep.complementary_not_ic;
        r.details["ic_not_strongly_complementary"] = rep.ic_not_strong;
        if (rep.first_complementary_not_ic)
            r.witness["complementary_not_ic"] = {rep.first_complementary_not_ic->first.to_string(),
                                                 rep.first_complementary_not_ic->second.to_string()};
        if (rep.first_ic_not_strong)
            r.witness["ic_not_strongly_complementary"] = {rep.first_ic_not_strong->first.to_string(),
                                                          rep.first_ic_not_strong->second.to_string()};
        set_verdict(r, rep.implications_hold());
        return;
    }
    const Document doc = load_document(a.at(1, usage), opt.tol);
    std::visit(
        [&](const auto& d) {
            std::vector<std::string> names = a.rest(2);
            if (names.empty()) names = d.variable_order;
            if (names.empty()) throw InputError("document has no random variables");
            std::vector<Partition> ps;
            for (const auto& n : names) ps.push_back(partition_of(d.variable(n)));
            r.details["partitions"] = encode_partitions(names, ps);
            Partition common = ps.front();
            for (std::size_t k = 1; k < ps.size(); ++k) common = refine(common, ps[k]);
            r.details["refinement"] = common.to_string();
            if (action == "decide") {
                const auto v = is_ic(ps);
                if (v.witness) {
                    r.witness["mu"] = encode(v.witness->mu);
                    r.witness["nu"] = encode(v.witness->nu);
                    r.details["witness_verified"] = witness_verifies(ps, *v.witness);
                }
                set_verdict(r, v.ic);
            } else if (action == "complementary") {
                set_verdict(r, is_complementary(ps));
            } else if (action == "strong-complementary") {
                set_verdict(r, is_strongly_complementary(ps));
            } else {
                throw InputError(std::string("usage: ") + usage);
            }
        },
        doc);
}

json encode_decomposition(const StrongDecomposition& dec, Report& r) {
    json d;
    json ps = json::array();
    for (const auto& p : dec.projections) ps.push_back(encode(p));
    d["projections"] = ps;
    d["ranks"] = dec.ranks;
    d["complement"] = encode(dec.complement);
    d["complement_rank"] = dec.complement_rank;
    r.residuals["reconstruction"] = dec.reconstruction_residual;
    r.residuals["resolution"] = dec.resolution_residual;
    r.residuals["orthogonality"] = dec.orthogonality_residual;
    r.residuals["annihilation"] = dec.annihilation_residual;
    r.residuals["projection"] = dec.projection_residual;
    r.residuals["remainder_margin"] =
        std::isinf(dec.remainder_margin) ? json(nullptr) : json(dec.remainder_margin);
    return d;
}

void run_q(const Args& a, const RunOptions& opt, Report& r) {
    const char* usage = "q spectrum|decompose|example6|example7|strongify <doc> [names...]";
    const std::string& action = a.at(0, usage);
    const Document doc_holder = load_document(a.at(1, usage), opt.tol);
    const auto& d = require_quantum(doc_holder);
    auto names_or_all = [&]() {
        std::vector<QuantumEffect> out;
        const auto names = a.rest(2);
        if (names.empty()) return d.effect_list(d.effect_order);
        for (const auto& n : names) {
            auto g = d.generators(n);
            out.insert(out.end(), g.begin(), g.end());
        }
        return out;
    };
    auto named = [&](std::size_t i, const char* fallback) {
        return d.effect(i < a.words.size() ? a.words[i] : std::string(fallback));
    };
    try {
        if (action == "spectrum") {
            r.details["spectrum"] = encode(spectrum(d.effect(a.at(2, usage))));
            set_verdict(r, true);
        } else if (action == "decompose") {
            r.details = encode_decomposition(strong_decomposition(names_or_all()), r);
            set_verdict(r, true);
        } else if (action == "example6") {
            const auto obs = build_example6(named(2, "alpha"), named(3, "beta"));
            r.details["observable"] = encode_observable(obs);
            json spectra = json::object();
            for (std::size_t i = 0; i < obs.size(); ++i) spectra[obs.outcomes()[i]] = encode(spectrum(obs.effects()[i]));
            r.details["spectra"] = spectra;
            r.residuals["commutator_12"] = commutator_norm(obs.effects()[0], obs.effects()[1]);
            r.residuals["commutator_13"] = commutator_norm(obs.effects()[0], obs.effects()[2]);
            r.residuals["commutator_23"] = commutator_norm(obs.effects()[1], obs.effects()[2]);
            set_verdict(r, true);
        } else if (action == "example7") {
            const auto ex = build_example7(named(2, "b"), named(3, "c"), named(4, "d"));
            json gens = encode_effects(ex.generators);
            r.details = encode_decomposition(strong_decomposition(ex.generators), r);
            r.details["generators"] = gens;
            r.details["commutative"] = ex.commutative;
            r.residuals["commutator_12"] = commutator_norm(ex.generators[0], ex.generators[1]);
            set_verdict(r, true);
        } else if (action == "strongify") {
            const auto res = strongify_commutative(names_or_all(), opt.seed);
            r.details["subsets_tried"] = res.subsets_tried;
            json diags = json::array();
            for (const auto& dg : res.diagonal_form.diagonals) diags.push_back(encode(dg));
            r.details["diagonals"] = diags;
            r.residuals["off_diagonal"] = res.diagonal_form.off_diagonal_residual;
            if (res.proof_gap) {
                r.details["proof_gap"] = true;
                set_failure(r, res.detail);
            } else {
                r.details["proof_gap"] = false;
                r.details["coordinates"] = res.coordinates;
                r.witness["generators"] = encode_effects(res.generators);
                set_verdict(r, true);
            }
        } else {
            throw InputError(std::string("usage: ") + usage);
        }
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        set_failure(r, e.what());
    }
}

}  // namespace

Report execute(const std::vector<std::string>& command, const RunOptions& options) {
    Report r;
    for (const auto& w : command) r.command += (r.command.empty() ? "" : " ") + w;
    try {
        if (command.empty()) throw InputError("missing command (check, csea, obs, ic, q)");
        const Args rest{{command.begin() + 1, command.end()}};
        const std::string& group = command.front();
        if (group == "check")
            run_check(rest, options, r);
        else if (group == "csea")
            run_csea(rest, options, r);
        else if (group == "obs")
            run_obs(rest, options, r);
        else if (group == "ic")
            run_ic(rest, options, r);
        else if (group == "q")
            run_q(rest, options, r);
        else
            throw InputError("unknown command group '" + group + "'");
    } catch (const InputError& e) {
        r = Report{r.command, std::nullopt, {}, {}, {}, e.what(), 2};
    } catch (const nlohmann::ordered_json::exception& e) {
        r = Report{r.command, std::nullopt, {}, {}, {}, e.what(), 2};
    } catch (const Error& e) {
        r = Report{r.command, std::nullopt, {}, {}, {}, e.what(), 2};
    }
    return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cea: finite-dimensional convex effect algebra toolkit"};
    RunOptions options;
    std::string format = "json";
    std::vector<std::string> command;
    app.add_option("--tol", options.tol, "numeric tolerance for the quantum side")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--workers", options.workers, "threads for ic sweep")->check(CLI::Range(1u, 256u));
    app.add_option("command", command, "group action [arguments...]")->required();
    app.footer(
        "commands:\n"
        "  check effect|sharp|strong <doc> <name>\n"
        "  csea build|contains|meet|join|separated <doc> ...\n"
        "  obs validate|dist|apply|postprocess|coexist|iso <doc> ...\n"
        "  ic decide|complementary|strong-complementary <doc> [vars...]\n"
        "  ic sweep <n>\n"
        "  q spectrum|decompose|example6|example7|strongify <doc> ...\n"
        "exit status: 0 true, 1 false, 2 input error; EA_SEED sets the diagonalization seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    if (const char* env = std::getenv("EA_SEED")) {
        try {
            options.seed = std::stoull(env);
        } catch (const std::logic_error&) {
            err << "error: EA_SEED must be an unsigned integer\n";
            return 2;
        }
    }

    const Report report = execute(command, options);
    if (format == "text")
        out << report.to_text();
    else
        out << report.to_json().dump(2) << "\n";
    if (!report.error.empty()) err << "error: " << report.error << "\n";
    return report.exit_code;
}

}  // namespace cea

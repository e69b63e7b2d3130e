#include "cea/document.hpp"

#include <fstream>
#include <set>

namespace cea {

using json = nlohmann::ordered_json;

Rational json_to_rational(const json& j) {
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.dump(), 10);
        if (j.is_number_float()) return parse_rational(j.dump());
    } catch (const Error& e) {
        throw InputError(e.what());
    }
    throw InputError("expected a rational (string \"p/q\" or number), got " + j.dump());
}

RationalVector json_to_rational_vector(const json& j) {
    if (!j.is_array()) throw InputError("expected an array of rationals, got " + j.dump());
    RationalVector out;
    for (const auto& x : j) out.push_back(json_to_rational(x));
    return out;
}

namespace {

double json_to_real(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return json_to_rational(j).get_d();
    throw InputError("expected a real number, got " + j.dump());
}

Complex json_to_complex(const json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw InputError("complex entries are [re, im], got " + j.dump());
        return {json_to_real(j[0]), json_to_real(j[1])};
    }
    return {json_to_real(j), 0.0};
}

std::string value_label(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

}  // namespace

HermitianMatrix json_to_hermitian(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("expected a square matrix, got " + j.dump());
    std::vector<std::vector<Complex>> rows;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != j.size()) throw InputError("matrix must be square: " + j.dump());
        std::vector<Complex> r;
        for (const auto& x : row) r.push_back(json_to_complex(x));
        rows.push_back(std::move(r));
    }
    try {
        return HermitianMatrix(ComplexMatrix::from_rows(rows));
    } catch (const Error& e) {
        throw InputError(e.what());
    }
}

json to_json(const Rational& q) { return to_string(q); }

json to_json(const RationalVector& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(to_string(x));
    return out;
}

json to_json(const RealVector& v) {
    json out = json::array();
    for (double x : v) out.push_back(x + 0.0);
    return out;
}

json to_json(const HermitianMatrix& m) {
    json out = json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(json::array({m(r, c).real() + 0.0, m(r, c).imag() + 0.0}));
        out.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

template <BaseAlgebra A>
typename A::Point decode_point(const A& base, const json& j) {
    typename A::Point p;
    if constexpr (std::same_as<A, ClassicalAlgebra>)
        p = json_to_rational_vector(j);
    else
        p = json_to_hermitian(j);
    try {
        base.check_shape(p);
    } catch (const Error& e) {
        throw InputError(e.what());
    }
    return p;
}

template <BaseAlgebra A>
Content<A> parse_content(A base, const json& j) {
    Content<A> doc(std::move(base));
    std::set<std::string> names;
    auto claim = [&](const std::string& name) {
        if (!names.insert(name).second) throw InputError("duplicate name '" + name + "'");
    };
    auto section = [&](const char* key) -> const json* {
        if (!j.contains(key)) return nullptr;
        if (!j.at(key).is_object()) throw InputError(std::string("section '") + key + "' must be an object");
        return &j.at(key);
    };

    if (const json* s = section("effects"))
        for (const auto& [name, payload] : s->items()) {
            claim(name);
            doc.effect_order.push_back(name);
            doc.effects.emplace(name, decode_point(doc.base, payload));
        }
    if (const json* s = section("states"))
        for (const auto& [name, payload] : s->items()) {
            claim(name);
            doc.states.emplace(name, decode_point(doc.base, payload));
        }
    if (const json* s = section("observables"))
        for (const auto& [name, spec] : s->items()) {
            claim(name);
            if (!spec.is_object() || !spec.contains("effects"))
                throw InputError("observable '" + name + "' needs an \"effects\" object");
            ObservableSpec obs;
            const json& effs = spec.at("effects");
            if (spec.contains("outcomes")) {
                for (const auto& o : spec.at("outcomes")) obs.outcomes.push_back(value_label(o));
            } else {
                for (const auto& [label, v] : effs.items()) obs.outcomes.push_back(label);
            }
            for (const auto& label : obs.outcomes) {
                if (!effs.contains(label))
                    throw InputError("observable '" + name + "' has no effect for outcome '" + label + "'");
                const json& v = effs.at(label);
                if (v.is_string()) {
                    obs.effect_names.push_back(v.template get<std::string>());
                } else {
                    const std::string synthetic = name + "(" + label + ")";
                    doc.effects.emplace(synthetic, decode_point(doc.base, v));
                    obs.effect_names.push_back(synthetic);
                }
            }
            doc.observables.emplace(name, std::move(obs));
        }
    if (const json* s = section("channels"))
        for (const auto& [name, rows] : s->items()) {
            claim(name);
            if (!rows.is_array()) throw InputError("channel '" + name + "' must be a nested array");
            std::vector<RationalVector> r;
            for (const auto& row : rows) r.push_back(json_to_rational_vector(row));
            try {
                doc.channels.emplace(name, RationalMatrix::from_rows(r));
            } catch (const Error& e) {
                throw InputError("channel '" + name + "': " + e.what());
            }
        }
    if (const json* s = section("random_variables"))
        for (const auto& [name, values] : s->items()) {
            claim(name);
            if (!values.is_array() || values.empty())
                throw InputError("random variable '" + name + "' must be a nonempty value list");
            std::vector<std::string> vals;
            for (const auto& v : values) vals.push_back(value_label(v));
            doc.variable_order.push_back(name);
            doc.variables.emplace(name, RandomVariable(std::move(vals)));
        }
    if (const json* s = section("subalgebras"))
        for (const auto& [name, list] : s->items()) {
            claim(name);
            if (!list.is_array()) throw InputError("subalgebra '" + name + "' must list effect names");
            std::vector<std::string> gens;
            for (const auto& g : list) {
                if (!g.is_string()) throw InputError("subalgebra '" + name + "' must list effect names");
                gens.push_back(g.template get<std::string>());
            }
            doc.subalgebras.emplace(name, std::move(gens));
        }

    // Every reference must resolve.
    for (const auto& [name, obs] : doc.observables)
        for (const auto& e : obs.effect_names) (void)doc.point(e);
    for (const auto& [name, gens] : doc.subalgebras)
        for (const auto& e : gens) (void)doc.point(e);
    return doc;
}

}  // namespace

template <BaseAlgebra A>
const typename A::Point& Content<A>::point(const std::string& name) const {
    auto it = effects.find(name);
    if (it == effects.end()) throw InputError("unknown effect '" + name + "'");
    return it->second;
}

template <BaseAlgebra A>
Effect<A> Content<A>::effect(const std::string& name) const {
    try {
        return Effect<A>(base, point(name));
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError("effect '" + name + "': " + e.what());
    }
}

template <BaseAlgebra A>
std::vector<Effect<A>> Content<A>::effect_list(const std::vector<std::string>& names) const {
    std::vector<Effect<A>> out;
    for (const auto& n : names) out.push_back(effect(n));
    return out;
}

template <BaseAlgebra A>
std::vector<Effect<A>> Content<A>::generators(const std::string& name) const {
    if (auto it = subalgebras.find(name); it != subalgebras.end()) return effect_list(it->second);
    if (auto it = observables.find(name); it != observables.end()) return effect_list(it->second.effect_names);
    if (effects.count(name)) return {effect(name)};
    throw InputError("unknown generator list '" + name + "'");
}

template <BaseAlgebra A>
State<A> Content<A>::state(const std::string& name) const {
    auto it = states.find(name);
    if (it == states.end()) throw InputError("unknown state '" + name + "'");
    try {
        return State<A>(base, it->second);
    } catch (const Error& e) {
        throw InputError("state '" + name + "': " + e.what());
    }
}

template <BaseAlgebra A>
Observable<A> Content<A>::observable(const std::string& name) const {
    auto it = observables.find(name);
    if (it == observables.end()) throw InputError("unknown observable '" + name + "'");
    return Observable<A>(it->second.outcomes, effect_list(it->second.effect_names));
}

template <BaseAlgebra A>
DenseMatrix<typename A::Scalar> Content<A>::channel(const std::string& name) const {
    auto it = channels.find(name);
    if (it == channels.end()) throw InputError("unknown channel '" + name + "'");
    if constexpr (std::same_as<typename A::Scalar, Rational>) {
        return it->second;
    } else {
        RealMatrix m(it->second.rows(), it->second.cols());
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = it->second(r, c).get_d();
        return m;
    }
}

template <BaseAlgebra A>
const RandomVariable& Content<A>::variable(const std::string& name) const {
    auto it = variables.find(name);
    if (it == variables.end()) throw InputError("unknown random variable '" + name + "'");
    return it->second;
}

template struct Content<ClassicalAlgebra>;
template struct Content<QuantumAlgebra>;

Document parse_document(const json& j, double tol) {
    if (!j.is_object() || !j.contains("base")) throw InputError("document needs a \"base\" object");
    const json& b = j.at("base");
    const std::string kind = b.value("kind", "");
    try {
        if (kind == "classical") {
            if (!b.contains("n") || !b.at("n").is_number_unsigned()) throw InputError("classical base needs \"n\"");
            return parse_content(ClassicalAlgebra(b.at("n").get<std::size_t>()), j);
        }
        if (kind == "quantum") {
            if (!b.contains("dim") || !b.at("dim").is_number_unsigned()) throw InputError("quantum base needs \"dim\"");
            return parse_content(QuantumAlgebra(b.at("dim").get<std::size_t>(), tol), j);
        }
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(e.what());
    }
    throw InputError("base kind must be \"classical\" or \"quantum\"");
}

Document load_document(const std::string& path, double tol) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    return parse_document(j, tol);
}

}  // namespace cea

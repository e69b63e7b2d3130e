#pragma once
// JSON document ingestion: one base algebra plus named effects, states,
// observables, channels, random variables, and generator lists.

#include "cea/infocomplete.hpp"
#include "cea/observables.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace cea {

/// Malformed input: bad JSON, unknown names, wrong shapes.
class InputError : public Error {
public:
    using Error::Error;
};

struct ObservableSpec {
    std::vector<std::string> outcomes;
    std::vector<std::string> effect_names;  // resolved names (inline payloads get synthetic names)
};

template <BaseAlgebra A>
struct Content {
    A base;
    std::vector<std::string> effect_order;
    std::map<std::string, typename A::Point> effects;  // well-formed payloads; [0,u] checked on use
    std::map<std::string, typename A::Point> states;
    std::map<std::string, ObservableSpec> observables;
    std::map<std::string, RationalMatrix> channels;
    std::vector<std::string> variable_order;
    std::map<std::string, RandomVariable> variables;
    std::map<std::string, std::vector<std::string>> subalgebras;

    explicit Content(A b) : base(std::move(b)) {}

    const typename A::Point& point(const std::string& name) const;
    Effect<A> effect(const std::string& name) const;
    std::vector<Effect<A>> effect_list(const std::vector<std::string>& names) const;
    /// A generator-list name from "subalgebras", or an effect name.
    std::vector<Effect<A>> generators(const std::string& name) const;
    State<A> state(const std::string& name) const;
    Observable<A> observable(const std::string& name) const;
    DenseMatrix<typename A::Scalar> channel(const std::string& name) const;
    const RandomVariable& variable(const std::string& name) const;
};

using Document = std::variant<Content<ClassicalAlgebra>, Content<QuantumAlgebra>>;

Document parse_document(const nlohmann::ordered_json& j, double tol = kDefaultTolerance);
Document load_document(const std::string& path, double tol = kDefaultTolerance);

// Payload decoding shared with the report encoder.
Rational json_to_rational(const nlohmann::ordered_json& j);
RationalVector json_to_rational_vector(const nlohmann::ordered_json& j);
HermitianMatrix json_to_hermitian(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const Rational& q);
nlohmann::ordered_json to_json(const RationalVector& v);
nlohmann::ordered_json to_json(const RealVector& v);
nlohmann::ordered_json to_json(const HermitianMatrix& m);

}  // namespace cea

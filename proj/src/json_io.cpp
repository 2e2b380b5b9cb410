#include "qcert/json_io.hpp"

#include <cmath>
#include <fstream>

namespace qcert {

Json matrix_to_json(const Matrix& m) {
    Json entries = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            entries.push_back({m(i, j).real(), m(i, j).imag()});
        }
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_object()) {
        throw ValidationError("matrix json: expected an object");
    }
    for (const char* key : {"rows", "cols", "entries"}) {
        if (!j.contains(key)) {
            throw ValidationError(std::string("matrix json: missing field \"") + key +
                                  "\"");
        }
    }
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
        throw ValidationError("matrix json: \"rows\" and \"cols\" must be integers");
    }
    long rows = j["rows"].get<long>();
    long cols = j["cols"].get<long>();
    if (rows < 1 || cols < 1) {
        throw ValidationError("matrix json: dimensions must be positive");
    }
    const Json& entries = j["entries"];
    if (!entries.is_array() || static_cast<long>(entries.size()) != rows * cols) {
        throw ValidationError("matrix json: \"entries\" must hold rows*cols = " +
                              std::to_string(rows * cols) + " pairs, found " +
                              std::to_string(entries.size()));
    }
    Matrix m(rows, cols);
    for (long k = 0; k < rows * cols; ++k) {
        const Json& e = entries[static_cast<size_t>(k)];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw ValidationError("matrix json: entry " + std::to_string(k) +
                                  " must be a [re, im] pair");
        }
        double re = e[0].get<double>();
        double im = e[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im)) {
            throw ValidationError("matrix json: entry " + std::to_string(k) +
                                  " is not finite");
        }
        m(k / cols, k % cols) = Complex(re, im);
    }
    return m;
}

Json vector_to_json(const Vector& v) { return matrix_to_json(Matrix(v)); }

Vector vector_from_json(const Json& j) {
    Matrix m = matrix_from_json(j);
    if (m.cols() != 1) {
        throw ValidationError("vector json: expected a single column");
    }
    return Vector(m.col(0));
}

Json range_set_to_json(const RangeSet& r) {
    Json points = Json::array();
    for (const Complex& z : r.points) {
        points.push_back({z.real(), z.imag()});
    }
    return Json{{"kind", r.kind == RangeKind::HullPolygon ? "hull-polygon"
                                                          : "sampled-boundary"},
                {"q", r.q},
                {"points", points},
                {"dist_to_zero", r.dist_to_zero}};
}

RangeSet range_set_from_json(const Json& j) {
    RangeSet r;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "hull-polygon") {
        r.kind = RangeKind::HullPolygon;
    } else if (kind == "sampled-boundary") {
        r.kind = RangeKind::SampledBoundary;
    } else {
        throw ValidationError("range set json: unknown kind \"" + kind + "\"");
    }
    r.q = j.at("q").get<double>();
    r.dist_to_zero = j.at("dist_to_zero").get<double>();
    for (const Json& p : j.at("points")) {
        r.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    return r;
}

Json sim_report_to_json(const SimReport& r) {
    Json j{{"exact_p1", r.exact_p1},
           {"exact_p2", r.exact_p2},
           {"truth", r.truth == Truth::H0 ? "h0" : "h1"},
           {"shots", r.shots},
           {"seed", r.seed},
           {"generator", r.generator}};
    j["empirical_p1"] = r.empirical_p1 ? Json(*r.empirical_p1) : Json(nullptr);
    j["empirical_p2"] = r.empirical_p2 ? Json(*r.empirical_p2) : Json(nullptr);
    j["ci_halfwidth_p1"] = r.ci_halfwidth_p1 ? Json(*r.ci_halfwidth_p1) : Json(nullptr);
    j["ci_halfwidth_p2"] = r.ci_halfwidth_p2 ? Json(*r.ci_halfwidth_p2) : Json(nullptr);
    return j;
}

SimReport sim_report_from_json(const Json& j) {
    SimReport r;
    r.exact_p1 = j.at("exact_p1").get<double>();
    r.exact_p2 = j.at("exact_p2").get<double>();
    r.truth = j.at("truth").get<std::string>() == "h0" ? Truth::H0 : Truth::H1;
    r.shots = j.at("shots").get<long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.generator = j.at("generator").get<std::string>();
    auto opt = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        return j.at(key).get<double>();
    };
    r.empirical_p1 = opt("empirical_p1");
    r.empirical_p2 = opt("empirical_p2");
    r.ci_halfwidth_p1 = opt("ci_halfwidth_p1");
    r.ci_halfwidth_p2 = opt("ci_halfwidth_p2");
    return r;
}

Json state_strategy_to_json(const StateStrategy& s) {
    return Json{{"effect", matrix_to_json(s.effect.matrix())},
                {"p1", s.p1},
                {"p2", s.p2},
                {"flags", s.flags}};
}

Json unitary_strategy_to_json(const UnitaryStrategy& s) {
    return Json{{"input", vector_to_json(s.input.amplitudes())},
                {"effect", matrix_to_json(s.effect.matrix())},
                {"p1", s.p1},
                {"p2", s.p2},
                {"flags", s.flags}};
}

Json povm_strategy_to_json(const DephasedStrategy& s) {
    Json e0 = Json::array();
    for (int i = 0; i < s.e0.dim(); ++i) {
        Complex z = s.e0.matrix()(i, i);
        e0.push_back({z.real(), z.imag()});
    }
    Json effects = Json::object();
    for (size_t label = 0; label < s.conditional_effects.size(); ++label) {
        effects[std::to_string(label)] =
            matrix_to_json(s.conditional_effects[label].matrix());
    }
    return Json{{"e0", e0},
                {"rho0", matrix_to_json(s.rho0.matrix())},
                {"input", vector_to_json(s.input.amplitudes())},
                {"conditional_effects", effects},
                {"p1", s.p1},
                {"p2", s.p2},
                {"flags", s.flags}};
}

bool is_builtin_matrix(const std::string& name) {
    return name == "hadamard" || name == "fig1" || name == "fig2";
}

Matrix builtin_matrix(const std::string& name) {
    if (name == "hadamard") {
        Matrix h(2, 2);
        double s = 1.0 / std::sqrt(2.0);
        h << s, s, s, -s;
        return h;
    }
    if (name == "fig1") {
        Matrix m = Matrix::Zero(3, 3);
        m(0, 0) = 1.0;
        m(1, 1) = std::polar(1.0, M_PI / 3.0);
        m(2, 2) = std::polar(1.0, 2.0 * M_PI / 3.0);
        return m;
    }
    if (name == "fig2") {
        Matrix m = Matrix::Zero(2, 2);
        m(0, 0) = 1.0;
        m(1, 1) = std::polar(1.0, M_PI / 3.0);
        return m;
    }
    throw ValidationError("unknown builtin matrix \"" + name + "\"");
}

Matrix load_matrix(const std::string& name_or_path) {
    if (is_builtin_matrix(name_or_path)) {
        return builtin_matrix(name_or_path);
    }
    std::ifstream in(name_or_path);
    if (!in) {
        throw ValidationError("cannot open matrix file \"" + name_or_path + "\"");
    }
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw ValidationError("malformed json in \"" + name_or_path + "\": " + e.what());
    }
    return matrix_from_json(j);
}

UnitaryOperator load_unitary(const std::string& name_or_path, const Config& cfg) {
    return UnitaryOperator(load_matrix(name_or_path), cfg);
}

PureState load_pure_state(const std::string& path, const Config& cfg) {
    Matrix m = load_matrix(path);
    if (m.cols() != 1) {
        throw ValidationError("pure state file \"" + path +
                              "\" must hold a single column");
    }
    return PureState(Vector(m.col(0)), cfg);
}

}  // namespace qcert

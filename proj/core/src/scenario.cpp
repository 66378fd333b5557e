#include "ltvobs/scenario.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

namespace ltvobs {

namespace {

using nlohmann::json;

Vector pad(Vector v, int dim) {
    if (v.size() == dim) return v;
    Vector out = Vector::Zero(dim);
    out.head(v.size()) = v;
    return out;
}

Vector json_to_vector(const json& j) {
    Vector v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

}  // namespace

Trajectory Trajectory::constant(const Vector& value) {
    Trajectory tr;
    tr.kind = "constant";
    tr.params_json = json{{"value", vector_to_json(value)}}.dump();
    Vector zero = Vector::Zero(value.size());
    tr.u = [value](double) { return value; };
    tr.u_dot = [zero](double) { return zero; };
    tr.u_ddot = [zero](double) { return zero; };
    return tr;
}

Trajectory Trajectory::circular(int dim, double amplitude, double omega,
                                double phase) {
    Trajectory tr;
    tr.kind = "circular";
    tr.params_json = json{{"amplitude", amplitude},
                          {"omega", omega},
                          {"phase", phase}}.dump();
    auto make = [dim](double a, double b) {
        Vector v = Vector::Zero(dim);
        v(0) = a;
        v(1) = b;
        return v;
    };
    tr.u = [=](double t) {
        const double p = omega * t + phase;
        return make(amplitude * std::sin(p), amplitude * std::cos(p));
    };
    tr.u_dot = [=](double t) {
        const double p = omega * t + phase;
        return make(amplitude * omega * std::cos(p),
                    -amplitude * omega * std::sin(p));
    };
    tr.u_ddot = [=](double t) {
        const double p = omega * t + phase;
        const double w2 = omega * omega;
        return make(-amplitude * w2 * std::sin(p), -amplitude * w2 * std::cos(p));
    };
    return tr;
}

Trajectory Trajectory::figure_eight(int dim, double amplitude, double omega) {
    Trajectory tr;
    tr.kind = "figure_eight";
    tr.params_json = json{{"amplitude", amplitude}, {"omega", omega}}.dump();
    auto make = [dim](double a, double b) {
        Vector v = Vector::Zero(dim);
        v(0) = a;
        v(1) = b;
        return v;
    };
    tr.u = [=](double t) {
        return make(amplitude * std::sin(omega * t),
                    amplitude * std::sin(2.0 * omega * t));
    };
    tr.u_dot = [=](double t) {
        return make(amplitude * omega * std::cos(omega * t),
                    2.0 * amplitude * omega * std::cos(2.0 * omega * t));
    };
    tr.u_ddot = [=](double t) {
        const double w2 = omega * omega;
        return make(-amplitude * w2 * std::sin(omega * t),
                    -4.0 * amplitude * w2 * std::sin(2.0 * omega * t));
    };
    return tr;
}

Trajectory Trajectory::polynomial(const std::vector<Vector>& coeffs) {
    if (coeffs.empty()) {
        throw ConfigError("Trajectory::polynomial: at least one coefficient");
    }
    Trajectory tr;
    tr.kind = "polynomial";
    json cj = json::array();
    for (const auto& c : coeffs) cj.push_back(vector_to_json(c));
    tr.params_json = json{{"coeffs", cj}}.dump();
    const Eigen::Index dim = coeffs.front().size();
    auto eval = [coeffs, dim](double t, int deriv) {
        Vector acc = Vector::Zero(dim);
        for (int j = deriv; j < static_cast<int>(coeffs.size()); ++j) {
            double fac = 1.0;
            for (int q = 0; q < deriv; ++q) fac *= (j - q);
            acc += fac * std::pow(t, j - deriv) * coeffs[static_cast<size_t>(j)];
        }
        return acc;
    };
    tr.u = [eval](double t) { return eval(t, 0); };
    tr.u_dot = [eval](double t) { return eval(t, 1); };
    tr.u_ddot = [eval](double t) { return eval(t, 2); };
    return tr;
}

Scenario Scenario::from_json(const json& j) {
    Scenario sc;
    const int dim = j.at("dim").get<int>();
    if (dim != 2 && dim != 3) {
        throw ConfigError("Scenario: dim must be 2 or 3");
    }

    std::vector<Vector> beacons;
    for (const auto& b : j.at("beacons")) {
        Vector z = json_to_vector(b);
        if (z.size() != dim) {
            throw ConfigError("Scenario: beacon dimension mismatch");
        }
        beacons.push_back(std::move(z));
    }
    Vector alpha;
    if (j.contains("alpha") && !j["alpha"].is_null()) {
        alpha = json_to_vector(j["alpha"]);
    }
    sc.beacons = BeaconConfig::make(beacons, alpha);

    const json& tj = j.at("trajectory");
    const std::string kind = tj.at("kind").get<std::string>();
    const json params = tj.value("params", json::object());
    if (kind == "constant") {
        sc.trajectory =
            Trajectory::constant(pad(json_to_vector(params.at("value")), dim));
    } else if (kind == "circular") {
        sc.trajectory = Trajectory::circular(
            dim, params.value("amplitude", 1.0), params.value("omega", 1.0),
            params.value("phase", 0.0));
    } else if (kind == "figure_eight") {
        sc.trajectory = Trajectory::figure_eight(
            dim, params.value("amplitude", 1.0), params.value("omega", 1.0));
    } else if (kind == "polynomial") {
        std::vector<Vector> coeffs;
        for (const auto& c : params.at("coeffs")) {
            coeffs.push_back(pad(json_to_vector(c), dim));
        }
        sc.trajectory = Trajectory::polynomial(coeffs);
    } else {
        throw ConfigError("Scenario: unknown trajectory kind '" + kind + "'");
    }

    sc.x0 = json_to_vector(j.at("x0"));
    if (sc.x0.size() != dim) {
        throw ConfigError("Scenario: x0 dimension mismatch");
    }
    if (j.contains("bias") && !j["bias"].is_null()) {
        sc.bias = json_to_vector(j["bias"]);
        if (sc.bias.size() != dim) {
            throw ConfigError("Scenario: bias dimension mismatch");
        }
    }
    sc.horizon = j.at("horizon").get<double>();
    sc.dt = j.at("dt").get<double>();
    sc.delta = j.at("delta").get<double>();
    if (sc.horizon <= 0.0 || sc.dt <= 0.0 || sc.delta <= 0.0) {
        throw ConfigError("Scenario: horizon, dt and delta must be positive");
    }
    return sc;
}

Scenario Scenario::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("Scenario: cannot open " + path.string());
    }
    json j = json::parse(in);  // throws json::parse_error with line info
    return from_json(j);
}

json Scenario::to_json() const {
    json beacons = json::array();
    for (int i = 0; i < this->beacons.count(); ++i) {
        beacons.push_back(vector_to_json(this->beacons.beacon(i)));
    }
    json j{{"dim", dim()},
           {"beacons", beacons},
           {"alpha", vector_to_json(this->beacons.alpha)},
           {"trajectory",
            {{"kind", trajectory.kind},
             {"params", json::parse(trajectory.params_json)}}},
           {"x0", vector_to_json(x0)},
           {"horizon", horizon},
           {"dt", dt},
           {"delta", delta}};
    j["bias"] = bias_enabled() ? vector_to_json(bias) : json();
    return j;
}

}  // namespace ltvobs

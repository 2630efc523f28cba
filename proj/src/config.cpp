#include "wavecascade/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wavecascade {

namespace {

constexpr double PI = 3.14159265358979323846;

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("expected [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json map_to_json(const ConformalMap& m) {
    json j;
    if (const auto* s = std::get_if<StraightMap>(&m.kind())) {
        j["kind"] = "straight";
        j["width"] = s->width;
        j["u0"] = s->u0;
        j["z0"] = complex_to_json(s->z0);
    } else if (const auto* e = std::get_if<ExpScMap>(&m.kind())) {
        j["kind"] = "exp_sc";
        j["A"] = e->A;
        j["alpha"] = e->alpha;
        j["b"] = e->b;
        j["c"] = e->c;
        j["w"] = e->w;
        j["w0"] = e->w0;
        j["z0"] = complex_to_json(e->z0);
    } else {
        const auto& o = std::get<OuterPolygonMap>(m.kind());
        j["kind"] = "outer_polygon";
        j["A"] = complex_to_json(o.A);
        j["alpha"] = o.alpha;
        j["phi1"] = o.phi1;
        j["phi2"] = o.phi2;
        j["a"] = o.a;
        j["w0"] = o.w0;
        j["z0"] = complex_to_json(o.z0);
    }
    return j;
}

ConformalMap map_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "straight") {
        StraightMap s;
        s.width = j.at("width").get<double>();
        s.u0 = j.value("u0", 0.0);
        s.z0 = j.contains("z0") ? complex_from_json(j["z0"]) : Complex(0.0);
        return ConformalMap(s);
    }
    if (kind == "exp_sc") {
        ExpScMap e;
        e.A = j.at("A").get<double>();
        for (int i = 0; i < 4; ++i) {
            e.alpha[i] = j.at("alpha")[i].get<double>();
            e.b[i] = j.at("b")[i].get<double>();
            e.c[i] = j.at("c")[i].get<double>();
            e.w[i] = j.at("w")[i].get<double>();
        }
        e.w0 = j.at("w0").get<double>();
        e.z0 = complex_from_json(j.at("z0"));
        return ConformalMap(e);
    }
    if (kind == "outer_polygon") {
        OuterPolygonMap o;
        o.A = complex_from_json(j.at("A"));
        o.alpha = j.at("alpha").get<double>();
        o.phi1 = j.at("phi1").get<double>();
        o.phi2 = j.at("phi2").get<double>();
        o.a = j.at("a").get<double>();
        o.w0 = j.at("w0").get<double>();
        o.z0 = complex_from_json(j.at("z0"));
        return ConformalMap(o);
    }
    throw ConfigError("unknown map kind: " + kind);
}

}  // namespace

void SolveConfig::validate() const {
    if (N < 1) throw ConfigError("N must be at least 1");
    if (du <= 0) throw ConfigError("du must be positive");
    if (rel_tol <= 0 || abs_tol <= 0) throw ConfigError("tolerances must be positive");
    if (k_values.empty()) throw ConfigError("no wavenumbers given");
    for (const double k : k_values)
        if (k <= 0) throw ConfigError("wavenumbers must be positive");
    if (elements.empty()) throw ConfigError("no elements given");
    bool prev_is_block = false;
    bool have_block = false;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const bool is_block = std::holds_alternative<BlockElement>(elements[i]);
        if (is_block) {
            const auto& b = std::get<BlockElement>(elements[i]);
            if (b.u_right <= b.u_left)
                throw ConfigError("element " + std::to_string(i) +
                                  ": empty u range");
            have_block = true;
        } else {
            const auto& g = std::get<StraightGuide>(elements[i]);
            if (g.width <= 0 || g.length < 0)
                throw ConfigError("element " + std::to_string(i) +
                                  ": invalid straight guide");
            if (!prev_is_block && i > 0)
                throw ConfigError("consecutive straight guides are not supported");
        }
        prev_is_block = is_block;
    }
    if (!have_block) throw ConfigError("need at least one conformal block");
}

SolveConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    SolveConfig c;
    c.N = j.value("N", std::size_t{10});
    c.du = j.value("du", 0.01);
    c.rel_tol = j.value("rel_tol", 1e-8);
    c.abs_tol = j.value("abs_tol", 1e-10);
    c.out_dir = j.value("out", std::string("out"));
    if (j.contains("k")) {
        const auto& kj = j["k"];
        if (kj.contains("list")) {
            for (const auto& v : kj["list"]) c.k_values.push_back(v.get<double>());
        } else {
            const double k0 = kj.at("min").get<double>();
            const double k1 = kj.at("max").get<double>();
            const double st = kj.at("step").get<double>();
            if (st <= 0) throw ConfigError("k.step must be positive");
            for (double k = k0; k <= k1 + 1e-12; k += st) c.k_values.push_back(k);
        }
    }
    if (j.contains("incident"))
        for (const auto& v : j["incident"]) c.incident.push_back(complex_from_json(v));
    if (j.contains("elements")) {
        for (const auto& ej : j["elements"]) {
            const std::string type = ej.at("type").get<std::string>();
            if (type == "straight_guide") {
                StraightGuide g;
                g.width = ej.at("width").get<double>();
                g.length = ej.at("length").get<double>();
                c.elements.emplace_back(g);
            } else if (type == "block") {
                BlockElement b;
                b.map = map_from_json(ej.at("map"));
                b.u_left = ej.at("u_range")[0].get<double>();
                b.u_right = ej.at("u_range")[1].get<double>();
                if (ej.contains("admittance"))
                    for (const auto& sj : ej["admittance"]["segments"]) {
                        AdmittanceSegment s;
                        s.u0 = sj.at("u")[0].get<double>();
                        s.u1 = sj.at("u")[1].get<double>();
                        s.u2 = sj.at("u")[2].get<double>();
                        s.u3 = sj.at("u")[3].get<double>();
                        s.beta_peak = complex_from_json(sj.at("beta"));
                        b.admittance.push_back(s);
                    }
                c.elements.emplace_back(std::move(b));
            } else {
                throw ConfigError("unknown element type: " + type);
            }
        }
    }
    c.validate();
    return c;
}

SolveConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const SolveConfig& c) {
    json j;
    j["N"] = c.N;
    j["du"] = c.du;
    j["rel_tol"] = c.rel_tol;
    j["abs_tol"] = c.abs_tol;
    j["out"] = c.out_dir;
    j["k"]["list"] = c.k_values;
    j["incident"] = json::array();
    for (const auto& z : c.incident) j["incident"].push_back(complex_to_json(z));
    j["elements"] = json::array();
    for (const auto& el : c.elements) {
        json ej;
        if (const auto* g = std::get_if<StraightGuide>(&el)) {
            ej["type"] = "straight_guide";
            ej["width"] = g->width;
            ej["length"] = g->length;
        } else {
            const auto& b = std::get<BlockElement>(el);
            ej["type"] = "block";
            ej["map"] = map_to_json(b.map);
            ej["u_range"] = json::array({b.u_left, b.u_right});
            ej["admittance"]["segments"] = json::array();
            for (const auto& s : b.admittance) {
                json sj;
                sj["u"] = json::array({s.u0, s.u1, s.u2, s.u3});
                sj["beta"] = complex_to_json(s.beta_peak);
                ej["admittance"]["segments"].push_back(sj);
            }
        }
        j["elements"].push_back(ej);
    }
    return j.dump(2) + "\n";
}

namespace {

SolveConfig example_config_with_beta(Complex beta_peak) {
    SolveConfig c;
    c.N = 10;
    c.k_values = {15.0};
    c.incident = {Complex(1.0, 0.0)};

    ExpScMap m1;
    m1.A = 0.6 / PI;
    m1.alpha = {0.85, 1.15, 1.15, 0.85};
    m1.b = {1.0, 0.05, 0.05, 1.0};
    m1.c = {1.0, 0.05, 0.05, 1.0};
    m1.w = {-1.0, -0.008740, 0.008740, 1.0};
    m1.w0 = 2.0;
    m1.z0 = Complex(1.0, 0.2);

    OuterPolygonMap m2;
    m2.A = 0.2250728 * std::exp(Complex(0.0, -3.0 * PI / 4.0));
    m2.alpha = 1.75;
    m2.phi1 = 0.3 * PI;
    m2.phi2 = 0.7 * PI;
    m2.a = -0.4632;
    m2.w0 = -7.0;
    m2.z0 = Complex(4.4485, 0.2);

    BlockElement b1;
    b1.map = ConformalMap(m1);
    b1.u_left = -5.0;
    b1.u_right = 5.0;
    b1.admittance = {{-2.0, -1.0, 1.0, 2.0, beta_peak}};

    BlockElement b3;
    b3.map = ConformalMap(m2);
    b3.u_left = -7.0;
    b3.u_right = 7.0;
    b3.admittance = {{-2.0, -1.0, 1.0, 2.0, beta_peak}};

    // the middle straight piece: length from the two map anchors
    const double x1 = b1.map.point(Complex(5.0, 0.0)).real();
    const double x3 = b3.map.point(Complex(-7.0, 0.0)).real();
    StraightGuide mid;
    mid.width = 0.6;
    mid.length = x3 - x1;

    c.elements.emplace_back(std::move(b1));
    c.elements.emplace_back(mid);
    c.elements.emplace_back(std::move(b3));
    return c;
}

}  // namespace

SolveConfig paper_example_config() {
    return example_config_with_beta(Complex(0.5, 0.5));
}

SolveConfig paper_example_lossless_config() {
    return example_config_with_beta(Complex(0.0, 0.5));
}

}  // namespace wavecascade

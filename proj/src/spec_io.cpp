#include "fractal_tube/spec_io.hpp"

#include "fractal_tube/error.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

namespace fractal_tube {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what)
{
    throw Error(ErrorCode::ParseError, what);
}

const json& field(const json& obj, const char* key)
{
    if (!obj.is_object() || !obj.contains(key)) {
        parse_fail(std::string("missing field '") + key + "'");
    }
    return obj.at(key);
}

double number(const json& v, const std::string& what)
{
    if (!v.is_number()) {
        parse_fail(what + " must be a number");
    }
    return v.get<double>();
}

Vec2 point(const json& v, const std::string& what)
{
    if (!v.is_array() || v.size() != 2) {
        parse_fail(what + " must be an [x, y] pair");
    }
    return {number(v[0], what), number(v[1], what)};
}

std::vector<Vec2> points(const json& v, const std::string& what)
{
    if (!v.is_array()) {
        parse_fail(what + " must be a list of points");
    }
    std::vector<Vec2> out;
    for (const json& p : v) {
        out.push_back(point(p, what));
    }
    return out;
}

std::vector<double> numbers(const json& v, const std::string& what)
{
    if (v.is_number()) {
        return {v.get<double>()};
    }
    if (!v.is_array()) {
        parse_fail(what + " must be a number or a list of numbers");
    }
    std::vector<double> out;
    for (const json& x : v) {
        out.push_back(number(x, what));
    }
    return out;
}

Similitude parse_map(const json& m)
{
    Similitude map;
    map.ratio = number(field(m, "ratio"), "ratio");
    if (m.contains("rotation_deg")) {
        map.rotation = number(m.at("rotation_deg"), "rotation_deg") * M_PI / 180.0;
    }
    if (m.contains("reflect")) {
        if (!m.at("reflect").is_boolean()) {
            parse_fail("reflect must be true or false");
        }
        map.reflect = m.at("reflect").get<bool>();
    }
    if (m.contains("translate")) {
        map.translation = numbers(m.at("translate"), "translate");
    }
    return map;
}

GeneratorProfile parse_generator(const json& g)
{
    const json& type = field(g, "type");
    if (!type.is_string()) {
        parse_fail("generator type must be a string");
    }
    const std::string t = type.get<std::string>();
    if (t == "interval") {
        return profile_interval(number(field(g, "length"), "length"));
    }
    if (t == "triangle") {
        const std::vector<Vec2> v = points(field(g, "vertices"), "triangle vertices");
        if (v.size() != 3) {
            parse_fail("triangle needs exactly three vertices");
        }
        return profile_triangle(v[0], v[1], v[2]);
    }
    if (t == "kappa") {
        return profile_from_kappa(numbers(field(g, "kappa"), "kappa"), number(field(g, "inradius"), "inradius"));
    }
    parse_fail("unknown generator type '" + t + "'");
}

HullSteiner parse_hull(const json& h)
{
    const json& type = field(h, "type");
    const std::string t = type.is_string() ? type.get<std::string>() : std::string();
    if (t == "interval") {
        return hull_steiner_interval(number(field(h, "length"), "hull length"));
    }
    if (t == "polygon") {
        return hull_steiner_polygon(points(field(h, "vertices"), "hull vertices"));
    }
    parse_fail("hull type must be 'interval' or 'polygon'");
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

// z -> alpha conj(z) + beta sending p -> p2 and q -> q2
json reflected_map(Vec2 p, Vec2 q, Vec2 p2, Vec2 q2)
{
    const std::complex<double> zp(p.x, p.y), zq(q.x, q.y), wp(p2.x, p2.y), wq(q2.x, q2.y);
    const std::complex<double> alpha = (wp - wq) / std::conj(zp - zq);
    const std::complex<double> beta = wp - alpha * std::conj(zp);
    return {{"ratio", std::abs(alpha)},
            {"rotation_deg", std::arg(alpha) * 180.0 / M_PI},
            {"reflect", true},
            {"translate", json::array({beta.real(), beta.imag()})}};
}

void check_acute(double a, double b, double c)
{
    for (double x : {a, b, c}) {
        if (!(x > 0.0 && x < 90.0)) {
            throw Error(ErrorCode::InvalidArgument, "triangle not acute: every angle must lie in (0, 90) degrees");
        }
    }
    if (std::abs(a + b + c - 180.0) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument, "triangle angles must sum to 180 degrees");
    }
}

Vec2 foot(Vec2 p, Vec2 a, Vec2 b)
{
    const Vec2 ab = b - a;
    return a + (dot(p - a, ab) / dot(ab, ab)) * ab;
}

}  // namespace

SystemSpec parse_system_spec(const json& doc)
{
    if (!doc.is_object()) {
        parse_fail("system description must be a JSON object");
    }
    SystemSpec spec;
    if (doc.contains("name") && doc.at("name").is_string()) {
        spec.name = doc.at("name").get<std::string>();
    }
    const json& dim = field(doc, "ambient_dim");
    if (!dim.is_number_integer()) {
        parse_fail("ambient_dim must be an integer");
    }
    const json& maps = field(doc, "maps");
    if (!maps.is_array()) {
        parse_fail("maps must be a list");
    }
    std::vector<Similitude> parsed;
    for (const json& m : maps) {
        parsed.push_back(parse_map(m));
    }
    spec.system = build_system(std::move(parsed), dim.get<int>());

    if (doc.contains("generators")) {
        const json& gens = doc.at("generators");
        if (!gens.is_array()) {
            parse_fail("generators must be a list");
        }
        for (const json& g : gens) {
            spec.profiles.push_back(parse_generator(g));
            if (spec.profiles.back().dim != spec.system.ambient_dim()) {
                throw Error(ErrorCode::DimMismatch, "generator dimension differs from ambient_dim");
            }
        }
    }
    if (doc.contains("hull") && !doc.at("hull").is_null()) {
        spec.hull = parse_hull(doc.at("hull"));
        if (spec.hull->dim != spec.system.ambient_dim()) {
            throw Error(ErrorCode::DimMismatch, "hull dimension differs from ambient_dim");
        }
    }
    if (doc.contains("lattice_decl") && !doc.at("lattice_decl").is_null()) {
        const json& decl = doc.at("lattice_decl");
        const double base = number(field(decl, "base_r"), "base_r");
        std::vector<int> exps;
        const json& e = field(decl, "exponents");
        if (!e.is_array()) {
            parse_fail("exponents must be a list of integers");
        }
        for (const json& k : e) {
            if (!k.is_number_integer()) {
                parse_fail("exponents must be integers");
            }
            exps.push_back(k.get<int>());
        }
        spec.lattice_decl = declared_lattice(spec.system, base, std::move(exps));
    }
    return spec;
}

SystemSpec parse_system_spec_text(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        parse_fail(std::string("malformed JSON: ") + e.what());
    }
    return parse_system_spec(doc);
}

SystemSpec load_system_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        parse_fail("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system_spec_text(buf.str());
}

LatticeClass lattice_of(const SystemSpec& spec)
{
    return spec.lattice_decl ? *spec.lattice_decl : classify_lattice(spec.system);
}

json cantor_spec()
{
    return {{"name", "cantor"},
            {"ambient_dim", 1},
            {"maps", json::array({{{"ratio", 1.0 / 3.0}, {"translate", json::array({0.0})}},
                                  {{"ratio", 1.0 / 3.0}, {"translate", json::array({2.0 / 3.0})}}})},
            {"generators", json::array({{{"type", "interval"}, {"length", 1.0 / 3.0}}})},
            {"hull", {{"type", "interval"}, {"length", 1.0}}},
            {"lattice_decl", {{"base_r", 1.0 / 3.0}, {"exponents", json::array({1, 1})}}}};
}

json gasket_spec()
{
    const double h = std::sqrt(3.0) / 2.0;
    return {{"name", "gasket"},
            {"ambient_dim", 2},
            {"maps", json::array({{{"ratio", 0.5}, {"translate", json::array({0.0, 0.0})}},
                                  {{"ratio", 0.5}, {"translate", json::array({0.5, 0.0})}},
                                  {{"ratio", 0.5}, {"translate", json::array({0.25, h / 2.0})}}})},
            {"generators", json::array({{{"type", "triangle"},
                                         {"vertices", json::array({point_json({0.5, 0.0}), point_json({0.75, h / 2.0}),
                                                                   point_json({0.25, h / 2.0})})}}})},
            {"hull", {{"type", "polygon"},
                      {"vertices", json::array({point_json({0.0, 0.0}), point_json({1.0, 0.0}),
                                                point_json({0.5, h})})}}},
            {"lattice_decl", {{"base_r", 0.5}, {"exponents", json::array({1, 1, 1})}}}};
}

json string_spec()
{
    return {{"name", "string_2_3"},
            {"ambient_dim", 1},
            {"maps", json::array({{{"ratio", 0.5}, {"translate", json::array({0.0})}},
                                  {{"ratio", 1.0 / 3.0}, {"translate", json::array({2.0 / 3.0})}}})},
            {"generators", json::array({{{"type", "interval"}, {"length", 1.0 / 6.0}}})},
            {"hull", {{"type", "interval"}, {"length", 1.0}}}};
}

OrthicGeometry orthic_geometry(double angle_a, double angle_b, double angle_c)
{
    check_acute(angle_a, angle_b, angle_c);
    const double A = angle_a * M_PI / 180.0;
    const double B = angle_b * M_PI / 180.0;
    const double C = angle_c * M_PI / 180.0;
    // circumradius 1/2: side opposite each angle is its sine
    const double b = std::sin(B);
    const double c = std::sin(C);
    OrthicGeometry geo;
    geo.vertices = {Vec2{0.0, 0.0}, Vec2{c, 0.0}, Vec2{b * std::cos(A), b * std::sin(A)}};
    const auto& [pa, pb, pc] = geo.vertices;
    geo.feet = {foot(pa, pb, pc), foot(pb, pc, pa), foot(pc, pa, pb)};
    return geo;
}

GeneratorProfile orthic_profile(double angle_a, double angle_b, double angle_c)
{
    check_acute(angle_a, angle_b, angle_c);
    const double A = angle_a * M_PI / 180.0;
    const double B = angle_b * M_PI / 180.0;
    const double C = angle_c * M_PI / 180.0;
    const double a = std::sin(A);
    const double b = std::sin(B);
    const double c = std::sin(C);
    const double area = 0.5 * b * c * std::sin(A);
    const double cos_prod = std::cos(A) * std::cos(B) * std::cos(C);
    const double pedal_perimeter = a * std::cos(A) + b * std::cos(B) + c * std::cos(C);
    const double g = 4.0 * area * cos_prod / pedal_perimeter;
    return GeneratorProfile{
        2, {-(std::tan(A) + std::tan(B) + std::tan(C)), pedal_perimeter, -2.0 * cos_prod * area}, g};
}

json orthic_spec(double angle_a, double angle_b, double angle_c)
{
    const OrthicGeometry geo = orthic_geometry(angle_a, angle_b, angle_c);
    const GeneratorProfile profile = orthic_profile(angle_a, angle_b, angle_c);
    const auto& [pa, pb, pc] = geo.vertices;
    const auto& [fa, fb, fc] = geo.feet;
    // each corner triangle is the whole triangle reflected and scaled by the cosine
    std::ostringstream name;
    name << "orthic_" << angle_a << "_" << angle_b << "_" << angle_c;
    return {{"name", name.str()},
            {"ambient_dim", 2},
            {"maps", json::array({reflected_map(pa, pb, pa, fb), reflected_map(pb, pc, pb, fc),
                                  reflected_map(pc, pa, pc, fa)})},
            {"generators", json::array({{{"type", "kappa"},
                                         {"kappa", profile.kappa},
                                         {"inradius", profile.inradius}}})},
            {"hull", {{"type", "polygon"},
                      {"vertices", json::array({point_json(pa), point_json(pb), point_json(pc)})}}}};
}

}  // namespace fractal_tube

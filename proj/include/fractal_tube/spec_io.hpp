#pragma once

#include "fractal_tube/generator.hpp"
#include "fractal_tube/ifs.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace fractal_tube {

/// A parsed system description: maps, generators, optional hull and an
/// optional exact lattice declaration.
struct SystemSpec {
    std::string name;
    IfsSystem system;
    std::vector<GeneratorProfile> profiles;
    std::optional<HullSteiner> hull;
    std::optional<LatticeClass> lattice_decl;
};

/// Throws ParseError for malformed or mistyped fields; validation errors from
/// the IFS and generator builders propagate with their own codes.
SystemSpec parse_system_spec(const nlohmann::json& doc);
SystemSpec parse_system_spec_text(const std::string& text);
SystemSpec load_system_spec(const std::string& path);

/// Lattice class from the declaration when present, else detected.
LatticeClass lattice_of(const SystemSpec& spec);

/// Middle-third Cantor set on [0,1] with its single gap as generator.
nlohmann::json cantor_spec();
/// Unit-side Sierpinski gasket with the open middle triangle as generator.
nlohmann::json gasket_spec();
/// Cantor-like string on [0,1] with ratios 1/2 and 1/3 and one gap of length 1/6.
nlohmann::json string_spec();
/// Attractor built from an acute triangle (circumradius 1/2) and its pedal
/// triangle; angles in degrees. Throws InvalidArgument unless the angles are
/// positive, sum to 180 and are all below 90.
nlohmann::json orthic_spec(double angle_a, double angle_b, double angle_c);

/// Closed-form pedal-triangle profile (kappa and inradius) for the angles.
GeneratorProfile orthic_profile(double angle_a, double angle_b, double angle_c);

/// Vertices A, B, C and the feet of the altitudes A', B', C'.
struct OrthicGeometry {
    std::array<Vec2, 3> vertices;
    std::array<Vec2, 3> feet;
};
OrthicGeometry orthic_geometry(double angle_a, double angle_b, double angle_c);

}  // namespace fractal_tube

#pragma once

#include "fractal_tube/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fractal_tube {

inline constexpr std::size_t kDefaultNodeBudget = 10'000'000;

/// A contracting similitude x -> ratio * R(rotation) * M * x + translation,
/// where M is the reflection (x, y) -> (x, -y) when `reflect` is set.
/// Ratio-only maps leave `translation` empty and carry no geometry.
struct Similitude {
    double ratio = 0.5;
    double rotation = 0.0;
    bool reflect = false;
    std::vector<double> translation;

    bool realized() const { return !translation.empty(); }

    /// Planar action; requires a two-component translation.
    Vec2 apply(Vec2 p) const;
    /// One-dimensional action (reflect flips orientation).
    double apply(double x) const;
};

/// Validated iterated function system. Maps are kept sorted by descending
/// ratio, so ratios()[0] is the largest contraction ratio.
class IfsSystem {
public:
    const std::vector<Similitude>& maps() const { return maps_; }
    const std::vector<double>& ratios() const { return ratios_; }
    int ambient_dim() const { return dim_; }
    std::size_t size() const { return maps_.size(); }
    bool realized() const { return maps_.front().realized(); }
    bool planar() const { return realized() && dim_ == 2; }

    /// sum_j r_j^s for real s
    double ratio_power_sum(double s) const;

private:
    friend IfsSystem build_system(std::vector<Similitude> maps, int ambient_dim);

    std::vector<Similitude> maps_;
    std::vector<double> ratios_;
    int dim_ = 1;
};

/// Validates and sorts the maps. Throws EmptySystem, BadRatio or DimMismatch.
IfsSystem build_system(std::vector<Similitude> maps, int ambient_dim);

/// Ratio-only system.
IfsSystem ratio_system(const std::vector<double>& ratios, int ambient_dim);

/// Unique real root of the Moran equation sum_j r_j^D = 1, bracketed by
/// bisection and polished with two Newton steps. Throws NoConvergence when
/// |residual| <= tol cannot be reached.
double moran_dimension(const IfsSystem& system, double tol = 1e-14);

enum class LatticeKind { Lattice, NonLattice };

struct LatticeClass {
    LatticeKind kind = LatticeKind::NonLattice;
    double base_r = 0.0;
    /// Positive coprime exponents, aligned with system.ratios().
    std::vector<int> multipliers;
    /// Oscillation period 2*pi / log(1/base_r).
    double period = 0.0;

    bool lattice() const { return kind == LatticeKind::Lattice; }
};

/// Float-based lattice detection: each log r_j / log r_1 is matched against
/// continued-fraction convergents with denominator <= max_denominator.
LatticeClass classify_lattice(const IfsSystem& system, double tol = 1e-9, int max_denominator = 1000);

/// Lattice class from an exact declaration r_j = base_r^{k_j}. The exponents
/// are given in the caller's map order and checked against the system ratios
/// to `tol` relative in log scale; throws InvalidArgument on mismatch.
LatticeClass declared_lattice(const IfsSystem& system, double base_r, std::vector<int> exponents,
                              double tol = 1e-9);

struct WordEntry {
    std::vector<int> word;  // 1-based map indices into system.maps()
    double scale = 1.0;     // product of the ratios along the word
};

struct WordEnumeration {
    std::vector<WordEntry> words;   // r_w > cutoff, depth-first order
    std::vector<WordEntry> pruned;  // roots of pruned subtrees, r_w <= cutoff
};

/// Depth-first enumeration of the word tree, pruning at r_w <= cutoff.
/// Throws BudgetExceeded when more than `node_budget` nodes would be visited.
WordEnumeration enumerate_words(const IfsSystem& system, double cutoff,
                                std::size_t node_budget = kDefaultNodeBudget);

struct ConditionReport {
    bool tileset = false;        // open set condition with int C feasible
    bool nontrivial = false;     // int C not covered by the images of C
    bool pearse_winter = false;  // boundary of C contained in F
    double hull_area = 0.0;
    double overlap_area = 0.0;
    double tile_area = 0.0;
    double max_boundary_gap = 0.0;
    double gap_threshold = 0.0;
    bool images_inside_hull = false;
    int depth = 0;
    std::vector<std::string> notes;
};

/// Sampling-based evidence for the tileset, nontriviality and boundary
/// conditions. HEURISTIC: nothing here is a proof. Throws NoRealization for
/// ratio-only or non-planar systems.
ConditionReport condition_report(const IfsSystem& system, std::size_t samples, std::uint64_t seed);

}  // namespace fractal_tube

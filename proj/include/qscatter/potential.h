#ifndef QSCATTER_POTENTIAL_H
#define QSCATTER_POTENTIAL_H

#include <string>
#include <utility>
#include <vector>

namespace qscatter {

/// Two-column (x, V) table, linearly interpolated and zero outside its range.
class TabulatedPotential {
   public:
    TabulatedPotential() = default;
    /// Points must have strictly increasing x; at least two are required.
    explicit TabulatedPotential(std::vector<std::pair<double, double>> points);

    /// Parses whitespace- or comma-separated `x V` rows; `#` starts a comment.
    static TabulatedPotential parse(const std::string &text);
    static TabulatedPotential load(const std::string &path);

    double operator()(double x) const;
    double x_min() const;
    double x_max() const;
    bool empty() const {
        return points_.empty();
    }
    const std::vector<std::pair<double, double>> &points() const {
        return points_;
    }

   private:
    std::vector<std::pair<double, double>> points_;
};

enum class PotentialKind { Zero, Delta, Barrier, Well, Custom };

std::string potential_kind_name(PotentialKind kind);
PotentialKind parse_potential_kind(const std::string &name);

/// Analytic description of a localized potential. The same descriptor is
/// read in dimensionless simulation units (x = xi, V = u) or in the physical
/// units of the transfer-matrix oracle.
struct PotentialShape {
    PotentialKind kind = PotentialKind::Zero;
    /// Delta: coupling g of g delta(x - center). Barrier: height V0.
    /// Well: depth V0 (the potential is -V0).
    double strength = 0;
    double center = 0;
    /// Barrier and well: full width a; the support is [center - a/2,
    /// center + a/2).
    double width = 0;
    TabulatedPotential table;

    static PotentialShape zero();
    static PotentialShape delta(double g, double center = 0);
    static PotentialShape barrier(double height, double width, double center = 0);
    static PotentialShape well(double depth, double width, double center = 0);
    static PotentialShape custom(TabulatedPotential table);

    /// Pointwise value. A delta has no pointwise value and evaluates to 0.
    double value(double x) const;
    /// Closed interval outside which the potential vanishes.
    std::pair<double, double> support() const;
    /// Parity symmetric about x = 0.
    bool is_symmetric() const;
    /// Throws ValidationError for non-finite or inconsistent parameters.
    void validate() const;
};

}  // namespace qscatter

#endif

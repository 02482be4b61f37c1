#pragma once

// The planar gravity problem. A domain is described by its chord-length
// function L(alpha), alpha in [-pi/2, pi/2], seen from an observer p on the
// boundary; alpha is measured from the inner normal at p. The gravity at p of
// the field with divergence -delta is (1/2pi) int L(alpha) cos(alpha) d(alpha).

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace isolp {

enum class StarShape { disk, ellipse, square, sampled };

std::string to_string(StarShape shape);
StarShape star_shape_from_string(const std::string &name);

class StarDomain {
public:
    /// Disk of radius r.
    static StarDomain disk(double r);
    /// Ellipse with semi-axes a (along the normal) and b, observed from the
    /// vertex at the end of the a axis.
    static StarDomain ellipse(double a, double b);
    /// Square of the given side, observed from the midpoint of a side.
    static StarDomain square(double side);
    /// Linear interpolation of (alpha, L) nodes, alpha strictly increasing in
    /// [-pi/2, pi/2]; L = 0 outside the table. Throws DomainError on L < 0.
    static StarDomain sampled(std::vector<double> alpha, std::vector<double> length);

    StarShape shape() const { return shape_; }
    double operator()(double alpha) const;
    /// Points in (-pi/2, pi/2) where L may fail to be smooth.
    std::vector<double> breakpoints() const;
    /// Same shape with every length multiplied by `lambda` > 0.
    StarDomain scaled(double lambda) const;

private:
    StarShape shape_ = StarShape::disk;
    double a_ = 0.0;
    double b_ = 0.0;
    std::vector<double> alpha_;
    std::vector<double> length_;
};

/// Reads `alpha,L` rows after a header line.
StarDomain read_star_csv(std::istream &in);

double gravity(const StarDomain &domain);
/// int L^2 / 2 d(alpha).
double area(const StarDomain &domain);
/// Gravity of the disk of area V: sqrt(V/pi)/2.
double disk_gravity(double volume);

struct PrinceReport {
    double gravity = 0.0;
    double area = 0.0;
    double disk_gravity = 0.0;
    double margin = 0.0; // disk_gravity - gravity
};

PrinceReport verify_pp(const StarDomain &domain);

/// (a/2) ell^2 + cos^2(alpha)/(2a) - ell cos(alpha).
double dual_gap(double a, double alpha, double ell);

/// (1/2pi) int ((a/2) L^2 + cos^2(alpha)/(2a)) d(alpha), the bound on the
/// gravity obtained by integrating dual_gap >= 0.
double dual_bound(const StarDomain &domain, double a);

/// 2 sqrt(pi V).
double weil_bound(double volume);

void to_json(nlohmann::json &j, const PrinceReport &report);

} // namespace isolp

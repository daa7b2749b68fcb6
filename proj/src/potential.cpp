#include "stefan1d/potential.hpp"

#include "stefan1d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace stefan1d {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> merge_breakpoints(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> out;
    out.reserve(x.size() + y.size());
    std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// A point strictly inside merged piece j.
double representative(const std::vector<double>& bp, std::size_t j) {
    if (bp.empty()) {
        return 0.0;
    }
    if (j == 0) {
        return bp.front() - 1.0;
    }
    if (j == bp.size()) {
        return bp.back() + 1.0;
    }
    return 0.5 * (bp[j - 1] + bp[j]);
}

std::size_t index_of(const std::vector<double>& bp, double y) {
    return static_cast<std::size_t>(std::lower_bound(bp.begin(), bp.end(), y) - bp.begin());
}

struct PieceSpan {
    double lo;
    double hi;
};

PieceSpan piece_span(const std::vector<double>& bp, std::size_t i) {
    const double lo = i == 0 ? -kInf : bp[i - 1];
    const double hi = i == bp.size() ? kInf : bp[i];
    return {lo, hi};
}

} // namespace

// ---------------------------------------------------------------------------
// PiecewiseLinear

double PiecewiseLinear::operator()(double y) const {
    return pieces[index_of(breakpoints, y)](y);
}

PiecewiseLinear PiecewiseLinear::operator-(const PiecewiseLinear& other) const {
    PiecewiseLinear out;
    out.breakpoints = merge_breakpoints(breakpoints, other.breakpoints);
    out.pieces.clear();
    for (std::size_t j = 0; j <= out.breakpoints.size(); ++j) {
        const double r = representative(out.breakpoints, j);
        const auto& p = pieces[index_of(breakpoints, r)];
        const auto& q = other.pieces[index_of(other.breakpoints, r)];
        out.pieces.push_back({p.slope - q.slope, p.intercept - q.intercept});
    }
    return out;
}

std::vector<double> PiecewiseLinear::roots_in(double lo, double hi, double tol) const {
    constexpr double edge = 1e-12;
    std::vector<double> roots;
    auto keep = [&](double r) {
        if (r > lo + edge && r < hi - edge) {
            roots.push_back(r);
        }
    };
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto span = piece_span(breakpoints, i);
        const double l = std::max(span.lo, lo);
        const double h = std::min(span.hi, hi);
        if (!(h > l)) {
            continue;
        }
        const auto& p = pieces[i];
        const double fl = p(l);
        const double fh = p(h);
        if (std::abs(fl) <= tol && std::abs(fh) <= tol) {
            keep(l);
            keep(h);
            continue;
        }
        if (std::abs(fl) <= tol) {
            keep(l);
        } else if (std::abs(fh) <= tol) {
            keep(h);
        } else if ((fl < 0.0) != (fh < 0.0)) {
            keep(std::clamp(-p.intercept / p.slope, l, h));
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                roots.end());
    return roots;
}

// ---------------------------------------------------------------------------
// PiecewiseQuadratic

std::size_t PiecewiseQuadratic::piece_index(double y) const {
    return index_of(breakpoints, y);
}

double PiecewiseQuadratic::operator()(double y) const {
    return pieces[piece_index(y)](y);
}

double PiecewiseQuadratic::derivative(double y) const {
    return pieces[piece_index(y)].slope(y);
}

PiecewiseLinear PiecewiseQuadratic::derivative_function() const {
    PiecewiseLinear out;
    out.breakpoints = breakpoints;
    out.pieces.clear();
    for (const auto& p : pieces) {
        out.pieces.push_back({2.0 * p.a, p.b});
    }
    return out;
}

PiecewiseQuadratic PiecewiseQuadratic::operator-(const PiecewiseQuadratic& other) const {
    PiecewiseQuadratic out;
    out.breakpoints = merge_breakpoints(breakpoints, other.breakpoints);
    out.pieces.clear();
    for (std::size_t j = 0; j <= out.breakpoints.size(); ++j) {
        const double r = representative(out.breakpoints, j);
        const auto& p = pieces[index_of(breakpoints, r)];
        const auto& q = other.pieces[index_of(other.breakpoints, r)];
        out.pieces.push_back({p.a - q.a, p.b - q.b, p.c - q.c});
    }
    return out;
}

double PiecewiseQuadratic::c1_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        const double y = breakpoints[i];
        worst = std::max(worst, std::abs(pieces[i](y) - pieces[i + 1](y)));
        worst = std::max(worst, std::abs(pieces[i].slope(y) - pieces[i + 1].slope(y)));
    }
    return worst;
}

PiecewiseQuadratic::Extremum PiecewiseQuadratic::max_on(double lo, double hi, double flat_slope) const {
    Extremum best{lo, -kInf};
    auto offer = [&](double y, double v) {
        if (v > best.value) {
            best = {y, v};
        }
    };
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto span = piece_span(breakpoints, i);
        const double l = std::max(span.lo, lo);
        const double h = std::min(span.hi, hi);
        if (l > h) {
            continue;
        }
        const auto& p = pieces[i];
        const bool left_open = std::isinf(l);
        const bool right_open = std::isinf(h);
        if (left_open || right_open) {
            if (p.a > 0.0) {
                offer(right_open ? kInf : -kInf, kInf);
                continue;
            }
            if (p.a == 0.0) {
                const bool flat = std::abs(p.b) <= flat_slope;
                if (!flat && ((right_open && p.b > 0.0) || (left_open && p.b < 0.0))) {
                    offer(p.b > 0.0 ? kInf : -kInf, kInf);
                    continue;
                }
                if (left_open && right_open) {
                    offer(0.0, p.c);
                    continue;
                }
                const double y = left_open ? h : l;
                offer(y, p(y));
                continue;
            }
            // Concave quadratic on an unbounded span: vertex or finite end.
            const double vertex = -p.b / (2.0 * p.a);
            if (vertex >= l && vertex <= h) {
                offer(vertex, p(vertex));
            } else if (!left_open) {
                offer(l, p(l));
            } else if (!right_open) {
                offer(h, p(h));
            }
            continue;
        }
        offer(l, p(l));
        offer(h, p(h));
        if (p.a < 0.0) {
            const double vertex = -p.b / (2.0 * p.a);
            if (vertex > l && vertex < h) {
                offer(vertex, p(vertex));
            }
        }
    }
    return best;
}

PiecewiseQuadratic::Extremum PiecewiseQuadratic::min_on(double lo, double hi) const {
    PiecewiseQuadratic neg = *this;
    for (auto& p : neg.pieces) {
        p = {-p.a, -p.b, -p.c};
    }
    auto e = neg.max_on(lo, hi);
    return {e.point, -e.value};
}

// ---------------------------------------------------------------------------

double kernel(int dimension, double r) {
    r = std::abs(r);
    switch (dimension) {
    case 1:
        return -0.5 * r;
    case 2:
        if (r == 0.0) {
            throw SingularityError("kernel in d = 2 is singular at 0");
        }
        return -2.0 * std::numbers::pi * std::log(r);
    case 3: {
        if (r == 0.0) {
            throw SingularityError("kernel in d = 3 is singular at 0");
        }
        const double d = 3.0;
        const double unit_ball = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
        return std::pow(r, 2.0 - d) / (d * (d - 2.0) * unit_ball);
    }
    default:
        throw ValidationError("kernel dimension must be 1, 2 or 3");
    }
}

PiecewiseQuadratic potential(const StepMeasure& mu) {
    const auto& br = mu.breaks();
    const auto& val = mu.values();
    const double k = mu.mass();
    const double beta = mu.first_moment();

    PiecewiseQuadratic u;
    u.breakpoints = br;
    u.pieces.clear();
    u.pieces.push_back({0.0, 0.5 * k, -0.5 * beta});
    // F, G: mass and first moment to the left of the current cell.
    double F = 0.0;
    double G = 0.0;
    for (std::size_t i = 0; i < val.size(); ++i) {
        const double v = val[i];
        const double b0 = br[i];
        u.pieces.push_back({-0.5 * v, -(F - v * b0) + 0.5 * k, G - 0.5 * v * b0 * b0 - 0.5 * beta});
        const double w = br[i + 1] - b0;
        F += v * w;
        G += v * w * (br[i + 1] + b0) * 0.5;
    }
    if (!val.empty()) {
        u.pieces.push_back({0.0, -0.5 * k, 0.5 * beta});
    }
    return u;
}

PiecewiseLinear potential_derivative(const StepMeasure& mu) {
    return potential(mu).derivative_function();
}

OrderCertificate dominates(const StepMeasure& mu, const StepMeasure& nu, double tol) {
    OrderCertificate cert;
    const double k_mu = mu.mass();
    const double scale = std::max(1.0, k_mu);
    cert.mass_gap = std::abs(k_mu - nu.mass());
    cert.moment_gap = std::abs(mu.first_moment() - nu.first_moment());

    const auto diff = potential(nu) - potential(mu);
    const bool masses_match = cert.mass_gap <= tol * scale;
    const auto worst = diff.max_on(-kInf, kInf, masses_match ? 0.5 * tol * scale : 0.0);
    cert.worst_point = worst.point;
    cert.worst_gap = worst.value;

    const bool moments_match = cert.moment_gap <= tol * scale;
    cert.ordered = masses_match && moments_match && cert.worst_gap <= tol;
    if (!masses_match) {
        cert.violation = "mass not conserved";
    } else if (!moments_match) {
        cert.violation = "first moment not conserved";
    } else if (!cert.ordered) {
        cert.violation = "potential of the target exceeds potential of the source";
    }
    return cert;
}

OrderCertificate order_leq_sh_O(const StepMeasure& mu, const StepMeasure& nu,
                                const OpenSet1D& domain, double tol) {
    const auto mu_parts = restrict(mu, domain, tol);
    const auto nu_parts = restrict(nu, domain, tol);

    OrderCertificate cert;
    cert.ordered = true;
    cert.worst_gap = -kInf;
    cert.assumptions.push_back(
        "exit times of O and of its closure agree almost surely for walkers started from mu");
    for (std::size_t n = 0; n < domain.size(); ++n) {
        const auto part = dominates(mu_parts[n], nu_parts[n], tol);
        ComponentCertificate cc{domain.components()[n], part.ordered, part.mass_gap,
                                part.moment_gap, part.worst_point, part.worst_gap};
        cert.per_component.push_back(cc);
        cert.mass_gap = std::max(cert.mass_gap, part.mass_gap);
        cert.moment_gap = std::max(cert.moment_gap, part.moment_gap);
        if (part.worst_gap > cert.worst_gap) {
            cert.worst_gap = part.worst_gap;
            cert.worst_point = part.worst_point;
        }
        if (!part.ordered) {
            cert.ordered = false;
            if (cert.violation.empty()) {
                cert.violation = "component " + std::to_string(n) + ": " + part.violation;
            }
        }
    }
    if (domain.size() == 0) {
        cert.worst_gap = 0.0;
    }
    return cert;
}

} // namespace stefan1d

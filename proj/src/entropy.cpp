#include "nlbeam/entropy.hpp"

#include <cmath>

#include "nlbeam/errors.hpp"
#include "nlbeam/functionals.hpp"

namespace nlbeam {

namespace {

double dist_sq(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w,
               double cap) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += (w.empty() ? 1.0 : w[i]) * d * d;
        if (s > cap) break;
    }
    return s;
}

void check_cloud(const std::vector<std::vector<double>>& points, const std::vector<double>& w) {
    if (points.empty()) throw DomainError("entropy estimate needs at least one point");
    const std::size_t dim = points.front().size();
    for (const auto& p : points)
        if (p.size() != dim) throw LengthMismatch("point cloud", dim, p.size());
    if (!w.empty() && w.size() != dim) throw LengthMismatch("distance weights", dim, w.size());
}

}  // namespace

long greedy_cover_count(const std::vector<std::vector<double>>& points, double eps,
                        const std::vector<double>& w) {
    if (!(eps > 0.0)) throw DomainError("covering radius must be positive");
    check_cloud(points, w);
    const double r2 = eps * eps;
    std::vector<const std::vector<double>*> centers;
    for (const auto& p : points) {
        bool covered = false;
        for (const auto* c : centers)
            if (dist_sq(p, *c, w, r2) <= r2) {
                covered = true;
                break;
            }
        if (!covered) centers.push_back(&p);
    }
    return static_cast<long>(centers.size());
}

EntropyEstimate box_count_entropy(const std::vector<std::vector<double>>& points,
                                  const std::vector<double>& eps, const std::vector<double>& w) {
    if (points.size() < 2) throw DomainError("entropy estimate needs at least two points");
    if (eps.size() < 2) throw DomainError("entropy estimate needs at least two radii");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw DomainError("covering radius must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw DomainError("radii must be strictly decreasing");
    }
    EntropyEstimate est;
    est.eps = eps;
    std::vector<double> x;
    for (double e : eps) {
        const long n = greedy_cover_count(points, e, w);
        est.counts.push_back(n);
        est.entropy.push_back(std::log(static_cast<double>(n)));
        x.push_back(std::log(1.0 / e));
    }
    est.dimension = least_squares_line(x, est.entropy).slope;
    return est;
}

std::vector<double> phase_weights(const SpectralModel& model) {
    std::vector<double> w(model.sigma().begin(), model.sigma().end());
    w.resize(2 * w.size(), 1.0);
    return w;
}

}  // namespace nlbeam

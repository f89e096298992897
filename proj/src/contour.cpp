#include "envc/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "envc/errors.hpp"
#include "envc/parallel.hpp"

namespace envc {

namespace {

std::string fmt_prob(double pe) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", pe);
    return buf;
}

// Tail-count precondition shared by the support estimators.
void require_tail(std::size_t n, double pe, std::size_t min_tail, std::size_t direction) {
    if (!(pe > 0.0 && pe < 1.0)) {
        throw input_error("exceedence probability must lie strictly in (0,1)");
    }
    if (min_tail < 1) min_tail = 1;
    if (static_cast<double>(n) * pe < static_cast<double>(min_tail)) {
        const auto required =
            static_cast<std::size_t>(std::ceil(static_cast<double>(min_tail) / pe));
        throw insufficient_tail_error(
            "sample too small for P_e = " + fmt_prob(pe) + ": need N >= " +
                std::to_string(required) + " for a " + std::to_string(min_tail) +
                "-point tail, got N = " + std::to_string(n),
            required, direction);
    }
}

} // namespace

DirectionGrid::DirectionGrid(std::size_t m) {
    if (m < 3) throw input_error("direction grid needs m >= 3");
    angles.resize(m);
    ux.resize(m);
    uy.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) /
                             static_cast<double>(m);
        angles[j] = theta;
        ux[j] = std::cos(theta);
        uy[j] = std::sin(theta);
    }
}

ScalarSample project(const SampleSet& samples, double ux, double uy) {
    if (samples.size() == 0) throw input_error("cannot project an empty sample set");
    std::vector<double> proj(samples.size());
    for (std::size_t i = 0; i < proj.size(); ++i) {
        proj[i] = ux * samples.t[i] + uy * samples.h[i];
    }
    std::sort(proj.begin(), proj.end());
    return ScalarSample::from_sorted(std::move(proj));
}

double classical_support(const ScalarSample& s, double pe, std::size_t min_tail) {
    require_tail(s.size(), pe, min_tail, insufficient_tail_error::no_direction);
    return empirical_quantile(s, 1.0 - pe);
}

double buffered_support(const ScalarSample& s, double pe, std::size_t min_tail) {
    require_tail(s.size(), pe, min_tail, insufficient_tail_error::no_direction);
    const std::size_t k = detail::quantile_order_index(s.size(), 1.0 - pe);
    if (k >= s.size()) {
        throw insufficient_tail_error("no sample values above the support quantile",
                                      s.size() + 1);
    }
    return detail::sorted_tail_mean(s.values().subspan(k));
}

double scale_support(double cbar, double a) {
    if (!(a > 0.0)) throw input_error("scale factor must be positive");
    return a * cbar;
}

DirectionalSupport build_support(const SampleSet& samples, const DirectionGrid& grid,
                                 const SupportOptions& opt) {
    const std::size_t n = samples.size();
    if (n == 0) throw input_error("cannot build supports from an empty sample set");
    require_tail(n, opt.pe, opt.min_tail, 0);

    const std::size_t m = grid.size();
    const std::size_t k = detail::quantile_order_index(n, 1.0 - opt.pe);

    DirectionalSupport out;
    out.classical.resize(m);
    out.buffered.resize(m);
    out.tail_count = n - k;
    out.sample_size = n;
    out.pe = opt.pe;

    // Per direction: select the k-th order statistic, then sort only the tail
    // so the buffered value is the same ascending-order mean the sorted-path
    // estimator produces.
    parallel_for_blocks(m, opt.threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> proj(n);
        for (std::size_t j = lo; j < hi; ++j) {
            const double cx = grid.ux[j];
            const double cy = grid.uy[j];
            for (std::size_t i = 0; i < n; ++i) {
                proj[i] = cx * samples.t[i] + cy * samples.h[i];
            }
            std::nth_element(proj.begin(),
                             proj.begin() + static_cast<std::ptrdiff_t>(k - 1), proj.end());
            out.classical[j] = proj[k - 1];
            std::sort(proj.begin() + static_cast<std::ptrdiff_t>(k), proj.end());
            out.buffered[j] = detail::sorted_tail_mean(
                std::span<const double>(proj).subspan(k));
        }
    });
    return out;
}

bool ContourPolygon::all_convex() const {
    return std::all_of(convex_ok.begin(), convex_ok.end(),
                       [](unsigned char f) { return f != 0; });
}

ContourPolygon build_polygon(std::span<const double> support, const DirectionGrid& grid,
                             ContourKind kind, const PolygonOptions& opt) {
    const std::size_t m = grid.size();
    if (support.size() != m) {
        throw geometry_error("support size " + std::to_string(support.size()) +
                             " does not match grid size " + std::to_string(m));
    }

    ContourPolygon poly;
    poly.kind = kind;
    poly.vx.resize(m);
    poly.vy.resize(m);
    poly.convex_ok.assign(m, 1);
    poly.support.assign(support.begin(), support.end());
    poly.angles = grid.angles;

    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t jn = (j + 1) % m;
        const double det = grid.ux[j] * grid.uy[jn] - grid.uy[j] * grid.ux[jn];
        if (std::abs(det) < 1e-14) {
            throw geometry_error("adjacent directions " + std::to_string(j) + ", " +
                                 std::to_string(jn) + " are parallel");
        }
        poly.vx[j] = (support[j] * grid.uy[jn] - support[jn] * grid.uy[j]) / det;
        poly.vy[j] = (grid.ux[j] * support[jn] - grid.ux[jn] * support[j]) / det;
    }

    double scale = 0.0;
    for (const double c : support) scale = std::max(scale, std::abs(c));
    const double tol = opt.rel_tolerance * scale + opt.abs_tolerance;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            if (grid.ux[i] * poly.vx[j] + grid.uy[i] * poly.vy[j] > support[i] + tol) {
                poly.convex_ok[j] = 0;
                break;
            }
        }
    }
    return poly;
}

ContourPolygon build_polygon(const DirectionalSupport& support, const DirectionGrid& grid,
                             ContourKind kind, const PolygonOptions& opt) {
    const auto& c =
        (kind == ContourKind::classical) ? support.classical : support.buffered;
    return build_polygon(std::span<const double>(c), grid, kind, opt);
}

bool polygon_contains(const ContourPolygon& outer, const ContourPolygon& inner,
                      double rel_tolerance, std::vector<std::size_t>* failing_vertices) {
    auto require_valid = [](const ContourPolygon& p, const char* which) {
        if (p.all_convex()) return;
        std::string msg = std::string(which) + " polygon has non-convex vertices:";
        for (std::size_t j = 0; j < p.convex_ok.size(); ++j) {
            if (!p.convex_ok[j]) msg += " " + std::to_string(j);
        }
        throw geometry_error(msg);
    };
    require_valid(outer, "outer");
    require_valid(inner, "inner");

    double scale = 0.0;
    for (const double c : outer.support) scale = std::max(scale, std::abs(c));
    const double tol = rel_tolerance * std::max(scale, 1.0);

    bool contained = true;
    for (std::size_t v = 0; v < inner.size(); ++v) {
        for (std::size_t i = 0; i < outer.size(); ++i) {
            const double proj = std::cos(outer.angles[i]) * inner.vx[v] +
                                std::sin(outer.angles[i]) * inner.vy[v];
            if (proj > outer.support[i] + tol) {
                contained = false;
                if (failing_vertices) failing_vertices->push_back(v);
                break;
            }
        }
    }
    return contained;
}

} // namespace envc

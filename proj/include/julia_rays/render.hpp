#pragma once

// Escape-time rendering of the filled Julia set with ray, equipotential and
// critical-orbit overlays. Output is binary PPM (P6) with deterministic pixel
// values: the image depends only on (map, window, size, overlays).

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "julia_rays/parallel.hpp"
#include "julia_rays/quadmap.hpp"
#include "julia_rays/raytrace.hpp"

namespace julia_rays {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // rows top-to-bottom

    Image() = default;
    Image(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

    void set(int x, int y, Rgb c) {
        if (x < 0 || y < 0 || x >= width || y >= height) return;
        std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        rgb[i] = c.r;
        rgb[i + 1] = c.g;
        rgb[i + 2] = c.b;
    }
    Rgb get(int x, int y) const {
        std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        return {rgb[i], rgb[i + 1], rgb[i + 2]};
    }
};

inline void write_ppm(const Image& img, std::ostream& os) {
    os << "P6\n" << img.width << " " << img.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
}

inline std::string ppm_bytes(const Image& img) {
    std::ostringstream os;
    write_ppm(img, os);
    return os.str();
}

struct Window {
    double x0 = -2.0, x1 = 2.0;
    double y0 = -2.0, y1 = 2.0;
};

struct RenderOptions {
    int width = 256;
    int height = 256;
    Window window{};
    std::vector<Angle> rays;
    std::vector<double> equipotential_levels;
    int critical_orbit_steps = 0;
    TraceConfig trace{};
    int equipotential_samples = 512;
    long iteration_budget = 500;
    double green_tol = 1e-6;
};

namespace render_detail {

constexpr Rgb kInterior{245, 245, 245};
constexpr Rgb kRay{230, 40, 40};
constexpr Rgb kEquipotential{50, 90, 230};
constexpr Rgb kOrbit{40, 170, 70};

inline Rgb exterior_shade(double g) {
    double u = std::log2(std::max(g, 1e-300));
    double frac = u - std::floor(u);
    auto v = static_cast<std::uint8_t>(60 + 150 * frac);
    return {v, v, v};
}

struct PixelMap {
    Window win;
    int w, h;
    std::complex<double> at(int x, int y) const {
        double re = win.x0 + (win.x1 - win.x0) * (x + 0.5) / w;
        double im = win.y1 - (win.y1 - win.y0) * (y + 0.5) / h;
        return {re, im};
    }
    double px(std::complex<double> z) const { return (z.real() - win.x0) / (win.x1 - win.x0) * w - 0.5; }
    double py(std::complex<double> z) const { return (win.y1 - z.imag()) / (win.y1 - win.y0) * h - 0.5; }
};

// Liang-Barsky clip of the segment a-b to the window.
inline std::optional<std::pair<std::complex<double>, std::complex<double>>>
clip_segment(std::complex<double> a, std::complex<double> b, const Window& win) {
    double t0 = 0, t1 = 1;
    double dx = b.real() - a.real(), dy = b.imag() - a.imag();
    auto clip = [&](double p, double q) {
        if (p == 0) return q >= 0;
        double r = q / p;
        if (p < 0) {
            if (r > t1) return false;
            if (r > t0) t0 = r;
        } else {
            if (r < t0) return false;
            if (r < t1) t1 = r;
        }
        return true;
    };
    if (!clip(-dx, a.real() - win.x0)) return std::nullopt;
    if (!clip(dx, win.x1 - a.real())) return std::nullopt;
    if (!clip(-dy, a.imag() - win.y0)) return std::nullopt;
    if (!clip(dy, win.y1 - a.imag())) return std::nullopt;
    std::complex<double> p0 = a + t0 * std::complex<double>(dx, dy);
    std::complex<double> p1 = a + t1 * std::complex<double>(dx, dy);
    return std::make_pair(p0, p1);
}

inline void draw_segment(Image& img, const PixelMap& pm, std::complex<double> a, std::complex<double> b,
                         Rgb color) {
    auto clipped = clip_segment(a, b, pm.win);
    if (!clipped) return;
    double x0 = pm.px(clipped->first), y0 = pm.py(clipped->first);
    double x1 = pm.px(clipped->second), y1 = pm.py(clipped->second);
    int steps = static_cast<int>(std::max(std::abs(x1 - x0), std::abs(y1 - y0))) + 1;
    for (int i = 0; i <= steps; ++i) {
        double u = static_cast<double>(i) / steps;
        img.set(static_cast<int>(std::lround(x0 + u * (x1 - x0))),
                static_cast<int>(std::lround(y0 + u * (y1 - y0))), color);
    }
}

inline void draw_dot(Image& img, const PixelMap& pm, std::complex<double> z, Rgb color) {
    int cx = static_cast<int>(std::lround(pm.px(z)));
    int cy = static_cast<int>(std::lround(pm.py(z)));
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) img.set(cx + dx, cy + dy, color);
}

}  // namespace render_detail

inline Image render(const QuadraticMap& map, const RenderOptions& opt) {
    using namespace render_detail;
    if (opt.width < 16 || opt.height < 16)
        throw InvalidInputError("render: width and height must be >= 16");
    if (!(opt.window.x0 < opt.window.x1) || !(opt.window.y0 < opt.window.y1))
        throw InvalidInputError("render: window must be a nonempty rectangle");

    Image img(opt.width, opt.height);
    PixelMap pm{opt.window, opt.width, opt.height};

    parallel_for(static_cast<std::size_t>(opt.height), [&](std::size_t y) {
        for (int x = 0; x < opt.width; ++x) {
            auto res = map.green(pm.at(x, static_cast<int>(y)), opt.green_tol, opt.iteration_budget);
            img.set(x, static_cast<int>(y), res.escaped ? exterior_shade(res.green_estimate) : kInterior);
        }
    });

    for (double g : opt.equipotential_levels) {
        auto pts = equipotential(map, g, opt.equipotential_samples, opt.trace);
        for (std::size_t i = 0; i < pts.size(); ++i)
            draw_segment(img, pm, pts[i], pts[(i + 1) % pts.size()], kEquipotential);
    }
    for (const Angle& t : opt.rays) {
        RayTrail<double> trail = trace_ray(map, t, opt.trace);
        for (std::size_t i = 0; i + 1 < trail.samples.size(); ++i)
            draw_segment(img, pm, trail.samples[i].second, trail.samples[i + 1].second, kRay);
    }
    if (opt.critical_orbit_steps > 0) {
        std::complex<double> z = 0;
        for (int i = 0; i < opt.critical_orbit_steps; ++i) {
            draw_dot(img, pm, z, kOrbit);
            z = map.apply(z);
            if (QuadraticMap::is_escape_sentinel(z)) break;
        }
    }
    return img;
}

}  // namespace julia_rays

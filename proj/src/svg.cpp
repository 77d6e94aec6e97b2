#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace gardo {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct Canvas {
    std::ostringstream body;
    double width, height;

    Canvas(double w, double h) : width(w), height(h) {}

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width = 1.0) {
        body << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
             << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
             << num(stroke_width) << "\"/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
        if (pts.empty()) return;
        body << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body << ' ';
            body << num(pts[i].first) << ',' << num(pts[i].second);
        }
        body << "\"/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& fill) {
        body << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
             << "\" height=\"" << num(h) << "\" fill=\"" << fill << "\"/>\n";
    }
    void circle(double cx, double cy, double r, const std::string& fill) {
        body << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r)
             << "\" fill=\"" << fill << "\" fill-opacity=\"0.75\"/>\n";
    }
    void text(double x, double y, const std::string& s, int size = 11,
              const std::string& fill = "#333333") {
        body << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
             << "\" font-family=\"sans-serif\" fill=\"" << fill << "\">" << s << "</text>\n";
    }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::trunc);
        if (!f) throw RuntimeError("cannot write plot: " + path);
        f << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
          << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
          << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
          << "\" fill=\"#ffffff\"/>\n"
          << body.str() << "</svg>\n";
        if (!f) throw RuntimeError("plot write failed: " + path);
    }
};

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;

    double pad() {
        if (hi <= lo) hi = lo + 1.0;
        const double p = (hi - lo) * 0.05;
        lo -= p;
        hi += p;
        return hi - lo;
    }
    double frac(double v) const { return (v - lo) / (hi - lo); }
};

struct Frame {
    double x0 = 52, y0 = 16, x1, y1;  // plot area corners (y grows down)
    Axis xa, ya;

    double px(double v) const { return x0 + xa.frac(v) * (x1 - x0); }
    double py(double v) const { return y1 - ya.frac(v) * (y1 - y0); }

    void draw(Canvas& c, const std::string& title) const {
        c.line(x0, y1, x1, y1, "#444444");
        c.line(x0, y0, x0, y1, "#444444");
        for (int i = 0; i <= 4; ++i) {
            const double fy = ya.lo + (ya.hi - ya.lo) * i / 4.0;
            const double yy = py(fy);
            c.line(x0 - 3, yy, x0, yy, "#444444");
            if (i > 0) c.line(x0, yy, x1, yy, "#e6e6e6", 0.5);
            c.text(4, yy + 4, fmt_tick(fy), 10);
            const double fx = xa.lo + (xa.hi - xa.lo) * i / 4.0;
            const double xx = px(fx);
            c.line(xx, y1, xx, y1 + 3, "#444444");
            c.text(xx - 10, y1 + 14, fmt_tick(fx), 10);
        }
        c.text(x0, y0 - 4, title, 12);
    }
};

std::vector<std::pair<double, double>> series(const Frame& f,
                                              const std::vector<MetricsRecord>& metrics,
                                              double (*pick)(const MetricsRecord&)) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(metrics.size());
    for (const auto& r : metrics)
        pts.emplace_back(f.px(static_cast<double>(r.iteration)), f.py(pick(r)));
    return pts;
}

void render_reward_curve(const std::vector<MetricsRecord>& metrics, const std::string& path) {
    Canvas c(640, 400);
    Frame f;
    f.x1 = 620;
    f.y1 = 370;
    f.xa = {static_cast<double>(metrics.front().iteration),
            static_cast<double>(metrics.back().iteration)};
    Axis ya{metrics.front().mean_proxy, metrics.front().mean_proxy};
    for (const auto& r : metrics) {
        ya.lo = std::min({ya.lo, r.mean_proxy, r.mean_true});
        ya.hi = std::max({ya.hi, r.mean_proxy, r.mean_true});
    }
    ya.pad();
    f.xa.pad();
    f.ya = ya;
    f.draw(c, "reward vs iteration");
    c.polyline(series(f, metrics, [](const MetricsRecord& r) { return r.mean_proxy; }), "#e07820");
    c.polyline(series(f, metrics, [](const MetricsRecord& r) { return r.mean_true; }), "#2f6fb0");
    c.text(540, 28, "proxy", 11, "#e07820");
    c.text(540, 42, "true", 11, "#2f6fb0");
    c.save(path);
}

void render_kl_dynamics(const std::vector<MetricsRecord>& metrics, const std::string& path) {
    Canvas c(640, 400);
    Frame f;
    f.x1 = 592;
    f.y1 = 370;
    f.xa = {static_cast<double>(metrics.front().iteration),
            static_cast<double>(metrics.back().iteration)};
    f.xa.pad();
    Axis left{0.0, 0.0};
    Axis right{0.0, 0.0};
    for (const auto& r : metrics) {
        left.hi = std::max({left.hi, r.k, r.gated_fraction});
        right.hi = std::max(right.hi, r.kl_loss);
    }
    left.pad();
    right.pad();
    f.ya = left;
    f.draw(c, "gate and KL dynamics");

    // Right-hand axis for the KL loss series.
    c.line(f.x1, f.y0, f.x1, f.y1, "#444444");
    for (int i = 0; i <= 4; ++i) {
        const double fv = right.lo + (right.hi - right.lo) * i / 4.0;
        const double yy = f.y1 - right.frac(fv) * (f.y1 - f.y0);
        c.line(f.x1, yy, f.x1 + 3, yy, "#444444");
        c.text(f.x1 + 5, yy + 4, fmt_tick(fv), 10);
    }

    c.polyline(series(f, metrics, [](const MetricsRecord& r) { return r.k; }), "#2e8b57");
    c.polyline(series(f, metrics, [](const MetricsRecord& r) { return r.gated_fraction; }),
               "#7b4fa6");
    std::vector<std::pair<double, double>> kl_pts;
    for (const auto& r : metrics)
        kl_pts.emplace_back(f.px(static_cast<double>(r.iteration)),
                            f.y1 - right.frac(r.kl_loss) * (f.y1 - f.y0));
    c.polyline(kl_pts, "#c03030");
    c.text(508, 28, "k", 11, "#2e8b57");
    c.text(508, 42, "gated frac", 11, "#7b4fa6");
    c.text(508, 56, "KL loss", 11, "#c03030");
    c.save(path);
}

std::string heat_color(double f) {
    // white -> amber -> dark red
    const double t = std::clamp(f, 0.0, 1.0);
    const int r = static_cast<int>(255 - 75 * t);
    const int g = static_cast<int>(255 - 175 * t);
    const int b = static_cast<int>(255 - 225 * t);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

void render_samples_panel(const std::vector<Vec2>& samples, const RewardSpec* landscape,
                          const std::string& path) {
    const double lo = -5.0, hi = 5.0;
    const int cells = 88;
    Canvas c(520, 520);
    const double m = 30.0, size = 460.0;
    const double cell = size / cells;

    if (landscape != nullptr) {
        double vmin = 1e300, vmax = -1e300;
        std::vector<double> vals(static_cast<std::size_t>(cells) * cells);
        for (int iy = 0; iy < cells; ++iy)
            for (int ix = 0; ix < cells; ++ix) {
                const Vec2 p{lo + (ix + 0.5) * (hi - lo) / cells, lo + (iy + 0.5) * (hi - lo) / cells};
                const double v = evaluate(*landscape, p);
                vals[static_cast<std::size_t>(iy) * cells + ix] = v;
                vmin = std::min(vmin, v);
                vmax = std::max(vmax, v);
            }
        const double span = vmax > vmin ? vmax - vmin : 1.0;
        for (int iy = 0; iy < cells; ++iy)
            for (int ix = 0; ix < cells; ++ix) {
                const double v = vals[static_cast<std::size_t>(iy) * cells + ix];
                // y axis points up in data space
                c.rect(m + ix * cell, m + (cells - 1 - iy) * cell, cell + 0.5, cell + 0.5,
                       heat_color((v - vmin) / span));
            }
    } else {
        c.rect(m, m, size, size, "#f4f4f4");
    }

    c.line(m, m, m + size, m, "#444444");
    c.line(m, m + size, m + size, m + size, "#444444");
    c.line(m, m, m, m + size, "#444444");
    c.line(m + size, m, m + size, m + size, "#444444");
    c.text(m, m - 8, "final samples over reward landscape", 12);

    for (const auto& s : samples) {
        if (s.x < lo || s.x > hi || s.y < lo || s.y > hi) continue;
        const double px = m + (s.x - lo) / (hi - lo) * size;
        const double py = m + size - (s.y - lo) / (hi - lo) * size;
        c.circle(px, py, 2.2, "#1f3f7f");
    }
    c.save(path);
}

}  // namespace

std::vector<std::string> render_plots(const std::vector<MetricsRecord>& metrics,
                                      const std::vector<Vec2>& samples,
                                      const RewardSpec* landscape, const std::string& out_dir) {
    if (metrics.empty()) throw RuntimeError("render_plots: metrics are empty");
    const std::string curve = out_dir + "/reward_curve.svg";
    const std::string kl = out_dir + "/kl_dynamics.svg";
    const std::string panel = out_dir + "/samples_panel.svg";
    render_reward_curve(metrics, curve);
    render_kl_dynamics(metrics, kl);
    render_samples_panel(samples, landscape, panel);
    return {curve, kl, panel};
}

std::vector<std::string> render_plots(const std::string& metrics_path,
                                      const std::string& samples_path,
                                      const RewardSpec* landscape, const std::string& out_dir) {
    return render_plots(read_metrics(metrics_path), read_samples_csv(samples_path), landscape,
                        out_dir);
}

}  // namespace gardo

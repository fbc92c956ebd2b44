#include "acd/train/plot.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "acd/core/png.hpp"

namespace acd {

namespace {

// 5x7 bitmap glyphs, one byte per row, low 5 bits used (MSB-left).
struct Glyph {
    char ch;
    uint8_t rows[7];
};

constexpr Glyph kFont[] = {
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {'0', {0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e}},
    {'1', {0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e}},
    {'2', {0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f}},
    {'3', {0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e}},
    {'4', {0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02}},
    {'5', {0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e}},
    {'6', {0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e}},
    {'7', {0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e}},
    {'9', {0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0c, 0x0c}},
    {',', {0x00, 0x00, 0x00, 0x00, 0x0c, 0x04, 0x08}},
    {'-', {0x00, 0x00, 0x00, 0x1f, 0x00, 0x00, 0x00}},
    {'+', {0x00, 0x04, 0x04, 0x1f, 0x04, 0x04, 0x00}},
    {'=', {0x00, 0x00, 0x1f, 0x00, 0x1f, 0x00, 0x00}},
    {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
    {'/', {0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10}},
    {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1f}},
    {':', {0x00, 0x0c, 0x0c, 0x00, 0x0c, 0x0c, 0x00}},
    {'A', {0x0e, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11}},
    {'B', {0x1e, 0x11, 0x11, 0x1e, 0x11, 0x11, 0x1e}},
    {'C', {0x0e, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0e}},
    {'D', {0x1c, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1c}},
    {'E', {0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x1f}},
    {'F', {0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x10}},
    {'G', {0x0e, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0f}},
    {'H', {0x11, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11}},
    {'I', {0x0e, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0e}},
    {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0c}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1f}},
    {'M', {0x11, 0x1b, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11}},
    {'O', {0x0e, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e}},
    {'P', {0x1e, 0x11, 0x11, 0x1e, 0x10, 0x10, 0x10}},
    {'Q', {0x0e, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0d}},
    {'R', {0x1e, 0x11, 0x11, 0x1e, 0x14, 0x12, 0x11}},
    {'S', {0x0f, 0x10, 0x10, 0x0e, 0x01, 0x01, 0x1e}},
    {'T', {0x1f, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0a, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x1b, 0x11}},
    {'X', {0x11, 0x11, 0x0a, 0x04, 0x0a, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x0a, 0x04, 0x04, 0x04, 0x04}},
    {'Z', {0x1f, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1f}},
};

const Glyph* find_glyph(char c) {
    const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (const Glyph& g : kFont)
        if (g.ch == up) return &g;
    return nullptr;
}

struct Rgb {
    uint8_t r, g, b;
};

constexpr Rgb kPalette[] = {
    {31, 119, 180}, {255, 127, 14}, {44, 160, 44}, {214, 39, 40},
    {148, 103, 189}, {140, 86, 75},
};

class Canvas {
public:
    Canvas(int w, int h) : w_(w), h_(h), px_(static_cast<size_t>(w) * h * 3, 255) {}

    void set(int x, int y, Rgb c) {
        if (x < 0 || x >= w_ || y < 0 || y >= h_) return;
        const size_t i = (static_cast<size_t>(y) * w_ + x) * 3;
        px_[i] = c.r;
        px_[i + 1] = c.g;
        px_[i + 2] = c.b;
    }

    void line(int x0, int y0, int x1, int y1, Rgb c, int thickness = 1) {
        const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
        const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
        int err = dx + dy;
        while (true) {
            for (int ox = 0; ox < thickness; ox++)
                for (int oy = 0; oy < thickness; oy++) set(x0 + ox, y0 + oy, c);
            if (x0 == x1 && y0 == y1) break;
            const int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
    }

    void text(int x, int y, const std::string& s, Rgb c, int scale = 2) {
        int cx = x;
        for (const char ch : s) {
            if (const Glyph* g = find_glyph(ch)) {
                for (int row = 0; row < 7; row++) {
                    for (int col = 0; col < 5; col++) {
                        if (g->rows[row] & (1 << (4 - col))) {
                            for (int oy = 0; oy < scale; oy++)
                                for (int ox = 0; ox < scale; ox++)
                                    set(cx + col * scale + ox, y + row * scale + oy, c);
                        }
                    }
                }
            }
            cx += 6 * scale;
        }
    }

    static int text_width(const std::string& s, int scale = 2) {
        return static_cast<int>(s.size()) * 6 * scale;
    }

    void save(const std::string& path) const { write_png_rgb8(path, px_, w_, h_); }

private:
    int w_, h_;
    std::vector<uint8_t> px_;
};

std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
    if (!(hi > lo)) hi = lo + 1;
    const double span = hi - lo;
    const double raw_step = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
    double step = mag;
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw_step) {
            step = mag * m;
            break;
        }
    }
    std::vector<double> ticks;
    const double first = std::ceil(lo / step) * step;
    for (double t = first; t <= hi + step * 1e-9; t += step) ticks.push_back(t);
    return ticks;
}

std::string tick_label(double v) {
    char buf[32];
    if (std::abs(v) >= 1000 && std::fmod(v, 1000.0) == 0.0)
        std::snprintf(buf, sizeof(buf), "%gK", v / 1000.0);
    else
        std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

void render_line_plot(const std::vector<PlotSeries>& series, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& out_path, int width, int height) {
    if (series.empty()) throw std::invalid_argument("render_line_plot: no series");

    double x_min = NAN, x_max = NAN, y_min = NAN, y_max = NAN;
    for (const PlotSeries& s : series) {
        for (size_t i = 0; i < s.x.size(); i++) {
            if (std::isnan(s.y[i])) continue;
            if (std::isnan(x_min) || s.x[i] < x_min) x_min = s.x[i];
            if (std::isnan(x_max) || s.x[i] > x_max) x_max = s.x[i];
            if (std::isnan(y_min) || s.y[i] < y_min) y_min = s.y[i];
            if (std::isnan(y_max) || s.y[i] > y_max) y_max = s.y[i];
        }
    }
    if (std::isnan(x_min)) {
        x_min = 0;
        x_max = 1;
        y_min = 0;
        y_max = 1;
    }
    if (x_max == x_min) x_max = x_min + 1;
    if (y_max == y_min) {
        y_max += 0.5;
        y_min -= 0.5;
    }
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    const int ml = 84, mr = 24, mt = 40, mb = 64;
    const int pw = width - ml - mr, ph = height - mt - mb;
    Canvas canvas(width, height);
    const Rgb black{0, 0, 0};
    const Rgb grey{210, 210, 210};

    auto to_px = [&](double x, double y) {
        const int px = ml + static_cast<int>(std::lround((x - x_min) / (x_max - x_min) * pw));
        const int py = mt + ph - static_cast<int>(std::lround((y - y_min) / (y_max - y_min) * ph));
        return std::pair<int, int>{px, py};
    };

    for (const double t : nice_ticks(y_min, y_max)) {
        const auto [tx, ty] = to_px(x_min, t);
        canvas.line(ml, ty, ml + pw, ty, grey);
        const std::string label = tick_label(t);
        canvas.text(ml - 8 - Canvas::text_width(label), ty - 7, label, black);
        canvas.line(ml - 4, ty, ml, ty, black);
    }
    for (const double t : nice_ticks(x_min, x_max, 6)) {
        const auto [tx, ty] = to_px(t, y_min);
        canvas.line(tx, mt, tx, mt + ph, grey);
        const std::string label = tick_label(t);
        canvas.text(tx - Canvas::text_width(label) / 2, mt + ph + 8, label, black);
        canvas.line(tx, mt + ph, tx, mt + ph + 4, black);
    }
    canvas.line(ml, mt, ml, mt + ph, black);
    canvas.line(ml, mt + ph, ml + pw, mt + ph, black);

    for (size_t si = 0; si < series.size(); si++) {
        const Rgb color = kPalette[si % std::size(kPalette)];
        const PlotSeries& s = series[si];
        bool have_prev = false;
        int prev_x = 0, prev_y = 0;
        for (size_t i = 0; i < s.x.size(); i++) {
            if (std::isnan(s.y[i])) {
                have_prev = false;
                continue;
            }
            const auto [px, py] = to_px(s.x[i], s.y[i]);
            if (have_prev) canvas.line(prev_x, prev_y, px, py, color, 2);
            prev_x = px;
            prev_y = py;
            have_prev = true;
        }
    }

    canvas.text(ml + (pw - Canvas::text_width(title)) / 2, 10, title, black);
    canvas.text(ml + (pw - Canvas::text_width(x_label)) / 2, height - 22, x_label, black);
    canvas.text(8, 10, y_label, black);

    int ly = mt + 10;
    for (size_t si = 0; si < series.size(); si++) {
        const Rgb color = kPalette[si % std::size(kPalette)];
        canvas.line(ml + 12, ly + 6, ml + 40, ly + 6, color, 2);
        canvas.text(ml + 48, ly, series[si].label, black);
        ly += 20;
    }

    canvas.save(out_path);
}

}  // namespace acd

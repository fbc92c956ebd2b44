#include "acd/preprocess/resize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acd {

namespace {

// Per output index along one axis: first source pixel and the area weight
// of each covered source pixel.
struct AxisCell {
    int begin = 0;
    std::vector<double> weights;
};

std::vector<AxisCell> build_axis(int in_size, int out_size) {
    std::vector<AxisCell> cells(out_size);
    const double scale = static_cast<double>(in_size) / out_size;
    for (int o = 0; o < out_size; o++) {
        const double lo = o * scale;
        const double hi = (o + 1) * scale;
        const int first = static_cast<int>(std::floor(lo));
        const int last = std::min(static_cast<int>(std::ceil(hi)) - 1, in_size - 1);
        AxisCell& cell = cells[o];
        cell.begin = first;
        cell.weights.resize(last - first + 1);
        for (int i = first; i <= last; i++) {
            const double cover =
                std::min<double>(hi, i + 1) - std::max<double>(lo, i);
            cell.weights[i - first] = cover;
        }
    }
    return cells;
}

}  // namespace

void resize_frame(const RawFrame& in, int out_size, std::vector<double>& out) {
    if (in.width < out_size || in.height < out_size)
        throw std::invalid_argument("resize_frame: input smaller than target");
    const auto xcells = build_axis(in.width, out_size);
    const auto ycells = build_axis(in.height, out_size);
    const double area = (static_cast<double>(in.width) / out_size) *
                        (static_cast<double>(in.height) / out_size);
    out.assign(static_cast<size_t>(out_size) * out_size, 0.0);
    for (int oy = 0; oy < out_size; oy++) {
        const AxisCell& yc = ycells[oy];
        for (int ox = 0; ox < out_size; ox++) {
            const AxisCell& xc = xcells[ox];
            double acc = 0;
            for (size_t j = 0; j < yc.weights.size(); j++) {
                const uint8_t* row = in.px.data() +
                                     static_cast<size_t>(yc.begin + j) * in.width;
                double rowacc = 0;
                for (size_t i = 0; i < xc.weights.size(); i++) {
                    rowacc += xc.weights[i] * row[xc.begin + i];
                }
                acc += yc.weights[j] * rowacc;
            }
            out[static_cast<size_t>(oy) * out_size + ox] = acc / area;
        }
    }
}

}  // namespace acd

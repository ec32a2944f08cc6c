#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "eitsim/errors.hpp"
#include "eitsim/optics.hpp"
#include "eitsim/types.hpp"

namespace eitsim {

namespace detail {

struct SvgPanel {
    std::string title;
    std::vector<double> x;
    std::vector<double> y;
};

inline void emit_panel(std::ofstream& out, const SvgPanel& panel, double ox,
                       double oy, double w, double h) {
    const auto [xmin_it, xmax_it] =
        std::minmax_element(panel.x.begin(), panel.x.end());
    const auto [ymin_it, ymax_it] =
        std::minmax_element(panel.y.begin(), panel.y.end());
    double xmin = *xmin_it, xmax = *xmax_it;
    double ymin = *ymin_it, ymax = *ymax_it;
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    out << "<rect x='" << ox << "' y='" << oy << "' width='" << w
        << "' height='" << h << "' fill='white' stroke='black'/>\n";
    out << "<text x='" << ox + 8 << "' y='" << oy + 18
        << "' font-family='sans-serif' font-size='14'>" << panel.title
        << "</text>\n";
    out << "<polyline fill='none' stroke='#1f77b4' stroke-width='1.5' "
           "points='";
    for (std::size_t i = 0; i < panel.x.size(); ++i) {
        const double px = ox + (panel.x[i] - xmin) / (xmax - xmin) * w;
        const double py = oy + h - (panel.y[i] - ymin) / (ymax - ymin) * h;
        out << px << ',' << py << ' ';
    }
    out << "'/>\n";
}

} // namespace detail

// Static two-panel rendering: transmission on top, log-absorption below
// (falls back to Im/Re chi when no transmission is available).
inline void write_svg(const std::string& path, const Spectrum& chi,
                      const TransmissionSpectrum* trans) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write SVG to " + path);

    detail::SvgPanel top, bottom;
    top.x = bottom.x = chi.delta;
    if (trans) {
        top.title = "transmission";
        top.y = trans->transmission;
        bottom.title = "-ln T";
        bottom.y.resize(trans->transmission.size());
        for (std::size_t i = 0; i < bottom.y.size(); ++i)
            bottom.y[i] = -std::log(trans->transmission[i]);
    } else {
        top.title = "Im chi";
        bottom.title = "Re chi";
        top.y.resize(chi.size());
        bottom.y.resize(chi.size());
        for (std::size_t i = 0; i < chi.size(); ++i) {
            top.y[i] = chi.chi[i].imag();
            bottom.y[i] = chi.chi[i].real();
        }
    }

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='640' "
           "height='520' viewBox='0 0 640 520'>\n";
    detail::emit_panel(out, top, 40, 20, 560, 220);
    detail::emit_panel(out, bottom, 40, 270, 560, 220);
    out << "<text x='320' y='510' text-anchor='middle' "
           "font-family='sans-serif' font-size='12'>two-photon detuning "
           "(rad/s)</text>\n";
    out << "</svg>\n";
    if (!out) throw IoError("write failure on " + path);
}

} // namespace eitsim

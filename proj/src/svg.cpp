#include <sponge/svg.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace sponge {

namespace {

// fixed decimals so repeated runs give identical bytes
std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

struct Panel {
    int x = 0;
    int y = 1;
};

}  // namespace

SvgImage render_svg(const SpongeTemplate& t, int size) {
    const int d = t.dimension();
    if (d != 2 && d != 3) {
        throw SpongeError(ErrorCode::UnsupportedDimension,
                          "rendering needs a 2- or 3-dimensional template, got " + std::to_string(d));
    }
    if (size <= 0) throw SpongeError(ErrorCode::InvalidArgument, "size must be positive");

    std::vector<Panel> panels = d == 2 ? std::vector<Panel>{{0, 1}} : std::vector<Panel>{{0, 1}, {0, 2}, {1, 2}};
    const int gap = d == 2 ? 0 : size / 20;
    const int margin = 1;
    const int width = static_cast<int>(panels.size()) * size + (static_cast<int>(panels.size()) - 1) * gap + 2 * margin;
    const int height = size + 2 * margin;

    SvgImage img;
    img.panels = static_cast<int>(panels.size());

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";

    for (std::size_t k = 0; k < panels.size(); ++k) {
        const auto [cx, cy] = panels[k];
        const double left = margin + static_cast<double>(k) * (size + gap);
        const double top = margin;
        auto X = [&](double u) { return left + u * size; };
        auto Y = [&](double v) { return top + (1.0 - v) * size; };

        out << "<g id=\"panel-" << cx << '-' << cy << "\">\n";
        out << "<rect x=\"" << px(X(0)) << "\" y=\"" << px(Y(1)) << "\" width=\"" << px(size) << "\" height=\""
            << px(size) << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";

        if (auto m = t.grid(cx); m && *m > 1) {
            for (int j = 1; j < *m; ++j) {
                const double u = static_cast<double>(j) / *m;
                out << "<line x1=\"" << px(X(u)) << "\" y1=\"" << px(Y(0)) << "\" x2=\"" << px(X(u)) << "\" y2=\""
                    << px(Y(1)) << "\" stroke=\"#c0c0c0\" stroke-width=\"0.5\"/>\n";
            }
        }
        if (auto m = t.grid(cy); m && *m > 1) {
            for (int j = 1; j < *m; ++j) {
                const double v = static_cast<double>(j) / *m;
                out << "<line x1=\"" << px(X(0)) << "\" y1=\"" << px(Y(v)) << "\" x2=\"" << px(X(1)) << "\" y2=\""
                    << px(Y(v)) << "\" stroke=\"#c0c0c0\" stroke-width=\"0.5\"/>\n";
            }
        }

        // digits sharing a projection draw once
        std::set<std::pair<int, int>> drawn;
        for (const auto& digit : t.digits()) {
            if (!drawn.insert({digit[cx], digit[cy]}).second) continue;
            const Interval ix = t.base(cx)[digit[cx]].image();
            const Interval iy = t.base(cy)[digit[cy]].image();
            const double x0 = ix.lo.to_double(), x1 = ix.hi.to_double();
            const double y0 = iy.lo.to_double(), y1 = iy.hi.to_double();
            out << "<rect x=\"" << px(X(x0)) << "\" y=\"" << px(Y(y1)) << "\" width=\"" << px((x1 - x0) * size)
                << "\" height=\"" << px((y1 - y0) * size) << "\" fill=\"#808080\" stroke=\"black\" stroke-width=\"1\"/>\n";
            ++img.rectangles;
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
    img.text = out.str();
    return img;
}

SvgImage render_svg(const SpongeTemplate& t, const std::string& path, int size) {
    SvgImage img = render_svg(t, size);
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw SpongeError(ErrorCode::InvalidArgument, "cannot write " + path);
        f << img.text;
        if (!f.flush()) throw SpongeError(ErrorCode::InvalidArgument, "cannot write " + path);
    }
    std::filesystem::rename(tmp, target);
    return img;
}

}  // namespace sponge

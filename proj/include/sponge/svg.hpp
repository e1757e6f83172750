#pragma once

#include <sponge/model.hpp>

#include <string>

namespace sponge {

struct SvgImage {
    std::string text;
    int panels = 0;
    std::size_t rectangles = 0;
};

/// Template picture: each panel maps the unit square to size x size pixels
/// with y pointing up. Three-dimensional templates get one panel per
/// coordinate pair, side by side. Throws UnsupportedDimension for d = 1 or d >= 4.
SvgImage render_svg(const SpongeTemplate& t, int size = 600);

/// Writes the picture to `path` through a temporary file and a rename.
SvgImage render_svg(const SpongeTemplate& t, const std::string& path, int size = 600);

}  // namespace sponge

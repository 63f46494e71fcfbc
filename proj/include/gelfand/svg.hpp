#pragma once

#include <string>

#include "gelfand/bifurcation.hpp"
#include "gelfand/io.hpp"

namespace gelfand {

// alpha against lambda as a polyline with turning points marked; the
// manifest is embedded as an XML comment.
std::string curve_svg(const BifurcationCurve& curve, const RunManifest& manifest);

}  // namespace gelfand

#pragma once

#include <string>
#include <vector>

#include "mapforge/geometry.hpp"

namespace mapforge {

/// Vector-map element classes (the evaluation classes).
enum class ElementClass { divider, boundary, ped_crossing };

/// Semantic classes used by feature tracks and the BEV raster. Raster cells
/// additionally use `empty`.
enum class SemClass : int { empty = 0, road = 1, lane_marking = 2, ped_crossing = 3, off_road = 4 };

std::string to_string(ElementClass c);
ElementClass element_class_from_string(const std::string& s);
std::string to_string(SemClass c);
SemClass sem_class_from_string(const std::string& s);

struct MapElement {
    int id = 0;
    ElementClass cls = ElementClass::divider;
    geometry::Polyline3D line; // line.closed mirrors the element closure

    void validate() const {
        line.validate();
        if (cls == ElementClass::ped_crossing && !line.closed)
            throw InvalidSpec("ped_crossing elements must be closed");
        if (cls != ElementClass::ped_crossing && line.closed)
            throw InvalidSpec("divider/boundary elements must be open");
    }
};

/// Set of classed 3D polylines; the artifact's central product. The same
/// structure holds ground-truth maps, flattened (z = 0) maps, and
/// reconstructed maps.
struct VectorMap {
    std::vector<MapElement> elements;

    void validate() const {
        for (const auto& e : elements) e.validate();
    }
};

} // namespace mapforge

#pragma once

#include <map>
#include <string>
#include <vector>

#include "scq/cpw.hpp"
#include "scq/junction.hpp"

namespace scq::tline {

enum class ElementKind { Capacitor, Inductor, Junction, Tline, Port };

// How a transmission-line segment is terminated, derived from its second node.
enum class SegmentMode { Through, Quarter, Half };

struct Element {
    std::string name;
    ElementKind kind = ElementKind::Capacitor;
    std::string node_a;
    std::string node_b;
    double value = 0.0;    // F for capacitors, H for inductors, ohm for port reference impedance
    double kinetic = 0.0;  // series kinetic inductance on an inductor (H), present under IBC only
    std::string ref;       // junction or geometry name
    double length = 0.0;   // m, tline only
};

bool is_ground(const std::string& node);
bool is_open(const std::string& node);

struct Netlist {
    std::vector<std::string> nodes;
    std::vector<Element> elements;
    std::map<std::string, quantize::JunctionSpec> junctions;
    std::map<std::string, CpwGeometry> geometries;
    double temperature = 0.01;

    // Throws InvalidInput for dangling references and SingularNetwork when a
    // node has no path to ground.
    void validate() const;

    // -1 for ground; InvalidInput for unknown names.
    int node_index(const std::string& node) const;
    const Element& element(const std::string& name) const;
    const quantize::JunctionSpec& junction_of(const Element& e) const;
    const CpwGeometry& geometry_of(const Element& e) const;

    std::vector<const Element*> of_kind(ElementKind kind) const;
};

SegmentMode segment_mode(const Element& e);

}  // namespace scq::tline

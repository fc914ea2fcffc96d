#include <algorithm>
#include <numeric>

#include "scq/error.hpp"
#include "scq/netlist.hpp"

namespace scq::quantize {

void JunctionSpec::validate() const
{
    if (!(L_J > 0.0) || !(C_J > 0.0))
        throw Error(ErrorKind::InvalidInput, "junction '" + name + "': L_J and C_J must be > 0");
}

double inductance_from_EJ(double E_J)
{
    return constants::phi0_reduced * constants::phi0_reduced / E_J;
}

}  // namespace scq::quantize

namespace scq::tline {

bool is_ground(const std::string& node) { return node == "gnd" || node == "0" || node == "ground"; }

bool is_open(const std::string& node) { return node == "open"; }

int Netlist::node_index(const std::string& node) const
{
    if (is_ground(node))
        return -1;
    const auto it = std::find(nodes.begin(), nodes.end(), node);
    if (it == nodes.end())
        throw Error(ErrorKind::InvalidInput, "unknown node '" + node + "'");
    return static_cast<int>(it - nodes.begin());
}

const Element& Netlist::element(const std::string& name) const
{
    for (const auto& e : elements)
        if (e.name == name)
            return e;
    throw Error(ErrorKind::InvalidInput, "unknown element '" + name + "'");
}

const quantize::JunctionSpec& Netlist::junction_of(const Element& e) const
{
    const auto it = junctions.find(e.ref);
    if (it == junctions.end())
        throw Error(ErrorKind::InvalidInput, "element '" + e.name + "' references unknown junction '" + e.ref + "'");
    return it->second;
}

const CpwGeometry& Netlist::geometry_of(const Element& e) const
{
    const auto it = geometries.find(e.ref);
    if (it == geometries.end())
        throw Error(ErrorKind::InvalidInput, "element '" + e.name + "' references unknown geometry '" + e.ref + "'");
    return it->second;
}

std::vector<const Element*> Netlist::of_kind(ElementKind kind) const
{
    std::vector<const Element*> out;
    for (const auto& e : elements)
        if (e.kind == kind)
            out.push_back(&e);
    return out;
}

SegmentMode segment_mode(const Element& e)
{
    if (is_ground(e.node_b))
        return SegmentMode::Quarter;
    if (is_open(e.node_b))
        return SegmentMode::Half;
    return SegmentMode::Through;
}

void Netlist::validate() const
{
    if (!(temperature >= 0.0))
        throw Error(ErrorKind::InvalidInput, "netlist temperature must be >= 0");
    {
        auto sorted = nodes;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error(ErrorKind::InvalidInput, "duplicate node name");
        for (const auto& n : nodes)
            if (is_ground(n) || is_open(n))
                throw Error(ErrorKind::InvalidInput, "node name '" + n + "' is reserved");
    }
    for (const auto& [name, j] : junctions)
        j.validate();
    for (const auto& [name, g] : geometries)
        g.validate();

    std::vector<int> parent(nodes.size() + 1);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&parent](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    // slot nodes.size() is ground
    const auto slot = [&](int idx) { return idx < 0 ? static_cast<int>(nodes.size()) : idx; };

    std::vector<std::string> names;
    for (const auto& e : elements) {
        if (e.name.empty())
            throw Error(ErrorKind::InvalidInput, "element without a name");
        names.push_back(e.name);
        const int a = node_index(e.node_a);
        int b = -1;
        const bool open_end = e.kind == ElementKind::Tline && is_open(e.node_b);
        if (!open_end)
            b = node_index(e.node_b);
        if (!open_end && a == b)
            throw Error(ErrorKind::InvalidInput, "element '" + e.name + "' connects a node to itself");

        switch (e.kind) {
        case ElementKind::Capacitor:
            if (!(e.value > 0.0))
                throw Error(ErrorKind::InvalidInput, "capacitor '" + e.name + "' needs C > 0");
            break;
        case ElementKind::Inductor:
            if (!(e.value > 0.0) || e.kinetic < 0.0)
                throw Error(ErrorKind::InvalidInput, "inductor '" + e.name + "' needs L > 0 and kinetic >= 0");
            break;
        case ElementKind::Junction:
            junction_of(e);
            break;
        case ElementKind::Tline:
            geometry_of(e);
            if (!(e.length > 0.0))
                throw Error(ErrorKind::InvalidInput, "tline '" + e.name + "' needs length > 0");
            break;
        case ElementKind::Port:
            if (!(e.value > 0.0))
                throw Error(ErrorKind::InvalidInput, "port '" + e.name + "' needs Z0 > 0");
            break;
        }
        if (!open_end)
            parent[find(slot(a))] = find(slot(b));
    }
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end())
        throw Error(ErrorKind::InvalidInput, "duplicate element name");

    const int ground = find(static_cast<int>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (find(static_cast<int>(i)) != ground)
            throw Error(ErrorKind::SingularNetwork, "node '" + nodes[i] + "' has no path to ground");
}

}  // namespace scq::tline

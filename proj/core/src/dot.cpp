#include "hyptctl/dot.hpp"

#include <sstream>

namespace hyptctl {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string to_dot(const Pta& a) {
    std::ostringstream os;
    os << "digraph \"" << escape(a.name) << "\" {\n";
    os << "  rankdir=LR;\n  node [shape=ellipse];\n";
    for (size_t i = 0; i < a.locations.size(); ++i) {
        const Location& loc = a.locations[i];
        os << "  n" << i << " [label=\"" << escape(loc.name);
        if (!loc.labels.empty()) {
            os << "\\n{";
            bool first = true;
            for (auto& p : loc.labels) {
                if (!first) os << ",";
                os << escape(p);
                first = false;
            }
            os << "}";
        }
        if (!loc.invariant.is_top()) os << "\\n" << escape(loc.invariant.to_string());
        os << "\"";
        if (a.initial.count(static_cast<int>(i))) os << ", penwidth=2";
        os << "];\n";
    }
    for (auto& e : a.edges) {
        os << "  n" << e.source << " -> n" << e.target << " [label=\"";
        if (!e.guard.is_top()) os << escape(e.guard.to_string());
        if (!e.resets.empty()) {
            os << " / ";
            bool first = true;
            for (auto& c : e.resets) {
                if (!first) os << ",";
                os << escape(c) << ":=0";
                first = false;
            }
        }
        os << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace hyptctl

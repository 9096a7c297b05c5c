#include "wo/dot.hpp"

#include <sstream>

namespace wo {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string term_label(const Term& t, int depth) { return escape(to_string(unfold(t, depth))); }

}  // namespace

std::string overlap_graph_dot(const TRS& trs, const std::vector<Redex>& redexes,
                              const std::string& graph_name) {
    std::ostringstream out;
    out << "digraph " << graph_name << " {\n";
    out << "  node [shape=box,fontname=\"monospace\"];\n";
    out << "  edge [dir=none];\n";
    YReport rep = y_redexes(trs, redexes);
    std::vector<bool> is_y(redexes.size(), false);
    for (size_t ix : rep.y_indices) is_y[ix] = true;
    for (size_t i = 0; i < redexes.size(); ++i) {
        out << "  r" << i << " [label=\"" << escape(redexes[i].to_string()) << "\"";
        if (is_y[i]) out << ",style=filled,fillcolor=lightyellow";
        out << "];\n";
    }
    for (size_t i = 0; i < redexes.size(); ++i)
        for (size_t j = i + 1; j < redexes.size(); ++j)
            if (overlap(trs, redexes[i], redexes[j])) out << "  r" << i << " -> r" << j << ";\n";
    out << "}\n";
    return out.str();
}

std::string reduction_dot(const std::vector<RewriteStep>& steps, int label_depth) {
    std::ostringstream out;
    out << "digraph reduction {\n  rankdir=LR;\n  node [shape=box,fontname=\"monospace\"];\n";
    if (steps.empty()) {
        out << "}\n";
        return out.str();
    }
    out << "  t0 [label=\"" << term_label(steps.front().source, label_depth) << "\"];\n";
    for (size_t i = 0; i < steps.size(); ++i) {
        out << "  t" << i + 1 << " [label=\"" << term_label(steps[i].target, label_depth)
            << "\"];\n";
        out << "  t" << i << " -> t" << i + 1 << " [label=\""
            << escape(steps[i].redex.to_string()) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string strip_diagram_dot(const TRS& trs, const StripResult& res,
                              const std::vector<RewriteStep>& top_steps, int label_depth,
                              long max_columns) {
    std::ostringstream out;
    long cols = std::min<long>(max_columns, static_cast<long>(top_steps.size()));
    out << "digraph strip {\n  node [shape=box,fontname=\"monospace\"];\n";
    // Top row: the sequence; bottom row: its projection over the step.
    for (long i = 0; i <= cols; ++i) {
        Term top = i < cols ? top_steps[static_cast<size_t>(i)].source
                            : top_steps.empty() ? res.right.source
                                                : top_steps.back().target;
        out << "  a" << i << " [label=\"" << term_label(top, label_depth) << "\"];\n";
    }
    Term bottom_start =
        res.bottom_tiles.empty() ? res.limit : res.bottom_tiles.front().source;
    out << "  b0 [label=\"" << term_label(bottom_start, label_depth) << "\"];\n";
    for (long i = 0; i < cols && i < static_cast<long>(res.bottom_tiles.size()); ++i) {
        out << "  b" << i + 1 << " [label=\""
            << term_label(target(trs, res.bottom_tiles[static_cast<size_t>(i)]), label_depth)
            << "\"];\n";
        out << "  b" << i << " -> b" << i + 1 << " [label=\""
            << escape(to_string(res.bottom_tiles[static_cast<size_t>(i)].redexes,
                                res.bottom_tiles[static_cast<size_t>(i)].source))
            << "\"];\n";
    }
    for (long i = 0; i < cols; ++i)
        out << "  a" << i << " -> a" << i + 1 << " [label=\""
            << escape(top_steps[static_cast<size_t>(i)].redex.to_string()) << "\"];\n";
    out << "  a0 -> b0 [style=bold];\n";
    if (cols <= static_cast<long>(res.bottom_tiles.size()))
        out << "  a" << cols << " -> b" << cols << " [style=bold,label=\"projected\"];\n";
    out << "}\n";
    return out.str();
}

std::string sum_graph_csv(const SPWord& w, long n) {
    std::ostringstream out;
    out << "index,sum\n";
    for (const auto& [i, s] : sum_graph(w, n)) out << i << "," << s << "\n";
    return out.str();
}

}  // namespace wo

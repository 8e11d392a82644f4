#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "corescore/core_score.hpp"
#include "corescore/graph.hpp"

namespace corescore {

/// Malformed input text; the message carries the line number.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == sep) {
            fields.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

inline std::vector<std::string_view> split_whitespace(std::string_view text) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
        if (i > start) fields.push_back(text.substr(start, i - start));
    }
    return fields;
}

inline double parse_double(std::string_view field, std::size_t line_no, const char* what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": malformed " + what + " '" +
                         std::string(field) + "'");
    }
    return value;
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

}  // namespace detail

/// Parses the tab-separated edge list format:
///   source<TAB>target[<TAB>weight]      one edge per line, weight default 1
///   # ...                               comment
///   %nodes:<TAB or space>a b c          declares (possibly isolated) nodes
/// Node order is first-appearance order; duplicate edges sum their weights.
inline WeightedGraph parse_edge_list(std::string_view text) {
    std::vector<LabeledEdge> edges;
    std::vector<std::string> declared;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        std::string_view line = detail::trim_cr(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() && start > text.size()) break;
        if (line.empty() || line.front() == '#') continue;
        if (line.rfind("%nodes:", 0) == 0) {
            for (std::string_view label : detail::split_whitespace(line.substr(7))) {
                declared.emplace_back(label);
            }
            continue;
        }
        const auto fields = detail::split(line, '\t');
        if (fields.size() < 2 || fields.size() > 3) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected source<TAB>target[<TAB>weight]");
        }
        if (fields[0].empty() || fields[1].empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty node label");
        }
        LabeledEdge edge{std::string(fields[0]), std::string(fields[1]), 1.0};
        if (fields.size() == 3) {
            edge.weight = detail::parse_double(fields[2], line_no, "weight");
        }
        if (edge.weight < 0.0) {
            throw ParseError("line " + std::to_string(line_no) + ": negative weight");
        }
        if (edge.source == edge.target) {
            throw ParseError("line " + std::to_string(line_no) + ": self-loop on '" +
                             edge.source + "'");
        }
        edges.push_back(std::move(edge));
    }
    return WeightedGraph::from_edges(edges, declared);
}

/// Inverse of parse_edge_list up to node-order normalization. Isolated nodes
/// go on a %nodes: line; weights use shortest round-trip formatting.
inline std::string serialize_edge_list(const WeightedGraph& g) {
    std::string out;
    std::string isolated;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        if (g.degree(i) == 0) {
            isolated += '\t';
            isolated += g.label(i);
        }
    }
    if (!isolated.empty()) out += "%nodes:" + isolated + "\n";
    for (const auto& [u, v, w] : g.edges()) {
        out += g.label(u);
        out += '\t';
        out += g.label(v);
        out += '\t';
        out += detail::format_double(w);
        out += '\n';
    }
    return out;
}

enum class Vote { Yea, Nay, Absent };

struct Legislator {
    std::string name;
    std::string party;
    std::string state;
};

struct VoteMatrix {
    std::vector<Legislator> legislators;
    std::vector<std::vector<Vote>> votes;  // [legislator][bill]

    void validate() const {
        if (legislators.size() < 2) throw std::invalid_argument("need at least 2 legislators");
        if (votes.size() != legislators.size()) throw std::invalid_argument("vote row count mismatch");
        const std::size_t bills = votes.front().size();
        if (bills < 1) throw std::invalid_argument("need at least 1 bill");
        for (const auto& row : votes) {
            if (row.size() != bills) throw std::invalid_argument("ragged vote matrix");
        }
    }
};

/// Tab-separated roll-call matrix: header `name<TAB>party<TAB>state<TAB>`
/// then one column per bill; every vote cell is translated through the code
/// map.
inline VoteMatrix parse_vote_matrix(std::string_view text, const std::map<std::string, Vote>& code_map) {
    VoteMatrix matrix;
    std::size_t line_no = 0;
    std::size_t start = 0;
    std::size_t bills = 0;
    bool header_seen = false;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        std::string_view line = detail::trim_cr(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() && start > text.size()) break;
        if (line.empty() || line.front() == '#') continue;
        const auto fields = detail::split(line, '\t');
        if (!header_seen) {
            if (fields.size() < 4 || fields[0] != "name" || fields[1] != "party" || fields[2] != "state") {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": expected header name<TAB>party<TAB>state<TAB>bill...");
            }
            bills = fields.size() - 3;
            header_seen = true;
            continue;
        }
        if (fields.size() != bills + 3) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(bills + 3) + " fields, got " +
                             std::to_string(fields.size()));
        }
        matrix.legislators.push_back({std::string(fields[0]), std::string(fields[1]), std::string(fields[2])});
        std::vector<Vote> row;
        row.reserve(bills);
        for (std::size_t b = 0; b < bills; ++b) {
            const auto it = code_map.find(std::string(fields[b + 3]));
            if (it == code_map.end()) {
                throw ParseError("line " + std::to_string(line_no) + ": unmapped vote code '" +
                                 std::string(fields[b + 3]) + "'");
            }
            row.push_back(it->second);
        }
        matrix.votes.push_back(std::move(row));
    }
    if (!header_seen) throw ParseError("missing header line");
    try {
        matrix.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return matrix;
}

/// Similarity network of a vote matrix: A_ij is the fraction of bills, among
/// those where both i and j cast a yea or nay, on which they voted the same
/// way. Absences never count; pairs with no shared bills or no agreement get
/// no edge. Legislator names become node labels and must be unique.
inline WeightedGraph votes_to_similarity(const VoteMatrix& matrix) {
    matrix.validate();
    const std::size_t n = matrix.legislators.size();
    std::vector<std::string> labels;
    labels.reserve(n);
    for (const auto& leg : matrix.legislators) labels.push_back(leg.name);
    std::vector<std::tuple<NodeId, NodeId, double>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            int shared = 0;
            int same = 0;
            for (std::size_t b = 0; b < matrix.votes[i].size(); ++b) {
                const Vote vi = matrix.votes[i][b];
                const Vote vj = matrix.votes[j][b];
                if (vi == Vote::Absent || vj == Vote::Absent) continue;
                ++shared;
                if (vi == vj) ++same;
            }
            if (shared > 0 && same > 0) {
                edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j),
                                   static_cast<double>(same) / static_cast<double>(shared));
            }
        }
    }
    return WeightedGraph::from_index_edges(std::move(labels), edges);
}

struct ScoreColumn {
    std::string name;
    std::vector<double> values;
};

struct MetaColumn {
    std::string name;
    std::vector<std::string> values;
};

/// Per-node score table as CSV: label column, then one column per score
/// (4-decimal fixed), then any metadata columns. Rows sort by the first
/// score column descending; equal scores keep label order.
inline std::string render_scores_csv(const std::vector<std::string>& labels,
                                     const std::vector<ScoreColumn>& scores,
                                     const std::vector<MetaColumn>& meta = {}) {
    if (scores.empty()) throw std::invalid_argument("no score columns");
    const std::size_t n = labels.size();
    for (const auto& col : scores) {
        if (col.values.size() != n) throw std::invalid_argument("score column length mismatch");
    }
    for (const auto& col : meta) {
        if (col.values.size() != n) throw std::invalid_argument("meta column length mismatch");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores.front().values[a] != scores.front().values[b]) {
            return scores.front().values[a] > scores.front().values[b];
        }
        return labels[a] < labels[b];
    });
    std::string out = "label";
    for (const auto& col : scores) out += "," + col.name;
    for (const auto& col : meta) out += "," + col.name;
    out += '\n';
    char buf[32];
    for (const std::size_t row : order) {
        out += detail::csv_quote(labels[row]);
        for (const auto& col : scores) {
            std::snprintf(buf, sizeof(buf), "%.4f", col.values[row]);
            out += ',';
            out += buf;
        }
        for (const auto& col : meta) {
            out += ',';
            out += detail::csv_quote(col.values[row]);
        }
        out += '\n';
    }
    return out;
}

/// Landscape grid as CSV: corner header, beta column headers, one row per
/// alpha. Values use shortest round-trip formatting so parsing the file back
/// recovers the grid exactly.
inline std::string render_landscape_csv(const ParameterGrid& grid, const std::vector<double>& cells) {
    grid.validate();
    if (cells.size() != grid.cell_count()) throw std::invalid_argument("cell count mismatch");
    std::string out = "alpha\\beta";
    for (const double b : grid.betas) out += "," + detail::format_double(b);
    out += '\n';
    for (std::size_t ai = 0; ai < grid.alphas.size(); ++ai) {
        out += detail::format_double(grid.alphas[ai]);
        for (std::size_t bi = 0; bi < grid.betas.size(); ++bi) {
            out += "," + detail::format_double(cells[ai * grid.betas.size() + bi]);
        }
        out += '\n';
    }
    return out;
}

/// Top-node grid as CSV with node labels in the cells.
inline std::string render_top_node_csv(const ParameterGrid& grid, const std::vector<NodeId>& cells,
                                       const WeightedGraph& g) {
    grid.validate();
    if (cells.size() != grid.cell_count()) throw std::invalid_argument("cell count mismatch");
    std::string out = "alpha\\beta";
    for (const double b : grid.betas) out += "," + detail::format_double(b);
    out += '\n';
    for (std::size_t ai = 0; ai < grid.alphas.size(); ++ai) {
        out += detail::format_double(grid.alphas[ai]);
        for (std::size_t bi = 0; bi < grid.betas.size(); ++bi) {
            out += "," + detail::csv_quote(g.label(cells[ai * grid.betas.size() + bi]));
        }
        out += '\n';
    }
    return out;
}

struct LandscapeGrid {
    ParameterGrid grid;
    std::vector<double> cells;
};

/// Parses render_landscape_csv output back into the grid.
inline LandscapeGrid parse_landscape_csv(std::string_view text) {
    LandscapeGrid out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool header_seen = false;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        std::string_view line = detail::trim_cr(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split(line, ',');
        if (!header_seen) {
            for (std::size_t i = 1; i < fields.size(); ++i) {
                out.grid.betas.push_back(detail::parse_double(fields[i], line_no, "beta"));
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != out.grid.betas.size() + 1) {
            throw ParseError("line " + std::to_string(line_no) + ": field count mismatch");
        }
        out.grid.alphas.push_back(detail::parse_double(fields[0], line_no, "alpha"));
        for (std::size_t i = 1; i < fields.size(); ++i) {
            out.cells.push_back(detail::parse_double(fields[i], line_no, "cell"));
        }
    }
    if (!header_seen) throw ParseError("missing header line");
    out.grid.validate();
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace corescore

#include "fdsampler/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fds {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges)
    : n_(n), edges_(std::move(edges)), incident_(n) {
    if (n < 0) throw InvalidInput("vertex count must be nonnegative");
    for (int e = 0; e < num_edges(); ++e) {
        auto [u, v] = edges_[e];
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw InvalidInput("edge " + std::to_string(e) + " endpoint out of range");
        if (u == v)
            throw InvalidInput("self-loop at vertex " + std::to_string(u) + " rejected");
        incident_[u].push_back(e);
        incident_[v].push_back(e);
    }
}

namespace {
std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}
}  // namespace

EdgeConfig::EdgeConfig(std::vector<int> e) : ids(sorted_unique(std::move(e))) {}

EdgeConfig EdgeConfig::from_mask(std::uint64_t mask, int m) {
    EdgeConfig c;
    for (int e = 0; e < m; ++e)
        if (mask >> e & 1) c.ids.push_back(e);
    return c;
}

bool EdgeConfig::contains(int e) const {
    return std::binary_search(ids.begin(), ids.end(), e);
}

std::uint64_t EdgeConfig::mask() const {
    std::uint64_t m = 0;
    for (int e : ids) m |= std::uint64_t{1} << e;
    return m;
}

void EdgeConfig::validate(const Graph& g) const {
    for (int e : ids)
        if (e < 0 || e >= g.num_edges())
            throw InvalidInput("edge id " + std::to_string(e) + " not in graph");
}

VertexConfig::VertexConfig(std::vector<int> v) : ids(sorted_unique(std::move(v))) {}

VertexConfig VertexConfig::from_mask(std::uint64_t mask, int n) {
    VertexConfig c;
    for (int v = 0; v < n; ++v)
        if (mask >> v & 1) c.ids.push_back(v);
    return c;
}

bool VertexConfig::contains(int v) const {
    return std::binary_search(ids.begin(), ids.end(), v);
}

std::uint64_t VertexConfig::mask() const {
    std::uint64_t m = 0;
    for (int v : ids) m |= std::uint64_t{1} << v;
    return m;
}

void VertexConfig::validate(const Graph& g) const {
    for (int v : ids)
        if (v < 0 || v >= g.num_vertices())
            throw InvalidInput("vertex id " + std::to_string(v) + " not in graph");
}

namespace {

// Next whitespace-separated token, skipping blank lines and # comments.
bool next_token(std::istream& in, std::string& tok, int& line) {
    for (;;) {
        int c = in.peek();
        if (c == EOF) return false;
        if (c == '#') {
            std::string rest;
            std::getline(in, rest);
            ++line;
            continue;
        }
        if (c == '\n') {
            in.get();
            ++line;
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    return static_cast<bool>(in >> tok);
}

long parse_int(std::istream& in, int& line, const char* what) {
    std::string tok;
    if (!next_token(in, tok, line))
        throw InvalidInput(std::string("unexpected end of input, expected ") + what);
    try {
        std::size_t pos;
        long v = std::stol(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw InvalidInput("line " + std::to_string(line) + ": expected " + what + ", got '" +
                           tok + "'");
    }
}

double parse_real(std::istream& in, int& line, const char* what) {
    std::string tok;
    if (!next_token(in, tok, line))
        throw InvalidInput(std::string("unexpected end of input, expected ") + what);
    try {
        std::size_t pos;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw InvalidInput("line " + std::to_string(line) + ": expected " + what + ", got '" +
                           tok + "'");
    }
}

}  // namespace

Instance parse_instance(std::istream& in) {
    int line = 1;
    long n = parse_int(in, line, "vertex count");
    long m = parse_int(in, line, "edge count");
    if (n < 0 || m < 0) throw InvalidInput("negative n or m in header");

    std::vector<std::pair<int, int>> edges;
    std::vector<double> values;
    edges.reserve(m);
    values.reserve(m);
    for (long e = 0; e < m; ++e) {
        int u = static_cast<int>(parse_int(in, line, "edge endpoint"));
        int v = static_cast<int>(parse_int(in, line, "edge endpoint"));
        double val = parse_real(in, line, "edge value");
        edges.emplace_back(u, v);
        values.push_back(val);
    }
    std::vector<double> lambda;
    lambda.reserve(n);
    for (long v = 0; v < n; ++v) lambda.push_back(parse_real(in, line, "vertex field"));

    return Instance{Graph(static_cast<int>(n), std::move(edges)), std::move(values),
                    std::move(lambda)};
}

Instance parse_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open instance file: " + path);
    return parse_instance(in);
}

}  // namespace fds

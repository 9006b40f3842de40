#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace graphfactor {

// Malformed input: dangling endpoints, duplicate ids, edges inside one side.
struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

// A stated invariant failed (signals a bug in the caller's data, not in ours).
struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter combination outside the supported theory (d even with k odd).
struct UnsupportedParameters : std::runtime_error {
    explicit UnsupportedParameters(const std::string& msg) : std::runtime_error(msg) {}
};

// Instance too large for a brute-force oracle.
struct RefusalError : std::runtime_error {
    explicit RefusalError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Side : std::uint8_t { Left = 0, Right = 1 };

struct VertexSpec {
    int id = 0;
    Side side = Side::Left;
    bool boundary = false;
};

struct EdgeSpec {
    int id = 0;
    int left = 0;   // id of the Left endpoint
    int right = 0;  // id of the Right endpoint
};

// Finite bipartite multigraph. Parallel edges are allowed and distinguished
// by edge id. Immutable after construction; derived graphs (subtraction,
// re-flagged boundary) are new objects with the same ids.
class BipartiteMultigraph {
  public:
    BipartiteMultigraph(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges);

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<VertexSpec>& vertices() const { return vertices_; }
    const std::vector<EdgeSpec>& edges() const { return edges_; }

    bool has_vertex(int id) const { return vindex_.count(id) > 0; }
    bool has_edge(int id) const { return eindex_.count(id) > 0; }
    int vertex_index(int id) const;
    int edge_index(int id) const;
    const VertexSpec& vertex(int id) const { return vertices_[vertex_index(id)]; }
    const EdgeSpec& edge(int id) const { return edges_[edge_index(id)]; }

    int degree(int vertex_id) const { return static_cast<int>(incident(vertex_id).size()); }
    // Incident edge ids, ascending.
    const std::vector<int>& incident(int vertex_id) const { return incidence_[vertex_index(vertex_id)]; }
    bool boundary(int vertex_id) const { return vertex(vertex_id).boundary; }
    int other_endpoint(int edge_id, int vertex_id) const;

    bool is_regular(int d) const;

    BipartiteMultigraph without_edges(const std::vector<int>& edge_ids) const;
    BipartiteMultigraph with_boundary(const std::vector<int>& vertex_ids) const;

  private:
    std::vector<VertexSpec> vertices_;
    std::vector<EdgeSpec> edges_;
    std::unordered_map<int, int> vindex_;
    std::unordered_map<int, int> eindex_;
    std::vector<std::vector<int>> incidence_;
};

using GraphPtr = std::shared_ptr<const BipartiteMultigraph>;

// True iff every vertex has degree exactly d. Side-crossing of edges is
// already enforced at construction.
bool validate_regular_bipartite(const BipartiteMultigraph& g, int d);

// Subgraph claimed to be k-regular on non-boundary vertices.
struct FactorSubgraph {
    GraphPtr graph;
    std::vector<int> edge_ids;  // sorted
    int k = 0;
};

// G with H's edges removed. H must be a subgraph of G.
BipartiteMultigraph subtract_factor(const BipartiteMultigraph& g, const FactorSubgraph& h);

// Exact rational, used for residual statistics and DOT labels.
struct Rational {
    long long num = 0;
    long long den = 1;
    Rational() = default;
    Rational(long long n, long long d);
    static Rational of(long long n, long long d) { return Rational(n, d); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    Rational operator+(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    std::string str() const;
};

}  // namespace graphfactor

#pragma once

#include "cmc/genus0.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cmc {

/// Move (1): the genus-one flow, (2): along a flat edge, (3): doubling for odd l1;
/// Shift adds a multiple of l0 to l2 (same four lattices).
enum class Move { One, Two, Three, Shift };
std::string to_string(Move m);

struct MoveStep {
    Move move;
    Triple before, after;
    std::int64_t shift = 0; // multiple of l0 added to l2 (Shift only)
};

/// Where a reduction stops: l1 = 0, or l2 = 2 l0 (the four lattices are p Z g1* + q Z g2*).
enum class BaseKind { Rotational, ProductLattice };

struct MoveSequence {
    Triple start;
    std::vector<MoveStep> steps;
    BaseKind base = BaseKind::Rotational;
    const Triple& end() const { return steps.empty() ? start : steps.back().after; }
};

/// Throws DomainError when the move is not applicable or the input is invalid.
Triple apply_move(const Triple& t, Move m);
Triple shift_l2(const Triple& t, std::int64_t k);

/// l1-reduction of a triple to the rotational base (l1 = 0) or the product
/// lattice case (l2 = 2 l0). l1 strictly decreases between rounds.
MoveSequence reduce_to_base(const Triple& t);

/// Sublattice of the dual lattice with basis a g1*, b g1* + d g2* (0 <= b < a).
struct SublatticeHNF {
    std::int64_t a = 1, b = 0, d = 1;
    std::int64_t index() const { return a * d; }
    bool contains(std::int64_t n1, std::int64_t n2) const;
    bool product() const { return b == 0; }
    std::string str() const;
    auto operator<=>(const SublatticeHNF&) const = default;
};

/// Hermite normal form of the lattice spanned by two integer vectors (n1, n2).
SublatticeHNF hnf_from_generators(std::pair<std::int64_t, std::int64_t> u, std::pair<std::int64_t, std::int64_t> v);

/// HNF of one of the four lattices of a triple.
SublatticeHNF triple_lattice(const Triple& t, SublatticeKind kind);

/// All sublattices with index <= max_index, each once, ordered by (index, a, b).
std::vector<SublatticeHNF> enumerate_sublattices(std::int64_t max_index);

/// sum of divisors, the number of sublattices of index n.
std::int64_t sigma(std::int64_t n);

struct VertexTriple {
    Triple triple;
    SublatticeKind kind = SublatticeKind::Plain;
};

/// A triple with l0 > 1 one of whose four lattices contains s, and which one.
/// Product lattices get rotational vertices (m, 0, m+1). DomainError for the full lattice.
VertexTriple find_vertex_triple(const SublatticeHNF& s);

/// True when both generators of s lie in the given lattice of t.
bool contained_in(const SublatticeHNF& s, const Triple& t, SublatticeKind kind);

struct ConnectivityStep {
    SublatticeHNF from;
    Triple vertex;
    SublatticeKind kind = SublatticeKind::Plain;
    MoveSequence moves;
    SublatticeHNF to; // image under the isogeny identifying the vertex lattice with the full lattice
};

struct ConnectivityPath {
    SublatticeHNF start;
    std::vector<ConnectivityStep> steps;
};

struct ConnectivityReport {
    std::int64_t max_index = 0;
    std::vector<ConnectivityPath> paths;
    std::size_t max_path_len = 0;
    bool ok = true;
    std::vector<std::string> failures;
};

/// For every sublattice of index <= max_index, a path of strictly decreasing
/// index down to the full lattice; each step is checked (containment, move
/// preconditions, index drop). Failures are reported, not thrown.
ConnectivityReport connectivity_check(std::int64_t max_index);

struct ClassificationRecord {
    Triple triple;
    bool rotational = false;
    bool embedded = false;
    bool alexandrov = false;
    std::int64_t wrapping = 1;   // wrapping of the profile curves w.r.t. the rotational period
    std::int64_t lobes_minor = 0; // l1 (0 for tori of revolution)
    std::int64_t lobes_major = 0; // l2
    std::int64_t symmetry_order = 0; // gcd(l1, l2)
    bool minimal_in_family = false;
    std::pair<double, double> H_range{0, 0}; // sorted
    Triple partner;              // other end of the family (move (1))
};

/// Wrapping of the rotational profile components at the flat vertex, l0 / gcd(l0, l1).
std::int64_t rotational_wrapping(const Triple& t);

/// Classification of the family of t. The wrapping number defaults to rotational_wrapping(t).
ClassificationRecord classify(const Triple& t, std::optional<std::int64_t> wrapping = std::nullopt);

} // namespace cmc

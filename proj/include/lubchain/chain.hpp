#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lubchain {

/// Inclusive range of consecutive node (particle) indices.
struct NodeRange
{
    std::size_t first;
    std::size_t last;

    std::size_t size() const { return last - first + 1; }
    bool contains(std::size_t i) const { return first <= i && i <= last; }
    friend bool operator==(NodeRange const&, NodeRange const&) = default;
};

/*!
 * Reduced solve shared by the particle model and the macroscopic Galerkin
 * system.
 *
 * Nodes 0..N are joined by N links; link j (1-based, stored at j-1) joins
 * nodes j-1 and j with flux c_j (u_j - u_{j-1}) unless it is rigid, in which
 * case both nodes share one velocity and the link flux is a multiplier.
 * Balance at every interior node j reads flux_{j+1} - flux_j = -load_j;
 * nodes 0 and N carry prescribed values and their loads are ignored.
 */
struct ChainSystem
{
    std::span<double const> conductance;
    std::span<unsigned char const> rigid;
    std::span<double const> loads;
    double left_value = 0.0;
    double right_value = 0.0;
    bool reverse_merge_order = false;
};

struct ChainSolution
{
    std::vector<double> values;
    std::vector<double> fluxes;
    /// Rigid groups with at least two nodes, sorted.
    std::vector<NodeRange> groups;
    double residual = 0.0;
    bool rigid_global = false;
};

/// Group nodes joined by rigid links; merge order only affects the
/// union-find traversal, never the result.
std::vector<NodeRange> rigid_groups(std::span<unsigned char const> rigid,
                                    bool reverse_merge_order = false);

ChainSolution solve_chain(ChainSystem const& system);

/*!
 * Link fluxes for given node values: c_j (u_j - u_{j-1}) on elastic links,
 * and on rigid links the multipliers obtained by substitution through each
 * group. Interior groups are swept from upstream and the downstream balance
 * is verified (SolverError when it fails). Groups pinned to one wall are
 * swept from their free side; a group spanning both walls starts from the
 * equal-regularization limit.
 */
std::vector<double> chain_fluxes(std::span<double const> conductance,
                                 std::span<unsigned char const> rigid,
                                 std::span<double const> loads,
                                 std::span<double const> values,
                                 std::span<NodeRange const> groups);

}  // namespace lubchain

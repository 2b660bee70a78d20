#include "lubchain/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lubchain/error.hpp"
#include "lubchain/tridiagonal.hpp"

namespace lubchain {
namespace {

class DisjointSets
{
  public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t i)
    {
        while (parent_[i] != i)
        {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

  private:
    std::vector<std::size_t> parent_;
};

/// Blocks of nodes: every rigid group plus every remaining singleton.
std::vector<NodeRange> all_blocks(std::size_t num_nodes, std::span<NodeRange const> groups)
{
    std::vector<NodeRange> blocks;
    std::size_t next = 0;
    for (auto const& g : groups)
    {
        for (; next < g.first; ++next)
            blocks.push_back({next, next});
        blocks.push_back(g);
        next = g.last + 1;
    }
    for (; next < num_nodes; ++next)
        blocks.push_back({next, next});
    return blocks;
}

}  // namespace

std::vector<NodeRange> rigid_groups(std::span<unsigned char const> rigid, bool reverse_merge_order)
{
    std::size_t const num_nodes = rigid.size() + 1;
    DisjointSets sets(num_nodes);
    auto merge = [&](std::size_t link) {
        if (rigid[link])
            sets.unite(link, link + 1);
    };
    if (reverse_merge_order)
    {
        for (std::size_t l = rigid.size(); l-- > 0;)
            merge(l);
    }
    else
    {
        for (std::size_t l = 0; l < rigid.size(); ++l)
            merge(l);
    }

    std::vector<NodeRange> groups;
    std::size_t i = 0;
    while (i < num_nodes)
    {
        std::size_t root = sets.find(i);
        std::size_t j = i;
        while (j + 1 < num_nodes && sets.find(j + 1) == root)
            ++j;
        if (j > i)
            groups.push_back({i, j});
        i = j + 1;
    }
    return groups;
}

ChainSolution solve_chain(ChainSystem const& sys)
{
    std::size_t const num_links = sys.conductance.size();
    std::size_t const num_nodes = num_links + 1;
    if (sys.rigid.size() != num_links || sys.loads.size() != num_nodes)
        throw SolverError("solve_chain: inconsistent sizes");

    ChainSolution sol;
    sol.groups = rigid_groups(sys.rigid, sys.reverse_merge_order);
    auto blocks = all_blocks(num_nodes, sol.groups);
    std::size_t const num_blocks = blocks.size();
    sol.values.assign(num_nodes, 0.0);

    if (num_blocks == 1)
    {
        if (sys.left_value != sys.right_value)
        {
            throw SolverError("rigid array spans both walls but boundary velocities differ");
        }
        sol.rigid_global = true;
        std::fill(sol.values.begin(), sol.values.end(), sys.left_value);
        sol.fluxes = chain_fluxes(sys.conductance, sys.rigid, sys.loads, sol.values, sol.groups);
        return sol;
    }

    // Block b and b+1 are joined by exactly one elastic link: the one
    // entering block b+1.
    std::vector<double> link_c(num_blocks - 1);
    std::vector<double> block_load(num_blocks, 0.0);
    for (std::size_t b = 0; b + 1 < num_blocks; ++b)
        link_c[b] = sys.conductance[blocks[b + 1].first - 1];
    for (std::size_t b = 1; b + 1 < num_blocks; ++b)
    {
        for (std::size_t i = blocks[b].first; i <= blocks[b].last; ++i)
            block_load[b] += sys.loads[i];
    }

    std::size_t const unknowns = num_blocks - 2;
    std::vector<double> block_value(num_blocks, 0.0);
    block_value.front() = sys.left_value;
    block_value.back() = sys.right_value;
    if (unknowns > 0)
    {
        std::vector<double> rhs(block_load.begin() + 1, block_load.end() - 1);
        rhs.front() += link_c.front() * sys.left_value;
        rhs.back() += link_c.back() * sys.right_value;
        auto x = solve_chain_laplacian(link_c, rhs);
        std::copy(x.begin(), x.end(), block_value.begin() + 1);
    }

    for (std::size_t b = 0; b < num_blocks; ++b)
    {
        for (std::size_t i = blocks[b].first; i <= blocks[b].last; ++i)
            sol.values[i] = block_value[b];
    }

    double residual = 0.0;
    for (std::size_t b = 1; b + 1 < num_blocks; ++b)
    {
        double r = link_c[b] * (block_value[b + 1] - block_value[b])
                   - link_c[b - 1] * (block_value[b] - block_value[b - 1]) + block_load[b];
        residual = std::max(residual, std::abs(r));
    }
    sol.residual = residual;
    sol.fluxes = chain_fluxes(sys.conductance, sys.rigid, sys.loads, sol.values, sol.groups);
    return sol;
}

std::vector<double> chain_fluxes(std::span<double const> conductance,
                                 std::span<unsigned char const> rigid,
                                 std::span<double const> loads,
                                 std::span<double const> values,
                                 std::span<NodeRange const> groups)
{
    std::size_t const num_links = conductance.size();
    std::size_t const last_node = num_links;
    // fluxes[j - 1] is the flux through link j.
    std::vector<double> flux(num_links, 0.0);
    for (std::size_t j = 1; j <= num_links; ++j)
    {
        if (!rigid[j - 1])
            flux[j - 1] = conductance[j - 1] * (values[j] - values[j - 1]);
    }

    for (auto const& g : groups)
    {
        bool const at_left = g.first == 0;
        bool const at_right = g.last == last_node;
        if (at_left && at_right)
        {
            // Limit of equal regularized gaps: beta_1 = sum_k (1 - k/N) load_k.
            double beta = 0.0;
            for (std::size_t k = 1; k < last_node; ++k)
                beta += (1.0 - double(k) / double(last_node)) * loads[k];
            flux[0] = beta;
            for (std::size_t j = 1; j < last_node; ++j)
                flux[j] = flux[j - 1] - loads[j];
        }
        else if (at_left)
        {
            // Swept backwards from the elastic link leaving the group.
            for (std::size_t j = g.last; j > g.first; --j)
                flux[j - 1] = flux[j] + loads[j];
        }
        else
        {
            // Interior group or pinned to the right wall: sweep from upstream.
            for (std::size_t j = g.first; j < g.last; ++j)
                flux[j] = flux[j - 1] - loads[j];
            if (!at_right)
            {
                double defect = flux[g.last] - flux[g.last - 1] + loads[g.last];
                double scale = 1.0 + std::abs(flux[g.first - 1]) + std::abs(flux[g.last]);
                for (std::size_t i = g.first; i <= g.last; ++i)
                    scale += std::abs(loads[i]);
                if (std::abs(defect) > 1e-10 * scale)
                {
                    std::ostringstream msg;
                    msg << "cluster [" << g.first << ", " << g.last
                        << "] violates its summed balance by " << defect;
                    throw SolverError(msg.str());
                }
            }
        }
    }
    return flux;
}

}  // namespace lubchain
